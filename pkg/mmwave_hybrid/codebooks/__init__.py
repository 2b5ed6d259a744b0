# Copyright 2021 The MmWaveHybrid Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from .candidates import CandidateSet, make_candidates_beamsteering, make_candidates_quantized, make_candidates_grid
from .hierarchical import (SubsetMask, HybridVector, HierarchicalCodebook, subset_mask, ideal_precoder,
                           omp_hybrid_design, build_codebook, codebook_levels)
from .analysis import GainAnalysis, LevelGains, gain_analysis, level_gain_summary, beam_pattern
from .io import save_codebook, load_codebook
