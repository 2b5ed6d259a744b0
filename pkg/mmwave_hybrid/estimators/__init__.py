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

from .measurement import MeasurementContext, measure
from .base_estimator import BaseEstimator, SinglePathEstimate, MultiPathEstimate, StepCount, same_cell
from .adaptive import AdaptiveEstimator, estimate_single_path, estimate_multi_path
from .exhaustive import ExhaustiveEstimator, exhaustive_estimate
from .power import (StagePowers, allocate_power_corollary1, allocate_power_corollary2, theorem1_bound,
                    uniform_powers)
from .trace import EstimationTrace, TraceRecord
