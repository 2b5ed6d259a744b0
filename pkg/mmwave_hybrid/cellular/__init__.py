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

from .deployment import (BaseStation, Deployment, InterferenceHook, pathloss_linear, noise_power, sample_deployment,
                         interference_term, interference_covariance)
from .coverage import CoverageSetup, CoverageCurve, coverage_trial, coverage_probability, coverage_curves
