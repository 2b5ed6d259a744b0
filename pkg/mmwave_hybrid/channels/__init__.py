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

from .arrays import (UlaGeometry, AngleGrid, Dictionary, array_response, steering_matrix, build_dictionary,
                     alias_classes, angle_domain_bounds)
from .channel import (Path, PathSet, ChannelMatrix, sample_pathset, sample_grid_pathset, pathset_from_cells,
                      assemble_channel, average_snr, noise_power_from_snr)
