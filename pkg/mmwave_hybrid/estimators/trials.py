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

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .adaptive import estimate_single_path
from .base_estimator import same_cell
from .measurement import MeasurementContext
from .power import StagePowers
from ..channels.channel import PathSet, sample_grid_pathset, sample_pathset, assemble_channel
from ..codebooks.hierarchical import HierarchicalCodebook


@dataclass(frozen=True, eq=False)
class SinglePathSetup:
    """ Everything one single-path error trial needs, shared by every trial of a sweep point """
    codebook_bs: HierarchicalCodebook
    codebook_ms: HierarchicalCodebook
    powers: StagePowers
    noise_power: float
    avg_gain_power: float = 1.0
    pathloss: float = 1.0
    angle_domain: str = "half"
    on_grid: bool = True
    combining_group: int = 1


def true_cell(pathset: PathSet, codebook_bs: HierarchicalCodebook, codebook_ms: HierarchicalCodebook):
    path = pathset.strongest()
    return codebook_bs.dictionary.grid.index_of(path.aod), codebook_ms.dictionary.grid.index_of(path.aoa)


def single_path_error_trial(setup: SinglePathSetup, rng: np.random.Generator) -> Tuple[bool, int]:
    """Draw a single-path channel, run the adaptive search and check the recovered cell

    Returns:
        tuple: (wrong cell, measurement slots used)
    """
    grid_bs = setup.codebook_bs.dictionary.grid
    grid_ms = setup.codebook_ms.dictionary.grid
    if setup.on_grid:
        pathset = sample_grid_pathset(rng, 1, grid_bs, grid_ms, pathloss=setup.pathloss,
                                      avg_gain_power=setup.avg_gain_power, angle_domain=setup.angle_domain)
    else:
        pathset = sample_pathset(rng, 1, pathloss=setup.pathloss, avg_gain_power=setup.avg_gain_power,
                                 angle_domain=setup.angle_domain)
    geometry_bs = setup.codebook_bs.dictionary.geometry
    geometry_ms = setup.codebook_ms.dictionary.geometry
    ctx = MeasurementContext(channel=assemble_channel(pathset, geometry_bs, geometry_ms),
                             noise_power=setup.noise_power, rng=rng, pathloss=setup.pathloss,
                             combining_group=setup.combining_group)
    estimate, steps = estimate_single_path(ctx, setup.codebook_bs, setup.codebook_ms, setup.powers)
    truth = true_cell(pathset, setup.codebook_bs, setup.codebook_ms)
    correct = same_cell(setup.codebook_bs.dictionary, setup.codebook_ms.dictionary, estimate.cell, truth)
    return not correct, steps.measurement_slots
