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
from typing import Dict, Tuple

import numpy as np
from scipy import linalg

from .hybrid import reconstruct_channel, unconstrained_precoder, design_hybrid_link, analog_only_baseline
from .rate import achievable_rate
from ..channels.arrays import AngleGrid, UlaGeometry
from ..channels.channel import Path, PathSet, sample_grid_pathset, sample_pathset, assemble_channel
from ..codebooks.candidates import CandidateSet
from ..codebooks.hierarchical import HierarchicalCodebook
from ..estimators.adaptive import estimate_multi_path
from ..estimators.exhaustive import exhaustive_estimate
from ..estimators.measurement import MeasurementContext
from ..estimators.power import StagePowers


@dataclass(frozen=True, eq=False)
class LinkSetup:
    """ Point-to-point link: training codebooks and powers, data-phase candidates and RF chains """
    codebook_bs: HierarchicalCodebook
    codebook_ms: HierarchicalCodebook
    candidates_bs: CandidateSet
    candidates_ms: CandidateSet
    powers: StagePowers
    noise_power: float
    data_power: float = 1.0
    num_channel_paths: int = 3
    num_rf_bs: int = 10
    num_rf_ms: int = 6
    num_streams: int = 1
    avg_gain_power: float = 1.0
    pathloss: float = 1.0
    angle_domain: str = "half"
    on_grid: bool = False
    exhaustive: bool = True
    combining_group: int = 1


def sample_link_pathset(setup: LinkSetup, rng: np.random.Generator) -> PathSet:
    if setup.on_grid:
        return sample_grid_pathset(rng, setup.num_channel_paths, setup.codebook_bs.dictionary.grid,
                                   setup.codebook_ms.dictionary.grid, pathloss=setup.pathloss,
                                   avg_gain_power=setup.avg_gain_power, angle_domain=setup.angle_domain)
    return sample_pathset(rng, setup.num_channel_paths, pathloss=setup.pathloss,
                          avg_gain_power=setup.avg_gain_power, angle_domain=setup.angle_domain)


def link_trial(setup: LinkSetup, rng: np.random.Generator) -> Dict[str, float]:
    """One channel draw of the spectral-efficiency comparison

    Returns:
        dict: rates of the adaptive, exhaustive, perfect-CSI hybrid, unconstrained and analog-only
              designs, with the slot counts of both estimators
    """
    dictionary_bs = setup.codebook_bs.dictionary
    dictionary_ms = setup.codebook_ms.dictionary
    pathset = sample_link_pathset(setup, rng)
    channel = assemble_channel(pathset, dictionary_bs.geometry, dictionary_ms.geometry)

    def rate_of(precoder, combiner) -> float:
        return achievable_rate(channel, precoder, combiner, setup.data_power, setup.noise_power, setup.num_streams)

    def hybrid_rate(design_channel) -> float:
        return rate_of(*design_hybrid_link(design_channel, setup.candidates_bs, setup.candidates_ms,
                                           setup.num_rf_bs, setup.num_rf_ms, setup.num_streams))

    ctx = MeasurementContext(channel=channel, noise_power=setup.noise_power, rng=rng, pathloss=setup.pathloss,
                             combining_group=setup.combining_group)
    estimate, steps = estimate_multi_path(ctx, setup.codebook_bs, setup.codebook_ms, setup.powers)
    results = {
        "adaptive": hybrid_rate(reconstruct_channel(estimate, dictionary_bs, dictionary_ms, setup.pathloss)),
        "adaptive_slots": steps.measurement_slots,
    }
    if setup.exhaustive:
        ctx = MeasurementContext(channel=channel, noise_power=setup.noise_power, rng=rng, pathloss=setup.pathloss,
                                 combining_group=setup.combining_group)
        full, full_steps = exhaustive_estimate(ctx, dictionary_bs, dictionary_ms,
                                               setup.powers[setup.powers.num_stages], setup.codebook_bs.num_paths)
        results["exhaustive"] = hybrid_rate(reconstruct_channel(full, dictionary_bs, dictionary_ms, setup.pathloss))
        results["exhaustive_slots"] = full_steps.measurement_slots
    results["perfect_csi"] = hybrid_rate(channel)
    results["unconstrained"] = rate_of(unconstrained_precoder(channel, setup.num_streams, "bs"),
                                       unconstrained_precoder(channel, setup.num_streams, "ms"))
    results["analog_only"] = rate_of(*analog_only_baseline(pathset, dictionary_bs.geometry, dictionary_ms.geometry,
                                                           setup.candidates_bs, setup.candidates_ms))
    return results


@dataclass(frozen=True, eq=False)
class QuantizationSetup:
    """ Perfect-CSI hybrid precoding with phase-quantized candidates, one entry per (N_Q, RF pair) """
    geometry_bs: UlaGeometry
    geometry_ms: UlaGeometry
    candidates: Dict[int, Tuple[CandidateSet, CandidateSet]]  # N_Q -> (BS, MS) candidates
    rf_pairs: Tuple[Tuple[int, int], ...]
    noise_power: float
    data_power: float = 1.0
    num_channel_paths: int = 3
    num_streams: int = 1
    avg_gain_power: float = 1.0
    angle_domain: str = "half"


def quantization_trial(setup: QuantizationSetup, rng: np.random.Generator) -> Dict[Tuple, float]:
    """Rates keyed by (num_bits, num_rf_bs, num_rf_ms), plus the unconstrained rate under key "unconstrained"
    """
    pathset = sample_pathset(rng, setup.num_channel_paths, avg_gain_power=setup.avg_gain_power,
                             angle_domain=setup.angle_domain)
    channel = assemble_channel(pathset, setup.geometry_bs, setup.geometry_ms)
    results = {"unconstrained": achievable_rate(channel, unconstrained_precoder(channel, setup.num_streams, "bs"),
                                                unconstrained_precoder(channel, setup.num_streams, "ms"),
                                                setup.data_power, setup.noise_power)}
    for bits, (candidates_bs, candidates_ms) in setup.candidates.items():
        for num_rf_bs, num_rf_ms in setup.rf_pairs:
            precoder, combiner = design_hybrid_link(channel, candidates_bs, candidates_ms, num_rf_bs, num_rf_ms,
                                                    setup.num_streams)
            results[(bits, num_rf_bs, num_rf_ms)] = achievable_rate(channel, precoder, combiner, setup.data_power,
                                                                    setup.noise_power)
    return results


@dataclass(frozen=True, eq=False)
class GridSetup:
    """ Off-grid channels seen through grids of increasing resolution """
    geometry_bs: UlaGeometry
    geometry_ms: UlaGeometry
    resolutions: Tuple[int, ...]
    noise_power: float
    data_power: float = 1.0
    num_channel_paths: int = 3
    num_streams: int = 1
    avg_gain_power: float = 1.0
    angle_domain: str = "half"


def quantize_pathset(pathset: PathSet, grid: AngleGrid) -> PathSet:
    """ Same gains, angles moved to their nearest grid cell (perfect index recovery) """
    paths = tuple(Path(aod=float(grid.angles[grid.index_of(path.aod)]),
                       aoa=float(grid.angles[grid.index_of(path.aoa)]), gain=path.gain) for path in pathset.paths)
    return PathSet(paths=paths, pathloss=pathset.pathloss, avg_gain_power=pathset.avg_gain_power)


def grid_trial(setup: GridSetup, rng: np.random.Generator) -> Dict:
    """Rate and relative reconstruction error of grid-quantized channel knowledge

    Returns:
        dict: "exact" rate with the true channel, and per resolution N a (rate, relative error) pair
    """
    pathset = sample_pathset(rng, setup.num_channel_paths, avg_gain_power=setup.avg_gain_power,
                             angle_domain=setup.angle_domain)
    channel = assemble_channel(pathset, setup.geometry_bs, setup.geometry_ms)

    def rate_from(design_channel) -> float:
        return achievable_rate(channel, unconstrained_precoder(design_channel, setup.num_streams, "bs"),
                               unconstrained_precoder(design_channel, setup.num_streams, "ms"),
                               setup.data_power, setup.noise_power)

    results = {"exact": rate_from(channel)}
    for resolution in setup.resolutions:
        quantized = assemble_channel(quantize_pathset(pathset, AngleGrid(resolution)),
                                     setup.geometry_bs, setup.geometry_ms)
        error = linalg.norm(quantized - channel) / linalg.norm(channel)
        results[resolution] = (rate_from(quantized), float(error))
    return results
