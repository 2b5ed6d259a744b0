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

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .deployment import Deployment, InterferenceHook, sample_deployment, noise_power
from ..channels.channel import assemble_channel
from ..codebooks.candidates import CandidateSet
from ..codebooks.hierarchical import HierarchicalCodebook
from ..configs.config import CellConfig, PIPELINES
from ..estimators.adaptive import estimate_multi_path
from ..estimators.measurement import MeasurementContext
from ..estimators.power import StagePowers
from ..precoders.hybrid import reconstruct_channel, design_hybrid_link, analog_only_baseline
from ..precoders.rate import achievable_rate
from ..utils.metrics import CoverageProbability
from ..utils.utils import dbm2watt, trial_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CoverageSetup:
    cell: CellConfig
    codebook_bs: HierarchicalCodebook
    codebook_ms: HierarchicalCodebook
    candidates_bs: CandidateSet
    candidates_ms: CandidateSet
    num_rf_bs: int = 10
    num_rf_ms: int = 6
    num_streams: int = 1
    num_channel_paths: int = 3
    avg_gain_power: float = 1.0
    angle_domain: str = "half"
    pipelines: Tuple[str, ...] = tuple(PIPELINES)

    @property
    def tx_power(self) -> float:
        return float(dbm2watt(self.cell.tx_power_dbm))

    @property
    def noise_power(self) -> float:
        return noise_power(self.cell)


def pipeline_rates(setup: CoverageSetup, deployment: Deployment, rng: np.random.Generator) -> Dict[str, float]:
    """Rate of every selected pipeline on one deployment

    Interference enters the rate as extra noise covariance; the estimated pipeline also sees it
    in every training slot, where each slot transmits at the data power.
    """
    geometry_bs = setup.codebook_bs.dictionary.geometry
    geometry_ms = setup.codebook_ms.dictionary.geometry
    desired = deployment.desired
    channel = assemble_channel(desired.pathset, geometry_bs, geometry_ms)
    power, sigma2 = setup.tx_power, setup.noise_power
    hook = InterferenceHook(deployment, geometry_bs, geometry_ms, power)
    interference = hook.covariance()

    def rate_of(precoder, combiner, with_interference=True) -> float:
        return achievable_rate(channel, precoder, combiner, power, sigma2, setup.num_streams,
                               interference=interference if with_interference else None)

    def hybrid(design_channel):
        return design_hybrid_link(design_channel, setup.candidates_bs, setup.candidates_ms,
                                  setup.num_rf_bs, setup.num_rf_ms, setup.num_streams)

    rates = {}
    if "perfect-csi" in setup.pipelines or "no-interference" in setup.pipelines:
        perfect = hybrid(channel)
        if "perfect-csi" in setup.pipelines: rates["perfect-csi"] = rate_of(*perfect)
        if "no-interference" in setup.pipelines: rates["no-interference"] = rate_of(*perfect, with_interference=False)
    estimate = None
    if "estimated" in setup.pipelines or "analog-only" in setup.pipelines:
        levels = setup.codebook_bs.num_levels
        beams = setup.codebook_bs.num_beams * setup.codebook_bs.num_paths
        powers = StagePowers(powers=(power,) * levels, measurements_per_stage=beams ** 2)
        ctx = MeasurementContext(channel=channel, noise_power=sigma2, rng=rng, pathloss=desired.pathset.pathloss,
                                 interference=hook)
        estimate, _ = estimate_multi_path(ctx, setup.codebook_bs, setup.codebook_ms, powers)
    if "estimated" in setup.pipelines:
        estimated = reconstruct_channel(estimate, setup.codebook_bs.dictionary, setup.codebook_ms.dictionary,
                                        desired.pathset.pathloss)
        rates["estimated"] = rate_of(*hybrid(estimated))
    if "analog-only" in setup.pipelines:
        # one analog beam pair at the strongest estimated path, same training as the estimated pipeline
        dictionaries = (setup.codebook_bs.dictionary, setup.codebook_ms.dictionary)
        rates["analog-only"] = rate_of(*analog_only_baseline(estimate, geometry_bs, geometry_ms, setup.candidates_bs,
                                                             setup.candidates_ms, dictionaries=dictionaries))
    return rates


def coverage_trial(setup: CoverageSetup, rng: np.random.Generator) -> Dict[str, float]:
    """ One deployment shared by every pipeline """
    deployment = sample_deployment(rng, setup.cell, num_paths=setup.num_channel_paths,
                                   avg_gain_power=setup.avg_gain_power, angle_domain=setup.angle_domain)
    logger.debug("deployment: desired at %.1f m, %d interferers", deployment.desired.distance,
                 deployment.num_interferers)
    return pipeline_rates(setup, deployment, rng)


@dataclass(frozen=True)
class CoverageCurve:
    pipeline: str
    thresholds: np.ndarray
    coverage: np.ndarray
    intervals: List[Tuple[float, float]]
    trials: int


def coverage_curves(rates: Dict[str, Sequence[float]], thresholds: Sequence[float]) -> Dict[str, CoverageCurve]:
    """ Empirical P(R >= eta) per pipeline from per-trial rates """
    curves = {}
    for pipeline, values in rates.items():
        metric = CoverageProbability(thresholds, name=pipeline)
        metric.update_state(values)
        curves[pipeline] = CoverageCurve(pipeline=pipeline, thresholds=metric.thresholds, coverage=metric.result(),
                                         intervals=metric.intervals(), trials=metric.trials)
    return curves


def coverage_probability(setup: CoverageSetup,
                         thresholds: Sequence[float],
                         trials: int,
                         seed: int = 0) -> Dict[str, CoverageCurve]:
    """ In-process coverage estimate; trial t draws from trial_rng(seed, 0, t) """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    rates = {pipeline: [] for pipeline in setup.pipelines}
    for trial in range(trials):
        for pipeline, rate in coverage_trial(setup, trial_rng(seed, 0, trial)).items():
            rates[pipeline].append(rate)
    return coverage_curves(rates, thresholds)
