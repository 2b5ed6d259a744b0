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
from typing import Optional

import numpy as np

from .base_runners import BaseRunner, MonteCarloRunner
from ..cellular.coverage import CoverageSetup, coverage_trial, coverage_curves
from ..channels.arrays import UlaGeometry, AngleGrid, Dictionary, build_dictionary
from ..channels.channel import noise_power_from_snr, average_snr
from ..codebooks.analysis import level_gain_summary, beam_pattern
from ..codebooks.candidates import CandidateSet, make_candidates_beamsteering, make_candidates_quantized, \
    make_candidates_grid
from ..codebooks.hierarchical import HierarchicalCodebook, build_codebook
from ..codebooks.io import save_codebook
from ..configs.config import Config, CodebookConfig
from ..estimators.power import allocate_power_corollary1, allocate_power_corollary2, theorem1_bound
from ..estimators.trials import SinglePathSetup, single_path_error_trial
from ..precoders.link import LinkSetup, link_trial, QuantizationSetup, quantization_trial, GridSetup, grid_trial
from ..utils.metrics import ErrorRate, MeanMetric

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Components:
    geometry_bs: UlaGeometry
    geometry_ms: UlaGeometry
    dictionary_bs: Dictionary
    dictionary_ms: Dictionary
    candidates_bs: CandidateSet  # data-phase candidates; the codebooks use grid candidates
    candidates_ms: CandidateSet
    codebook_bs: HierarchicalCodebook
    codebook_ms: HierarchicalCodebook


def make_candidates(config: CodebookConfig, geometry: UlaGeometry) -> Optional[CandidateSet]:
    num_candidates = config.num_candidates or config.resolution
    if config.candidates == "quantized":
        return make_candidates_quantized(geometry, config.num_bits, num_candidates)
    if config.candidates == "beamsteering":
        return make_candidates_beamsteering(geometry, num_candidates)
    return None


def make_codebook_candidates(config: CodebookConfig, dictionary: Dictionary) -> Optional[CandidateSet]:
    """ Training-codebook candidates: one beam per grid direction, phase-quantized when the config says so """
    if config.candidates == "quantized":
        return make_candidates_grid(dictionary, config.num_bits)
    if config.candidates == "beamsteering":
        return make_candidates_grid(dictionary)
    return None


def build_components(config: Config, overrides: dict = None) -> Components:
    """ Geometries, dictionaries, candidates and both training codebooks of one configuration """
    array = config.array_config
    codebook = config.codebook_config.updated(overrides)
    geometry_bs = UlaGeometry(array.num_bs, array.spacing)
    geometry_ms = UlaGeometry(array.num_ms, array.spacing)
    grid = AngleGrid(codebook.resolution)
    dictionary_bs = build_dictionary(geometry_bs, grid)
    dictionary_ms = build_dictionary(geometry_ms, grid)
    codebook_bs = build_codebook(dictionary_bs, make_codebook_candidates(codebook, dictionary_bs),
                                 codebook.num_beams, codebook.num_paths,
                                 num_rf=codebook.num_rf_bs or array.num_rf_bs, loading=codebook.pattern_loading)
    codebook_ms = build_codebook(dictionary_ms, make_codebook_candidates(codebook, dictionary_ms),
                                 codebook.num_beams, codebook.num_paths,
                                 num_rf=codebook.num_rf_ms or array.num_rf_ms, loading=codebook.pattern_loading)
    candidates_bs = make_candidates(codebook, geometry_bs)
    candidates_ms = make_candidates(codebook, geometry_ms)
    if candidates_bs is None:
        candidates_bs = make_candidates_beamsteering(geometry_bs, codebook.resolution)
        candidates_ms = make_candidates_beamsteering(geometry_ms, codebook.resolution)
    return Components(geometry_bs=geometry_bs, geometry_ms=geometry_ms, dictionary_bs=dictionary_bs,
                      dictionary_ms=dictionary_ms, candidates_bs=candidates_bs, candidates_ms=candidates_ms,
                      codebook_bs=codebook_bs, codebook_ms=codebook_ms)


def stage_gains(config: Config, components: Components):
    """ (power-allocation gains, forward gains, betas) per level """
    summary = level_gain_summary(components.codebook_bs, components.codebook_ms)
    forward = np.array([level.forward_gain for level in summary])
    betas = np.array([level.beta for level in summary])
    if config.estimation_config.power_gains == "nominal":
        return np.array([level.nominal_gain for level in summary]), forward, betas
    return forward, forward, betas


def expected_slots(codebook: HierarchicalCodebook, combining_group: int = 1) -> int:
    """ K L_d^2 ceil(K L_d / group) S, the K^2 L_d^3 S count when every combiner takes its own slot """
    beams = codebook.num_beams * codebook.num_paths
    return codebook.num_beams * codebook.num_paths ** 2 * int(np.ceil(beams / combining_group)) \
        * codebook.num_levels


class CodebookDesignRunner(BaseRunner):
    """ Builds both codebooks, saves them and writes per-level gains and beam patterns """
    kind = "design-codebook"

    def execute(self):
        components = build_components(self.config)
        for side, codebook in (("bs", components.codebook_bs), ("ms", components.codebook_ms)):
            path = self.output_path(f"codebook_{side}.npz")
            save_codebook(path, codebook)
            self.outputs.append(path)
            print(f"> Saved {side.upper()} codebook to {path}")

        rows = []
        for level in level_gain_summary(components.codebook_bs, components.codebook_ms):
            rows.append([level.level, components.codebook_bs.normalizer(level.level),
                         components.codebook_ms.normalizer(level.level), level.nominal_gain_bs,
                         level.nominal_gain_ms, level.forward_gain,
                         0.0 if np.isinf(level.beta) else 1.0 / level.beta])
        self.write_csv("levels", ["level", "normalizer_bs", "normalizer_ms", "nominal_gain_bs", "nominal_gain_ms",
                                  "forward_gain", "leakage"], rows)

        rows = []
        for side, codebook in (("bs", components.codebook_bs), ("ms", components.codebook_ms)):
            for level in range(1, codebook.num_levels + 1):
                pattern = beam_pattern(codebook, level, 0)
                for beam in range(pattern.shape[1]):
                    for cell in range(pattern.shape[0]):
                        rows.append([side, level, beam, cell, pattern[cell, beam]])
        self.write_csv("beam_pattern", ["side", "level", "beam", "cell", "gain"], rows)

        codebook = components.codebook_bs
        logger.info("adaptive search: %d slots (K=%d, L_d=%d, S=%d), exhaustive search: %d slots",
                    expected_slots(codebook), codebook.num_beams, codebook.num_paths, codebook.num_levels,
                    codebook.resolution ** 2)


class SinglePathErrorRunner(MonteCarloRunner):
    """ Empirical error probability of the single-path search against its analytical bounds """
    kind = "single-path-error"

    def execute(self):
        components = build_components(self.config, {"num_paths": 1})
        estimation, channel = self.config.estimation_config, self.config.channel_config
        gains, forward, betas = stage_gains(self.config, components)
        num_beams = components.codebook_bs.num_beams
        num_levels = components.codebook_bs.num_levels
        group = self.config.array_config.num_rf_ms if estimation.parallel_combining else 1

        points = []
        for snr_db in self.config.running_config.snr_db:
            noise = noise_power_from_snr(snr_db, channel.avg_gain_power, channel.pathloss)
            snr = average_snr(channel.avg_gain_power, channel.pathloss, noise)
            if estimation.allocation == "corollary1":
                _, powers = allocate_power_corollary1(estimation.delta, snr, num_beams, num_levels, gains)
                points.append((snr_db, noise, snr, powers, estimation.delta))
            else:
                for total_power in estimation.total_powers:
                    powers, bound = allocate_power_corollary2(total_power, snr, num_beams, num_levels, gains)
                    points.append((snr_db, noise, snr, powers, bound))

        rows = []
        for point, (snr_db, noise, snr, powers, corollary_bound) in enumerate(points):
            setup = SinglePathSetup(codebook_bs=components.codebook_bs, codebook_ms=components.codebook_ms,
                                    powers=powers, noise_power=noise, avg_gain_power=channel.avg_gain_power,
                                    pathloss=channel.pathloss, angle_domain=channel.angle_domain,
                                    on_grid=channel.on_grid, combining_group=group)
            results = self.map_trials(single_path_error_trial, setup, point, desc=f"[SNR {snr_db:g} dB]")
            errors = ErrorRate()
            errors.update_state([error for error, _ in results])
            low, high = errors.interval()
            rows.append([snr_db, powers.total, errors.result(), low, high, errors.denominator,
                         theorem1_bound(powers.powers, forward, betas, snr, num_beams), corollary_bound,
                         results[0][1]])
        self.write_csv("error_rate", ["snr_db", "total_power", "error_rate", "ci_low", "ci_high", "trials",
                                      "theorem_bound", "corollary_bound", "slots"], rows)


class SpectralEfficiencyRunner(MonteCarloRunner):
    """ Rates of adaptive, exhaustive and perfect-CSI precoding over SNR, per (K, L_d, N) variant """
    kind = "spectral-efficiency-sweep"

    def execute(self):
        estimation, channel, array = (self.config.estimation_config, self.config.channel_config,
                                      self.config.array_config)
        group = array.num_rf_ms if estimation.parallel_combining else 1
        keys = ["adaptive", "exhaustive", "perfect_csi", "unconstrained", "analog_only"]
        if not estimation.exhaustive: keys.remove("exhaustive")
        rows, point = [], 0
        for variant in self.config.running_config.variants:
            components = build_components(self.config, variant)
            codebook = components.codebook_bs
            gains, _, _ = stage_gains(self.config, components)
            beams = codebook.num_beams * codebook.num_paths
            formula = expected_slots(codebook, group)
            logger.info("K=%d L_d=%d N=%d: adaptive search takes %d slots (K^2 L_d^3 S = %d), exhaustive %d",
                        codebook.num_beams, codebook.num_paths, codebook.resolution, formula,
                        codebook.num_beams ** 2 * codebook.num_paths ** 3 * codebook.num_levels,
                        codebook.resolution ** 2)
            for snr_db in self.config.running_config.snr_db:
                noise = noise_power_from_snr(snr_db, channel.avg_gain_power, channel.pathloss)
                snr = average_snr(channel.avg_gain_power, channel.pathloss, noise)
                _, powers = allocate_power_corollary1(estimation.delta, snr, beams, codebook.num_levels, gains)
                setup = LinkSetup(codebook_bs=components.codebook_bs, codebook_ms=components.codebook_ms,
                                  candidates_bs=components.candidates_bs, candidates_ms=components.candidates_ms,
                                  powers=powers, noise_power=noise, data_power=self.config.precoding_config.data_power,
                                  num_channel_paths=channel.num_paths, num_rf_bs=array.num_rf_bs,
                                  num_rf_ms=array.num_rf_ms, num_streams=self.config.precoding_config.num_streams,
                                  avg_gain_power=channel.avg_gain_power, pathloss=channel.pathloss,
                                  angle_domain=channel.angle_domain, on_grid=channel.on_grid,
                                  exhaustive=estimation.exhaustive, combining_group=group)
                results = self.map_trials(link_trial, setup, point,
                                          desc=f"[K={codebook.num_beams} L_d={codebook.num_paths} {snr_db:g} dB]")
                point += 1
                row = [codebook.num_beams, codebook.num_paths, codebook.resolution, snr_db]
                for key in keys:
                    metric = MeanMetric(name=key)
                    metric.update_state([result[key] for result in results])
                    row.append(metric.result())
                row.append(results[0]["adaptive_slots"])
                if estimation.exhaustive: row.append(results[0]["exhaustive_slots"])
                rows.append(row)
        header = ["num_beams", "num_paths", "resolution", "snr_db"] + keys + ["adaptive_slots"]
        if estimation.exhaustive: header.append("exhaustive_slots")
        self.write_csv("spectral_efficiency", header, rows)


class QuantizationRunner(MonteCarloRunner):
    """ Perfect-CSI hybrid rate per phase-shifter resolution and RF-chain pair """
    kind = "quantization-study"

    def execute(self):
        running, channel, array = self.config.running_config, self.config.channel_config, self.config.array_config
        codebook = self.config.codebook_config
        geometry_bs = UlaGeometry(array.num_bs, array.spacing)
        geometry_ms = UlaGeometry(array.num_ms, array.spacing)
        num_candidates = codebook.num_candidates or codebook.resolution
        candidates = {bits: (make_candidates_quantized(geometry_bs, bits, num_candidates),
                             make_candidates_quantized(geometry_ms, bits, num_candidates))
                      for bits in running.quantization_bits}
        rows = []
        for point, snr_db in enumerate(running.snr_db):
            setup = QuantizationSetup(geometry_bs=geometry_bs, geometry_ms=geometry_ms, candidates=candidates,
                                      rf_pairs=tuple(running.rf_chains),
                                      noise_power=noise_power_from_snr(snr_db, channel.avg_gain_power),
                                      data_power=self.config.precoding_config.data_power,
                                      num_channel_paths=channel.num_paths,
                                      num_streams=self.config.precoding_config.num_streams,
                                      avg_gain_power=channel.avg_gain_power, angle_domain=channel.angle_domain)
            results = self.map_trials(quantization_trial, setup, point, desc=f"[SNR {snr_db:g} dB]")
            unconstrained = float(np.mean([result["unconstrained"] for result in results]))
            for bits in running.quantization_bits:
                for num_rf_bs, num_rf_ms in running.rf_chains:
                    rate = float(np.mean([result[(bits, num_rf_bs, num_rf_ms)] for result in results]))
                    rows.append([snr_db, bits, num_rf_bs, num_rf_ms, rate, unconstrained,
                                 rate / unconstrained if unconstrained > 0 else 0.0])
        self.write_csv("quantization", ["snr_db", "num_bits", "num_rf_bs", "num_rf_ms", "rate", "unconstrained",
                                        "relative_rate"], rows)


class GridResolutionRunner(MonteCarloRunner):
    """ Rate lost to grid quantization of off-grid angles as the resolution grows """
    kind = "grid-resolution-study"

    def execute(self):
        running, channel, array = self.config.running_config, self.config.channel_config, self.config.array_config
        geometry_bs = UlaGeometry(array.num_bs, array.spacing)
        geometry_ms = UlaGeometry(array.num_ms, array.spacing)
        rows = []
        for point, snr_db in enumerate(running.snr_db):
            setup = GridSetup(geometry_bs=geometry_bs, geometry_ms=geometry_ms, resolutions=tuple(running.resolutions),
                              noise_power=noise_power_from_snr(snr_db, channel.avg_gain_power),
                              data_power=self.config.precoding_config.data_power,
                              num_channel_paths=channel.num_paths,
                              num_streams=self.config.precoding_config.num_streams,
                              avg_gain_power=channel.avg_gain_power, angle_domain=channel.angle_domain)
            results = self.map_trials(grid_trial, setup, point, desc=f"[SNR {snr_db:g} dB]")
            exact = float(np.mean([result["exact"] for result in results]))
            for resolution in running.resolutions:
                rows.append([snr_db, resolution, float(np.mean([result[resolution][0] for result in results])), exact,
                             float(np.mean([result[resolution][1] for result in results]))])
        self.write_csv("grid_resolution", ["snr_db", "resolution", "rate_quantized", "rate_exact",
                                           "relative_error"], rows)


class CoverageRunner(MonteCarloRunner):
    """ Downlink coverage probability of every pipeline on shared PPP deployments """
    kind = "coverage"

    def execute(self):
        components = build_components(self.config)
        array, channel, cell = self.config.array_config, self.config.channel_config, self.config.cell_config
        setup = CoverageSetup(cell=cell, codebook_bs=components.codebook_bs, codebook_ms=components.codebook_ms,
                              candidates_bs=components.candidates_bs, candidates_ms=components.candidates_ms,
                              num_rf_bs=array.num_rf_bs, num_rf_ms=array.num_rf_ms,
                              num_streams=self.config.precoding_config.num_streams,
                              num_channel_paths=channel.num_paths, avg_gain_power=channel.avg_gain_power,
                              angle_domain=channel.angle_domain, pipelines=tuple(cell.pipelines))
        results = self.map_trials(coverage_trial, setup, 0, desc="[Deployments]")
        rates = {pipeline: [result[pipeline] for result in results] for pipeline in cell.pipelines}
        rows = []
        for pipeline, curve in coverage_curves(rates, cell.thresholds).items():
            for eta, coverage, (low, high) in zip(curve.thresholds, curve.coverage, curve.intervals):
                rows.append([pipeline, eta, coverage, low, high, curve.trials])
        self.write_csv("coverage", ["pipeline", "eta", "coverage", "ci_low", "ci_high", "trials"], rows)


RUNNERS = {runner.kind: runner for runner in (CodebookDesignRunner, SinglePathErrorRunner, SpectralEfficiencyRunner,
                                               QuantizationRunner, GridResolutionRunner, CoverageRunner)}


def get_runner(kind: str):
    if kind not in RUNNERS:
        raise KeyError(f"No experiment named {kind}, available: {list(RUNNERS.keys())}")
    return RUNNERS[kind]
