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

import copy
from typing import Union

import numpy as np

from . import load_yaml
from ..utils.utils import preprocess_paths, int_log

EXPERIMENT_KINDS = ["design-codebook", "single-path-error", "spectral-efficiency-sweep", "quantization-study",
                    "grid-resolution-study", "coverage"]
CANDIDATE_KINDS = ["beamsteering", "quantized", "none"]
ALLOCATIONS = ["corollary1", "corollary2"]
POWER_GAINS = ["forward", "nominal"]
PIPELINES = ["perfect-csi", "estimated", "analog-only", "no-interference"]


class ArrayConfig:
    def __init__(self, config: dict = None):
        if not config: config = {}
        self.num_bs = config.get("num_bs", 64)
        self.num_ms = config.get("num_ms", 32)
        self.spacing = config.get("spacing", 0.5)
        self.num_rf_bs = config.get("num_rf_bs", 10)
        self.num_rf_ms = config.get("num_rf_ms", 6)


class ChannelConfig:
    def __init__(self, config: dict = None):
        if not config: config = {}
        self.num_paths = config.get("num_paths", 3)
        self.avg_gain_power = config.get("avg_gain_power", 1.0)
        self.pathloss = config.get("pathloss", 1.0)
        self.angle_domain = config.get("angle_domain", "half")
        self.on_grid = config.get("on_grid", False)


class CodebookConfig:
    def __init__(self, config: dict = None):
        if not config: config = {}
        self.resolution = config.get("resolution", 64)
        self.num_beams = config.get("num_beams", 2)
        self.num_paths = config.get("num_paths", 1)
        self.candidates = config.get("candidates", "quantized")
        self.num_bits = config.get("num_bits", 7)
        self.num_candidates = config.get("num_candidates", None)
        # RF chains per codebook vector, None uses every chain of the array
        self.num_rf_bs = config.get("num_rf_bs", None)
        self.num_rf_ms = config.get("num_rf_ms", None)
        # white-noise loading of the training-beam design
        self.pattern_loading = config.get("pattern_loading", 0.03)

    def updated(self, overrides: dict = None) -> "CodebookConfig":
        """ Copy with some keys replaced, used by sweeps over K, L_d and N """
        values = copy.deepcopy(vars(self))
        values.update(overrides or {})
        return CodebookConfig(values)


class EstimationConfig:
    def __init__(self, config: dict = None):
        if not config: config = {}
        self.delta = config.get("delta", 0.05)
        self.allocation = config.get("allocation", "corollary1")
        self.total_powers = list(config.get("total_powers", [1e2, 1e3, 1e4, 1e5]))
        self.power_gains = config.get("power_gains", "forward")
        self.parallel_combining = config.get("parallel_combining", False)
        self.exhaustive = config.get("exhaustive", True)


class PrecodingConfig:
    def __init__(self, config: dict = None):
        if not config: config = {}
        self.num_streams = config.get("num_streams", 1)
        self.data_power = config.get("data_power", 1.0)


class CellConfig:
    def __init__(self, config: dict = None):
        if not config: config = {}
        self.cell_radius = config.get("cell_radius", 100.0)
        self.density = config.get("density", None) or 1.0 / (np.pi * self.cell_radius ** 2)
        self.window_radius = config.get("window_radius", None) or 10.0 * self.cell_radius
        self.pathloss_exponent = config.get("pathloss_exponent", 3.0)
        self.carrier = config.get("carrier", 28e9)
        self.bandwidth = config.get("bandwidth", 100e6)
        self.noise_figure = config.get("noise_figure", 5.0)
        self.tx_power_dbm = config.get("tx_power_dbm", 30.0)
        self.thresholds = list(config.get("thresholds", np.arange(0.0, 10.5, 0.5).tolist()))
        self.pipelines = list(config.get("pipelines", PIPELINES))


class RunningConfig:
    def __init__(self, config: dict = None):
        if not config: config = {}
        self.experiment = config.get("experiment", "single-path-error")
        self.seed = config.get("seed", 0)
        self.trials = config.get("trials", 1000)
        self.threads = config.get("threads", 1)
        self.outdir = preprocess_paths(config.get("outdir", "runs"))
        self.chunk_size = config.get("chunk_size", 64)
        self.snr_db = list(config.get("snr_db", [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0]))
        self.quantization_bits = list(config.get("quantization_bits", [1, 2, 3, 4, 5, 6, 7]))
        self.rf_chains = [tuple(pair) for pair in config.get("rf_chains", [[10, 6], [5, 3]])]
        self.resolutions = list(config.get("resolutions", [64, 128, 256]))
        # codebook overrides per spectral-efficiency curve
        self.variants = list(config.get("variants", [
            {"num_beams": 2, "num_paths": 1, "resolution": 64},
            {"num_beams": 4, "num_paths": 1, "resolution": 64},
            {"num_beams": 2, "num_paths": 2, "resolution": 64},
            {"num_beams": 2, "num_paths": 3, "resolution": 96},
        ]))


def check_codebook(codebook: CodebookConfig, array: ArrayConfig):
    N, K, L_d = codebook.resolution, codebook.num_beams, codebook.num_paths
    if K < 2 or L_d < 1 or N % L_d != 0 or not int_log(N // L_d, K):
        raise ValueError(f"resolution N={N} must be divisible by L_d={L_d} with N/L_d a power of K={K} "
                         f"(N = L_d * K^S for an integer S >= 1)")
    if N < array.num_bs or N < array.num_ms:
        raise ValueError(f"resolution N={N} must be at least the number of antennas "
                         f"({array.num_bs} BS, {array.num_ms} MS) for over-complete dictionaries")
    if codebook.candidates not in CANDIDATE_KINDS:
        raise ValueError(f"candidates must be one of {CANDIDATE_KINDS}, got {codebook.candidates}")
    if not codebook.pattern_loading > 0:
        raise ValueError(f"pattern_loading must be positive, got {codebook.pattern_loading}")
    if codebook.candidates == "quantized" and codebook.num_bits < 1:
        raise ValueError(f"num_bits must be at least 1, got {codebook.num_bits}")
    for side, num_rf, antennas in (("BS", codebook.num_rf_bs, array.num_bs), ("MS", codebook.num_rf_ms, array.num_ms)):
        if num_rf is not None and not 1 <= num_rf <= antennas:
            raise ValueError(f"codebook {side} RF chains must lie in [1, {antennas}], got {num_rf}")


class Config:
    """ Experiment config, read from a YAML file or an already-parsed dict """

    def __init__(self, path_or_dict: Union[str, dict] = None):
        if isinstance(path_or_dict, dict) or path_or_dict is None:
            config = copy.deepcopy(path_or_dict) or {}
        else:
            config = load_yaml(preprocess_paths(path_or_dict))
        self.array_config = ArrayConfig(config.get("array_config"))
        self.channel_config = ChannelConfig(config.get("channel_config"))
        self.codebook_config = CodebookConfig(config.get("codebook_config"))
        self.estimation_config = EstimationConfig(config.get("estimation_config"))
        self.precoding_config = PrecodingConfig(config.get("precoding_config"))
        self.cell_config = CellConfig(config.get("cell_config"))
        self.running_config = RunningConfig(config.get("running_config"))

    def validate(self) -> "Config":
        """ Raise ValueError naming the first violated rule """
        array, running = self.array_config, self.running_config
        if running.experiment not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment kind {running.experiment}, available: {EXPERIMENT_KINDS}")
        check_codebook(self.codebook_config, array)
        if running.experiment == "spectral-efficiency-sweep":
            for variant in running.variants:
                check_codebook(self.codebook_config.updated(variant), array)
        num_streams = self.precoding_config.num_streams
        for side, num_rf, antennas in (("BS", array.num_rf_bs, array.num_bs), ("MS", array.num_rf_ms, array.num_ms)):
            if not num_streams <= num_rf <= antennas:
                raise ValueError(f"{side} needs N_S <= N_RF <= antennas, got {num_streams} <= {num_rf} <= {antennas}")
        if running.experiment == "quantization-study":
            for num_rf_bs, num_rf_ms in running.rf_chains:
                if not (num_streams <= num_rf_bs <= array.num_bs and num_streams <= num_rf_ms <= array.num_ms):
                    raise ValueError(f"RF pair ({num_rf_bs}, {num_rf_ms}) violates N_S <= N_RF <= antennas")
        if not 0.0 < self.estimation_config.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.estimation_config.delta}")
        if self.estimation_config.allocation not in ALLOCATIONS:
            raise ValueError(f"allocation must be one of {ALLOCATIONS}, got {self.estimation_config.allocation}")
        if self.estimation_config.power_gains not in POWER_GAINS:
            raise ValueError(f"power_gains must be one of {POWER_GAINS}, got {self.estimation_config.power_gains}")
        if any(not p > 0 for p in self.estimation_config.total_powers):
            raise ValueError("total training powers must be positive")
        if running.trials < 1 or running.threads < 1 or running.chunk_size < 1:
            raise ValueError("trials, threads and chunk_size must all be positive")
        if self.channel_config.num_paths < 1:
            raise ValueError(f"the channel needs at least one path, got {self.channel_config.num_paths}")
        if self.channel_config.angle_domain not in ("half", "full"):
            raise ValueError(f"angle_domain must be 'half' or 'full', got {self.channel_config.angle_domain}")
        cell = self.cell_config
        if cell.cell_radius <= 0 or cell.density <= 0:
            raise ValueError("cell radius and density must be positive")
        if cell.window_radius < 3.0 * cell.cell_radius:
            raise ValueError(f"window_radius {cell.window_radius} must be at least 3 * cell_radius")
        unknown = [p for p in cell.pipelines if p not in PIPELINES]
        if unknown:
            raise ValueError(f"unknown coverage pipelines {unknown}, available: {PIPELINES}")
        for resolution in running.resolutions:
            if resolution < max(array.num_bs, array.num_ms):
                raise ValueError(f"grid resolution {resolution} is smaller than the arrays")
        return self

    def to_dict(self) -> dict:
        return {
            "array_config": dict(vars(self.array_config)),
            "channel_config": dict(vars(self.channel_config)),
            "codebook_config": dict(vars(self.codebook_config)),
            "estimation_config": dict(vars(self.estimation_config)),
            "precoding_config": dict(vars(self.precoding_config)),
            "cell_config": dict(vars(self.cell_config)),
            "running_config": {**vars(self.running_config),
                               "rf_chains": [list(pair) for pair in self.running_config.rf_chains]},
        }
