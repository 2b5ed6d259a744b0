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
from typing import Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StagePowers:
    """ Per-transmission training power of every stage """
    powers: Tuple[float, ...]
    measurements_per_stage: int = 4  # K^2 for the single-path search with K = 2

    def __post_init__(self):
        if len(self.powers) < 1:
            raise ValueError("at least one stage power is required")
        if any(not (np.isfinite(p) and p > 0) for p in self.powers):
            raise ValueError(f"stage powers must be finite and positive, got {self.powers}")

    @property
    def num_stages(self) -> int:
        return len(self.powers)

    @property
    def total(self) -> float:
        """ P_T = (measurements per stage) * sum of P_(s) """
        return float(self.measurements_per_stage * np.sum(self.powers))

    def __getitem__(self, level: int) -> float:
        # levels start at 1
        return self.powers[level - 1]


def _check_gains(gains: Sequence[float], num_levels: int) -> np.ndarray:
    gains = np.asarray(gains, dtype=float)
    if gains.shape != (num_levels,):
        raise ValueError(f"expected {num_levels} stage gains, got {gains.shape}")
    if np.any(~np.isfinite(gains)) or np.any(gains <= 0):
        raise ValueError(f"stage gains must be finite and positive, got {gains}")
    return gains


def uniform_powers(total_power: float, num_beams: int, num_levels: int) -> StagePowers:
    if not total_power > 0:
        raise ValueError(f"total_power must be positive, got {total_power}")
    per_stage = total_power / (num_beams ** 2 * num_levels)
    return StagePowers(powers=(per_stage,) * num_levels, measurements_per_stage=num_beams ** 2)


def allocate_power_corollary1(delta: float,
                              avg_snr: float,
                              num_beams: int,
                              num_levels: int,
                              gains: Sequence[float]) -> Tuple[float, StagePowers]:
    """Smallest stage powers that guarantee an average error probability of at most delta

    Args:
        delta (float): target error probability, 0 < delta < 1
        avg_snr (float): average SNR gamma
        num_beams (int): beams per side per stage (K, or K * L_d for the multi-path search)
        num_levels (int): S
        gains (list): nominal beamforming gain G_(s) of every stage

    Returns:
        tuple: (Gamma, StagePowers with P_(s) = Gamma / G_(s))
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not avg_snr > 0:
        raise ValueError(f"avg_snr must be positive, got {avg_snr}")
    gains = _check_gains(gains, num_levels)
    parenthesis = (num_beams ** 2 - 1) * num_levels / delta - 2.0
    if parenthesis <= 0:
        raise ValueError(f"delta={delta} is too large: (K^2 - 1) S / delta must exceed 2")
    gamma = 2.0 / avg_snr * parenthesis
    powers = StagePowers(powers=tuple(float(p) for p in gamma / gains), measurements_per_stage=num_beams ** 2)
    return float(gamma), powers


def allocate_power_corollary2(total_power: float,
                              avg_snr: float,
                              num_beams: int,
                              num_levels: int,
                              gains: Sequence[float]) -> Tuple[StagePowers, float]:
    """ Split a total training budget so that every stage gets the same received SNR, with its error bound """
    if not total_power > 0:
        raise ValueError(f"total_power must be positive, got {total_power}")
    if not avg_snr > 0:
        raise ValueError(f"avg_snr must be positive, got {avg_snr}")
    gains = _check_gains(gains, num_levels)
    inverse_sum = float(np.sum(1.0 / gains))
    powers = total_power / (num_beams ** 2 * gains * inverse_sum)
    bound = (num_beams ** 2 - 1) * num_levels / (total_power * avg_snr / (2.0 * num_beams ** 2 * inverse_sum) + 2.0)
    return StagePowers(powers=tuple(float(p) for p in powers), measurements_per_stage=num_beams ** 2), \
        float(min(1.0, bound))


def theorem1_bound(powers: Sequence[float],
                   forward_gains: Sequence[float],
                   betas: Sequence[float],
                   avg_snr: float,
                   num_beams: int) -> float:
    """Upper bound on the average probability of a wrong AoA/AoD estimate

    Args:
        powers (list): P_(s) per stage
        forward_gains (list): worst-case forward gain G^F_s per stage
        betas (list): forward/backward gain ratio beta_s per stage, inf when no error leaks
        avg_snr (float): average SNR gamma
        num_beams (int): K

    Returns:
        float: bound clamped to [0, 1]
    """
    powers = np.asarray(powers, dtype=float)
    forward_gains = np.asarray(forward_gains, dtype=float)
    betas = np.asarray(betas, dtype=float)
    if not powers.shape == forward_gains.shape == betas.shape:
        raise ValueError("powers, forward_gains and betas need one entry per stage")
    if np.any(powers < 0):
        raise ValueError("powers must be non-negative")
    if np.any(betas < 1):
        logger.debug("beta below 1 at some stage (%s), the bound is vacuous", betas)
        return 1.0
    b = 1.0 / betas
    x = powers * forward_gains * avg_snr
    terms = 1.0 - (1.0 - b) * x / (4.0 * np.sqrt(1.0 + (1.0 + b) * x / 2.0 + x ** 2 * (1.0 - b) ** 2 / 16.0))
    return float(min(1.0, (num_beams ** 2 - 1) / 2.0 * np.sum(terms)))
