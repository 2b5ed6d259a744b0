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
from typing import Callable, Optional, Union

import numpy as np

from ..codebooks.hierarchical import HybridVector
from ..utils.utils import complex_normal

# hook(combiners, rng) -> W^H times the interference received in one slot
InterferenceSource = Callable[[np.ndarray, np.random.Generator], np.ndarray]


@dataclass
class MeasurementContext:
    """Everything a training slot needs besides the beams

    Args:
        channel (np.ndarray): N_MS x N_BS channel H
        noise_power (float): sigma^2 of the CN(0, sigma^2 I) receiver noise
        rng (np.random.Generator): noise (and interference symbol) stream
        pathloss (float): linear rho used to scale gain estimates
        interference (callable): optional per-slot interference hook
        combining_group (int): receive beams combined in one slot (N_RF-parallel combining)
        slots (int): measurement slots consumed so far
    """
    channel: np.ndarray
    noise_power: float
    rng: np.random.Generator
    pathloss: float = 1.0
    interference: Optional[InterferenceSource] = None
    combining_group: int = 1
    slots: int = 0

    def __post_init__(self):
        if not self.noise_power > 0:
            raise ValueError(f"noise_power must be positive, got {self.noise_power}")
        if self.combining_group < 1:
            raise ValueError(f"combining_group must be at least 1, got {self.combining_group}")

    @property
    def num_bs(self) -> int:
        return self.channel.shape[1]

    @property
    def num_ms(self) -> int:
        return self.channel.shape[0]


def beam_vector(beam: Union[HybridVector, np.ndarray]) -> np.ndarray:
    if isinstance(beam, HybridVector): return beam.vector
    return np.asarray(beam, dtype=complex)


def measure(ctx: MeasurementContext, precoder, combiners: np.ndarray, power: float) -> np.ndarray:
    """Transmit one precoder and observe it through every combiner

    Combiners are grouped ctx.combining_group at a time, one slot per group, with fresh
    noise (and interference) per slot.

    Returns:
        np.ndarray: y = sqrt(P) W^H H f + W^H n, one entry per combiner column
    """
    f = beam_vector(precoder)
    combiners = np.asarray(combiners, dtype=complex)
    if combiners.ndim == 1: combiners = combiners[:, None]
    if f.shape[0] != ctx.num_bs or combiners.shape[0] != ctx.num_ms:
        raise ValueError(f"beam sizes {f.shape[0]}/{combiners.shape[0]} do not match a "
                         f"{ctx.num_ms}x{ctx.num_bs} channel")
    if power < 0:
        raise ValueError(f"power must be non-negative, got {power}")

    received = np.sqrt(power) * (combiners.conj().T @ (ctx.channel @ f))
    for start in range(0, combiners.shape[1], ctx.combining_group):
        group = combiners[:, start:start + ctx.combining_group]
        noise = complex_normal(ctx.rng, ctx.num_ms, ctx.noise_power)
        received[start:start + group.shape[1]] += group.conj().T @ noise
        if ctx.interference is not None:
            received[start:start + group.shape[1]] += ctx.interference(group, ctx.rng)
        ctx.slots += 1
    return received
