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

import abc
from dataclasses import dataclass
from typing import Tuple, List

import numpy as np
from scipy import linalg

from .measurement import MeasurementContext
from ..channels.arrays import Dictionary


@dataclass(frozen=True)
class SinglePathEstimate:
    aod_index: int
    aoa_index: int
    gain: complex

    @property
    def cell(self) -> Tuple[int, int]:
        return self.aod_index, self.aoa_index


@dataclass(frozen=True)
class MultiPathEstimate:
    paths: Tuple[SinglePathEstimate, ...]
    resolution: int
    # per path, the subset measured at every level (level 1 is always subset 0)
    trajectory_bs: Tuple[Tuple[int, ...], ...] = ()
    trajectory_ms: Tuple[Tuple[int, ...], ...] = ()
    collisions: int = 0

    def __post_init__(self):
        for path in self.paths:
            if not (0 <= path.aod_index < self.resolution and 0 <= path.aoa_index < self.resolution):
                raise ValueError(f"estimated cell {path.cell} outside a grid of {self.resolution} cells")
        cells = [path.cell for path in self.paths]
        if len(set(cells)) != len(cells):
            raise ValueError(f"estimated cells must be pairwise distinct, got {cells}")

    @property
    def num_paths(self) -> int:
        return len(self.paths)

    @property
    def cells(self) -> List[Tuple[int, int]]:
        return [path.cell for path in self.paths]

    @property
    def gains(self) -> np.ndarray:
        return np.array([path.gain for path in self.paths], dtype=complex)

    def strongest(self) -> SinglePathEstimate:
        return self.paths[int(np.argmax(np.abs(self.gains)))]


@dataclass
class StepCount:
    measurement_slots: int = 0
    feedback_bits: int = 0

    def __post_init__(self):
        if self.measurement_slots < 0 or self.feedback_bits < 0:
            raise ValueError("step counts are non-negative")

    def __add__(self, other: "StepCount") -> "StepCount":
        return StepCount(self.measurement_slots + other.measurement_slots, self.feedback_bits + other.feedback_bits)


def same_cell(dictionary_bs: Dictionary, dictionary_ms: Dictionary, first, second) -> bool:
    """ Whether two (aod, aoa) cells have identical array responses on both sides """
    return dictionary_bs.equivalent(first[0], second[0]) and dictionary_ms.equivalent(first[1], second[1])


def least_squares_gains(signatures: np.ndarray, measurements: np.ndarray) -> np.ndarray:
    """ Joint LLSE of path coefficients from y = G c + n """
    coefficients, _, _, _ = linalg.lstsq(signatures, measurements)
    return coefficients


class BaseEstimator(metaclass=abc.ABCMeta):
    """ Channel estimator returning grid cells and gains of the strongest paths """

    def __init__(self, dictionary_bs: Dictionary, dictionary_ms: Dictionary, num_paths: int = 1):
        if num_paths < 1:
            raise ValueError(f"num_paths must be at least 1, got {num_paths}")
        self.dictionary_bs = dictionary_bs
        self.dictionary_ms = dictionary_ms
        self.num_paths = num_paths

    @property
    def resolution(self) -> int:
        return self.dictionary_bs.resolution

    def signature(self, precoders: np.ndarray, combiners: np.ndarray, cell: Tuple[int, int]) -> np.ndarray:
        """ Noiseless response of a unit path at cell to every (precoder, combiner) pair, BS-major """
        a_bs = self.dictionary_bs.matrix[:, cell[0]]
        a_ms = self.dictionary_ms.matrix[:, cell[1]]
        return np.kron(precoders.T @ a_bs.conj(), combiners.conj().T @ a_ms)

    @abc.abstractmethod
    def estimate(self, ctx: MeasurementContext) -> Tuple[MultiPathEstimate, StepCount]:
        raise NotImplementedError()
