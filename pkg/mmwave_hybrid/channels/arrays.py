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
from functools import cached_property
from typing import Tuple, Union

import numpy as np

ANGLE_DOMAINS = {
    "half": (0.0, np.pi),  # default, one side of the array axis
    "full": (0.0, 2.0 * np.pi),
}

ALIAS_TOLERANCE = 1e-9


def angle_domain_bounds(domain: Union[str, Tuple[float, float]]) -> Tuple[float, float]:
    if isinstance(domain, str):
        if domain not in ANGLE_DOMAINS:
            raise KeyError(f"No angle domain named {domain}, available: {list(ANGLE_DOMAINS.keys())}")
        return ANGLE_DOMAINS[domain]
    low, high = float(domain[0]), float(domain[1])
    if not 0.0 <= low < high <= 2.0 * np.pi:
        raise ValueError(f"angle domain [{low}, {high}) must lie inside [0, 2pi)")
    return low, high


@dataclass(frozen=True)
class UlaGeometry:
    """ Uniform linear array: element count and spacing in wavelengths (d / lambda) """
    num_elements: int
    spacing: float = 0.5

    def __post_init__(self):
        if int(self.num_elements) != self.num_elements or self.num_elements < 1:
            raise ValueError(f"num_elements must be a positive integer, got {self.num_elements}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")


def array_response(geom: UlaGeometry, angle: float) -> np.ndarray:
    """Array response (steering) vector of a ULA

    Args:
        geom (UlaGeometry): array description
        angle (float): azimuth angle in radians

    Returns:
        np.ndarray: unit-norm complex vector of length num_elements
    """
    n = np.arange(geom.num_elements)
    return np.exp(2j * np.pi * geom.spacing * n * np.sin(angle)) / np.sqrt(geom.num_elements)


def steering_matrix(geom: UlaGeometry, angles) -> np.ndarray:
    """ Columns are array_response(geom, angle) for each angle """
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    n = np.arange(geom.num_elements)[:, None]
    return np.exp(2j * np.pi * geom.spacing * n * np.sin(angles)[None, :]) / np.sqrt(geom.num_elements)


@dataclass(frozen=True)
class AngleGrid:
    resolution: int

    def __post_init__(self):
        if int(self.resolution) != self.resolution or self.resolution < 1:
            raise ValueError(f"grid resolution must be a positive integer, got {self.resolution}")

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.resolution) / self.resolution

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.resolution

    def index_of(self, angle: float) -> int:
        """ Nearest grid cell of an angle, wrapping around 2pi """
        return int(np.rint(np.mod(angle, 2.0 * np.pi) / self.spacing)) % self.resolution

    def cells_in_domain(self, domain="half") -> np.ndarray:
        low, high = angle_domain_bounds(domain)
        angles = self.angles
        return np.flatnonzero((angles >= low) & (angles < high))


@dataclass(frozen=True, eq=False)
class Dictionary:
    """ Over-complete dictionary A_D: column u is the array response at grid angle u """
    geometry: UlaGeometry
    grid: AngleGrid
    matrix: np.ndarray

    @property
    def num_elements(self) -> int:
        return self.geometry.num_elements

    @property
    def resolution(self) -> int:
        return self.grid.resolution

    @cached_property
    def alias_labels(self) -> np.ndarray:
        return alias_classes(self)

    def equivalent(self, u: int, v: int) -> bool:
        """ Whether grid cells u and v have the same array response """
        return bool(self.alias_labels[u] == self.alias_labels[v])

    @cached_property
    def alias_membership(self) -> np.ndarray:
        """ N x N boolean matrix, True where two cells share an alias class """
        labels = self.alias_labels
        return labels[:, None] == labels[None, :]


def build_dictionary(geom: UlaGeometry, grid: AngleGrid) -> Dictionary:
    if grid.resolution < geom.num_elements:
        raise ValueError(
            f"dictionary must be over-complete: grid resolution {grid.resolution} "
            f"< {geom.num_elements} antennas")
    matrix = steering_matrix(geom, grid.angles)
    matrix.setflags(write=False)
    return Dictionary(geometry=geom, grid=grid, matrix=matrix)


def alias_classes(dictionary: Dictionary) -> np.ndarray:
    """Label grid cells by alias class

    sin(phi) = sin(pi - phi), and at half-wavelength spacing the endfire directions
    coincide too, so distinct grid angles can share one array response.

    Returns:
        np.ndarray: integer label per column, equal labels iff columns coincide
    """
    correlation = np.abs(dictionary.matrix.conj().T @ dictionary.matrix)
    same = correlation >= 1.0 - ALIAS_TOLERANCE
    labels = np.full(dictionary.resolution, -1, dtype=np.int64)
    next_label = 0
    for u in range(dictionary.resolution):
        if labels[u] >= 0: continue
        labels[same[u] & (labels < 0)] = next_label
        next_label += 1
    return labels
