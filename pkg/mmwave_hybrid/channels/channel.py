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
from typing import Tuple, Sequence

import numpy as np

from .arrays import UlaGeometry, AngleGrid, steering_matrix, angle_domain_bounds
from ..utils.utils import complex_normal

# Dense N_MS x N_BS complex matrix
ChannelMatrix = np.ndarray


@dataclass(frozen=True)
class Path:
    aod: float
    aoa: float
    gain: complex


@dataclass(frozen=True, eq=False)
class PathSet:
    """ Geometric channel parameters: L paths, linear path loss rho and average path power """
    paths: Tuple[Path, ...]
    pathloss: float = 1.0
    avg_gain_power: float = 1.0

    def __post_init__(self):
        if len(self.paths) < 1:
            raise ValueError("a path set needs at least one path")
        if not (np.isfinite(self.pathloss) and self.pathloss > 0):
            raise ValueError(f"pathloss must be finite and positive, got {self.pathloss}")
        if not self.avg_gain_power > 0:
            raise ValueError(f"avg_gain_power must be positive, got {self.avg_gain_power}")
        for path in self.paths:
            for angle in (path.aod, path.aoa):
                if not 0.0 <= angle < 2.0 * np.pi:
                    raise ValueError(f"path angle {angle} outside [0, 2pi)")

    @property
    def num_paths(self) -> int:
        return len(self.paths)

    @property
    def aods(self) -> np.ndarray:
        return np.array([path.aod for path in self.paths])

    @property
    def aoas(self) -> np.ndarray:
        return np.array([path.aoa for path in self.paths])

    @property
    def gains(self) -> np.ndarray:
        return np.array([path.gain for path in self.paths], dtype=complex)

    def strongest(self) -> Path:
        return self.paths[int(np.argmax(np.abs(self.gains)))]


def _make_pathset(aods, aoas, gains, pathloss, avg_gain_power) -> PathSet:
    paths = tuple(Path(aod=float(d), aoa=float(a), gain=complex(g)) for d, a, g in zip(aods, aoas, gains))
    return PathSet(paths=paths, pathloss=float(pathloss), avg_gain_power=float(avg_gain_power))


def sample_pathset(rng: np.random.Generator,
                   num_paths: int,
                   pathloss: float = 1.0,
                   avg_gain_power: float = 1.0,
                   angle_domain="half") -> PathSet:
    """ Rayleigh path gains CN(0, avg_gain_power) and uniform angles over the angle domain """
    if num_paths < 1:
        raise ValueError(f"num_paths must be at least 1, got {num_paths}")
    low, high = angle_domain_bounds(angle_domain)
    gains = complex_normal(rng, num_paths, avg_gain_power)
    aods = rng.uniform(low, high, num_paths)
    aoas = rng.uniform(low, high, num_paths)
    return _make_pathset(aods, aoas, gains, pathloss, avg_gain_power)


def sample_grid_pathset(rng: np.random.Generator,
                        num_paths: int,
                        grid_bs: AngleGrid,
                        grid_ms: AngleGrid,
                        pathloss: float = 1.0,
                        avg_gain_power: float = 1.0,
                        angle_domain="half") -> PathSet:
    """ Like sample_pathset but with angles on the grids, distinct cells per side """
    if num_paths < 1:
        raise ValueError(f"num_paths must be at least 1, got {num_paths}")
    cells_bs = grid_bs.cells_in_domain(angle_domain)
    cells_ms = grid_ms.cells_in_domain(angle_domain)
    if num_paths > min(cells_bs.size, cells_ms.size):
        raise ValueError(f"cannot place {num_paths} paths on distinct grid cells")
    gains = complex_normal(rng, num_paths, avg_gain_power)
    aods = grid_bs.angles[rng.choice(cells_bs, size=num_paths, replace=False)]
    aoas = grid_ms.angles[rng.choice(cells_ms, size=num_paths, replace=False)]
    return _make_pathset(aods, aoas, gains, pathloss, avg_gain_power)


def pathset_from_cells(cells: Sequence[Tuple[int, int]],
                       gains: Sequence[complex],
                       grid_bs: AngleGrid,
                       grid_ms: AngleGrid,
                       pathloss: float = 1.0,
                       avg_gain_power: float = 1.0) -> PathSet:
    """ On-grid path set from (aod_index, aoa_index) pairs """
    aods = [grid_bs.angles[bs] for bs, _ in cells]
    aoas = [grid_ms.angles[ms] for _, ms in cells]
    return _make_pathset(aods, aoas, gains, pathloss, avg_gain_power)


def assemble_channel(pathset: PathSet, bs_geom: UlaGeometry, ms_geom: UlaGeometry) -> ChannelMatrix:
    """H = sqrt(N_BS N_MS / rho) * A_MS diag(alpha) A_BS^H

    Args:
        pathset (PathSet): path parameters
        bs_geom (UlaGeometry): transmit array
        ms_geom (UlaGeometry): receive array

    Returns:
        np.ndarray: N_MS x N_BS channel matrix
    """
    scale = np.sqrt(bs_geom.num_elements * ms_geom.num_elements / pathset.pathloss)
    a_bs = steering_matrix(bs_geom, pathset.aods)
    a_ms = steering_matrix(ms_geom, pathset.aoas)
    return scale * (a_ms * pathset.gains[None, :]) @ a_bs.conj().T


def average_snr(avg_gain_power: float, pathloss: float, noise_power: float) -> float:
    if avg_gain_power <= 0 or pathloss <= 0 or noise_power <= 0:
        raise ValueError("avg_gain_power, pathloss and noise_power must all be positive")
    return avg_gain_power / (pathloss * noise_power)


def noise_power_from_snr(snr_db: float, avg_gain_power: float = 1.0, pathloss: float = 1.0) -> float:
    """ sigma^2 giving average SNR snr_db for the normalized point-to-point link """
    return avg_gain_power / (pathloss * 10.0 ** (snr_db / 10.0))
