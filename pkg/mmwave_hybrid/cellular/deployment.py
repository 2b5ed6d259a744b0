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

from ..channels.arrays import UlaGeometry, steering_matrix
from ..channels.channel import PathSet, sample_pathset, assemble_channel
from ..configs.config import CellConfig
from ..utils.utils import complex_normal, dbm2watt

SPEED_OF_LIGHT = 299792458.0
THERMAL_NOISE_DBM_HZ = -174.0


def pathloss_linear(distance: float, config: CellConfig) -> float:
    """ Free-space loss at 1 m, then distance ** n_pl """
    if not distance > 0:
        raise ValueError(f"distance must be positive, got {distance}")
    reference = (4.0 * np.pi * config.carrier / SPEED_OF_LIGHT) ** 2
    return float(reference * distance ** config.pathloss_exponent)


def noise_power(config: CellConfig) -> float:
    """ Thermal noise over the bandwidth plus noise figure, in watts """
    return float(dbm2watt(THERMAL_NOISE_DBM_HZ + 10.0 * np.log10(config.bandwidth) + config.noise_figure))


@dataclass(frozen=True, eq=False)
class BaseStation:
    distance: float
    pathset: PathSet
    steering: float = 0.0  # fixed AoD an interferer points its beam at


@dataclass(frozen=True, eq=False)
class Deployment:
    """ The nearest point of the process serves the MS, every other point interferes """
    desired: BaseStation
    interferers: Tuple[BaseStation, ...]

    @property
    def num_interferers(self) -> int:
        return len(self.interferers)


def sample_deployment(rng: np.random.Generator,
                      config: CellConfig,
                      num_paths: int = 3,
                      avg_gain_power: float = 1.0,
                      angle_domain="half") -> Deployment:
    """Poisson point process of base stations in a disc around the MS

    Args:
        rng (np.random.Generator): random stream
        config (CellConfig): density, window radius and path loss parameters
        num_paths (int): paths of every BS-MS channel

    Returns:
        Deployment: empty realizations are redrawn
    """
    mean = config.density * np.pi * config.window_radius ** 2
    count = 0
    while count == 0:
        count = int(rng.poisson(mean))
    distances = np.sort(config.window_radius * np.sqrt(rng.uniform(0.0, 1.0, count)))
    stations = []
    for distance in distances:
        pathset = sample_pathset(rng, num_paths, pathloss=pathloss_linear(distance, config),
                                 avg_gain_power=avg_gain_power, angle_domain=angle_domain)
        stations.append(BaseStation(distance=float(distance), pathset=pathset,
                                    steering=float(rng.uniform(0.0, 2.0 * np.pi))))
    return Deployment(desired=stations[0], interferers=tuple(stations[1:]))


class InterferenceHook:
    """Interference seen through the combiners in one measurement slot

    Every interferer sends a fresh CN(0, 1) symbol with power P through its own steering beam.
    """

    def __init__(self, deployment: Deployment, bs_geom: UlaGeometry, ms_geom: UlaGeometry, power: float):
        self.deployment = deployment
        self.power = power
        if deployment.interferers:
            beams = steering_matrix(bs_geom, [station.steering for station in deployment.interferers])
            self.received = np.column_stack([
                np.sqrt(power) * assemble_channel(station.pathset, bs_geom, ms_geom) @ beams[:, i]
                for i, station in enumerate(deployment.interferers)])
        else:
            self.received = np.zeros((ms_geom.num_elements, 0), dtype=complex)

    def __call__(self, combiners: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        symbols = complex_normal(rng, self.received.shape[1], 1.0)
        return combiners.conj().T @ (self.received @ symbols)

    def covariance(self) -> np.ndarray:
        return self.received @ self.received.conj().T


def interference_term(deployment: Deployment,
                      combiners: np.ndarray,
                      rng: np.random.Generator,
                      bs_geom: UlaGeometry,
                      ms_geom: UlaGeometry,
                      power: float) -> np.ndarray:
    return InterferenceHook(deployment, bs_geom, ms_geom, power)(combiners, rng)


def interference_covariance(deployment: Deployment, bs_geom: UlaGeometry, ms_geom: UlaGeometry,
                            power: float) -> np.ndarray:
    """ Sum over interferers of P H_i f_i f_i^H H_i^H """
    return InterferenceHook(deployment, bs_geom, ms_geom, power).covariance()
