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
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy import linalg

from ..channels.arrays import Dictionary, UlaGeometry, array_response
from ..channels.channel import PathSet
from ..codebooks.candidates import CandidateSet
from ..codebooks.omp import orthogonal_matching_pursuit
from ..estimators.base_estimator import MultiPathEstimate
from ..utils.errors import DegeneracyWarning, NumericalDegeneracyError

logger = logging.getLogger(__name__)

SINGULAR_TIE = 1e-9


@dataclass(frozen=True, eq=False)
class HybridPrecoder:
    """ F = F_RF F_BB, also used for the combiner W = W_RF W_BB """
    rf_columns: Tuple[int, ...]
    rf_matrix: np.ndarray  # N x N_RF analog beams
    baseband: np.ndarray  # N_RF x N_S
    residual_norms: Tuple[float, ...] = ()

    @property
    def matrix(self) -> np.ndarray:
        return self.rf_matrix @ self.baseband

    @property
    def num_rf(self) -> int:
        return self.rf_matrix.shape[1]

    @property
    def num_streams(self) -> int:
        return self.baseband.shape[1]


def as_matrix(beamformer: Union[HybridPrecoder, np.ndarray]) -> np.ndarray:
    if isinstance(beamformer, HybridPrecoder): return beamformer.matrix
    beamformer = np.asarray(beamformer, dtype=complex)
    return beamformer[:, None] if beamformer.ndim == 1 else beamformer


def reconstruct_channel(estimate: MultiPathEstimate,
                        dictionary_bs: Dictionary,
                        dictionary_ms: Dictionary,
                        pathloss: float = 1.0) -> np.ndarray:
    """ H_hat = sqrt(N_BS N_MS / rho) A_MS diag(alpha_hat) A_BS^H over the estimated grid cells """
    if estimate.num_paths == 0:
        raise ValueError("cannot reconstruct a channel from an empty estimate")
    a_bs = dictionary_bs.matrix[:, [path.aod_index for path in estimate.paths]]
    a_ms = dictionary_ms.matrix[:, [path.aoa_index for path in estimate.paths]]
    scale = np.sqrt(dictionary_bs.num_elements * dictionary_ms.num_elements / pathloss)
    return scale * (a_ms * estimate.gains[None, :]) @ a_bs.conj().T


def unconstrained_precoder(channel: np.ndarray, num_streams: int, side: str = "bs") -> np.ndarray:
    """Dominant singular vectors of the channel

    Args:
        channel (np.ndarray): N_MS x N_BS matrix
        num_streams (int): N_S
        side (str): "bs" for right singular vectors (precoder), "ms" for left ones (combiner)

    Returns:
        np.ndarray: N x N_S matrix with orthonormal columns
    """
    if side == "ms": return unconstrained_precoder(channel.conj().T, num_streams, side="bs")
    if side != "bs":
        raise ValueError(f"side must be 'bs' or 'ms', got {side}")
    if not 1 <= num_streams <= min(channel.shape):
        raise ValueError(f"num_streams must lie in [1, {min(channel.shape)}], got {num_streams}")
    _, singular_values, vh = linalg.svd(channel)
    if num_streams < singular_values.size:
        last, following = singular_values[num_streams - 1], singular_values[num_streams]
        if last > 0 and last - following <= SINGULAR_TIE * last:
            warnings.warn(f"singular values {num_streams} and {num_streams + 1} are tied, "
                          "the returned basis is one of many", DegeneracyWarning)
    return vh[:num_streams].conj().T


def hybrid_approx(target: np.ndarray,
                  candidates: Union[CandidateSet, np.ndarray],
                  num_rf: int,
                  num_streams: Optional[int] = None) -> HybridPrecoder:
    """Approximate an unconstrained beamformer by F_RF F_BB with F_RF drawn from the candidates

    The result is scaled to ||F_RF F_BB||_F^2 = N_S.
    """
    target = as_matrix(target)
    if num_streams is None: num_streams = target.shape[1]
    if num_streams != target.shape[1]:
        raise ValueError(f"target has {target.shape[1]} columns but num_streams={num_streams}")
    if num_rf < num_streams:
        raise ValueError(f"num_rf={num_rf} must be at least num_streams={num_streams}")
    atoms = candidates.matrix if isinstance(candidates, CandidateSet) else np.asarray(candidates)
    result = orthogonal_matching_pursuit(target, atoms, num_rf)
    if not result.columns:
        raise NumericalDegeneracyError("cannot approximate a zero beamformer")
    rf_matrix = atoms[:, result.columns]
    energy = linalg.norm(rf_matrix @ result.coefficients)
    if energy == 0.0:
        raise NumericalDegeneracyError("hybrid approximation has zero norm")
    baseband = result.coefficients * np.sqrt(num_streams) / energy
    return HybridPrecoder(rf_columns=tuple(result.columns), rf_matrix=rf_matrix, baseband=baseband,
                          residual_norms=tuple(result.residual_norms))


def design_hybrid_link(channel: np.ndarray,
                       candidates_bs: Union[CandidateSet, np.ndarray],
                       candidates_ms: Union[CandidateSet, np.ndarray],
                       num_rf_bs: int,
                       num_rf_ms: int,
                       num_streams: int = 1) -> Tuple[HybridPrecoder, HybridPrecoder]:
    """ Hybrid precoder and combiner approximating the dominant singular pair of channel """
    precoder = hybrid_approx(unconstrained_precoder(channel, num_streams, "bs"), candidates_bs, num_rf_bs)
    combiner = hybrid_approx(unconstrained_precoder(channel, num_streams, "ms"), candidates_ms, num_rf_ms)
    return precoder, combiner


def _steering_beam(candidates: CandidateSet, response: np.ndarray) -> HybridPrecoder:
    column = int(np.argmax(np.abs(candidates.matrix.conj().T @ response)))
    return HybridPrecoder(rf_columns=(column,), rf_matrix=candidates.matrix[:, [column]],
                          baseband=np.ones((1, 1), dtype=complex))


def analog_only_baseline(source: Union[PathSet, MultiPathEstimate],
                         bs_geom: UlaGeometry,
                         ms_geom: UlaGeometry,
                         candidates_bs: CandidateSet,
                         candidates_ms: CandidateSet,
                         dictionaries: Optional[Tuple[Dictionary, Dictionary]] = None):
    """Single analog beam pair steered at the strongest path

    Args:
        source: true PathSet, or a MultiPathEstimate together with the dictionaries it indexes
        candidates_bs (CandidateSet): analog beams of the BS
        candidates_ms (CandidateSet): analog beams of the MS

    Returns:
        tuple: (precoder, combiner), one RF chain and one stream each
    """
    if isinstance(source, PathSet):
        path = source.strongest()
        response_bs = array_response(bs_geom, path.aod)
        response_ms = array_response(ms_geom, path.aoa)
    else:
        if dictionaries is None:
            raise ValueError("an estimate needs the dictionaries its cells index")
        path = source.strongest()
        response_bs = dictionaries[0].matrix[:, path.aod_index]
        response_ms = dictionaries[1].matrix[:, path.aoa_index]
    return _steering_beam(candidates_bs, response_bs), _steering_beam(candidates_ms, response_ms)
