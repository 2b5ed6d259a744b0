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

from typing import Optional

import numpy as np
from scipy import linalg

from .hybrid import as_matrix
from ..utils.errors import NumericalDegeneracyError


def achievable_rate(channel: np.ndarray,
                    precoder,
                    combiner,
                    power: float,
                    noise_power: float,
                    num_streams: Optional[int] = None,
                    interference: Optional[np.ndarray] = None) -> float:
    """Spectral efficiency with equal power per stream

    R = log2 det(I + P / N_S R_n^-1 W^H H F F^H H^H W), R_n = W^H (sigma^2 I + Q) W

    Args:
        channel (np.ndarray): N_MS x N_BS matrix H
        precoder: F matrix or HybridPrecoder
        combiner: W matrix or HybridPrecoder
        power (float): total transmit power P
        noise_power (float): sigma^2
        num_streams (int): N_S, defaults to the number of precoder columns
        interference (np.ndarray): optional N_MS x N_MS interference covariance Q

    Returns:
        float: rate in bps/Hz
    """
    F = as_matrix(precoder)
    W = as_matrix(combiner)
    if num_streams is None: num_streams = F.shape[1]
    if channel.shape != (W.shape[0], F.shape[0]):
        raise ValueError(f"channel {channel.shape} does not match combiner {W.shape} and precoder {F.shape}")
    covariance = noise_power * np.eye(channel.shape[0])
    if interference is not None: covariance = covariance + interference
    noise_cov = W.conj().T @ covariance @ W
    try:
        lower = linalg.cholesky(noise_cov, lower=True)
    except linalg.LinAlgError as error:
        raise NumericalDegeneracyError("noise covariance of the combiner output is singular") from error
    whitened = linalg.solve_triangular(lower, W.conj().T @ channel @ F, lower=True)
    gram = np.eye(whitened.shape[0]) + power / num_streams * (whitened @ whitened.conj().T)
    _, logdet = np.linalg.slogdet(gram)
    return float(max(logdet, 0.0) / np.log(2.0))
