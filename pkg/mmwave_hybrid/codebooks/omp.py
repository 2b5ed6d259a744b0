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
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy import linalg

from ..utils.errors import DegeneracyWarning

logger = logging.getLogger(__name__)

ZERO_RESIDUAL = 1e-12


@dataclass
class OmpResult:
    columns: List[int] = field(default_factory=list)
    coefficients: np.ndarray = None  # len(columns) x M
    residual_norms: List[float] = field(default_factory=list)  # Frobenius, entry 0 is the target


def orthogonal_matching_pursuit(target: np.ndarray, atoms: np.ndarray, num_atoms: int) -> OmpResult:
    """Greedy sparse approximation of target by at most num_atoms columns of atoms

    Each iteration picks the column with the largest total squared correlation with the
    residual (lowest index on ties), re-solves least squares over every picked column and
    updates the residual.

    Args:
        target (np.ndarray): N vector or N x M matrix
        atoms (np.ndarray): N x N_can candidate matrix
        num_atoms (int): budget, e.g. number of RF chains

    Returns:
        OmpResult: picked columns, coefficients and residual norm history
    """
    if num_atoms < 1:
        raise ValueError(f"num_atoms must be at least 1, got {num_atoms}")
    target = np.asarray(target, dtype=complex)
    if target.ndim == 1: target = target[:, None]
    if target.shape[0] != atoms.shape[0]:
        raise ValueError(f"target has {target.shape[0]} rows but atoms have {atoms.shape[0]}")

    result = OmpResult(coefficients=np.zeros((0, target.shape[1]), dtype=complex))
    target_norm = linalg.norm(target)
    result.residual_norms.append(float(target_norm))
    if target_norm == 0.0:
        warnings.warn("OMP target is zero, nothing selected", DegeneracyWarning)
        return result

    residual = target
    available = np.ones(atoms.shape[1], dtype=bool)
    for iteration in range(min(num_atoms, atoms.shape[1])):
        scores = np.sum(np.abs(atoms.conj().T @ residual) ** 2, axis=1)
        scores[~available] = -np.inf
        index = int(np.argmax(scores))
        available[index] = False
        result.columns.append(index)

        basis = atoms[:, result.columns]
        coefficients, _, rank, _ = linalg.lstsq(basis, target)
        if rank < len(result.columns):
            warnings.warn(f"OMP selected a rank-deficient set at iteration {iteration + 1}", DegeneracyWarning)
        result.coefficients = coefficients
        residual = target - basis @ coefficients
        residual_norm = float(linalg.norm(residual))
        result.residual_norms.append(residual_norm)

        if residual_norm <= ZERO_RESIDUAL * target_norm:
            if iteration + 1 < num_atoms:
                logger.debug("OMP residual vanished after %d of %d atoms", iteration + 1, num_atoms)
                warnings.warn(f"OMP residual reached zero after {iteration + 1} atoms", DegeneracyWarning)
            break
    return result
