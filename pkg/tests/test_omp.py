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

import numpy as np
import pytest
from numpy.testing import assert_allclose

from mmwave_hybrid.channels.arrays import UlaGeometry
from mmwave_hybrid.codebooks.candidates import make_candidates_quantized
from mmwave_hybrid.codebooks.omp import orthogonal_matching_pursuit
from mmwave_hybrid.utils.errors import DegeneracyWarning

n = np.arange(8)
dft = np.exp(2j * np.pi * np.outer(n, n) / 8) / np.sqrt(8)


def test_exact_recovery_over_orthonormal_atoms():
    target = 2.0 * dft[:, 3] + 1j * dft[:, 7]
    result = orthogonal_matching_pursuit(target, dft, 2)
    assert sorted(result.columns) == [3, 7]
    assert result.residual_norms[-1] < 1e-12
    approximation = dft[:, result.columns] @ result.coefficients[:, 0]
    assert_allclose(approximation, target, atol=1e-12)


def test_residual_is_non_increasing():
    rng = np.random.default_rng(0)
    atoms = make_candidates_quantized(UlaGeometry(16), 3).matrix
    target = rng.standard_normal((16, 2)) + 1j * rng.standard_normal((16, 2))
    result = orthogonal_matching_pursuit(target, atoms, 6)
    assert len(result.columns) == 6
    assert np.all(np.diff(result.residual_norms) <= 1e-12)


def test_ties_pick_lowest_index():
    atoms = np.eye(4, dtype=complex)
    result = orthogonal_matching_pursuit(np.array([1.0, 1.0, 0.0, 0.0]), atoms, 2)
    assert result.columns == [0, 1]


def test_zero_target_warns():
    with pytest.warns(DegeneracyWarning):
        result = orthogonal_matching_pursuit(np.zeros(8), dft, 3)
    assert result.columns == []


def test_early_zero_residual_warns():
    with pytest.warns(DegeneracyWarning):
        result = orthogonal_matching_pursuit(dft[:, 3], dft, 3)
    assert result.columns == [3]


def test_invalid_arguments():
    with pytest.raises(ValueError):
        orthogonal_matching_pursuit(dft[:, 0], dft, 0)
    with pytest.raises(ValueError):
        orthogonal_matching_pursuit(np.ones(4), dft, 1)
