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

from mmwave_hybrid.channels.arrays import UlaGeometry, AngleGrid, build_dictionary
from mmwave_hybrid.codebooks.candidates import (CandidateSet, make_candidates_beamsteering, make_candidates_quantized,
                                                make_candidates_grid, candidate_angles)

geom = UlaGeometry(16)


def test_beamsteering_candidates_are_constant_modulus():
    candidates = make_candidates_beamsteering(geom, 32)
    assert candidates.matrix.shape == (16, 32)
    assert_allclose(np.abs(candidates.matrix), 1.0 / 4.0, atol=1e-12)
    assert candidates.kind == "beamsteering"


def test_single_candidate_points_broadside():
    candidates = make_candidates_beamsteering(geom, 1)
    assert_allclose(candidate_angles(1), [0.0])
    assert_allclose(candidates.matrix[:, 0], np.full(16, 0.25), atol=1e-12)


def test_candidate_columns_are_distinct():
    candidates = make_candidates_beamsteering(geom, 16)
    correlation = np.abs(candidates.matrix.conj().T @ candidates.matrix)
    np.fill_diagonal(correlation, 0.0)
    assert correlation.max() < 1.0 - 1e-6


def test_quantized_phases_on_lattice():
    for bits in (1, 2, 3, 7):
        candidates = make_candidates_quantized(geom, bits)
        codes = np.angle(candidates.matrix * 4.0) * 2 ** bits / (2.0 * np.pi)
        assert_allclose(codes, np.rint(codes), atol=1e-9)
        assert_allclose(np.abs(candidates.matrix), 0.25, atol=1e-12)
        assert candidates.num_bits == bits


def test_quantized_candidates_drop_duplicates():
    candidates = make_candidates_quantized(geom, 1, num_candidates=64)
    codes = np.mod(np.rint(np.angle(candidates.matrix) / np.pi), 2).astype(np.int64)
    unique = np.unique(codes, axis=1)
    assert unique.shape[1] == candidates.num_candidates
    assert candidates.num_candidates <= 64


def test_candidate_set_validation():
    with pytest.raises(ValueError):
        CandidateSet(matrix=np.ones((4, 2)) * np.array([[0.5], [0.5], [0.5], [0.4]]))
    with pytest.raises(KeyError):
        CandidateSet(matrix=np.full((4, 1), 0.5 + 0j), kind="random")
    descriptor = make_candidates_quantized(geom, 3).descriptor()
    assert descriptor["kind"] == "quantized" and descriptor["num_bits"] == 3 and descriptor["num_elements"] == 16


def test_beamsteering_angles_start_at_minus_half_pi():
    assert_allclose(candidate_angles(4), [-np.pi / 2, -np.pi / 4, 0.0, np.pi / 4])
    assert_allclose(candidate_angles(5), (np.arange(5) - 2) * np.pi / 5)


def test_grid_candidates_cover_every_alias_class():
    dictionary = build_dictionary(UlaGeometry(8), AngleGrid(16))
    candidates = make_candidates_grid(dictionary)
    assert candidates.kind == "grid" and candidates.num_bits is None
    assert candidates.num_candidates == np.unique(dictionary.alias_labels).size == 8
    correlation = np.abs(dictionary.matrix.conj().T @ candidates.matrix)
    assert_allclose(correlation.max(axis=1), 1.0, atol=1e-12)


def test_quantized_grid_candidates_on_lattice():
    dictionary = build_dictionary(UlaGeometry(8), AngleGrid(16))
    candidates = make_candidates_grid(dictionary, 3)
    codes = np.angle(candidates.matrix * np.sqrt(8.0)) * 8 / (2.0 * np.pi)
    assert_allclose(codes, np.rint(codes), atol=1e-9)
    assert candidates.num_bits == 3
    assert 1 <= candidates.num_candidates <= 8
    assert np.unique(np.rint(codes).astype(np.int64) % 8, axis=1).shape[1] == candidates.num_candidates
