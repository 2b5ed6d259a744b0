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
from numpy.testing import assert_allclose

from mmwave_hybrid.channels.arrays import UlaGeometry, AngleGrid, build_dictionary
from mmwave_hybrid.codebooks.analysis import (gain_analysis, level_gain_summary, combined_error_matrix, combined_mask,
                                              beam_pattern)
from mmwave_hybrid.codebooks.candidates import make_candidates_grid
from mmwave_hybrid.codebooks.hierarchical import build_codebook


def hybrid_codebooks():
    geom = UlaGeometry(8)
    dictionary = build_dictionary(geom, AngleGrid(16))
    candidates = make_candidates_grid(dictionary, 3)
    codebook = build_codebook(dictionary, candidates, num_beams=2, num_rf=3)
    return codebook, codebook


def test_ideal_codebook_has_no_leakage(dft_dictionary):
    codebook = build_codebook(dft_dictionary(8), None, num_beams=2)
    for level in range(1, 4):
        analysis = gain_analysis(codebook, codebook, level, 0, 0)
        assert analysis.beta > 1e12
        assert_allclose(analysis.forward_gains, analysis.nominal_gain, rtol=1e-10)
        assert analysis.directions.shape[1] == 2
    for level in level_gain_summary(codebook, codebook):
        assert level.beta > 1e12
        assert_allclose(level.forward_gain, level.nominal_gain, rtol=1e-10)
        assert_allclose(level.nominal_gain, (2 ** level.level) ** 2, rtol=1e-10)


def test_combined_error_matches_response_expansion():
    codebook_bs, codebook_ms = hybrid_codebooks()
    level, subset_bs, subset_ms = 2, 1, 0
    dictionary = codebook_bs.dictionary.matrix
    response_bs = dictionary.conj().T @ codebook_bs.subset(level, subset_bs)
    response_ms = dictionary.conj().T @ codebook_ms.subset(level, subset_ms)
    nominal = codebook_bs.normalizer(level) * codebook_ms.normalizer(level)
    expected = np.kron(response_bs.T, response_ms.T) - nominal * combined_mask(
        codebook_bs.mask(level, subset_bs), codebook_ms.mask(level, subset_ms))
    assert_allclose(combined_error_matrix(codebook_bs, codebook_ms, level, subset_bs, subset_ms), expected, atol=1e-12)


def test_hybrid_codebook_gains_are_positive():
    codebook_bs, codebook_ms = hybrid_codebooks()
    summary = level_gain_summary(codebook_bs, codebook_ms)
    assert [level.level for level in summary] == [1, 2, 3, 4]
    for level in summary:
        assert level.forward_gain > 0
        assert level.beta > 1
    analysis = gain_analysis(codebook_bs, codebook_ms, 3, 2, 1)
    assert analysis.backward_gains.shape == (analysis.directions.shape[0], 4)
    assert np.all(analysis.forward_gains > 0)


def test_beam_pattern_peaks_inside_own_sector(dft_dictionary):
    codebook = build_codebook(dft_dictionary(16), None, num_beams=2)
    pattern = beam_pattern(codebook, 2, 1)
    assert pattern.shape == (16, 2)
    mask = codebook.mask(2, 1)
    for column, (start, stop) in enumerate(mask.ranges):
        assert start <= int(np.argmax(pattern[:, column])) < stop


def test_forward_gain_skips_cells_no_beam_can_separate():
    codebook = build_codebook(build_dictionary(UlaGeometry(8), AngleGrid(16)), None, num_beams=2)
    for level in level_gain_summary(codebook, codebook):
        assert level.forward_gain >= 1.0
        assert level.beta > 1
    # cells 4 and 12 alias across the two level-1 sectors, so neither beam favours them
    pattern = beam_pattern(codebook, 1, 0)
    assert_allclose(pattern[4], pattern[12], rtol=1e-9)
    assert pattern[4].max() < 1.0
