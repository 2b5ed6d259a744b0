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

from mmwave_hybrid.utils.utils import int_log, db2pow, pow2db, dbm2watt, complex_normal, trial_rng, \
    chunk_indices, format_number


def test_int_log():
    assert int_log(64, 2) == 6
    assert int_log(27, 3) == 3
    assert int_log(1, 2) == 0
    assert int_log(48, 2) is None
    assert int_log(0, 2) is None


def test_decibel_conversions():
    assert_allclose(db2pow(20.0), 100.0)
    assert_allclose(pow2db(1000.0), 30.0)
    assert_allclose(dbm2watt(30.0), 1.0)


def test_complex_normal_variance():
    samples = complex_normal(np.random.default_rng(0), 200000, 2.0)
    assert_allclose(np.mean(np.abs(samples) ** 2), 2.0, rtol=0.02)
    assert abs(np.mean(samples.real ** 2) - np.mean(samples.imag ** 2)) < 0.03


def test_trial_streams_are_reproducible_and_distinct():
    first = trial_rng(1, 2, 3).standard_normal(4)
    assert_allclose(trial_rng(1, 2, 3).standard_normal(4), first)
    assert not np.allclose(trial_rng(1, 2, 4).standard_normal(4), first)
    assert not np.allclose(trial_rng(1, 3, 3).standard_normal(4), first)


def test_chunks_cover_every_trial():
    chunks = chunk_indices(10, 4)
    assert [list(c) for c in chunks] == [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9]]


def test_format_number():
    assert format_number(True) == "1"
    assert format_number(np.int64(7)) == "7"
    assert format_number(0.1) == "0.1"
    assert format_number("inf") == "inf"
