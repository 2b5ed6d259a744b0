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

import os
from typing import Union, List, Sequence

import numpy as np


def preprocess_paths(paths: Union[List, str]):
    if isinstance(paths, list):
        return [os.path.abspath(os.path.expanduser(path)) for path in paths]
    return os.path.abspath(os.path.expanduser(paths)) if paths else None


def int_log(value: int, base: int):
    """ Exact integer logarithm, or None when value is not a power of base """
    if value < 1 or base < 2:
        return None
    exponent = 0
    while value % base == 0:
        value //= base
        exponent += 1
    return exponent if value == 1 else None


def db2pow(value_db):
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def pow2db(value):
    return 10.0 * np.log10(value)


def dbm2watt(value_dbm):
    return db2pow(np.asarray(value_dbm, dtype=float) - 30.0)


def complex_normal(rng: np.random.Generator, size, variance: float = 1.0):
    """ Circularly-symmetric CN(0, variance) samples """
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def trial_rng(seed: int, point: int, trial: int) -> np.random.Generator:
    """ Independent stream for one Monte Carlo trial, fixed by (seed, point, trial) """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(point, trial)))


def chunk_indices(total: int, chunk_size: int) -> List[Sequence[int]]:
    return [range(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]


def format_number(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".10g")
    return str(value)
