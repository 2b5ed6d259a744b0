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

from mmwave_hybrid.channels.arrays import UlaGeometry, AngleGrid, Dictionary


def make_dft_dictionary(size: int) -> Dictionary:
    """ Unitary DFT dictionary: N = antennas and no two cells alias, so ideal codebooks have E = 0 """
    n = np.arange(size)
    matrix = np.exp(2j * np.pi * np.outer(n, n) / size) / np.sqrt(size)
    matrix.setflags(write=False)
    return Dictionary(geometry=UlaGeometry(size), grid=AngleGrid(size), matrix=matrix)


def dictionary_channel(dictionary_bs: Dictionary, dictionary_ms: Dictionary, cells, gains, pathloss=1.0):
    """ H = sqrt(N_BS N_MS / rho) sum_l alpha_l a_MS(v_l) a_BS(u_l)^H over dictionary columns """
    a_bs = dictionary_bs.matrix[:, [u for u, _ in cells]]
    a_ms = dictionary_ms.matrix[:, [v for _, v in cells]]
    scale = np.sqrt(dictionary_bs.num_elements * dictionary_ms.num_elements / pathloss)
    return scale * (a_ms * np.asarray(gains, dtype=complex)[None, :]) @ a_bs.conj().T


@pytest.fixture
def dft_dictionary():
    return make_dft_dictionary
