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
from typing import Optional

import numpy as np

from ..channels.arrays import Dictionary, UlaGeometry, steering_matrix

CANDIDATE_KINDS = ["beamsteering", "quantized", "grid", "custom"]


@dataclass(frozen=True, eq=False)
class CandidateSet:
    """ Constant-modulus analog beams A_can available to the RF precoder """
    matrix: np.ndarray
    kind: str = "custom"
    geometry: Optional[UlaGeometry] = None
    num_bits: Optional[int] = None

    def __post_init__(self):
        if self.kind not in CANDIDATE_KINDS:
            raise KeyError(f"No candidate kind named {self.kind}, available: {CANDIDATE_KINDS}")
        if self.matrix.ndim != 2 or self.matrix.shape[1] < 1:
            raise ValueError("candidate matrix must be 2-D with at least one column")
        modulus = 1.0 / np.sqrt(self.matrix.shape[0])
        if not np.allclose(np.abs(self.matrix), modulus, rtol=0.0, atol=1e-12):
            raise ValueError("candidate entries must all have magnitude 1/sqrt(num_elements)")
        self.matrix.setflags(write=False)

    @property
    def num_elements(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_candidates(self) -> int:
        return self.matrix.shape[1]

    def descriptor(self) -> dict:
        return {
            "kind": self.kind,
            "num_candidates": self.num_candidates,
            "num_elements": self.num_elements,
            "num_bits": self.num_bits,
            "spacing": None if self.geometry is None else self.geometry.spacing,
        }


def candidate_angles(num_candidates: int) -> np.ndarray:
    # pi / N_can spaced, centred on broadside so every column has a distinct response
    return (np.arange(num_candidates) - num_candidates // 2) * np.pi / num_candidates


def quantize_phases(steering: np.ndarray, num_bits: int) -> np.ndarray:
    """ Round every phase to the num_bits lattice, dropping repeated columns (first occurrence kept) """
    if num_bits < 1:
        raise ValueError(f"num_bits must be at least 1, got {num_bits}")
    levels = 2 ** num_bits
    codes = np.mod(np.rint(np.angle(steering) * levels / (2.0 * np.pi)), levels).astype(np.int64)
    _, first = np.unique(codes, axis=1, return_index=True)
    codes = codes[:, np.sort(first)]
    return np.exp(2j * np.pi * codes / levels) / np.sqrt(steering.shape[0])


def make_candidates_beamsteering(geom: UlaGeometry, num_candidates: int) -> CandidateSet:
    """Unquantized beamsteering candidates

    Column t steers at (t - floor(N_can / 2)) * pi / N_can for t = 0, ..., N_can - 1, which
    covers [-pi/2, pi/2) and so every sin(phi) the array can resolve.
    """
    if num_candidates < 1:
        raise ValueError(f"num_candidates must be at least 1, got {num_candidates}")
    matrix = steering_matrix(geom, candidate_angles(num_candidates))
    return CandidateSet(matrix=matrix, kind="beamsteering", geometry=geom)


def make_candidates_quantized(geom: UlaGeometry, num_bits: int, num_candidates: int = None) -> CandidateSet:
    """Beamsteering candidates with every phase rounded to the num_bits lattice

    Args:
        geom (UlaGeometry): array description
        num_bits (int): phase-shifter resolution N_Q
        num_candidates (int): steering directions before quantization, defaults to 2 * num_elements

    Returns:
        CandidateSet: quantized candidates, duplicate columns removed (first occurrence kept)
    """
    if num_candidates is None: num_candidates = 2 * geom.num_elements
    matrix = quantize_phases(steering_matrix(geom, candidate_angles(num_candidates)), num_bits)
    return CandidateSet(matrix=matrix, kind="quantized", geometry=geom, num_bits=num_bits)


def make_candidates_grid(dictionary: Dictionary, num_bits: int = None) -> CandidateSet:
    """Candidates steered at the grid directions of a dictionary

    One column per alias class, so every distinct response of the dictionary has an analog beam.
    Training codebooks built from these can place their sector edges on grid cells.

    Args:
        dictionary (Dictionary): grid dictionary of one side of the link
        num_bits (int): phase-shifter resolution N_Q, None keeps the exact phases

    Returns:
        CandidateSet: kind "grid"
    """
    _, first = np.unique(dictionary.alias_labels, return_index=True)
    steering = np.array(dictionary.matrix[:, np.sort(first)])
    matrix = steering if num_bits is None else quantize_phases(steering, num_bits)
    return CandidateSet(matrix=matrix, kind="grid", geometry=dictionary.geometry, num_bits=num_bits)
