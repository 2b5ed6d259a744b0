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
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg

from .candidates import CandidateSet
from .omp import orthogonal_matching_pursuit
from ..channels.arrays import Dictionary
from ..utils.errors import DegeneracyWarning, NumericalDegeneracyError
from ..utils.utils import int_log

logger = logging.getLogger(__name__)

CONDITION_THRESHOLD = 1e12
DIAGONAL_LOADING = 1e-10
PATTERN_LOADING = 0.03

def codebook_levels(resolution: int, num_beams: int, num_paths: int = 1) -> int:
    """ Number of levels S with resolution = num_paths * num_beams ** S """
    if num_beams < 2:
        raise ValueError(f"num_beams K must be at least 2, got {num_beams}")
    if num_paths < 1:
        raise ValueError(f"num_paths L_d must be at least 1, got {num_paths}")
    levels = int_log(resolution // num_paths, num_beams) if resolution % num_paths == 0 else None
    if not levels:
        raise ValueError(
            f"resolution N={resolution} must be divisible by L_d={num_paths} with N/L_d a power of K={num_beams} "
            f"(N = L_d * K^S for an integer S >= 1)")
    return levels

def subset_count(level: int, num_beams: int, num_paths: int = 1) -> int:
    if level == 1: return 1
    return num_paths * num_beams ** (level - 1)

def subset_width(level: int, num_beams: int, num_paths: int = 1) -> int:
    return num_beams * num_paths if level == 1 else num_beams

def subset_columns(level: int, subset: int, num_beams: int, num_paths: int = 1) -> np.ndarray:
    """ Level-wide column indices of one subset; column j of level s refines into subset j of level s + 1 """
    if level == 1: return np.arange(num_beams * num_paths)
    return np.arange(subset * num_beams, (subset + 1) * num_beams)

@dataclass(frozen=True, eq=False)
class SubsetMask:
    level: int
    subset: int
    matrix: np.ndarray  # N x width, zero/one
    ranges: Tuple[Tuple[int, int], ...]  # [start, stop) per column

    @property
    def support(self) -> Tuple[int, int]:
        return self.ranges[0][0], self.ranges[-1][1]

def subset_mask(resolution: int, num_beams: int, num_paths: int, level: int, subset: int) -> SubsetMask:
    """Design mask G_(s,k) of one codebook subset

    Args:
        resolution (int): grid size N
        num_beams (int): K
        num_paths (int): L_d, 1 for the single-path codebook
        level (int): s, starting at 1
        subset (int): k, starting at 0

    Returns:
        SubsetMask: columns with contiguous, disjoint supports tiling the subset range
    """
    if level < 1:
        raise ValueError(f"level starts at 1, got {level}")
    columns_in_level = num_paths * num_beams ** level
    if resolution % columns_in_level != 0:
        raise ValueError(f"resolution N={resolution} is not divisible by L_d * K^s = {columns_in_level}")
    if not 0 <= subset < subset_count(level, num_beams, num_paths):
        raise ValueError(f"subset {subset} out of range for level {level}")
    width = resolution // columns_in_level
    columns = subset_columns(level, subset, num_beams, num_paths)
    matrix = np.zeros((resolution, columns.size), dtype=np.int8)
    ranges = []
    for m, column in enumerate(columns):
        start, stop = int(column * width), int((column + 1) * width)
        matrix[start:stop, m] = 1
        ranges.append((start, stop))
    return SubsetMask(level=level, subset=subset, matrix=matrix, ranges=tuple(ranges))

def least_squares_operator(dictionary: Dictionary,
                           condition_threshold: float = CONDITION_THRESHOLD,
                           loading: float = DIAGONAL_LOADING) -> np.ndarray:
    """ (A A^H)^-1 A, diagonally loaded when A A^H is ill-conditioned """
    A = dictionary.matrix
    gram = A @ A.conj().T
    condition = np.linalg.cond(gram)
    if not np.isfinite(condition) or condition > condition_threshold:
        warnings.warn(f"Gram matrix condition number {condition:.3g} above {condition_threshold:.0e}, "
                      "applying diagonal loading", DegeneracyWarning)
        gram = gram + loading * np.real(np.trace(gram)) / gram.shape[0] * np.eye(gram.shape[0])
    return linalg.solve(gram, A, assume_a="her")

def ideal_precoder(dictionary: Dictionary, mask: SubsetMask, **kwargs) -> np.ndarray:
    """ Least-squares solution F of A^H F = G, unnormalized """
    return least_squares_operator(dictionary, **kwargs) @ mask.matrix

def subset_weights(dictionary: Dictionary, mask: SubsetMask) -> np.ndarray:
    """Pattern weights of every column of one subset

    Cells of the subset range weigh 1 unless one of their aliases lies in another column of the
    same range, those weigh 0 like every cell outside the range. A column left without any
    weighted cell weighs its own cells instead.

    Returns:
        np.ndarray: N x width weights, column m for target column m of the mask
    """
    start, stop = mask.support
    owner = np.argmax(mask.matrix[start:stop], axis=1)
    aliased = dictionary.alias_membership[start:stop, start:stop]
    conflicting = np.any(aliased & (owner[:, None] != owner[None, :]), axis=1)
    base = np.zeros(dictionary.resolution)
    base[start:stop] = np.where(conflicting, 0.0, 1.0)
    weights = np.repeat(base[:, None], mask.matrix.shape[1], axis=1)
    empty = ~np.any(weights * mask.matrix > 0, axis=0)
    weights[:, empty] = np.maximum(weights[:, empty], mask.matrix[:, empty])
    return weights

def pattern_target(dictionary: Dictionary, weights: np.ndarray, selection: np.ndarray,
                   loading: float = PATTERN_LOADING) -> np.ndarray:
    """Weighted, loaded least-squares beam for one target pattern

    Solves (A W A^H + loading I) f = A W g, then rescales f so that A^H f fits g best in the
    weighted sense. The loading keeps the vector from going super-directive on dense grids.
    """
    A = dictionary.matrix
    gram = (A * weights[None, :]) @ A.conj().T + loading * np.eye(A.shape[0])
    target = linalg.solve(gram, A @ (weights * selection), assume_a="her")
    pattern = A.conj().T @ target
    energy = np.real(np.vdot(pattern, weights * pattern))
    if not energy > 0.0:
        raise NumericalDegeneracyError("target pattern has no weighted support")
    return target * (np.vdot(pattern, weights * selection) / energy)

def pattern_whitener(dictionary: Dictionary, weights: np.ndarray, loading: float = PATTERN_LOADING) -> np.ndarray:
    """ B with ||B f||^2 = sum_u w_u |a_u^H f|^2 + loading ||f||^2 """
    A = dictionary.matrix
    return np.vstack([np.sqrt(weights)[:, None] * A.conj().T, np.sqrt(loading) * np.eye(A.shape[0])])

@dataclass(frozen=True, eq=False)
class HybridVector:
    rf_columns: Tuple[int, ...]  # empty for unconstrained vectors
    baseband: np.ndarray
    normalizer: float  # C_s
    vector: np.ndarray  # F_RF f_BB, unit norm

def omp_hybrid_design(target: np.ndarray, candidates: CandidateSet, num_rf: int,
                      whitener: np.ndarray = None) -> HybridVector:
    """Approximate one target vector by num_rf analog candidates and a digital combination

    With a whitener B the fit minimizes ||B (F_RF f_BB - target)|| instead of the plain
    Euclidean error. The normalizer is C_s = 1 / ||F_RF f_BB||, so the returned vector has
    unit norm and its pattern equals C_s times the fitted pattern.
    """
    if whitener is None:
        result = orthogonal_matching_pursuit(target, candidates.matrix, num_rf)
    else:
        result = orthogonal_matching_pursuit(whitener @ target, whitener @ candidates.matrix, num_rf)
    if not result.columns:
        raise NumericalDegeneracyError("cannot design a hybrid vector for a zero target")
    approximation = candidates.matrix[:, result.columns] @ result.coefficients[:, 0]
    energy = linalg.norm(approximation)
    if energy == 0.0:
        raise NumericalDegeneracyError("hybrid approximation has zero norm")
    normalizer = 1.0 / energy
    return HybridVector(rf_columns=tuple(result.columns),
                        baseband=result.coefficients[:, 0] * normalizer,
                        normalizer=float(normalizer),
                        vector=approximation * normalizer)

def unconstrained_design(target: np.ndarray) -> HybridVector:
    energy = linalg.norm(target)
    if energy == 0.0:
        raise NumericalDegeneracyError("cannot normalize a zero target")
    vector = target / energy
    return HybridVector(rf_columns=(), baseband=vector, normalizer=float(1.0 / energy), vector=vector)

@dataclass(frozen=True, eq=False)
class CodebookLevel:
    level: int
    beams: np.ndarray  # num_elements x (L_d * K^s), level-wide column order
    vectors: Tuple[HybridVector, ...]

    @property
    def normalizers(self) -> np.ndarray:
        return np.array([vector.normalizer for vector in self.vectors])

class HierarchicalCodebook:
    """ Multi-level training codebook, one per side of the link """

    def __init__(self,
                 dictionary: Dictionary,
                 candidates: Optional[CandidateSet],
                 num_beams: int,
                 num_paths: int,
                 num_rf: int,
                 levels: List[CodebookLevel]):
        self.dictionary = dictionary
        self.candidates = candidates
        self.num_beams = num_beams
        self.num_paths = num_paths
        self.num_rf = num_rf
        self.levels = levels
        if len(levels) != codebook_levels(self.resolution, num_beams, num_paths):
            raise ValueError("number of built levels does not match N = L_d * K^S")

    @property
    def resolution(self) -> int:
        return self.dictionary.resolution

    @property
    def num_elements(self) -> int:
        return self.dictionary.num_elements

    @property
    def num_levels(self) -> int:
        return len(self.levels)

    @property
    def multi_path(self) -> bool:
        return self.num_paths > 1

    @property
    def unconstrained(self) -> bool:
        return self.candidates is None

    def subset_count(self, level: int) -> int:
        return subset_count(level, self.num_beams, self.num_paths)

    def subset_columns(self, level: int, subset: int) -> np.ndarray:
        return subset_columns(level, subset, self.num_beams, self.num_paths)

    def subset(self, level: int, subset: int) -> np.ndarray:
        return self.beams(level)[:, self.subset_columns(level, subset)]

    def beams(self, level: int) -> np.ndarray:
        return self.levels[level - 1].beams

    def mask(self, level: int, subset: int) -> SubsetMask:
        return subset_mask(self.resolution, self.num_beams, self.num_paths, level, subset)

    def column_width(self, level: int) -> int:
        return self.resolution // (self.num_paths * self.num_beams ** level)

    def column_of_cell(self, level: int, cell: int) -> int:
        return cell // self.column_width(level)

    def normalizer(self, level: int) -> float:
        """ Nominal C_s of a level, the smallest over its vectors """
        return float(np.min(self.levels[level - 1].normalizers))

    def gain(self, level: int) -> float:
        """ Nominal one-sided beamforming gain N * C_s^2 """
        return self.num_elements * self.normalizer(level) ** 2

def build_codebook(dictionary: Dictionary,
                   candidates: Optional[CandidateSet],
                   num_beams: int,
                   num_paths: int = 1,
                   num_rf: int = 1,
                   loading: float = PATTERN_LOADING) -> HierarchicalCodebook:
    """Build every level of the hierarchical training codebook

    Every vector is designed on its own with the full RF budget. Its target is the weighted,
    loaded least-squares beam of its mask column (see subset_weights and pattern_target), and
    OMP fits the candidates to it in the same weighted pattern metric. Without candidates the
    normalized targets are kept as they are (unconstrained codebook).

    Args:
        dictionary (Dictionary): grid dictionary of this side of the link
        candidates (CandidateSet): analog beams available to OMP, or None
        num_beams (int): K
        num_paths (int): L_d, values above 1 build the multi-path codebook
        num_rf (int): RF chains used by every vector
        loading (float): white-noise loading of the target design, must be positive

    Returns:
        HierarchicalCodebook
    """
    num_levels = codebook_levels(dictionary.resolution, num_beams, num_paths)
    if candidates is not None and candidates.num_elements != dictionary.num_elements:
        raise ValueError("candidates and dictionary describe different arrays")
    if not loading > 0:
        raise ValueError(f"loading must be positive, got {loading}")

    levels = []
    for level in range(1, num_levels + 1):
        vectors = []
        for subset in range(subset_count(level, num_beams, num_paths)):
            mask = subset_mask(dictionary.resolution, num_beams, num_paths, level, subset)
            weights = subset_weights(dictionary, mask)
            for column in range(mask.matrix.shape[1]):
                target = pattern_target(dictionary, weights[:, column], mask.matrix[:, column], loading)
                if candidates is None:
                    vectors.append(unconstrained_design(target))
                else:
                    whitener = pattern_whitener(dictionary, weights[:, column], loading)
                    vectors.append(omp_hybrid_design(target, candidates, num_rf, whitener))
        beams = np.column_stack([vector.vector for vector in vectors])
        beams.setflags(write=False)
        levels.append(CodebookLevel(level=level, beams=beams, vectors=tuple(vectors)))
        logger.debug("level %d: %d vectors, C_s in [%.4g, %.4g]", level, len(vectors),
                     min(v.normalizer for v in vectors), max(v.normalizer for v in vectors))

    return HierarchicalCodebook(dictionary=dictionary, candidates=candidates, num_beams=num_beams,
                                num_paths=num_paths, num_rf=num_rf, levels=levels)
