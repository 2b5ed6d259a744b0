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
from typing import List

import numpy as np

from .hierarchical import HierarchicalCodebook, SubsetMask


@dataclass(frozen=True, eq=False)
class GainAnalysis:
    """Forward/backward gains of one (level, BS subset, MS subset) pair

    Directions d = (u, v) run over the cells of both subset ranges, BS major.
    """
    level: int
    subset_bs: int
    subset_ms: int
    directions: np.ndarray  # D x 2 (u, v)
    forward_gains: np.ndarray  # D
    backward_gains: np.ndarray  # D x K^2, inf where the beam pair is not a competitor
    beta: float
    nominal_gain: float


@dataclass(frozen=True)
class LevelGains:
    level: int
    nominal_gain_bs: float
    nominal_gain_ms: float
    forward_gain: float  # worst case over directions
    beta: float  # worst case over subset pairs, directions and competitors

    @property
    def nominal_gain(self) -> float:
        return self.nominal_gain_bs * self.nominal_gain_ms


def responses(codebook: HierarchicalCodebook, level: int) -> np.ndarray:
    """ A^H F for every beam of a level, N x (L_d * K^s) """
    return codebook.dictionary.matrix.conj().T @ codebook.beams(level)


def error_matrix(codebook: HierarchicalCodebook, level: int, subset: int) -> np.ndarray:
    """ E_(s,k) = A^H F_(s,k) - C_s G_(s,k) """
    mask = codebook.mask(level, subset)
    return codebook.dictionary.matrix.conj().T @ codebook.subset(level, subset) \
        - codebook.normalizer(level) * mask.matrix


def combined_mask(mask_bs: SubsetMask, mask_ms: SubsetMask) -> np.ndarray:
    """ G_(s,k_BS,k_MS) = G_BS^T kron G_MS^T, K^2 x N^2 """
    return np.kron(mask_bs.matrix.T, mask_ms.matrix.T)


def combined_error_matrix(codebook_bs: HierarchicalCodebook,
                          codebook_ms: HierarchicalCodebook,
                          level: int,
                          subset_bs: int,
                          subset_ms: int) -> np.ndarray:
    """ Three-term expansion E_BS^T x E_MS^T + E_BS^T x C G_MS^T + C G_BS^T x E_MS^T """
    error_bs = error_matrix(codebook_bs, level, subset_bs).T
    error_ms = error_matrix(codebook_ms, level, subset_ms).T
    scaled_bs = codebook_bs.normalizer(level) * codebook_bs.mask(level, subset_bs).matrix.T
    scaled_ms = codebook_ms.normalizer(level) * codebook_ms.mask(level, subset_ms).matrix.T
    return np.kron(error_bs, error_ms) + np.kron(error_bs, scaled_ms) + np.kron(scaled_bs, error_ms)


def _alias_hits(codebook: HierarchicalCodebook, mask: SubsetMask) -> np.ndarray:
    """ N x width, True where a beam's sector holds some alias of the cell """
    return (codebook.dictionary.alias_membership.astype(np.int64) @ mask.matrix) > 0


def gain_analysis(codebook_bs: HierarchicalCodebook,
                  codebook_ms: HierarchicalCodebook,
                  level: int,
                  subset_bs: int,
                  subset_ms: int) -> GainAnalysis:
    """Forward and backward gains of one subset pair from the combined error matrix

    A beam pair whose sectors hold an alias of the direction on both sides steers at the
    same array response and does not count as a competitor.
    """
    if codebook_bs.resolution != codebook_ms.resolution:
        raise ValueError("codebooks must be built over grids of the same resolution")
    mask_bs = codebook_bs.mask(level, subset_bs)
    mask_ms = codebook_ms.mask(level, subset_ms)
    resolution = codebook_bs.resolution
    num_bs, num_ms = codebook_bs.num_elements, codebook_ms.num_elements
    nominal = codebook_bs.gain(level) * codebook_ms.gain(level)

    error = combined_error_matrix(codebook_bs, codebook_ms, level, subset_bs, subset_ms)
    mask = combined_mask(mask_bs, mask_ms)
    correct = np.kron(_alias_hits(codebook_bs, mask_bs).T.astype(np.int64),
                      _alias_hits(codebook_ms, mask_ms).T.astype(np.int64)) > 0

    cells_bs = np.arange(*mask_bs.support)
    cells_ms = np.arange(*mask_ms.support)
    directions = np.array([(u, v) for u in cells_bs for v in cells_ms], dtype=np.int64)
    columns = directions[:, 0] * resolution + directions[:, 1]

    own = np.argmax(mask[:, columns], axis=0)
    forward = np.abs(np.sqrt(nominal) + np.sqrt(num_bs * num_ms) * error[own, columns]) ** 2
    backward = num_bs * num_ms * np.abs(error[:, columns].T) ** 2
    backward[correct[:, columns].T] = np.inf
    backward[np.arange(columns.size), own] = np.inf

    competitors = np.isfinite(backward)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(competitors, forward[:, None] / np.where(competitors, backward, 1.0), np.inf)
    ratios = np.nan_to_num(ratios, nan=0.0, posinf=np.inf)
    beta = float(np.min(ratios)) if ratios.size else np.inf
    return GainAnalysis(level=level, subset_bs=subset_bs, subset_ms=subset_ms, directions=directions,
                        forward_gains=forward, backward_gains=np.where(competitors, backward, np.inf),
                        beta=beta, nominal_gain=nominal)


def _side_ratios(codebook: HierarchicalCodebook, level: int):
    """Per-side factors of forward gain and forward/backward ratios at one level

    A cell's forward gain is the best gain over the beams of its subset whose sector holds an
    alias of it. Cells whose aliases fall in two or more sectors of the same subset can be
    told apart by no beam and are left out of the forward minimum.

    Returns:
        tuple: (worst forward gain, min ratio over beams whose sector holds no alias of the cell)
    """
    gains = codebook.num_elements * np.abs(responses(codebook, level)) ** 2
    membership = codebook.dictionary.alias_membership.astype(np.int64)

    forward_clear, forward_any, min_wrong = np.inf, np.inf, np.inf
    for subset in range(codebook.subset_count(level)):
        mask = codebook.mask(level, subset)
        cells = np.arange(*mask.support)
        subset_gains = gains[np.ix_(cells, codebook.subset_columns(level, subset))]
        hits = (membership[cells] @ mask.matrix) > 0
        best = np.max(np.where(hits, subset_gains, -np.inf), axis=1)
        forward_any = min(forward_any, float(np.min(best)))
        clear = hits.sum(axis=1) == 1
        if np.any(clear):
            forward_clear = min(forward_clear, float(np.min(best[clear])))
        if np.any(~hits):
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.nan_to_num(best[:, None] / subset_gains, nan=0.0, posinf=np.inf)
            min_wrong = min(min_wrong, float(np.min(ratio[~hits])))
    forward = forward_clear if np.isfinite(forward_clear) else forward_any
    return forward, min_wrong


def level_gain_summary(codebook_bs: HierarchicalCodebook, codebook_ms: HierarchicalCodebook) -> List[LevelGains]:
    """Worst-case forward gain and beta per level, over every subset pair

    Forward and backward gains of a direction factor into BS and MS response magnitudes,
    so the minimum over pairs splits into per-side minima. A competing pair misses on at
    least one side, where the ratio is at least the side's wrong-beam minimum, and the other
    side contributes at least min(1, its wrong-beam minimum).
    """
    if codebook_bs.num_levels != codebook_ms.num_levels:
        raise ValueError("codebooks must have the same number of levels")
    summary = []
    for level in range(1, codebook_bs.num_levels + 1):
        forward_bs, wrong_bs = _side_ratios(codebook_bs, level)
        forward_ms, wrong_ms = _side_ratios(codebook_ms, level)
        with np.errstate(invalid="ignore"):
            bounds = np.array([wrong_bs * min(1.0, wrong_ms), min(1.0, wrong_bs) * wrong_ms])
        beta = np.min(np.nan_to_num(bounds, nan=0.0, posinf=np.inf))
        summary.append(LevelGains(level=level,
                                  nominal_gain_bs=codebook_bs.gain(level),
                                  nominal_gain_ms=codebook_ms.gain(level),
                                  forward_gain=float(forward_bs * forward_ms),
                                  beta=float(beta)))
    return summary


def beam_pattern(codebook: HierarchicalCodebook, level: int, subset: int) -> np.ndarray:
    """ Beamforming gain N |a(phi_u)^H f|^2 of every beam of a subset over the grid, N x width """
    beams = codebook.subset(level, subset)
    return codebook.num_elements * np.abs(codebook.dictionary.matrix.conj().T @ beams) ** 2
