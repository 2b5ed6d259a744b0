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
from typing import List, Optional, Tuple

import numpy as np

from .base_estimator import (BaseEstimator, SinglePathEstimate, MultiPathEstimate, StepCount, same_cell,
                             least_squares_gains)
from .measurement import MeasurementContext, measure
from .power import StagePowers
from .trace import EstimationTrace, TraceRecord
from ..codebooks.hierarchical import HierarchicalCodebook
from ..utils.errors import NumericalDegeneracyError

logger = logging.getLogger(__name__)


def feedback_bits(num_beams: int) -> int:
    """ Bits the MS feeds back to name one of num_beams precoders """
    return int(np.ceil(np.log2(num_beams))) if num_beams > 1 else 0


class AdaptiveEstimator(BaseEstimator):
    """Hierarchical adaptive search over a pair of training codebooks

    Single-path codebooks (L_d = 1) give the bisection-style search with K x K measurements per
    stage. Multi-path codebooks find L_d paths one after another; each stage measures L_d subsets
    per side and projects out the paths already found before picking the strongest entry.
    """

    def __init__(self,
                 codebook_bs: HierarchicalCodebook,
                 codebook_ms: HierarchicalCodebook,
                 powers: StagePowers,
                 trace: Optional[EstimationTrace] = None):
        for attribute in ("resolution", "num_beams", "num_paths", "num_levels"):
            if getattr(codebook_bs, attribute) != getattr(codebook_ms, attribute):
                raise ValueError(f"BS and MS codebooks differ in {attribute}")
        if powers.num_stages != codebook_bs.num_levels:
            raise ValueError(f"{powers.num_stages} stage powers for {codebook_bs.num_levels} codebook levels")
        super(AdaptiveEstimator, self).__init__(codebook_bs.dictionary, codebook_ms.dictionary,
                                                num_paths=codebook_bs.num_paths)
        self.codebook_bs = codebook_bs
        self.codebook_ms = codebook_ms
        self.powers = powers
        self.trace = trace

    @property
    def num_levels(self) -> int:
        return self.codebook_bs.num_levels

    @property
    def final_gain(self) -> float:
        """ Nominal two-sided gain G_(S) of the last stage """
        return self.codebook_bs.gain(self.num_levels) * self.codebook_ms.gain(self.num_levels)

    def _stage_subsets(self, level: int, current: int, trajectories: List[List[int]], ranking: np.ndarray):
        if level == 1: return [0]
        subsets = [current]
        for trajectory in trajectories:
            if trajectory[level - 1] not in subsets: subsets.append(trajectory[level - 1])
        for column in ranking:
            if len(subsets) >= self.num_paths: break
            if int(column) not in subsets: subsets.append(int(column))
        return subsets[:self.num_paths]

    def _measure_block(self, ctx: MeasurementContext, precoders: np.ndarray, combiners: np.ndarray, power: float):
        block = np.empty((combiners.shape[1], precoders.shape[1]), dtype=complex)
        for b in range(precoders.shape[1]):
            block[:, b] = measure(ctx, precoders[:, b], combiners, power)
        return block.T.reshape(-1)  # BS-major, like the signatures

    def _select_final(self, order: np.ndarray, columns_bs: np.ndarray, columns_ms: np.ndarray, found: list):
        num_bs = columns_bs.size
        for rank, flat in enumerate(order):
            cell = (int(columns_bs[flat % num_bs]), int(columns_ms[flat // num_bs]))
            if not any(same_cell(self.dictionary_bs, self.dictionary_ms, cell, other) for other in found):
                return rank, flat, cell
        raise NumericalDegeneracyError("every measured cell collides with a path already found")

    def estimate(self, ctx: MeasurementContext) -> Tuple[MultiPathEstimate, StepCount]:
        start_slots = ctx.slots
        bits = 0
        collisions = 0
        found: List[Tuple[int, int]] = []
        trajectories_bs: List[List[int]] = []
        trajectories_ms: List[List[int]] = []
        final_blocks = []

        for path in range(self.num_paths):
            current_bs = current_ms = 0
            ranking_bs = ranking_ms = np.zeros(0, dtype=np.int64)
            trajectory_bs, trajectory_ms = [], []
            for level in range(1, self.num_levels + 1):
                subsets_bs = self._stage_subsets(level, current_bs, trajectories_bs, ranking_bs)
                subsets_ms = self._stage_subsets(level, current_ms, trajectories_ms, ranking_ms)
                trajectory_bs.append(current_bs)
                trajectory_ms.append(current_ms)
                columns_bs = np.concatenate([self.codebook_bs.subset_columns(level, k) for k in subsets_bs])
                columns_ms = np.concatenate([self.codebook_ms.subset_columns(level, k) for k in subsets_ms])
                precoders = self.codebook_bs.beams(level)[:, columns_bs]
                combiners = self.codebook_ms.beams(level)[:, columns_ms]

                measurements = self._measure_block(ctx, precoders, combiners, self.powers[level])
                residual = measurements
                if found:
                    signatures = np.column_stack([self.signature(precoders, combiners, cell) for cell in found])
                    residual = measurements - signatures @ least_squares_gains(signatures, measurements)
                power = np.abs(residual.reshape(columns_bs.size, columns_ms.size).T) ** 2
                # stable sort of the negated powers breaks ties by lowest (m_MS, m_BS)
                order = np.argsort(-power.ravel(), kind="stable")
                stage_bits = feedback_bits(columns_bs.size)
                bits += stage_bits

                if level < self.num_levels:
                    flat = order[0]
                    current_bs = int(columns_bs[flat % columns_bs.size])
                    current_ms = int(columns_ms[flat // columns_bs.size])
                    ranking_bs = columns_bs[np.argsort(-power.sum(axis=0), kind="stable")]
                    ranking_ms = columns_ms[np.argsort(-power.sum(axis=1), kind="stable")]
                else:
                    rank, flat, cell = self._select_final(order, columns_bs, columns_ms, found)
                    if rank > 0:
                        collisions += 1
                        logger.debug("path %d collided with a found path, took the cell ranked %d", path, rank)
                    found.append(cell)
                    final_blocks.append((precoders, combiners, measurements))

                if self.trace is not None:
                    self.trace.append(TraceRecord(path=path, stage=level, subsets_bs=tuple(subsets_bs),
                                                  subsets_ms=tuple(subsets_ms),
                                                  selected=(int(flat // columns_bs.size), int(flat % columns_bs.size)),
                                                  feedback_bits=stage_bits, powers=power))
            trajectories_bs.append(trajectory_bs)
            trajectories_ms.append(trajectory_ms)

        gains = self._path_gains(ctx, found, final_blocks)
        estimate = MultiPathEstimate(
            paths=tuple(SinglePathEstimate(aod_index=u, aoa_index=v, gain=complex(g)) for (u, v), g in zip(found, gains)),
            resolution=self.resolution,
            trajectory_bs=tuple(tuple(t) for t in trajectories_bs),
            trajectory_ms=tuple(tuple(t) for t in trajectories_ms),
            collisions=collisions)
        return estimate, StepCount(measurement_slots=ctx.slots - start_slots, feedback_bits=bits)

    def _path_gains(self, ctx: MeasurementContext, cells, final_blocks) -> np.ndarray:
        """Joint LLSE of every path gain from the last-stage measurements

        Signatures are normalized by the nominal C_(S) of both sides, so the coefficient of a
        path is sqrt(P_(S) G_(S) / rho) times its gain.
        """
        level = self.num_levels
        scale = self.codebook_bs.normalizer(level) * self.codebook_ms.normalizer(level)
        signatures = np.vstack([
            np.column_stack([self.signature(precoders, combiners, cell) for cell in cells])
            for precoders, combiners, _ in final_blocks]) / scale
        measurements = np.concatenate([block[2] for block in final_blocks])
        coefficients = least_squares_gains(signatures, measurements)
        return np.sqrt(ctx.pathloss / (self.powers[level] * self.final_gain)) * coefficients


def estimate_single_path(ctx: MeasurementContext,
                         codebook_bs: HierarchicalCodebook,
                         codebook_ms: HierarchicalCodebook,
                         powers: StagePowers,
                         trace: Optional[EstimationTrace] = None) -> Tuple[SinglePathEstimate, StepCount]:
    if codebook_bs.multi_path or codebook_ms.multi_path:
        raise ValueError("single-path estimation needs codebooks built with num_paths=1")
    estimate, steps = AdaptiveEstimator(codebook_bs, codebook_ms, powers, trace=trace).estimate(ctx)
    return estimate.paths[0], steps


def estimate_multi_path(ctx: MeasurementContext,
                        codebook_bs: HierarchicalCodebook,
                        codebook_ms: HierarchicalCodebook,
                        powers: StagePowers,
                        trace: Optional[EstimationTrace] = None) -> Tuple[MultiPathEstimate, StepCount]:
    return AdaptiveEstimator(codebook_bs, codebook_ms, powers, trace=trace).estimate(ctx)
