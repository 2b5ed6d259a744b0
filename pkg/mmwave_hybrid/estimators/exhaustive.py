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

from typing import Tuple

import numpy as np

from .base_estimator import BaseEstimator, SinglePathEstimate, MultiPathEstimate, StepCount, same_cell, \
    least_squares_gains
from .measurement import MeasurementContext, measure
from ..channels.arrays import Dictionary


class ExhaustiveEstimator(BaseEstimator):
    """ Measures every pair of dictionary columns at a fixed power and keeps the strongest cells """

    def __init__(self, dictionary_bs: Dictionary, dictionary_ms: Dictionary, power: float, num_paths: int = 1):
        super(ExhaustiveEstimator, self).__init__(dictionary_bs, dictionary_ms, num_paths=num_paths)
        if dictionary_bs.resolution != dictionary_ms.resolution:
            raise ValueError("BS and MS dictionaries must share one grid resolution")
        if not power > 0:
            raise ValueError(f"power must be positive, got {power}")
        self.power = power

    def estimate(self, ctx: MeasurementContext) -> Tuple[MultiPathEstimate, StepCount]:
        start_slots = ctx.slots
        precoders = self.dictionary_bs.matrix
        combiners = self.dictionary_ms.matrix
        block = np.empty((combiners.shape[1], precoders.shape[1]), dtype=complex)
        for u in range(precoders.shape[1]):
            block[:, u] = measure(ctx, precoders[:, u], combiners, self.power)
        measurements = block.T.reshape(-1)

        order = np.argsort(-np.abs(block).ravel() ** 2, kind="stable")
        found = []
        for flat in order:
            cell = (int(flat % precoders.shape[1]), int(flat // precoders.shape[1]))
            if any(same_cell(self.dictionary_bs, self.dictionary_ms, cell, other) for other in found): continue
            found.append(cell)
            if len(found) == self.num_paths: break

        signatures = np.column_stack([self.signature(precoders, combiners, cell) for cell in found])
        gain = self.dictionary_bs.num_elements * self.dictionary_ms.num_elements
        gains = np.sqrt(ctx.pathloss / (self.power * gain)) * least_squares_gains(signatures, measurements)
        estimate = MultiPathEstimate(
            paths=tuple(SinglePathEstimate(aod_index=u, aoa_index=v, gain=complex(g)) for (u, v), g in zip(found, gains)),
            resolution=self.resolution)
        # the full search needs no feedback beyond the final indices
        return estimate, StepCount(measurement_slots=ctx.slots - start_slots, feedback_bits=0)


def exhaustive_estimate(ctx: MeasurementContext,
                        dictionary_bs: Dictionary,
                        dictionary_ms: Dictionary,
                        power: float,
                        num_paths: int = 1) -> Tuple[MultiPathEstimate, StepCount]:
    return ExhaustiveEstimator(dictionary_bs, dictionary_ms, power, num_paths=num_paths).estimate(ctx)
