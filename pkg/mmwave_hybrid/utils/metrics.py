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

from typing import Tuple, Sequence

import numpy as np
from scipy import stats


def binomial_interval(successes: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Wilson score interval of a binomial proportion

    Args:
        successes (int): number of counted events
        trials (int): number of trials
        confidence (float): confidence level

    Returns:
        tuple: (low, high) bounds in [0, 1]
    """
    if trials <= 0: return 0.0, 1.0
    interval = stats.binomtest(int(successes), int(trials)).proportion_ci(
        confidence_level=confidence, method="wilson")
    return float(interval.low), float(interval.high)


def binomial_sigma(probability: float, trials: int) -> float:
    if trials <= 0: return 1.0
    return float(np.sqrt(max(probability * (1.0 - probability), 0.0) / trials))


class ErrorRate:
    """ Metric for estimation failures (wrong AoA/AoD cell) """

    def __init__(self, name="error_rate"):
        self.name = name
        self.reset_states()

    def reset_states(self):
        self.numerator = 0
        self.denominator = 0

    def update_state(self, errors):
        errors = np.atleast_1d(np.asarray(errors, dtype=bool))
        self.numerator += int(errors.sum())
        self.denominator += int(errors.size)

    def result(self) -> float:
        if self.denominator == 0: return 0.0
        return self.numerator / self.denominator

    def interval(self, confidence: float = 0.95) -> Tuple[float, float]:
        return binomial_interval(self.numerator, self.denominator, confidence)

    def sigma(self) -> float:
        return binomial_sigma(self.result(), self.denominator)


class MeanMetric:
    """ Running mean with a normal-approximation interval (rates in bps/Hz) """

    def __init__(self, name="mean"):
        self.name = name
        self.reset_states()

    def reset_states(self):
        self.values = []

    def update_state(self, values):
        self.values.extend(np.atleast_1d(np.asarray(values, dtype=float)).tolist())

    def result(self) -> float:
        if not self.values: return 0.0
        return float(np.mean(self.values))

    def interval(self, confidence: float = 0.95) -> Tuple[float, float]:
        count = len(self.values)
        mean = self.result()
        if count < 2: return mean, mean
        half = stats.norm.ppf(0.5 + confidence / 2.0) * np.std(self.values, ddof=1) / np.sqrt(count)
        return float(mean - half), float(mean + half)


class CoverageProbability:
    """ Empirical survival function P(R >= eta) of per-trial rates """

    def __init__(self, thresholds: Sequence[float], name="coverage"):
        self.name = name
        self.thresholds = np.asarray(thresholds, dtype=float)
        self.reset_states()

    def reset_states(self):
        self.covered = np.zeros(self.thresholds.size, dtype=np.int64)
        self.trials = 0

    def update_state(self, rates):
        rates = np.atleast_1d(np.asarray(rates, dtype=float))
        self.covered += (rates[:, None] >= self.thresholds[None, :]).sum(axis=0)
        self.trials += rates.size

    def result(self) -> np.ndarray:
        if self.trials == 0: return np.zeros(self.thresholds.size)
        return self.covered / self.trials

    def intervals(self, confidence: float = 0.95):
        return [binomial_interval(count, self.trials, confidence) for count in self.covered]
