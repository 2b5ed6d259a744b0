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
from numpy.testing import assert_allclose, assert_array_equal

from mmwave_hybrid.channels.arrays import UlaGeometry, AngleGrid, build_dictionary
from mmwave_hybrid.cellular.coverage import CoverageSetup, coverage_curves, coverage_probability, coverage_trial
from mmwave_hybrid.codebooks.candidates import make_candidates_quantized, make_candidates_grid
from mmwave_hybrid.codebooks.hierarchical import build_codebook
from mmwave_hybrid.configs.config import CellConfig, PIPELINES
from mmwave_hybrid.utils.utils import trial_rng


@pytest.fixture(scope="module")
def setup():
    geom = UlaGeometry(8)
    candidates = make_candidates_quantized(geom, 3)
    dictionary = build_dictionary(geom, AngleGrid(16))
    codebook = build_codebook(dictionary, make_candidates_grid(dictionary, 3), num_beams=2, num_rf=3)
    cell = CellConfig({"cell_radius": 100.0, "window_radius": 300.0, "thresholds": [0.0, 1.0, 2.0, 4.0, 8.0]})
    return CoverageSetup(cell=cell, codebook_bs=codebook, codebook_ms=codebook, candidates_bs=candidates,
                         candidates_ms=candidates, num_rf_bs=2, num_rf_ms=2)


def test_coverage_curves_from_rates():
    curves = coverage_curves({"a": [0.5, 1.5, 3.0, 3.0]}, [0.0, 1.0, 3.0, 5.0])
    assert_allclose(curves["a"].coverage, [1.0, 0.75, 0.5, 0.0])
    assert curves["a"].trials == 4
    low, high = curves["a"].intervals[2]
    assert low < 0.5 < high


def test_trial_reports_every_pipeline(setup):
    rates = coverage_trial(setup, trial_rng(0, 0, 0))
    assert set(rates) == set(PIPELINES)
    assert all(np.isfinite(rate) and rate >= 0.0 for rate in rates.values())
    assert rates["no-interference"] >= rates["perfect-csi"] - 1e-9


def test_pipelines_share_the_deployment(setup):
    first = coverage_trial(setup, trial_rng(3, 0, 7))
    again = coverage_trial(setup, trial_rng(3, 0, 7))
    assert first == again
    narrowed = CoverageSetup(cell=setup.cell, codebook_bs=setup.codebook_bs, codebook_ms=setup.codebook_ms,
                             candidates_bs=setup.candidates_bs, candidates_ms=setup.candidates_ms,
                             num_rf_bs=2, num_rf_ms=2, pipelines=("perfect-csi",))
    assert coverage_trial(narrowed, trial_rng(3, 0, 7)) == {"perfect-csi": first["perfect-csi"]}


def test_coverage_probability_curves(setup):
    curves = coverage_probability(setup, setup.cell.thresholds, trials=6, seed=1)
    assert set(curves) == set(PIPELINES)
    for curve in curves.values():
        assert curve.trials == 6
        assert curve.coverage[0] == 1.0
        assert np.all(np.diff(curve.coverage) <= 0.0)
    assert np.all(curves["no-interference"].coverage >= curves["perfect-csi"].coverage)
    repeated = coverage_probability(setup, setup.cell.thresholds, trials=6, seed=1)
    assert_array_equal(repeated["estimated"].coverage, curves["estimated"].coverage)
    with pytest.raises(ValueError):
        coverage_probability(setup, setup.cell.thresholds, trials=0)


def test_coverage_ordering_of_pipelines(setup):
    curves = coverage_probability(setup, setup.cell.thresholds, trials=40, seed=5)
    ordered = [curves["perfect-csi"], curves["estimated"], curves["analog-only"]]
    for higher, lower in zip(ordered, ordered[1:]):
        for index, (_, high) in enumerate(higher.intervals):
            assert high >= lower.coverage[index]


def test_analog_only_reuses_the_estimated_training(setup):
    rates = coverage_trial(setup, trial_rng(4, 0, 0))
    narrowed = CoverageSetup(cell=setup.cell, codebook_bs=setup.codebook_bs, codebook_ms=setup.codebook_ms,
                             candidates_bs=setup.candidates_bs, candidates_ms=setup.candidates_ms,
                             num_rf_bs=2, num_rf_ms=2, pipelines=("analog-only",))
    assert coverage_trial(narrowed, trial_rng(4, 0, 0)) == {"analog-only": rates["analog-only"]}
