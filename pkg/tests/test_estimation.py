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
from numpy.testing import assert_allclose

from conftest import make_dft_dictionary, dictionary_channel
from mmwave_hybrid.channels.arrays import UlaGeometry, AngleGrid, build_dictionary
from mmwave_hybrid.codebooks.analysis import level_gain_summary
from mmwave_hybrid.codebooks.candidates import make_candidates_grid
from mmwave_hybrid.codebooks.hierarchical import build_codebook
from mmwave_hybrid.estimators.adaptive import AdaptiveEstimator, estimate_single_path, estimate_multi_path
from mmwave_hybrid.estimators.base_estimator import least_squares_gains, same_cell, MultiPathEstimate, \
    SinglePathEstimate
from mmwave_hybrid.estimators.exhaustive import exhaustive_estimate
from mmwave_hybrid.estimators.measurement import MeasurementContext
from mmwave_hybrid.estimators.power import StagePowers, allocate_power_corollary1, theorem1_bound
from mmwave_hybrid.estimators.trace import EstimationTrace
from mmwave_hybrid.estimators.trials import SinglePathSetup, single_path_error_trial
from mmwave_hybrid.utils.utils import complex_normal, trial_rng

QUIET = 1e-20


def ideal_codebooks(size, num_beams=2, num_paths=1):
    dictionary = make_dft_dictionary(size)
    codebook = build_codebook(dictionary, None, num_beams=num_beams, num_paths=num_paths)
    return dictionary, codebook


def unit_powers(codebook):
    beams = codebook.num_beams * codebook.num_paths
    return StagePowers(powers=(1.0,) * codebook.num_levels, measurements_per_stage=beams ** 2)


def test_noiseless_single_path_recovers_every_cell():
    dictionary, codebook = ideal_codebooks(16)
    powers = unit_powers(codebook)
    rng = np.random.default_rng(0)
    for u in range(16):
        for v in range(16):
            gain = complex_normal(rng, 1)[0]
            channel = dictionary_channel(dictionary, dictionary, [(u, v)], [gain])
            ctx = MeasurementContext(channel=channel, noise_power=QUIET, rng=rng)
            estimate, steps = estimate_single_path(ctx, codebook, codebook, powers)
            assert estimate.cell == (u, v)
            assert_allclose(estimate.gain, gain, rtol=1e-6)
            assert steps.measurement_slots == 4 * 4
            assert steps.feedback_bits == 4


def test_single_path_slot_count():
    geom_bs, geom_ms = UlaGeometry(64), UlaGeometry(32)
    grid = AngleGrid(64)
    codebook_bs = build_codebook(build_dictionary(geom_bs, grid), None, num_beams=2)
    codebook_ms = build_codebook(build_dictionary(geom_ms, grid), None, num_beams=2)
    rng = np.random.default_rng(1)
    channel = rng.standard_normal((32, 64)) + 1j * rng.standard_normal((32, 64))
    ctx = MeasurementContext(channel=channel, noise_power=1.0, rng=rng)
    _, steps = estimate_single_path(ctx, codebook_bs, codebook_ms, unit_powers(codebook_bs))
    assert steps.measurement_slots == 24
    assert steps.feedback_bits == 6

    ctx = MeasurementContext(channel=channel, noise_power=1.0, rng=rng, combining_group=2)
    _, steps = estimate_single_path(ctx, codebook_bs, codebook_ms, unit_powers(codebook_bs))
    assert steps.measurement_slots == 2 * 1 * 6


def test_multi_path_slot_count():
    geom = UlaGeometry(16)
    codebook = build_codebook(build_dictionary(geom, AngleGrid(64)), None, num_beams=2, num_paths=2)
    rng = np.random.default_rng(2)
    channel = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    ctx = MeasurementContext(channel=channel, noise_power=1.0, rng=rng)
    estimate, steps = estimate_multi_path(ctx, codebook, codebook, unit_powers(codebook))
    assert steps.measurement_slots == 4 * 8 * 5
    assert estimate.num_paths == 2
    assert len(set(estimate.cells)) == 2


def test_multi_path_search_with_one_path_is_the_single_path_search():
    geom = UlaGeometry(8)
    codebook = build_codebook(build_dictionary(geom, AngleGrid(16)), None, num_beams=2)
    channel = dictionary_channel(codebook.dictionary, codebook.dictionary, [(3, 5), (12, 9)], [1.0, 0.3j])
    powers = unit_powers(codebook)
    single, single_steps = estimate_single_path(
        MeasurementContext(channel=channel, noise_power=0.1, rng=np.random.default_rng(5)), codebook, codebook, powers)
    multi, multi_steps = estimate_multi_path(
        MeasurementContext(channel=channel, noise_power=0.1, rng=np.random.default_rng(5)), codebook, codebook, powers)
    assert multi.paths[0] == single
    assert multi_steps == single_steps


def test_noiseless_two_paths_are_separated():
    dictionary, codebook = ideal_codebooks(16, num_paths=2)
    rng = np.random.default_rng(3)
    cells = [(2, 3), (10, 13)]
    gains = [10.0 * np.exp(0.4j), 1.0 * np.exp(-1.3j)]
    channel = dictionary_channel(dictionary, dictionary, cells, gains)
    trace = EstimationTrace()
    estimator = AdaptiveEstimator(codebook, codebook, unit_powers(codebook), trace=trace)
    estimate, steps = estimator.estimate(MeasurementContext(channel=channel, noise_power=QUIET, rng=rng))
    assert estimate.cells == cells
    assert_allclose(estimate.gains, gains, rtol=1e-6)
    assert estimate.collisions == 0
    assert len(trace) == 2 * codebook.num_levels
    assert estimate.trajectory_bs[1][0] == 0


def test_noiseless_two_path_sweep_over_separated_pairs():
    dictionary, codebook = ideal_codebooks(16, num_paths=2)
    rng = np.random.default_rng(4)
    for first in range(0, 16, 3):
        for second in range(1, 16, 5):
            cells = [(first, second), ((first + 8) % 16, (second + 8) % 16)]
            channel = dictionary_channel(dictionary, dictionary, cells, [10.0, 1.0])
            estimate, _ = estimate_multi_path(MeasurementContext(channel=channel, noise_power=QUIET, rng=rng),
                                              codebook, codebook, unit_powers(codebook))
            assert estimate.cells == cells


def test_trace_is_written_as_csv(tmp_path):
    dictionary, codebook = ideal_codebooks(8)
    trace = EstimationTrace()
    channel = dictionary_channel(dictionary, dictionary, [(1, 6)], [1.0])
    AdaptiveEstimator(codebook, codebook, unit_powers(codebook), trace=trace).estimate(
        MeasurementContext(channel=channel, noise_power=QUIET, rng=np.random.default_rng(0)))
    path = tmp_path / "trace.csv"
    trace.to_csv(str(path))
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# schema: mmwave-hybrid/trace/v1"
    assert lines[1].startswith("path,stage")
    assert len(lines) == 2 + 3


def test_deflation_leaves_residual_orthogonal():
    rng = np.random.default_rng(9)
    signatures = rng.standard_normal((16, 2)) + 1j * rng.standard_normal((16, 2))
    measurements = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    residual = measurements - signatures @ least_squares_gains(signatures, measurements)
    inner = signatures.conj().T @ residual
    assert np.all(np.abs(inner) < 1e-10 * np.linalg.norm(signatures, axis=0) * np.linalg.norm(measurements))


def test_estimate_rejects_duplicate_cells():
    with pytest.raises(ValueError):
        MultiPathEstimate(paths=(SinglePathEstimate(1, 2, 1.0), SinglePathEstimate(1, 2, 0.5)), resolution=8)
    with pytest.raises(ValueError):
        MultiPathEstimate(paths=(SinglePathEstimate(9, 2, 1.0),), resolution=8)


def test_exhaustive_search_is_exact_without_noise():
    dictionary = make_dft_dictionary(8)
    rng = np.random.default_rng(6)
    channel = dictionary_channel(dictionary, dictionary, [(5, 2)], [0.7 - 0.2j])
    estimate, steps = exhaustive_estimate(MeasurementContext(channel=channel, noise_power=QUIET, rng=rng),
                                          dictionary, dictionary, power=1.0)
    assert estimate.cells == [(5, 2)]
    assert_allclose(estimate.gains, [0.7 - 0.2j], rtol=1e-6)
    assert steps.measurement_slots == 64


def test_aliased_cells_count_as_correct():
    geom = UlaGeometry(8)
    dictionary = build_dictionary(geom, AngleGrid(16))
    assert same_cell(dictionary, dictionary, (1, 2), (7, 6))
    assert not same_cell(dictionary, dictionary, (1, 2), (7, 5))


def test_error_trial_counts_slots_and_misses():
    geom = UlaGeometry(8)
    codebook = build_codebook(build_dictionary(geom, AngleGrid(16)), None, num_beams=2)
    # training far below the noise floor leaves a near-random pick
    setup = SinglePathSetup(codebook_bs=codebook, codebook_ms=codebook, powers=unit_powers(codebook),
                            noise_power=1e8, on_grid=True)
    results = [single_path_error_trial(setup, trial_rng(0, 0, trial)) for trial in range(40)]
    assert sum(error for error, _ in results) >= 30
    assert all(slots == 16 for _, slots in results)


def test_corollary1_error_rate_on_ideal_codebook():
    # odd grid, no aliasing; ideal codebooks make beta infinite
    dictionary, codebook = ideal_codebooks(27, num_beams=3)
    gains = [codebook.gain(level) ** 2 for level in range(1, 4)]
    delta, snr = 0.05, 1.0
    _, powers = allocate_power_corollary1(delta, snr, 3, 3, gains)
    trials, errors = 2000, 0
    for trial in range(trials):
        rng = trial_rng(42, 0, trial)
        cell = (int(rng.integers(27)), int(rng.integers(27)))
        channel = dictionary_channel(dictionary, dictionary, [cell], [complex_normal(rng, 1)[0]])
        estimate, _ = estimate_single_path(MeasurementContext(channel=channel, noise_power=1.0, rng=rng),
                                           codebook, codebook, powers)
        errors += estimate.cell != cell
    rate = errors / trials
    sigma = np.sqrt(delta * (1.0 - delta) / trials)
    assert rate <= delta + 3.0 * sigma
    bound = theorem1_bound(powers.powers, gains, [np.inf] * 3, snr, 3)
    assert rate <= bound + 3.0 * np.sqrt(bound * (1.0 - bound) / trials)


def corollary1_powers(codebook_bs, codebook_ms, delta, snr=1.0):
    summary = level_gain_summary(codebook_bs, codebook_ms)
    forward = [level.forward_gain for level in summary]
    betas = [level.beta for level in summary]
    _, powers = allocate_power_corollary1(delta, snr, codebook_bs.num_beams, codebook_bs.num_levels, forward)
    return powers, theorem1_bound(powers.powers, forward, betas, snr, codebook_bs.num_beams)


def error_rate(setup, trials, seed):
    return sum(single_path_error_trial(setup, trial_rng(seed, 0, trial))[0] for trial in range(trials)) / trials


@pytest.fixture(scope="module")
def default_hybrid_codebooks():
    grid = AngleGrid(64)
    codebooks = []
    for num_elements, num_rf in ((64, 10), (32, 6)):
        dictionary = build_dictionary(UlaGeometry(num_elements), grid)
        codebooks.append(build_codebook(dictionary, make_candidates_grid(dictionary, 7), num_beams=2, num_rf=num_rf))
    return tuple(codebooks)


def test_default_hybrid_codebook_recovers_noiseless_paths(default_hybrid_codebooks):
    codebook_bs, codebook_ms = default_hybrid_codebooks
    for level in level_gain_summary(codebook_bs, codebook_ms):
        assert level.beta > 1
        assert level.forward_gain > 0
    dictionary_bs, dictionary_ms = codebook_bs.dictionary, codebook_ms.dictionary
    powers = unit_powers(codebook_bs)
    rng = np.random.default_rng(11)
    cells = [(u, v) for u in range(32) for v in range(32)]
    hits = 0
    for cell in cells:
        channel = dictionary_channel(dictionary_bs, dictionary_ms, [cell], [1.0])
        estimate, _ = estimate_single_path(MeasurementContext(channel=channel, noise_power=QUIET, rng=rng),
                                           codebook_bs, codebook_ms, powers)
        hits += same_cell(dictionary_bs, dictionary_ms, estimate.cell, cell)
    assert hits >= 0.95 * len(cells)


def test_noiseless_search_on_steering_grid_recovers_every_cell():
    dictionary = build_dictionary(UlaGeometry(8), AngleGrid(16))
    codebook = build_codebook(dictionary, None, num_beams=2)
    powers = unit_powers(codebook)
    rng = np.random.default_rng(12)
    for u in range(16):
        for v in range(16):
            gain = complex_normal(rng, 1)[0]
            channel = dictionary_channel(dictionary, dictionary, [(u, v)], [gain])
            estimate, steps = estimate_single_path(MeasurementContext(channel=channel, noise_power=QUIET, rng=rng),
                                                   codebook, codebook, powers)
            assert same_cell(dictionary, dictionary, estimate.cell, (u, v))
            assert_allclose(estimate.gain, gain, rtol=1e-6)
            assert steps.measurement_slots == 4 * 4


def test_corollary1_error_rate_on_steering_grid():
    grid = AngleGrid(64)
    codebook = build_codebook(build_dictionary(UlaGeometry(16), grid), None, num_beams=2)
    delta, trials = 0.05, 2000
    powers, bound = corollary1_powers(codebook, codebook, delta)
    setup = SinglePathSetup(codebook_bs=codebook, codebook_ms=codebook, powers=powers, noise_power=1.0, on_grid=True)
    rate = error_rate(setup, trials, seed=43)
    assert rate <= delta + 3.0 * np.sqrt(delta * (1.0 - delta) / trials)
    assert rate <= bound + 3.0 * np.sqrt(bound * (1.0 - bound) / trials)


def test_hybrid_codebook_error_rate_within_theorem_bound():
    dictionary = build_dictionary(UlaGeometry(8), AngleGrid(16))
    codebook = build_codebook(dictionary, make_candidates_grid(dictionary, 3), num_beams=2, num_rf=3)
    delta, trials = 0.05, 2000
    powers, bound = corollary1_powers(codebook, codebook, delta)
    assert bound < 1.0
    setup = SinglePathSetup(codebook_bs=codebook, codebook_ms=codebook, powers=powers, noise_power=1.0, on_grid=True)
    rate = error_rate(setup, trials, seed=44)
    assert rate <= bound + 3.0 * np.sqrt(bound * (1.0 - bound) / trials)
    assert rate <= delta + 3.0 * np.sqrt(delta * (1.0 - delta) / trials)
