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

import json
import os

import numpy as np
import pytest
import yaml

from mmwave_hybrid.cli import main
from mmwave_hybrid.codebooks.io import load_codebook

SMALL = {
    "array_config": {"num_bs": 8, "num_ms": 8, "num_rf_bs": 2, "num_rf_ms": 2},
    "channel_config": {"num_paths": 2},
    "codebook_config": {"resolution": 16, "num_beams": 2, "candidates": "quantized", "num_bits": 3},
    "estimation_config": {"power_gains": "nominal"},
    "cell_config": {"window_radius": 300.0, "thresholds": [0.0, 2.0, 4.0]},
    "running_config": {
        "trials": 3,
        "threads": 1,
        "chunk_size": 2,
        "snr_db": [0.0, 10.0],
        "quantization_bits": [2, 3],
        "rf_chains": [[2, 2], [1, 1]],
        "resolutions": [16, 32],
        "variants": [{"num_beams": 2, "num_paths": 1, "resolution": 16},
                     {"num_beams": 2, "num_paths": 2, "resolution": 16}],
    },
}

OUTPUTS = {
    "design-codebook": ["codebook_bs.npz", "codebook_ms.npz", "levels.csv", "beam_pattern.csv"],
    "single-path-error": ["error_rate.csv"],
    "spectral-efficiency-sweep": ["spectral_efficiency.csv"],
    "quantization-study": ["quantization.csv"],
    "grid-resolution-study": ["grid_resolution.csv"],
    "coverage": ["coverage.csv"],
}


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "small.yml"
    path.write_text(yaml.safe_dump(SMALL), encoding="utf-8")
    return str(path)


def read_table(path):
    with open(path, "r", encoding="utf-8") as file:
        lines = file.read().splitlines()
    return lines[0], lines[1].split(","), [line.split(",") for line in lines[2:]]


@pytest.mark.parametrize("experiment", sorted(OUTPUTS))
def test_every_experiment_runs(experiment, config_path, tmp_path):
    outdir = str(tmp_path / "out")
    assert main([experiment, "--config", config_path, "--out", outdir, "--seed", "3"]) == 0
    for name in OUTPUTS[experiment]:
        assert os.path.isfile(os.path.join(outdir, name))
    with open(os.path.join(outdir, "manifest.json"), "r", encoding="utf-8") as file:
        manifest = json.load(file)
    assert manifest["experiment"] == experiment
    assert manifest["seed"] == 3
    assert sorted(manifest["outputs"]) == sorted(OUTPUTS[experiment])
    for name in OUTPUTS[experiment]:
        if not name.endswith(".csv"): continue
        schema, header, rows = read_table(os.path.join(outdir, name))
        assert schema == f"# schema: mmwave-hybrid/{experiment}/{name[:-4]}/v1"
        assert rows and all(len(row) == len(header) for row in rows)


def test_error_rate_table(config_path, tmp_path):
    outdir = str(tmp_path / "out")
    assert main(["single-path-error", "--config", config_path, "--out", outdir]) == 0
    _, header, rows = read_table(os.path.join(outdir, "error_rate.csv"))
    assert header == ["snr_db", "total_power", "error_rate", "ci_low", "ci_high", "trials", "theorem_bound",
                      "corollary_bound", "slots"]
    assert [row[0] for row in rows] == ["0", "10"]
    for row in rows:
        assert 0.0 <= float(row[2]) <= 1.0
        assert row[5] == "3"
        assert row[8] == "16"


def test_design_writes_loadable_codebooks(config_path, tmp_path):
    outdir = str(tmp_path / "out")
    assert main(["design-codebook", "--config", config_path, "--out", outdir]) == 0
    codebook = load_codebook(os.path.join(outdir, "codebook_bs.npz"))
    assert codebook.resolution == 16 and codebook.num_levels == 4
    assert codebook.candidates.num_bits == 3
    _, header, rows = read_table(os.path.join(outdir, "levels.csv"))
    assert len(rows) == 4 and header[-1] == "leakage"


def test_results_do_not_depend_on_threads(config_path, tmp_path):
    tables = []
    for threads in ("1", "2"):
        outdir = str(tmp_path / threads)
        assert main(["coverage", "--config", config_path, "--out", outdir, "--threads", threads]) == 0
        tables.append(read_table(os.path.join(outdir, "coverage.csv"))[2])
    assert tables[0] == tables[1]


def test_invalid_config_exits_with_one(tmp_path, capsys):
    path = tmp_path / "bad.yml"
    path.write_text(yaml.safe_dump({"codebook_config": {"resolution": 48}}), encoding="utf-8")
    assert main(["design-codebook", "--config", str(path), "--out", str(tmp_path / "out")]) == 1
    assert "N = L_d * K^S" in capsys.readouterr().err
    assert main(["design-codebook", "--config", str(tmp_path / "missing.yml")]) == 1
    assert main(["design-codebook", "--config", str(path), "--seed", "-1"]) == 1


def test_unknown_experiment_is_a_usage_error():
    with pytest.raises(SystemExit) as error:
        main(["train"])
    assert error.value.code == 2


def test_same_seed_same_numbers(config_path, tmp_path):
    tables = []
    for run in ("a", "b"):
        outdir = str(tmp_path / run)
        assert main(["spectral-efficiency-sweep", "--config", config_path, "--out", outdir]) == 0
        tables.append(np.array(read_table(os.path.join(outdir, "spectral_efficiency.csv"))[2], dtype=float))
    np.testing.assert_array_equal(tables[0], tables[1])
