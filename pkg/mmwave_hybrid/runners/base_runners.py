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

import abc
import json
import os
import time
from typing import Callable, List, Sequence

import numpy as np
from tqdm import tqdm
from colorama import Fore

from .. import __version__
from ..configs.config import Config
from ..utils.errors import NumericalDegeneracyError
from ..utils.utils import chunk_indices, format_number, trial_rng

SCHEMA_PREFIX = "mmwave-hybrid"


def run_trial_chunk(trial_fn: Callable, setup, seed: int, point: int, trials: Sequence[int]) -> list:
    """ Run a chunk of trials of one sweep point; top-level so worker processes can unpickle it """
    return [trial_fn(setup, trial_rng(seed, point, trial)) for trial in trials]


class BaseRunner(metaclass=abc.ABCMeta):
    """ Customized runner module for all experiments """
    kind = None

    def __init__(self, config: Config):
        self.config = config
        self.outputs: List[str] = []
        os.makedirs(self.outdir, exist_ok=True)

    @property
    def outdir(self) -> str:
        return self.config.running_config.outdir

    @property
    def seed(self) -> int:
        return self.config.running_config.seed

    def output_path(self, filename: str) -> str:
        return os.path.join(self.outdir, filename)

    def write_csv(self, name: str, header: Sequence[str], rows: Sequence[Sequence]) -> str:
        """Write one versioned CSV table to outdir

        Raises:
            NumericalDegeneracyError: if any number is NaN or infinite
        """
        for row in rows:
            for value in row:
                if isinstance(value, (float, np.floating)) and not np.isfinite(value):
                    raise NumericalDegeneracyError(f"non-finite value in {name} row {list(row)}")
        path = self.output_path(f"{name}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as out:
            out.write(f"# schema: {SCHEMA_PREFIX}/{self.kind}/{name}/v1\n")
            out.write(",".join(header) + "\n")
            for row in rows:
                out.write(",".join(format_number(value) for value in row) + "\n")
        self.outputs.append(path)
        print(f"> Wrote {path}")
        return path

    def write_manifest(self, wall_time: float) -> str:
        path = self.output_path("manifest.json")
        manifest = {
            "experiment": self.kind,
            "seed": self.seed,
            "version": __version__,
            "wall_time": wall_time,
            "config": self.config.to_dict(),
            "outputs": [os.path.basename(output) for output in self.outputs],
        }
        with open(path, "w", encoding="utf-8") as out:
            json.dump(manifest, out, indent=2, sort_keys=True)
        return path

    def run(self) -> List[str]:
        start = time.perf_counter()
        self.execute()
        self.outputs.append(self.write_manifest(time.perf_counter() - start))
        return self.outputs

    @abc.abstractmethod
    def execute(self):
        raise NotImplementedError()


class MonteCarloRunner(BaseRunner):
    """ Runner dispatching independent trials in chunks, in-process or on a worker pool """

    def __init__(self, config: Config, strategy=None):
        super(MonteCarloRunner, self).__init__(config)
        self.strategy = strategy

    def map_trials(self, trial_fn: Callable, setup, point: int, desc: str = "[Trials]") -> list:
        """Run every trial of one sweep point

        Trial t of point p always draws from trial_rng(seed, p, t) and results come back in trial
        order, so the output does not depend on the number of workers.
        """
        running = self.config.running_config
        chunks = chunk_indices(running.trials, running.chunk_size)
        progbar = tqdm(total=running.trials, unit="trial", desc=desc,
                       bar_format="{desc} |%s{bar:20}%s{r_bar}" % (Fore.GREEN, Fore.RESET))
        results = []
        if self.strategy is None:
            for chunk in chunks:
                results.extend(run_trial_chunk(trial_fn, setup, self.seed, point, chunk))
                progbar.update(len(chunk))
        else:
            futures = [self.strategy.submit(run_trial_chunk, trial_fn, setup, self.seed, point, chunk)
                       for chunk in chunks]
            for chunk, future in zip(chunks, futures):
                results.extend(future.result())
                progbar.update(len(chunk))
        progbar.close()
        return results
