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

import argparse
import sys
from typing import Sequence

from .configs.config import Config, EXPERIMENT_KINDS
from .runners.base_runners import MonteCarloRunner
from .runners.experiment_runners import get_runner
from .utils import setup_environment, setup_strategy
from .utils.errors import NumericalDegeneracyError
from .utils.utils import preprocess_paths


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmwave-hybrid", description="Adaptive mmWave channel estimation and "
                                                                       "hybrid precoding experiments")
    parser.add_argument("experiment", type=str, choices=EXPERIMENT_KINDS, help="Experiment to run")
    parser.add_argument("--config", type=str, default=None, help="The file path of experiment config (.yml)")
    parser.add_argument("--seed", type=int, default=None, help="Master seed, overrides the config")
    parser.add_argument("--out", type=str, default=None, help="Output directory, overrides the config")
    parser.add_argument("--threads", type=int, default=None, help="Worker processes, overrides the config")
    return parser


def load_config(args) -> Config:
    config = Config(args.config)
    running = config.running_config
    running.experiment = args.experiment
    if args.seed is not None:
        if args.seed < 0:
            raise ValueError(f"seed must be non-negative, got {args.seed}")
        running.seed = args.seed
    if args.out is not None: running.outdir = preprocess_paths(args.out)
    if args.threads is not None: running.threads = args.threads
    return config.validate()


def main(argv: Sequence[str] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_environment()
    try:
        config = load_config(args)
    except (ValueError, OSError) as error:
        print(f"config error: {error}", file=sys.stderr)
        return 1

    runner_class = get_runner(config.running_config.experiment)
    strategy = setup_strategy(config.running_config.threads) if issubclass(runner_class, MonteCarloRunner) else None
    try:
        runner = runner_class(config, strategy) if strategy is not None else runner_class(config)
        runner.run()
    except NumericalDegeneracyError as error:
        print(f"numerical degeneracy: {error}", file=sys.stderr)
        return 2
    except ValueError as error:
        print(f"invalid parameters: {error}", file=sys.stderr)
        return 1
    finally:
        if strategy is not None: strategy.shutdown()
    return 0


if __name__ == "__main__":
    sys.exit(main())
