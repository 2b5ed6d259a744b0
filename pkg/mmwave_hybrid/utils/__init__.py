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


def setup_environment():  # Configure logging and numpy error handling
    """ Setting numerical running environment """
    import os
    import logging
    import warnings

    import numpy as np

    from .errors import DegeneracyWarning

    level = os.environ.get("MMWAVE_HYBRID_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    np.seterr(divide="ignore")
    warnings.simplefilter("once", DegeneracyWarning)


def setup_strategy(threads: int = 1):
    """Setting the worker pool for Monte Carlo trials

    Args:
        threads (int): number of worker processes

    Returns:
        concurrent.futures.Executor: process pool, or None to run trials in-process
    """
    from concurrent.futures import ProcessPoolExecutor

    if threads is None or threads <= 1:
        return None
    print("Run on", threads, "worker processes")
    return ProcessPoolExecutor(max_workers=threads)
