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

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from ..utils.utils import format_number

TRACE_HEADER = ["path", "stage", "subsets_bs", "subsets_ms", "selected_ms", "selected_bs", "feedback_bits",
                "powers"]


@dataclass(frozen=True)
class TraceRecord:
    path: int  # starts at 0
    stage: int  # level, starts at 1
    subsets_bs: Tuple[int, ...]
    subsets_ms: Tuple[int, ...]
    selected: Tuple[int, int]  # (m_MS, m_BS) position in the measured block
    feedback_bits: int
    powers: np.ndarray  # |y|^2 after deflation, Q_MS x Q_BS

    def row(self) -> List[str]:
        return [format_number(self.path), format_number(self.stage),
                " ".join(format_number(k) for k in self.subsets_bs),
                " ".join(format_number(k) for k in self.subsets_ms),
                format_number(self.selected[0]), format_number(self.selected[1]),
                format_number(self.feedback_bits),
                " ".join(format_number(p) for p in np.ravel(self.powers))]


@dataclass
class EstimationTrace:
    """ Per-stage record of one estimation run """
    records: List[TraceRecord] = field(default_factory=list)

    def append(self, record: TraceRecord):
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def to_csv(self, path: str):
        with open(path, "w", encoding="utf-8") as out:
            out.write("# schema: mmwave-hybrid/trace/v1\n")
            out.write(",".join(TRACE_HEADER) + "\n")
            for record in self.records:
                out.write(",".join(record.row()) + "\n")
