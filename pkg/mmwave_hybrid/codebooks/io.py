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

import numpy as np

from .candidates import CandidateSet
from .hierarchical import HierarchicalCodebook, CodebookLevel, HybridVector
from ..channels.arrays import UlaGeometry, AngleGrid, Dictionary

FORMAT_NAME = "mmwave-hybrid-codebook"
FORMAT_VERSION = 1


def save_codebook(path: str, codebook: HierarchicalCodebook):
    """Write a codebook as a self-describing .npz archive

    Integers are stored as int64 and complex values as complex128, so a round trip is exact.
    """
    vectors = [vector for level in codebook.levels for vector in level.vectors]
    geometry = codebook.dictionary.geometry
    metadata = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "num_elements": geometry.num_elements,
        "spacing": geometry.spacing,
        "resolution": codebook.resolution,
        "num_beams": codebook.num_beams,
        "num_paths": codebook.num_paths,
        "num_rf": codebook.num_rf,
        "level_sizes": [len(level.vectors) for level in codebook.levels],
        "candidates": None if codebook.candidates is None else codebook.candidates.descriptor(),
    }
    arrays = {
        "metadata": np.array(json.dumps(metadata, sort_keys=True)),
        "rf_offsets": np.cumsum([0] + [len(vector.rf_columns) for vector in vectors]).astype(np.int64),
        "rf_columns": np.array([c for vector in vectors for c in vector.rf_columns], dtype=np.int64),
        "baseband_offsets": np.cumsum([0] + [vector.baseband.size for vector in vectors]).astype(np.int64),
        "baseband": np.concatenate([vector.baseband for vector in vectors]).astype(np.complex128),
        "normalizers": np.array([vector.normalizer for vector in vectors], dtype=np.float64),
        "vectors": np.column_stack([vector.vector for vector in vectors]).astype(np.complex128),
        "dictionary": np.asarray(codebook.dictionary.matrix, dtype=np.complex128),
    }
    if codebook.candidates is not None:
        arrays["candidates"] = np.asarray(codebook.candidates.matrix, dtype=np.complex128)
    with open(path, "wb") as file:
        np.savez(file, **arrays)


def load_codebook(path: str) -> HierarchicalCodebook:
    with np.load(path, allow_pickle=False) as archive:
        metadata = json.loads(str(archive["metadata"]))
        if metadata.get("format") != FORMAT_NAME:
            raise ValueError(f"{path} is not a {FORMAT_NAME} archive")
        if metadata.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported codebook version {metadata.get('version')}, expected {FORMAT_VERSION}")
        rf_offsets = archive["rf_offsets"]
        rf_columns = archive["rf_columns"]
        baseband_offsets = archive["baseband_offsets"]
        baseband = archive["baseband"]
        normalizers = archive["normalizers"]
        beams = archive["vectors"]
        dictionary_matrix = archive["dictionary"]
        candidate_matrix = archive["candidates"] if "candidates" in archive.files else None

    geometry = UlaGeometry(num_elements=metadata["num_elements"], spacing=metadata["spacing"])
    dictionary_matrix.setflags(write=False)
    dictionary = Dictionary(geometry=geometry, grid=AngleGrid(metadata["resolution"]), matrix=dictionary_matrix)
    candidates = None
    if candidate_matrix is not None:
        descriptor = metadata["candidates"]
        candidates = CandidateSet(matrix=candidate_matrix, kind=descriptor["kind"], geometry=geometry,
                                  num_bits=descriptor["num_bits"])

    levels, index = [], 0
    for level, size in enumerate(metadata["level_sizes"], start=1):
        vectors = []
        for i in range(index, index + size):
            vectors.append(HybridVector(
                rf_columns=tuple(int(c) for c in rf_columns[rf_offsets[i]:rf_offsets[i + 1]]),
                baseband=baseband[baseband_offsets[i]:baseband_offsets[i + 1]],
                normalizer=float(normalizers[i]),
                vector=beams[:, i]))
        level_beams = beams[:, index:index + size]
        level_beams.setflags(write=False)
        levels.append(CodebookLevel(level=level, beams=level_beams, vectors=tuple(vectors)))
        index += size

    return HierarchicalCodebook(dictionary=dictionary, candidates=candidates, num_beams=metadata["num_beams"],
                                num_paths=metadata["num_paths"], num_rf=metadata["num_rf"], levels=levels)
