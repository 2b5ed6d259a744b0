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

import re

import yaml

SECTIONS = ("array_config", "channel_config", "codebook_config", "estimation_config",
            "precoding_config", "cell_config", "running_config")

# YAML 1.1 reads "1e-3" and "2.5e4" as strings
EXPONENT_FLOAT = re.compile(r"^[-+]?(?:[0-9][0-9_]*)(?:\.[0-9_]*)?[eE][-+]?[0-9]+$")


class ConfigLoader(yaml.SafeLoader):
    """ Safe loader that also resolves exponent-only floats """


ConfigLoader.add_implicit_resolver("tag:yaml.org,2002:float", EXPONENT_FLOAT, list("-+0123456789"))


def load_yaml(path: str) -> dict:
    """Read an experiment config file

    Returns:
        dict: section name to its mapping, only names from SECTIONS
    """
    with open(path, "r", encoding="utf-8") as file:
        config = yaml.load(file, Loader=ConfigLoader) or {}
    if not isinstance(config, dict):
        raise ValueError(f"{path}: a config file must hold a mapping of sections")
    unknown = [name for name in config if name not in SECTIONS]
    if unknown:
        raise ValueError(f"{path}: unknown config sections {unknown}, available: {list(SECTIONS)}")
    for name, section in config.items():
        if section is not None and not isinstance(section, dict):
            raise ValueError(f"{path}: section {name} must be a mapping")
    return config
