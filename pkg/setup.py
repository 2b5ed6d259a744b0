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

import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

requirements = [
    "setuptools>=47.1.1",
    "PyYAML>=5.3.1",
    "numpy>=1.19.0",
    "scipy>=1.7.0",
    "tqdm>=4.51.0",
    "colorama>=0.4.3",
]

setuptools.setup(
    name="MmWaveHybrid",
    version="0.1.0",
    author="The MmWaveHybrid Authors",
    description="Adaptive compressed-sensing channel estimation and hybrid precoding for mmWave links",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(include=["mmwave_hybrid*"]),
    install_requires=requirements,
    extras_require={"tests": ["pytest>=6.0"]},
    entry_points={"console_scripts": ["mmwave-hybrid=mmwave_hybrid.cli:main"]},
    classifiers=[
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Intended Audience :: Science/Research",
        "Operating System :: POSIX :: Linux",
        "License :: OSI Approved :: Apache Software License",
        "Topic :: Scientific/Engineering"
    ],
    python_requires='>=3.8',
)
