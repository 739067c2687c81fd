# Copyright (C) 2026 The evo_transformers Authors.
# All rights reserved.
# Licensed under the BSD 3-Clause License (the "License"); you may
# not use this file except in compliance with the License. You may
# obtain a copy of the License at
# https://opensource.org/licenses/BSD-3-Clause
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" basis,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied. See the License for the specific language governing
# permissions and limitations under the License.
# See the AUTHORS file for names of contributors.

# Root-level manifest so the package can be installed from the repository
# root; the sources live in evo_transformers/python.
from setuptools import find_packages, setup

setup(
    name="evo_transformers",
    version="0.1.0",
    description="Searching decoder blocks as programs of tensor primitives",
    package_dir={"": "evo_transformers/python"},
    packages=find_packages(where="evo_transformers/python",
                           exclude=["tests", "tests.*"]),
    python_requires=">=3.8",
    install_requires=[
        "torch>=2.2", "numpy", "scipy", "docopt", "contexttimer"
    ],
    entry_points={
        "console_scripts": ["evo-transformers=evo_transformers.cli:main"]
    },
)
