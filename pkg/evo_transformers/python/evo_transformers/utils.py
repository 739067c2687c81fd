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

import contextlib
import logging
import sys

import contexttimer
import torch

__all__ = ['pref_guard', 'set_num_threads', 'set_stderr_verbose_level']

_PACKAGE_LOGGER = "evo_transformers"
_handler = None


def set_num_threads(n: int):
    torch.set_num_threads(n)


def set_stderr_verbose_level(level: int):
    """0 = warnings only, 1 = info, 2 and above = debug."""
    global _handler
    logger = logging.getLogger(_PACKAGE_LOGGER)
    if _handler is None:
        _handler = logging.StreamHandler(sys.stderr)
        _handler.setFormatter(
            logging.Formatter(
                "%(asctime)s %(levelname)s %(name)s: %(message)s"))
        logger.addHandler(_handler)
    if level <= 0:
        logger.setLevel(logging.WARNING)
    elif level == 1:
        logger.setLevel(logging.INFO)
    else:
        logger.setLevel(logging.DEBUG)


@contextlib.contextmanager
def pref_guard(name: str):
    with contexttimer.Timer() as t:
        yield t
    logging.getLogger(_PACKAGE_LOGGER).info("%s took %.6f s", name,
                                            t.elapsed)
