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
"""Run directories.

Layout::

    <root>/config.json      snapshot written before any computation
    <root>/*.jsonl          append-only logs
    <root>/checkpoint.json  replaced atomically
    <root>/...              curves, records, programs, analysis output

Every JSON artifact carries the hash of the config snapshot. Writes go through
one lock so concurrent workers never interleave lines.
"""

import json
import logging
import os
import tempfile
import threading
from typing import Any, Dict, List

from .config import config_hash

__all__ = ['RunDirectory', 'CONFIG_FILE']

logger = logging.getLogger(__name__)

CONFIG_FILE = "config.json"


class RunDirectory:
    def __init__(self, root: str, snapshot_hash: str):
        self.root = root
        self.config_hash = snapshot_hash
        self._lock = threading.Lock()

    @staticmethod
    def create(root: str,
               payload: Dict[str, Any],
               resume: bool = False) -> 'RunDirectory':
        """Opens ``root`` and snapshots ``payload``.

        A fresh run refuses a directory that already holds a snapshot; a
        resumed run refuses one whose snapshot differs from ``payload``.
        """
        os.makedirs(root, exist_ok=True)
        digest = config_hash(payload)
        path = os.path.join(root, CONFIG_FILE)
        if os.path.exists(path):
            with open(path) as f:
                stored = json.load(f).get("hash")
            if not resume:
                raise ValueError(
                    f"{root} already holds a run; pass resume to continue it")
            if stored != digest:
                raise ValueError(
                    f"config of {root} differs from the resumed one "
                    f"({stored} != {digest})")
            return RunDirectory(root, digest)
        run = RunDirectory(root, digest)
        run.write_json(CONFIG_FILE, {"config": payload})
        logger.info("run directory %s, config %s", root, digest[:12])
        return run

    @staticmethod
    def open(root: str) -> 'RunDirectory':
        with open(os.path.join(root, CONFIG_FILE)) as f:
            return RunDirectory(root, json.load(f)["hash"])

    def path(self, *names: str) -> str:
        return os.path.join(self.root, *names)

    def exists(self, name: str) -> bool:
        return os.path.exists(self.path(name))

    def _replace(self, name: str, text: str):
        target = self.path(name)
        directory = os.path.dirname(target)
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
        try:
            with os.fdopen(fd, "w") as f:
                f.write(text)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def write_text(self, name: str, text: str):
        with self._lock:
            self._replace(name, text)

    def write_json(self, name: str, payload: Dict[str, Any]):
        payload = dict(payload, hash=self.config_hash)
        with self._lock:
            self._replace(name, json.dumps(payload, indent=2,
                                           sort_keys=True) + "\n")

    def read_json(self, name: str) -> Dict[str, Any]:
        with open(self.path(name)) as f:
            return json.load(f)

    def append_jsonl(self, name: str, entry: Dict[str, Any]):
        line = json.dumps(dict(entry, config_hash=self.config_hash),
                          sort_keys=True)
        with self._lock:
            with open(self.path(name), "a") as f:
                f.write(line + "\n")

    def read_jsonl(self, name: str) -> List[Dict[str, Any]]:
        if not self.exists(name):
            return []
        with open(self.path(name)) as f:
            return [json.loads(line) for line in f if line.strip()]

    def truncate_jsonl(self, name: str, keep) -> int:
        """Rewrites ``name`` with the entries ``keep`` accepts."""
        kept = [e for e in self.read_jsonl(name) if keep(e)]
        self.write_text(
            name, "".join(json.dumps(e, sort_keys=True) + "\n" for e in kept))
        return len(kept)
