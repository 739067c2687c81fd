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

import unittest

import sys
import json
import tempfile
import threading
from evo_transformers import RunDirectory
import os


class TestRunDirectory(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.root = os.path.join(self.tmp.name, "run")

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def test_snapshot(self):
        run = RunDirectory.create(self.root, {"budget": 500})
        snapshot = run.read_json("config.json")
        self.assertEqual(snapshot["config"], {"budget": 500})
        self.assertEqual(snapshot["hash"], run.config_hash)
        self.assertEqual(RunDirectory.open(self.root).config_hash,
                         run.config_hash)

    def test_refuses_reuse(self):
        RunDirectory.create(self.root, {"budget": 500})
        with self.assertRaises(ValueError):
            RunDirectory.create(self.root, {"budget": 500})
        with self.assertRaises(ValueError):
            RunDirectory.create(self.root, {"budget": 600}, resume=True)
        resumed = RunDirectory.create(self.root, {"budget": 500},
                                      resume=True)
        self.assertTrue(resumed.exists("config.json"))

    def test_artifacts_carry_hash(self):
        run = RunDirectory.create(self.root, {"budget": 500})
        run.write_json("nested/record.json", {"loss": 1.5})
        self.assertEqual(run.read_json("nested/record.json")["hash"],
                         run.config_hash)
        run.append_jsonl("log.jsonl", {"candidate_id": 0})
        self.assertEqual(run.read_jsonl("log.jsonl")[0]["config_hash"],
                         run.config_hash)

    def test_concurrent_appends(self):
        run = RunDirectory.create(self.root, {})

        def worker(w):
            for i in range(50):
                run.append_jsonl("log.jsonl", {"worker": w, "i": i})

        threads = [threading.Thread(target=worker, args=(w, ))
                   for w in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        with open(run.path("log.jsonl")) as f:
            lines = f.read().splitlines()
        self.assertEqual(len(lines), 200)
        for line in lines:
            json.loads(line)

    def test_truncate(self):
        run = RunDirectory.create(self.root, {})
        self.assertEqual(run.read_jsonl("log.jsonl"), [])
        for i in range(5):
            run.append_jsonl("log.jsonl", {"candidate_id": i})
        kept = run.truncate_jsonl("log.jsonl",
                                  lambda e: e["candidate_id"] < 3)
        self.assertEqual(kept, 3)
        self.assertEqual(
            [e["candidate_id"] for e in run.read_jsonl("log.jsonl")],
            [0, 1, 2])


if __name__ == '__main__':
    unittest.main()
