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
import math
import tempfile
import evo_transformers
from evo_transformers import Corpus, FitnessRecord
from evo_transformers.config import SearchConfig
import os

sys.path.append(os.path.dirname(__file__))
import test_helper


class SyntheticEvaluator:
    """Loss grows with program length; hurdles are consulted in order."""
    def __init__(self):
        self.calls = 0

    def __call__(self, dna, eval_config, corpus, hook, hurdles,
                 candidate_id):
        self.calls += 1
        loss = 1.0 + 0.01 * dna.num_instructions()
        fields = dict(candidate_id=candidate_id,
                      wall_seconds=0.0,
                      degenerate=False)
        for i, threshold in enumerate(hurdles):
            if hook is not None and not hook(i, math.exp(loss)):
                return FitnessRecord.from_loss(loss,
                                               hurdle=i,
                                               steps=int(threshold),
                                               stopped_early=True,
                                               **fields)
        return FitnessRecord.from_loss(loss,
                                       hurdle=len(hurdles),
                                       steps=int(eval_config.train.budget),
                                       **fields)


def search_config(**changes):
    fields = dict(population_size=4,
                  tournament_size=2,
                  candidates=8,
                  hurdles=1,
                  proxy_fraction=1.0,
                  top_n=3,
                  seed=0)
    fields.update(changes)
    return SearchConfig(**fields)


class TestSearch(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        cls.corpus = Corpus.from_file(test_helper.CORPUS_PATH)
        cls.eval_config = test_helper.toy_eval_config(budget=30)

    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def run_dir(self, name="run"):
        return os.path.join(self.tmp.name, name)

    def search(self, config, name="run", resume=False, evaluate=None):
        return evo_transformers.run_search(
            evo_transformers.transformer_seed(), config, self.eval_config,
            self.corpus, self.run_dir(name), resume, evaluate
            or SyntheticEvaluator())

    def test_log_numbering(self):
        result = self.search(search_config())
        self.assertEqual([e.candidate_id for e in result.entries],
                         list(range(12)))
        for entry in result.entries[:4]:
            self.assertIsNone(entry.parent_id)
            self.assertEqual(entry.mutation, "seed")
        for entry in result.entries[4:]:
            self.assertLess(entry.parent_id, entry.candidate_id)
            self.assertNotEqual(entry.mutation, "seed")
        program = evo_transformers.parse_canonical(result.entries[5].program)
        self.assertEqual(program.metadata.birth_step, 5)

    def test_seed_copies_train_once(self):
        evaluator = SyntheticEvaluator()
        result = self.search(search_config(candidates=0),
                             evaluate=evaluator)
        self.assertEqual(evaluator.calls, 1)
        self.assertEqual(len(result.entries), 4)
        self.assertEqual(len(result.best), 1)
        self.assertTrue(
            os.path.exists(
                os.path.join(self.run_dir(), "top",
                             "rank00_candidate0.dna")))

    def test_reproducible(self):
        a = self.search(search_config(), "a")
        b = self.search(search_config(), "b")
        self.assertEqual([e.program for e in a.entries],
                         [e.program for e in b.entries])
        self.assertEqual([e.record.fitness for e in a.entries],
                         [e.record.fitness for e in b.entries])

    def test_top(self):
        result = self.search(search_config())
        programs = [e.program for e in result.best]
        self.assertEqual(len(programs), len(set(programs)))
        fitnesses = [e.record.fitness for e in result.best]
        self.assertEqual(fitnesses, sorted(fitnesses))
        top = result.run.read_json("top/top.json")
        self.assertEqual([t["candidate_id"] for t in top["top"]],
                         [e.candidate_id for e in result.best])
        self.assertEqual(top["hash"], result.run.config_hash)

    def test_resume_truncates_log(self):
        config = search_config()
        first = self.search(config)
        with open(os.path.join(self.run_dir(), "search_log.jsonl"),
                  "a") as f:
            f.write(json.dumps({"candidate_id": 12}) + "\n")
        resumed = self.search(config, resume=True)
        self.assertEqual([e.candidate_id for e in resumed.entries],
                         [e.candidate_id for e in first.entries])

    def test_existing_directory(self):
        self.search(search_config(candidates=0))
        with self.assertRaises(ValueError):
            self.search(search_config(candidates=0))
        with self.assertRaises(ValueError):
            self.search(search_config(candidates=1), resume=True)

    def test_mutation_stall_ends_the_search(self):
        evaluator = SyntheticEvaluator()
        with self.assertLogs("RegularizedEvolution", level="WARNING"):
            result = self.search(search_config(max_mutation_attempts=0),
                                 evaluate=evaluator)
        self.assertIn("could not be mutated", result.stalled)
        self.assertEqual([e.candidate_id for e in result.entries],
                         list(range(4)))
        self.assertEqual(len(result.best), 1)
        checkpoint = result.run.read_json("checkpoint.json")
        self.assertEqual(checkpoint["next_candidate"], 4)
        self.assertEqual(checkpoint["stalled"], result.stalled)
        top = result.run.read_json("top/top.json")
        self.assertEqual(top["stalled"], result.stalled)
        self.assertEqual([t["candidate_id"] for t in top["top"]], [0])

    def test_proxy_budget(self):
        config = evo_transformers.proxy_eval_config(
            test_helper.toy_eval_config(budget=24, warmup=5),
            SearchConfig(proxy_fraction=0.25))
        self.assertEqual(config.train.budget, 6)
        self.assertEqual(config.train.warmup_steps, 5)

    def test_real_training(self):
        result = self.search(search_config(population_size=2,
                                           candidates=2,
                                           hurdles=0),
                             evaluate=evo_transformers.evaluate_fitness)
        self.assertEqual(len(result.entries), 4)
        for entry in result.entries:
            self.assertGreater(entry.record.fitness, 1.0)


if __name__ == '__main__':
    unittest.main()
