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
import dataclasses
import tempfile
import numpy as np
import torch
import evo_transformers
from evo_transformers import Call, Corpus, EvoTransformersError, \
    FitnessRecord, Instruction, MutationStall, PrimitiveOp as P
from evo_transformers.config import SearchConfig
import os

sys.path.append(os.path.dirname(__file__))
import test_helper

DEAD_OPS = (P.SIN, P.COS, P.TANH, P.SIGMOID, P.ABS, P.SQUARE, P.ADD,
            P.MULTIPLY, P.MAX, P.MIN, P.DIFFERENCE)


def _keeps_sites(instr: Instruction) -> bool:
    # binary primitives key their width resolution on the instruction index
    if isinstance(instr.op, Call) or instr.op is evo_transformers.IDENTITY:
        return True
    return not instr.op.uses_input2 or instr.input1 == instr.input2


def dead_code_sites(dna):
    """(subprogram, position) pairs where an unread instruction can go
    without moving any later width resolution."""
    sites = []
    for s, sub in enumerate(dna.subprograms):
        for p in range(len(sub)):
            if all(_keeps_sites(i) for i in sub.instructions[p:]):
                sites.append((s, p))
    return sites


def try_compile(dna, **changes):
    try:
        return evo_transformers.compile_program(
            dna, test_helper.toy_compile_config(**changes))
    except EvoTransformersError:
        return None


class TestDeadCodeFuzz(unittest.TestCase):
    def test_unread_instructions_change_nothing(self):
        rng = np.random.default_rng(0)
        config = test_helper.toy_compile_config()
        seeds = [
            evo_transformers.get_seed(name)
            for name in ("transformer", "primer", "primer_ez")
        ]
        cases = 500 if test_helper.SLOW else 40
        for case in range(cases):
            dna = seeds[case % len(seeds)]
            sites = dead_code_sites(dna)
            s, p = sites[int(rng.integers(len(sites)))]
            instr = Instruction(DEAD_OPS[int(rng.integers(len(DEAD_OPS)))],
                                int(rng.integers(p + 2)),
                                int(rng.integers(p + 2)))
            padded = dna.with_subprogram(
                s,
                evo_transformers.insert_instruction(dna.subprograms[s], p,
                                                    instr))
            self.assertEqual(evo_transformers.canonical_hash(padded, config),
                             evo_transformers.canonical_hash(dna, config),
                             f"case {case}: {instr} at s{s}.{p + 2}")
            a = evo_transformers.compile_program(dna, config)
            b = evo_transformers.compile_program(padded, config)
            x = test_helper.random_block_input(a, seed=case)
            with torch.no_grad():
                self.assertTrue(torch.equal(a(x), b(x)), f"case {case}")


class TestMutatedCausality(unittest.TestCase):
    def test_mutants_stay_causal(self):
        rng = np.random.default_rng(1)
        wanted = 50 if test_helper.SLOW else 8
        trials = 100 if test_helper.SLOW else 10
        parents = [
            evo_transformers.transformer_seed(),
            evo_transformers.get_seed("primer")
        ]
        checked = 0
        for attempt in range(40 * wanted):
            if checked == wanted:
                break
            parent = parents[attempt % len(parents)]
            try:
                child, _ = evo_transformers.mutate(
                    parent, rng, test_helper.toy_compile_config())
            except MutationStall:
                continue
            graph = try_compile(child)
            if graph is None:
                continue
            report = evo_transformers.verify_causality(graph,
                                                       trials=trials,
                                                       seed=attempt)
            self.assertTrue(report.passed, str(report.first_violation))
            checked += 1
            parents.append(child)
        self.assertEqual(checked, wanted)


class TestMutationClosure(unittest.TestCase):
    def test_children_are_well_formed(self):
        rng = np.random.default_rng(2)
        config = test_helper.toy_compile_config()
        corpus = Corpus.from_file(test_helper.CORPUS_PATH)
        eval_config = test_helper.toy_eval_config(budget=2, warmup=1,
                                                  eval_interval=2)
        rounds = 10000 if test_helper.SLOW else 200
        parent = evo_transformers.transformer_seed()
        stalls = 0
        for n in range(rounds):
            try:
                child, mutations = evo_transformers.mutate(
                    parent, rng, config)
            except MutationStall:
                stalls += 1
                continue
            self.assertGreaterEqual(len(mutations), 1)
            text = evo_transformers.serialize_program(child)
            self.assertEqual(
                evo_transformers.serialize_program(
                    evo_transformers.parse_canonical(text)), text)
            graph = try_compile(child)
            if graph is not None:
                self.assertNotEqual(
                    evo_transformers.canonical_hash(child, config),
                    evo_transformers.canonical_hash(parent, config))
                parent = child
            if n % 50 == 0:
                record = evo_transformers.evaluate_fitness(
                    child, eval_config, corpus)
                self.assertIsInstance(record, FitnessRecord)
                if graph is None:
                    self.assertTrue(record.degenerate)
        self.assertLess(stalls, rounds)


@unittest.skipUnless(test_helper.SLOW, "set EVO_TRANSFORMERS_SLOW_TESTS=1")
class TestDegeneracyRate(unittest.TestCase):
    def test_random_programs_mostly_degenerate(self):
        rng = np.random.default_rng(3)
        seed = evo_transformers.transformer_seed()
        corpus = Corpus.from_file(test_helper.CORPUS_PATH)
        eval_config = test_helper.toy_eval_config(budget=50)
        eval_config = dataclasses.replace(
            eval_config,
            compile=dataclasses.replace(eval_config.compile,
                                        numeric_guards=False))
        records = [
            evo_transformers.evaluate_fitness(
                evo_transformers.random_dna(rng, seed.num_instructions(),
                                            len(seed.subprograms)),
                eval_config, corpus) for _ in range(60)
        ]
        rate = sum(r.degenerate for r in records) / len(records)
        print(f"degenerate rate {rate:.2f}")
        self.assertGreaterEqual(rate, 0.4)


@unittest.skipUnless(test_helper.SLOW, "set EVO_TRANSFORMERS_SLOW_TESTS=1")
class TestSearchProgress(unittest.TestCase):
    def search(self, seed, random_init, root):
        config = SearchConfig(population_size=20,
                              tournament_size=5,
                              candidates=300,
                              hurdles=2,
                              proxy_fraction=1.0,
                              random_init=random_init,
                              seed=seed)
        return evo_transformers.run_search(
            evo_transformers.transformer_seed(), config,
            test_helper.toy_eval_config(budget=300, eval_interval=100,
                                        seed=seed),
            Corpus.from_file(test_helper.CORPUS_PATH),
            os.path.join(root, f"{seed}-{random_init}"))

    def test_search_improves_on_its_start(self):
        improved = beats_random = 0
        with tempfile.TemporaryDirectory() as root:
            for seed in range(5):
                entries = self.search(seed, False, root).entries[20:]
                first = np.median([e.record.fitness for e in entries[:50]])
                last = np.median([e.record.fitness for e in entries[-50:]])
                improved += last < first
                random_best = min(
                    e.record.fitness
                    for e in self.search(seed, True, root).entries)
                beats_random += min(e.record.fitness
                                    for e in entries) < random_best
        self.assertGreaterEqual(improved, 4)
        self.assertGreaterEqual(beats_random, 4)


if __name__ == '__main__':
    unittest.main()
