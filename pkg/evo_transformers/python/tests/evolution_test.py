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
import math
import numpy as np
import evo_transformers
from evo_transformers import Dna, FitnessRecord, Individual, Instruction, \
    MutationKind, Population, PrimitiveOp as P, Subprogram
from evo_transformers.config import CompileConfig
import os

sys.path.append(os.path.dirname(__file__))
import test_helper

BANKS = ([0.0, 1.0], [1, 2, 4, 8, 16, 32])


class TestHurdles(unittest.TestCase):
    def test_thresholds(self):
        schedule = evo_transformers.build_hurdles(4, 25200)
        expected = [812.903, 2438.710, 5690.323, 12193.548]
        for got, want in zip(schedule.thresholds, expected):
            self.assertAlmostEqual(got, want, places=2)
        self.assertAlmostEqual(schedule.expected_budget(), 4064.516,
                               places=2)
        self.assertEqual(schedule.stop_budget(1), schedule.thresholds[1])
        self.assertEqual(schedule.stop_budget(4), 25200)

    def test_equal_band_compute(self):
        # half the survivors stop at each hurdle
        for n in range(1, 6):
            schedule = evo_transformers.build_hurdles(n, 1000.0)
            bounds = (0.0, ) + schedule.thresholds + (1000.0, )
            bands = [(b - a) * 0.5**i
                     for i, (a, b) in enumerate(zip(bounds, bounds[1:]))]
            for band in bands:
                self.assertAlmostEqual(band, bands[0])

    def test_simulated_spend_matches_budget_law(self):
        total = 25200.0
        schedule = evo_transformers.build_hurdles(4, total, window=501)
        rng = np.random.default_rng(0)
        candidates = 20000
        spend = 0.0
        stopped = [0] * (schedule.n + 1)
        for _ in range(candidates):
            reached = 0
            while reached < schedule.n and schedule.gate(reached,
                                                         rng.random()):
                reached += 1
            stopped[reached] += 1
            spend += schedule.stop_budget(reached)
        self.assertAlmostEqual(schedule.expected_budget(), 5 * total / 31)
        self.assertAlmostEqual(spend / candidates / schedule.expected_budget(),
                               1.0,
                               delta=0.05)
        # roughly half of the candidates reaching a hurdle stop there
        reaching = candidates
        for i in range(schedule.n):
            self.assertAlmostEqual(stopped[i] / reaching, 0.5, delta=0.05)
            reaching -= stopped[i]

    def test_no_hurdles(self):
        schedule = evo_transformers.build_hurdles(0, 50)
        self.assertEqual(schedule.thresholds, ())
        self.assertEqual(schedule.expected_budget(), 50)

    def test_resolution(self):
        with self.assertRaises(evo_transformers.InvalidSchedule):
            evo_transformers.build_hurdles(10, 100, resolution=1.0)
        with self.assertRaises(ValueError):
            evo_transformers.build_hurdles(2, 0)

    def test_gate_uses_running_median(self):
        schedule = evo_transformers.build_hurdles(1, 100)
        self.assertTrue(schedule.gate(0, 10.0))
        self.assertTrue(schedule.gate(0, 5.0))
        self.assertFalse(schedule.gate(0, 9.0))
        self.assertEqual(schedule.median(0), 9.0)
        self.assertTrue(schedule.gate(0, 9.0))
        with self.assertRaises(IndexError):
            schedule.gate(1, 1.0)

    def test_window(self):
        schedule = evo_transformers.build_hurdles(1, 100, window=2)
        for fitness in (1.0, 100.0, 200.0):
            schedule.record(0, fitness)
        self.assertEqual(schedule.median(0), 150.0)
        restored = evo_transformers.HurdleSchedule.from_dict(
            schedule.to_dict())
        self.assertEqual(restored.median(0), 150.0)
        self.assertEqual(restored.thresholds, schedule.thresholds)


class TestEdits(unittest.TestCase):
    def setUp(self) -> None:
        self.sub = Subprogram((Instruction(P.ADD, 0, 1),
                               Instruction(P.SIN, 2, 2),
                               Instruction(P.MULTIPLY, 3, 2)))

    def test_delete_rewires_readers(self):
        sub = evo_transformers.delete_instruction(self.sub, 0)
        self.assertEqual(sub.instructions,
                         (Instruction(P.SIN, 0, 0),
                          Instruction(P.MULTIPLY, 2, 0)))

    def test_delete_last_leaves_identity(self):
        sub = evo_transformers.delete_instruction(
            Subprogram((Instruction(P.ADD, 0, 1), )), 0)
        self.assertEqual(len(sub), 1)
        self.assertIs(sub[0].op, evo_transformers.IDENTITY)

    def test_insert_shifts_reads(self):
        sub = evo_transformers.insert_instruction(self.sub, 1,
                                                  Instruction(P.EXP, 2, 2))
        self.assertEqual(sub.instructions[1], Instruction(P.EXP, 2, 2))
        self.assertEqual(sub.instructions[2], Instruction(P.SIN, 2, 2))
        self.assertEqual(sub.instructions[3],
                         Instruction(P.MULTIPLY, 4, 2))

    def test_swap_keeps_wiring(self):
        sub = evo_transformers.swap_instructions(self.sub, 0, 2)
        self.assertEqual(sub.instructions[0], Instruction(P.MULTIPLY, 0, 1))
        self.assertEqual(sub.instructions[2], Instruction(P.ADD, 3, 2))


def create_test(kind):
    class TestMutationKind(unittest.TestCase):
        def test_children_are_valid(self):
            rng = np.random.default_rng(kind.value)
            dna = evo_transformers.primer()
            for _ in range(50):
                # construction validates the child
                dna, mutation = evo_transformers.apply_mutation(dna, rng,
                                                                kind)
                self.assertIsInstance(dna, Dna)
                self.assertEqual(mutation.kind, kind)
            self.assertEqual(len(dna.subprograms), 10)

    globals()[f"TestMutationKind{kind.name}"] = TestMutationKind


for kind in MutationKind:
    create_test(kind)


class TestMutate(unittest.TestCase):
    def test_child_differs(self):
        config = CompileConfig()
        parent = evo_transformers.transformer_seed()
        parent_hash = evo_transformers.canonical_hash(parent, config)
        for seed in range(20):
            child, mutations = evo_transformers.mutate(
                parent, np.random.default_rng(seed), config)
            self.assertGreaterEqual(len(mutations), 1)
            try:
                child_hash = evo_transformers.canonical_hash(child, config)
            except evo_transformers.CompileError:
                continue
            self.assertNotEqual(child_hash, parent_hash)

    def test_seeded(self):
        parent = evo_transformers.transformer_seed()
        a, ma = evo_transformers.mutate(parent, np.random.default_rng(3))
        b, mb = evo_transformers.mutate(parent, np.random.default_rng(3))
        self.assertEqual(a, b)
        self.assertEqual([str(m) for m in ma], [str(m) for m in mb])

    def test_stall(self):
        with self.assertRaises(evo_transformers.MutationStall):
            evo_transformers.mutate(evo_transformers.transformer_seed(),
                                    np.random.default_rng(0),
                                    max_attempts=0)

    def test_random_dna(self):
        rng = np.random.default_rng(1)
        for length, subs in ((1, 1), (8, 3), (40, 10)):
            dna = evo_transformers.random_dna(rng, length, subs)
            self.assertEqual(dna.num_instructions(), length)
            self.assertEqual(len(dna.subprograms), subs)
        with self.assertRaises(ValueError):
            evo_transformers.random_dna(rng, 2, 3)


def individual(candidate_id, loss):
    record = FitnessRecord.from_loss(loss, candidate_id=candidate_id,
                                     hurdle=0, steps=1, wall_seconds=0.0,
                                     degenerate=False)
    dna = Dna.from_lists([[Instruction(P.ADD, 0, 1)]], *BANKS)
    return Individual(candidate_id, dna, record)


class TestPopulation(unittest.TestCase):
    def test_aging(self):
        population = Population(3)
        for i in range(3):
            self.assertIsNone(population.add(individual(i, 1.0 + i)))
        evicted = population.add(individual(3, 0.5))
        self.assertEqual(evicted.candidate_id, 0)
        self.assertEqual([ind.candidate_id for ind in population], [1, 2, 3])
        self.assertEqual(population.best().candidate_id, 3)

    def test_tournament(self):
        population = Population(4, [individual(i, 2.0) for i in range(4)])
        rng = np.random.default_rng(0)
        # whole population drawn: ties go to the newest
        self.assertEqual(population.tournament(rng, 4).candidate_id, 3)
        self.assertEqual(len(population.sample(rng, 10)), 4)

    def test_bad_use(self):
        with self.assertRaises(ValueError):
            Population(0)
        with self.assertRaises(ValueError):
            Population(2).sample(np.random.default_rng(0), 1)


if __name__ == '__main__':
    unittest.main()
