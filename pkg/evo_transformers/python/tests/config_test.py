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

import evo_transformers
from evo_transformers.config import CompileConfig, EvalConfig, SearchConfig, \
    StackConfig, TrainConfig, config_hash, config_to_dict, parse_budget, \
    parse_count


class TestParsing(unittest.TestCase):
    def test_budget(self):
        self.assertEqual(parse_budget("500"), (500.0, "steps"))
        self.assertEqual(parse_budget("20steps"), (20.0, "steps"))
        self.assertEqual(parse_budget("300s"), (300.0, "seconds"))
        self.assertEqual(parse_budget("2m"), (120.0, "seconds"))
        self.assertEqual(parse_budget("7h"), (25200.0, "seconds"))
        with self.assertRaises(ValueError):
            parse_budget("soon")

    def test_count(self):
        self.assertEqual(parse_count("500000"), 500000)
        self.assertEqual(parse_count("0.5M"), 500000)
        self.assertEqual(parse_count("35k"), 35000)
        with self.assertRaises(ValueError):
            parse_count("lots")


class TestConfigs(unittest.TestCase):
    def test_d_model(self):
        self.assertEqual(CompileConfig(scale_unit=64).d_model, 512)
        with self.assertRaises(ValueError):
            CompileConfig().d_model

    def test_validation(self):
        with self.assertRaises(ValueError):
            StackConfig(n_layers=0)
        with self.assertRaises(ValueError):
            TrainConfig(budget_unit="epochs")
        with self.assertRaises(ValueError):
            TrainConfig(budget=10, warmup_steps=50)
        with self.assertRaises(ValueError):
            EvalConfig(CompileConfig(seq_len=32), StackConfig(),
                       TrainConfig(seq_len=64))
        with self.assertRaises(ValueError):
            EvalConfig(min_params=10)
        with self.assertRaises(ValueError):
            SearchConfig(population_size=5, tournament_size=6)
        with self.assertRaises(ValueError):
            SearchConfig(proxy_fraction=0.0)

    def test_hash(self):
        a = config_to_dict(EvalConfig())
        b = config_to_dict(EvalConfig(train=TrainConfig(seed=1)))
        self.assertEqual(config_hash(a), config_hash(config_to_dict(
            EvalConfig())))
        self.assertNotEqual(config_hash(a), config_hash(b))
        self.assertAlmostEqual(evo_transformers.config.DEFAULT_PROXY_FRACTION,
                               7 / 24)


if __name__ == '__main__':
    unittest.main()
