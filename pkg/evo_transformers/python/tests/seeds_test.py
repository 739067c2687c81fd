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
import torch
import evo_transformers
from evo_transformers import ModificationFlag, ActivationKind
import os

sys.path.append(os.path.dirname(__file__))
import test_helper


def create_test(flag):
    class TestModification(unittest.TestCase):
        def setUp(self) -> None:
            self.seed = evo_transformers.transformer_seed()

        def test_idempotent(self):
            once = evo_transformers.apply_modification(self.seed, flag)
            twice = evo_transformers.apply_modification(once, flag)
            self.assertTrue(once.structurally_equal(twice))
            self.assertFalse(once.structurally_equal(self.seed))

        def test_compiles_causally(self):
            dna = evo_transformers.apply_modification(self.seed, flag)
            graph = evo_transformers.compile_program(
                dna, test_helper.toy_compile_config())
            report = evo_transformers.verify_causality(graph, trials=5)
            self.assertTrue(report.passed)

        def test_needs_seed_layout(self):
            small = evo_transformers.Dna.from_lists(
                [[evo_transformers.Instruction(evo_transformers.PrimitiveOp.ADD,
                                               0, 1)]], [0.0, 1.0],
                [1, 2, 4, 8, 16, 32])
            with self.assertRaises(
                    evo_transformers.ModificationNotApplicable):
                evo_transformers.apply_modification(small, flag)

    globals()[f"TestModification{flag.name}"] = TestModification


for flag in ModificationFlag:
    create_test(flag)


class TestSeedLibrary(unittest.TestCase):
    def test_primer_ez_is_two_flags(self):
        dna = evo_transformers.apply_modifications(
            evo_transformers.transformer_seed(),
            [ModificationFlag.SQUARED_RELU, ModificationFlag.MDHA])
        self.assertTrue(
            dna.structurally_equal(evo_transformers.primer_ez()))

    def test_gelu_claims_free_constant(self):
        dna = evo_transformers.transformer_gelu()
        self.assertEqual(dna.constants, (1.702, 0.125))

    def test_unknown_seed(self):
        with self.assertRaises(ValueError):
            evo_transformers.get_seed("lstm")

    def test_seed_block_formula(self):
        for unit in (1, 4, 16):
            graph = evo_transformers.compile_program(
                evo_transformers.transformer_seed(),
                test_helper.toy_compile_config(scale_unit=unit))
            d = 8 * unit
            self.assertEqual(graph.parameter_count(),
                             evo_transformers.seed_block_parameters(
                                 d, 4 * d))

    def test_primer_moves_the_feed_forward_norm(self):
        def norm_ops(dna):
            lines = evo_transformers.emit_flattened(dna, 64).splitlines()
            names = [line.split()[1] for line in lines]
            return names.count("ABS_SQUARE_ROOT"), names.count("REDUCE_MEAN")

        self.assertEqual(norm_ops(evo_transformers.primer()), (2, 4))
        self.assertEqual(norm_ops(evo_transformers.primer()),
                         norm_ops(evo_transformers.transformer_seed()))
        self.assertEqual(norm_ops(evo_transformers.primer()),
                         norm_ops(evo_transformers.primer_verbatim()))

    def test_spatial_gating_needs_fixed_length(self):
        with self.assertRaises(evo_transformers.ModificationNotApplicable):
            evo_transformers.apply_modification(
                evo_transformers.transformer_seed(),
                ModificationFlag.POST_SOFTMAX_SPATIAL_GATING,
                variable_seq_len=True)


class TestParseFlags(unittest.TestCase):
    def test_names(self):
        self.assertEqual(
            evo_transformers.parse_flags(["squared_relu", "MDHA", " ",
                                          "shared-qk"]),
            [ModificationFlag.SQUARED_RELU, ModificationFlag.MDHA,
             ModificationFlag.SHARED_QK])

    def test_unknown(self):
        with self.assertRaises(ValueError):
            evo_transformers.parse_flags(["moe"])


class TestActivations(unittest.TestCase):
    def test_reglu_with_tied_weights_is_squared_relu(self):
        generator = torch.Generator().manual_seed(0)
        for trial in range(1000):
            x = torch.randn((3, 5), generator=generator, dtype=torch.float64)
            u = torch.randn((5, 4), generator=generator, dtype=torch.float64)
            gated = evo_transformers.activation(ActivationKind.REGLU, x, u, u)
            expected = evo_transformers.squared_relu(torch.matmul(x, u))
            self.assertTrue(
                torch.allclose(gated, expected, rtol=1e-12, atol=0.0),
                f"trial {trial}")

    def test_squared_relu_grows_quadratically(self):
        x = torch.tensor([1e3, -1e3], dtype=torch.float64)
        self.assertTrue(
            torch.equal(evo_transformers.squared_relu(x),
                        torch.tensor([1e6, 0.0], dtype=torch.float64)))
        self.assertTrue(
            torch.equal(
                evo_transformers.activation(ActivationKind.SQUARED_RELU, x),
                torch.tensor([1e6, 0.0], dtype=torch.float64)))

    def test_glu_needs_weights(self):
        with self.assertRaises(evo_transformers.ContractViolation):
            evo_transformers.activation(ActivationKind.SWIGLU,
                                        torch.ones((2, 2),
                                                   dtype=torch.float64))

    def test_pointwise(self):
        x = torch.tensor([-2.0, 0.0, 3.0], dtype=torch.float64)
        self.assertTrue(
            torch.equal(evo_transformers.squared_relu(x),
                        torch.tensor([0.0, 0.0, 9.0], dtype=torch.float64)))
        self.assertTrue(
            torch.allclose(
                evo_transformers.activation(ActivationKind.GELU_APPROX, x),
                torch.nn.functional.gelu(x, approximate="tanh")))
        self.assertTrue(
            torch.allclose(
                evo_transformers.activation(ActivationKind.SWISH, x),
                torch.nn.functional.silu(x)))

    def test_norms(self):
        generator = torch.Generator().manual_seed(1)
        x = torch.randn((2, 8, 16), generator=generator, dtype=torch.float64)
        y = evo_transformers.layer_norm(x)
        self.assertTrue(
            torch.allclose(y.mean(-1), torch.zeros((2, 8),
                                                    dtype=torch.float64),
                           atol=1e-12))
        # mean((x - mu) * x) equals the variance
        self.assertTrue(
            torch.allclose(evo_transformers.custom_norm(x), y, atol=1e-10))
        constant = torch.ones((1, 2, 4), dtype=torch.float64)
        self.assertTrue(
            torch.equal(evo_transformers.layer_norm(constant),
                        torch.zeros_like(constant)))

    def test_mdha_projection_is_causal(self):
        generator = torch.Generator().manual_seed(2)
        x = torch.randn((1, 6, 8), generator=generator, dtype=torch.float64)
        y = evo_transformers.mdha_projection(x, 4)
        self.assertEqual(y.shape, (1, 6, 4))
        x2 = x.clone()
        x2[0, 4] += 1.0
        y2 = evo_transformers.mdha_projection(x2, 4)
        self.assertTrue(torch.equal(y[0, :4], y2[0, :4]))
        self.assertFalse(torch.equal(y[0, 4:], y2[0, 4:]))


if __name__ == '__main__':
    unittest.main()
