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
import numpy as np
import torch
import evo_transformers
from evo_transformers.config import StackConfig
from evo_transformers.layers.utils import named_tensors
import os

sys.path.append(os.path.dirname(__file__))
import test_helper


def create_test(tie_embeddings):
    class TestDecoderStack(unittest.TestCase):
        def setUp(self) -> None:
            self.dna = evo_transformers.primer_ez()
            self.block = evo_transformers.compile_program(
                self.dna, test_helper.toy_compile_config())
            self.stack = evo_transformers.build_stack(self.block, 2, 256, 32,
                                                      tie_embeddings)
            generator = torch.Generator().manual_seed(0)
            self.tokens = torch.randint(0, 256, (2, test_helper.TOY_SEQ),
                                        generator=generator)

        def test_parameter_count(self):
            expected = evo_transformers.stack_parameter_count(
                self.dna, self.block.config,
                StackConfig(2, 256, tie_embeddings))
            self.assertEqual(self.stack.parameter_count(), expected)
            self.assertEqual(
                sum(p.numel() for p in
                    evo_transformers.to_param_dict(self.stack).values()),
                expected)

        def test_logits(self):
            with torch.no_grad():
                logits = self.stack(self.tokens)
                from_numpy = self.stack(self.tokens.numpy())
            self.assertEqual(logits.shape, (2, test_helper.TOY_SEQ, 256))
            self.assertEqual(logits.dtype, torch.float64)
            self.assertTrue(torch.equal(logits, from_numpy))

        def test_next_token_causality(self):
            changed = self.tokens.clone()
            changed[:, 5] = (changed[:, 5] + 1) % 256
            with torch.no_grad():
                a, b = self.stack(self.tokens), self.stack(changed)
            self.assertTrue(torch.equal(a[:, :5], b[:, :5]))
            self.assertFalse(torch.equal(a[:, 5:], b[:, 5:]))

        def test_layers_are_independent(self):
            tensors = named_tensors(self.stack)
            first = {k[len("blocks.0."):]: v for k, v in tensors.items()
                     if k.startswith("blocks.0.")}
            self.assertGreater(len(first), 0)
            for name, value in first.items():
                other = tensors["blocks.1." + name]
                if value.std() > 0:
                    self.assertFalse(np.array_equal(value, other), name)

        def test_bad_tokens(self):
            with self.assertRaises(evo_transformers.ShapeMismatch):
                self.stack(torch.zeros((2, 4), dtype=torch.long))
            with self.assertRaises(evo_transformers.ShapeMismatch):
                self.stack(torch.zeros((8, ), dtype=torch.long))

        def test_qps(self):
            with torch.no_grad():
                _, qps, time_consume = test_helper.run_model(
                    lambda: self.stack(self.tokens), num_iter=10)
            print(f"decoder stack tie={tie_embeddings}: {qps:.1f} qps, "
                  f"{time_consume * 1000:.3f} ms")

    globals()[f"TestDecoderStack{'Tied' if tie_embeddings else 'Untied'}"] \
        = TestDecoderStack


for tie_embeddings in [True, False]:
    create_test(tie_embeddings)


class TestBuildStack(unittest.TestCase):
    def test_width_mismatch(self):
        block = test_helper.compile_seed("transformer")
        with self.assertRaises(evo_transformers.CompileError):
            evo_transformers.build_stack(block, 2, 256, 64)
        with self.assertRaises(ValueError):
            evo_transformers.build_stack(block, 0, 256, 32)


if __name__ == '__main__':
    unittest.main()
