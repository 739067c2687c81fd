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
from evo_transformers import PrimitiveOp as P
from evo_transformers.layers import kernels
from evo_transformers.layers.primitives import CONV_OPS
import os

sys.path.append(os.path.dirname(__file__))
import test_helper


def _x(*values):
    return torch.tensor(values, dtype=torch.float64).reshape(1, 1, -1)


class TestUnaryKernels(unittest.TestCase):
    def test_guards(self):
        x = _x(0.0, 2.0, -4.0)
        self.assertEqual(
            kernels.apply_unary(P.RECIP, x).flatten().tolist(),
            [0.0, 0.5, -0.25])
        root = kernels.apply_unary(P.ABS_ROOT, x).flatten().tolist()
        self.assertEqual(root[0], 0.0)
        self.assertAlmostEqual(root[1], 1.4142135623730951, places=15)
        self.assertEqual(root[2], 2.0)
        log = kernels.apply_unary(P.LOG, x).flatten()
        self.assertAlmostEqual(float(log[0]), -27.631021115928547, places=9)
        self.assertTrue(
            torch.isfinite(kernels.apply_unary(P.EXP, _x(1000.0))).all())

    def test_unguarded_overflow(self):
        with self.assertRaises(evo_transformers.NumericOverflow):
            kernels.apply_unary(P.EXP, _x(1000.0), guard=False)
        with self.assertRaises(evo_transformers.NumericOverflow):
            kernels.apply_unary(P.RECIP, _x(0.0), guard=False)

    def test_constant_ops(self):
        x = _x(-1.0, 0.5, 3.0)
        self.assertEqual(
            kernels.apply_unary(P.MAX, x, 0.5).flatten().tolist(),
            [0.5, 0.5, 3.0])
        self.assertEqual(
            kernels.apply_unary(P.MIN, x, 0.0).flatten().tolist(),
            [-1.0, 0.0, 0.0])
        self.assertEqual(
            kernels.apply_unary(P.C_MUL, x, 2.0).flatten().tolist(),
            [-2.0, 1.0, 6.0])

    def test_max_subgradient(self):
        x = _x(-1.0, 0.0, 2.0).requires_grad_()
        kernels.apply_unary(P.MAX, x, 0.0).sum().backward()
        self.assertEqual(x.grad.flatten().tolist(), [0.0, 0.0, 1.0])

    def test_rejects_other_families(self):
        with self.assertRaises(evo_transformers.ShapeMismatch):
            kernels.apply_unary(P.ADD, _x(1.0))


class TestStructuralKernels(unittest.TestCase):
    def test_binary_broadcast(self):
        x = torch.ones(2, 3, 4, dtype=torch.float64)
        y = torch.full((2, 3, 1), 2.0, dtype=torch.float64)
        self.assertTrue(
            torch.equal(kernels.apply_binary(P.DIVIDE, x, y),
                        torch.full((2, 3, 4), 0.5, dtype=torch.float64)))
        with self.assertRaises(evo_transformers.ShapeMismatch):
            kernels.apply_binary(P.ADD, x, torch.ones(2, 3, 2,
                                                      dtype=torch.float64))

    def test_divide_by_zero_guard(self):
        x = torch.ones(1, 1, 2, dtype=torch.float64)
        y = torch.zeros(1, 1, 2, dtype=torch.float64)
        self.assertEqual(
            kernels.apply_binary(P.DIVIDE, x, y).flatten().tolist(),
            [0.0, 0.0])

    def test_reductions_keep_dims(self):
        x = torch.arange(6, dtype=torch.float64).reshape(1, 2, 3)
        self.assertEqual(
            tuple(kernels.apply_reduction(P.RED_SUM, x).shape), (1, 2, 1))
        self.assertEqual(
            kernels.apply_reduction(P.RED_MAX, x).flatten().tolist(),
            [2.0, 5.0])

    def test_cumulative_runs_over_sequence(self):
        x = torch.ones(1, 4, 2, dtype=torch.float64)
        out = kernels.apply_cumulative(P.CUM_SUM, x)
        self.assertEqual(out[0, :, 0].tolist(), [1.0, 2.0, 3.0, 4.0])

    def test_band_lower(self):
        x = torch.ones(1, 3, 6, dtype=torch.float64)
        out = kernels.band_lower(x)[0]
        self.assertEqual(out[0].tolist(), [1, 0, 0, 1, 0, 0])
        self.assertEqual(out[2].tolist(), [1, 1, 1, 1, 1, 1])
        square = kernels.band_lower(torch.ones(1, 3, 3,
                                               dtype=torch.float64))
        self.assertTrue(torch.equal(square[0], torch.tril(torch.ones(
            3, 3, dtype=torch.float64))))

    def test_adapt_channels(self):
        x = torch.arange(3, dtype=torch.float64).reshape(1, 1, 3)
        self.assertEqual(
            kernels.adapt_channels(x, 7).flatten().tolist(),
            [0, 1, 2, 0, 1, 2, 0])
        self.assertEqual(
            kernels.adapt_channels(x, 2).flatten().tolist(), [0, 1])

    def test_matmul_shapes(self):
        a = torch.ones(2, 4, 3, dtype=torch.float64)
        b = torch.ones(2, 4, 3, dtype=torch.float64)
        scores = kernels.matmul_pair(P.T_MAT_MUL, a, b)
        self.assertEqual(tuple(scores.shape), (2, 4, 4))
        self.assertEqual(
            tuple(kernels.matmul_pair(P.MAT_MUL, scores, b).shape),
            (2, 4, 3))
        with self.assertRaises(evo_transformers.ShapeMismatch):
            kernels.matmul_pair(P.MAT_MUL, a, b)


def create_test(op):
    class TestConvKernel(unittest.TestCase):
        def test_causal(self):
            generator = torch.Generator().manual_seed(0)
            width = 4
            params = kernels.init_parameters(op, width, 6, generator)
            x = torch.randn(1, 10, width, generator=generator,
                            dtype=torch.float64)
            y = kernels.conv_spatial(op, x, 6, params)
            x2 = x.clone()
            x2[0, 5] += 1.0
            y2 = kernels.conv_spatial(op, x2, 6, params)
            self.assertTrue(torch.equal(y[:, :5], y2[:, :5]))
            self.assertEqual(y.shape[1], 10)
            expected = width if op.depthwise else 6
            self.assertEqual(y.shape[-1], expected)

        def test_parameter_shapes(self):
            shapes = kernels.parameter_shapes(op, 4, 6)
            if op is P.CONV_1X1:
                self.assertEqual(shapes, {"weight": (4, 6), "bias": (6, )})
            elif op.depthwise:
                self.assertEqual(shapes, {"weight": (4, 1, op.kernel_width)})
            else:
                self.assertEqual(shapes["weight"], (6, 4, op.kernel_width))

    globals()[f"TestConvKernel{op.name}"] = TestConvKernel


for op in CONV_OPS:
    create_test(op)

if __name__ == '__main__':
    unittest.main()
