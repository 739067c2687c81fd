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
import contextlib
import io
import json
import tempfile
import evo_transformers
from evo_transformers.cli import main
import os

sys.path.append(os.path.dirname(__file__))
import test_helper

TOY = ["--scale-unit", "4", "--seq-len", "8", "--log-level", "0"]
TOY_TRAIN = TOY + [
    "--batch-tokens", "64", "--budget", "10", "--warmup", "5",
    "--eval-interval", "5", "--layers", "1"
]


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def fixture(name):
    return os.path.join(test_helper.ANALYSIS_DIR, name)


class TestCompileCommand(unittest.TestCase):
    def test_primer_listing(self):
        code, out, _ = run_cli(["compile", "primer", "--flattened",
                                "--causality-trials", "5"] + TOY)
        self.assertEqual(code, 0)
        self.assertIn("DEPTHWISE_CONV_3X1", out)
        self.assertIn("causality: passed", out)
        self.assertIn("d_model: 32", out)

    def test_program_file_and_dot(self):
        path = os.path.join(test_helper.SEEDS_DIR, "transformer.dna")
        with tempfile.TemporaryDirectory() as tmp:
            dot = os.path.join(tmp, "block.dot")
            code, out, _ = run_cli(["compile", path, "--dot", dot,
                                    "--causality-trials", "5"] + TOY)
            self.assertEqual(code, 0)
            self.assertIn("block_parameters: 12864", out)
            self.assertTrue(
                test_helper.read_text(dot).startswith("digraph"))

    def test_malformed_program(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "bad.dna")
            with open(path, "w") as f:
                f.write("garbage\n")
            code, _, err = run_cli(["compile", path] + TOY)
        self.assertEqual(code, 1)
        self.assertIn("ParseError", err)

    def test_unknown_program(self):
        code, _, err = run_cli(["compile", "no_such_program"] + TOY)
        self.assertEqual(code, 1)
        self.assertIn("ValueError", err)

    def test_usage(self):
        code, _, _ = run_cli(["frobnicate"])
        self.assertEqual(code, 1)


class TestAnalyzeCommand(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()
        self.out = self.tmp.name

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def analyze(self, *argv):
        return run_cli(["analyze"] + list(argv) +
                       ["--out", self.out, "--log-level", "0"])

    def read_json(self, name):
        with open(os.path.join(self.out, name)) as f:
            return json.load(f)

    def test_fit(self):
        code, out, _ = self.analyze("fit", fixture("power_law.csv"))
        self.assertEqual(code, 0)
        fit = self.read_json("fits.json")["power_law"]
        self.assertAlmostEqual(fit["a"], 2.0, places=9)
        self.assertAlmostEqual(fit["k"], 0.5, places=9)
        self.assertTrue(os.path.exists(os.path.join(self.out, "fits.csv")))

    def test_outputs_carry_the_config_hash(self):
        code, out, _ = self.analyze("fit", fixture("power_law.csv"))
        self.assertEqual(code, 0)
        self.assertIn(f"run: {self.out}", out)
        snapshot = self.read_json("config.json")
        self.assertEqual(snapshot["config"]["mode"], "fit")
        self.assertEqual(snapshot["config"]["inputs"],
                         [os.path.abspath(fixture("power_law.csv"))])
        self.assertEqual(self.read_json("fits.json")["hash"],
                         snapshot["hash"])
        # same configuration reruns in place, a different one is refused
        code, _, _ = self.analyze("fit", fixture("power_law.csv"))
        self.assertEqual(code, 0)
        code, _, err = self.analyze("fit", fixture("power_law.csv"),
                                    "--plain")
        self.assertEqual(code, 1)
        self.assertIn("differs", err)

    def test_speedup(self):
        code, _, _ = self.analyze("speedup", fixture("baseline.csv"),
                                  fixture("treatment_2x.csv"))
        self.assertEqual(code, 0)
        payload = self.read_json("speedup.json")
        self.assertTrue(payload["reached"])
        self.assertAlmostEqual(payload["factor"], 2.0, places=9)

    def test_speedup_not_reached(self):
        args = ("speedup", fixture("treatment_2x.csv"),
                fixture("baseline.csv"))
        code, _, _ = self.analyze(*args)
        self.assertEqual(code, 0)
        self.assertFalse(self.read_json("speedup.json")["reached"])
        code, _, _ = self.analyze(*(args + ("--strict", )))
        self.assertEqual(code, 1)

    def test_savings(self):
        code, _, _ = self.analyze("savings", fixture("baseline.csv"),
                                  fixture("treatment_2x.csv"))
        self.assertEqual(code, 0)
        payload = self.read_json("savings.json")
        self.assertAlmostEqual(payload["savings"]["b"], 2.0, places=6)
        self.assertAlmostEqual(payload["baseline"]["a"], 2.0, places=6)
        rows = test_helper.read_text(os.path.join(
            self.out, "savings.csv")).splitlines()
        self.assertEqual(rows[0],
                         "loss,baseline_compute,treatment_compute,savings")
        self.assertGreater(len(rows), 20)

    def test_savings_needs_two_curves(self):
        code, _, err = self.analyze("savings", fixture("baseline.csv"))
        self.assertEqual(code, 1)
        self.assertIn("ValueError", err)

    def test_pareto(self):
        code, out, _ = self.analyze("pareto", fixture("pareto_points.csv"))
        self.assertEqual(code, 0)
        front = self.read_json("pareto.json")["front"]
        self.assertEqual([p["label"] for p in front], ["fast", "accurate"])
        self.assertNotIn("dominated", out)


class TestTrainingCommands(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def test_train(self):
        run_dir = os.path.join(self.tmp.name, "train")
        code, out, _ = run_cli(["train", "transformer",
                                test_helper.CORPUS_PATH, "--run-dir",
                                run_dir] + TOY_TRAIN)
        self.assertEqual(code, 0)
        for name in ("config.json", "program.dna", "curve.csv",
                     "record.json"):
            self.assertTrue(os.path.exists(os.path.join(run_dir, name)),
                            name)
        curve = evo_transformers.read_curve_csv(
            os.path.join(run_dir, "curve.csv"))
        self.assertEqual([p.step for p in curve], [0, 5, 10])
        self.assertTrue(
            evo_transformers.load_program(os.path.join(
                run_dir, "program.dna")).structurally_equal(
                    evo_transformers.transformer_seed()))

    def test_ablate(self):
        run_dir = os.path.join(self.tmp.name, "ablate")
        code, out, _ = run_cli(["ablate", "transformer",
                                test_helper.CORPUS_PATH, "squared_relu",
                                "post_softmax_spatial_gating",
                                "--variable-seq-len", "--run-dir", run_dir
                                ] + TOY_TRAIN)
        self.assertEqual(code, 0)
        with open(os.path.join(run_dir, "ablation.json")) as f:
            rows = json.load(f)["rows"]
        self.assertEqual([r["variant"] for r in rows], [
            "baseline", "+SQUARED_RELU", "+POST_SOFTMAX_SPATIAL_GATING"
        ])
        self.assertTrue(rows[2]["skipped"])
        self.assertEqual(rows[0]["delta"], 0.0)

    def test_search(self):
        run_dir = os.path.join(self.tmp.name, "search")
        code, out, _ = run_cli([
            "search", test_helper.CORPUS_PATH, "--population", "2",
            "--tournament", "2", "--candidates", "1", "--hurdles", "0",
            "--proxy-fraction", "1.0", "--top", "2", "--run-dir", run_dir
        ] + TOY_TRAIN)
        self.assertEqual(code, 0)
        self.assertIn("candidate", out)
        log = os.path.join(run_dir, "search_log.jsonl")
        self.assertEqual(len(test_helper.read_text(log).splitlines()), 3)
        self.assertTrue(
            os.path.exists(os.path.join(run_dir, "top", "top.json")))


if __name__ == '__main__':
    unittest.main()
