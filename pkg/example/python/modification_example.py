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
import os

import torch
import evo_transformers
from evo_transformers.config import CompileConfig, EvalConfig, StackConfig, \
    TrainConfig

CORPUS = os.path.join(os.path.dirname(__file__), "..", "..", "data",
                      "tiny_corpus.txt")


def eval_config(seq_len=32, steps=200):
    return EvalConfig(
        CompileConfig(scale_unit=4, seq_len=seq_len),
        StackConfig(n_layers=2, vocab=256),
        TrainConfig(batch_tokens=16 * seq_len,
                    seq_len=seq_len,
                    budget=steps,
                    warmup_steps=20,
                    eval_interval=20))


def test():
    evo_transformers.set_stderr_verbose_level(1)
    # use 4 threads for computing
    evo_transformers.set_num_threads(4)
    config = eval_config()
    corpus = evo_transformers.Corpus.from_file(CORPUS)

    # a seed program with one modification folded in
    base = evo_transformers.get_seed("transformer")
    treated = evo_transformers.apply_modification(
        base, evo_transformers.ModificationFlag.SQUARED_RELU)
    print(evo_transformers.serialize_program(treated))

    block = evo_transformers.compile_program(treated, config.compile)
    report = evo_transformers.verify_causality(block, trials=20)
    assert report.passed, report.first_violation
    print(evo_transformers.dump_text(block))

    curves = []
    for name, dna in (("transformer", base), ("+squared_relu", treated)):
        result = evo_transformers.evaluate_program(dna, config, corpus)
        print(f"{name}: perplexity {result.record.perplexity:.3f}")
        curves.append(
            evo_transformers.LossCurve.from_points(
                [(p.step, p.valid_loss) for p in result.curve if p.step > 0],
                name))

    try:
        crossing = evo_transformers.speedup_report(*curves)
        print(f"speedup {crossing.factor:.2f}")
    except evo_transformers.NotReached as e:
        print(e)

    stack = evo_transformers.build_model(treated, config)
    seconds = evo_transformers.measure_inference(stack, 1,
                                                 config.compile.seq_len)
    print(f"inference {seconds * 1e3:.2f} ms")

    tokens = torch.randint(0, 256, (1, config.compile.seq_len))
    with torch.no_grad():
        logits = stack(tokens)
    assert logits.shape == (1, config.compile.seq_len, 256)


if __name__ == "__main__":
    test()
