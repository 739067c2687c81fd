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
"""
evo_transformers Benchmark Utils

Usage:
    benchmark <program> [--runtime=<r>] [--seq_len=<int>] [--batch_size=<int>] [-n <int>] [--scale_unit=<int>] [--layers=<int>] [--vocab=<int>] [--num_threads=<int>]

Options:
    --runtime=<r>        How the block is run (compiled, interpreter) [default: compiled].
    --seq_len=<int>      The sequence length [default: 64].
    --batch_size=<int>   The batch size [default: 1].
    -n <int>             The iteration count [default: 100].
    --scale_unit=<int>   The scale unit of the compiled block [default: 8].
    --layers=<int>       Decoder blocks in the stack [default: 2].
    --vocab=<int>        Vocabulary size [default: 256].
    --num_threads=<int>  The number of CPU threads. [default: 4]
"""

import json
import os

import contexttimer
import docopt
import numpy
import torch

import evo_transformers
from evo_transformers.config import CompileConfig


def load_program(source):
    if os.path.exists(source):
        return evo_transformers.load_program(source)
    return evo_transformers.get_seed(source)


def run_model(model, num_iter, **fields):
    # warm up
    model()
    timings = []
    for it in range(num_iter):
        with contexttimer.Timer() as t:
            model()
        timings.append(t.elapsed)
    elapsed = sum(timings)
    print(
        json.dumps({
            "QPS": num_iter / elapsed,
            "elapsed": elapsed,
            "median_seconds": float(numpy.median(timings)),
            "n": num_iter,
            **fields
        }))


def benchmark_compiled(dna, config, batch_size, layers, vocab, n, **fields):
    with evo_transformers.pref_guard("compile"):
        block = evo_transformers.compile_program(dna, config)
        stack = evo_transformers.build_stack(block, layers, vocab,
                                             block.d_model)
    tokens = torch.randint(0, vocab, (batch_size, config.seq_len),
                           generator=torch.Generator().manual_seed(0))

    def model():
        with torch.no_grad():
            return stack(tokens)

    run_model(model, n, parameters=stack.parameter_count(), **fields)


def benchmark_interpreter(dna, config, batch_size, n, **fields):
    with evo_transformers.pref_guard("compile"):
        block = evo_transformers.compile_program(dna, config)
    x = torch.randn((batch_size, config.seq_len, block.d_model),
                    generator=torch.Generator().manual_seed(0),
                    dtype=torch.float64)

    def model():
        with torch.no_grad():
            return evo_transformers.interpret(dna, block, x)

    run_model(model, n, parameters=block.parameter_count(), **fields)


def main():
    args = docopt.docopt(__doc__)
    num_threads = int(args['--num_threads'])
    evo_transformers.set_num_threads(num_threads)
    evo_transformers.set_stderr_verbose_level(0)
    dna = load_program(args['<program>'])
    seq_len = int(args['--seq_len'])
    batch_size = int(args['--batch_size'])
    config = CompileConfig(scale_unit=int(args['--scale_unit']),
                           batch=batch_size,
                           seq_len=seq_len)
    fields = {
        'batch_size': batch_size,
        'seq_len': seq_len,
        'program': args['<program>'],
        'runtime': args['--runtime'],
        'thread_num': num_threads,
    }
    n = int(args['-n'])
    if args['--runtime'] == 'compiled':
        benchmark_compiled(dna, config, batch_size, int(args['--layers']),
                           int(args['--vocab']), n, **fields)
    elif args['--runtime'] == 'interpreter':
        benchmark_interpreter(dna, config, batch_size, n, **fields)
    else:
        raise RuntimeError(f"Not supported runtime {args['--runtime']}")


if __name__ == '__main__':
    main()
