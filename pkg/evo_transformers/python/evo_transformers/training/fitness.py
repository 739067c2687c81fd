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
"""Program fitness: resize, compile, stack, train.

``evaluate_program`` is total. Whatever goes wrong between parsing and the
last validation pass ends up as a degenerate FitnessRecord carrying the
exception text, so a search never dies on a bad candidate.
"""

import logging
from typing import Optional, Sequence

import contexttimer
import numpy as np
import torch

from ..compiler.graph import compile_program
from ..config import EvalConfig
from ..errors import ShapeMismatch
from ..layers.modeling_decoder import DecoderStack, build_stack
from ..program.dna import Dna
from .corpus import Corpus
from .record import FitnessRecord
from .trainer import HurdleHook, TrainResult, train

__all__ = [
    'build_model', 'evaluate_program', 'evaluate_fitness',
    'measure_inference'
]

logger = logging.getLogger(__name__)


def build_model(dna: Dna, eval_config: EvalConfig) -> DecoderStack:
    compile_config = eval_config.compile
    stack_config = eval_config.stack
    graph = compile_program(dna, compile_config, eval_config.min_params,
                            eval_config.max_params, stack_config)
    return build_stack(graph, stack_config.n_layers, stack_config.vocab,
                       graph.d_model, stack_config.tie_embeddings,
                       compile_config.seed)


def evaluate_program(dna: Dna,
                     eval_config: EvalConfig,
                     corpus: Corpus,
                     hurdle_hook: Optional[HurdleHook] = None,
                     hurdles: Sequence[float] = (),
                     candidate_id: Optional[int] = None) -> TrainResult:
    vocab = eval_config.stack.vocab
    try:
        stack = build_model(dna, eval_config)
        return train(stack, corpus, eval_config.train, hurdle_hook, hurdles,
                     candidate_id)
    except Exception as e:  # pylint: disable=broad-except
        logger.warning("candidate %s failed: %s: %s", candidate_id,
                       type(e).__name__, e)
        return TrainResult(
            FitnessRecord.degenerate_record(candidate_id, vocab,
                                            f"{type(e).__name__}: {e}"), [])


def evaluate_fitness(dna: Dna,
                     eval_config: EvalConfig,
                     corpus: Corpus,
                     hurdle_hook: Optional[HurdleHook] = None,
                     hurdles: Sequence[float] = (),
                     candidate_id: Optional[int] = None) -> FitnessRecord:
    """Fitness of ``dna`` under the fixed training budget; never raises."""
    return evaluate_program(dna, eval_config, corpus, hurdle_hook, hurdles,
                            candidate_id).record


def measure_inference(stack: DecoderStack,
                      batch: int,
                      seq: int,
                      repeats: int = 5,
                      seed: int = 0) -> float:
    """Median seconds of one forward pass, after a warm-up pass."""
    if repeats < 3:
        raise ValueError(f"repeats must be >= 3, got {repeats}")
    if seq != stack.seq_len:
        raise ShapeMismatch(
            f"stack compiled for sequence length {stack.seq_len}, got {seq}")
    generator = torch.Generator().manual_seed(seed)
    tokens = torch.randint(0, stack.vocab, (batch, seq), generator=generator)
    timings = []
    with torch.no_grad():
        stack(tokens)
        for _ in range(repeats):
            with contexttimer.Timer() as t:
                stack(tokens)
            timings.append(t.elapsed)
    return float(np.median(timings))
