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
"""Fixed-budget language model training.

Every update runs the stack forward onto a Tape, differentiates the recorded
loss with ``layers.autograd.backward`` and hands the gradients to torch's Adam
after global-norm clipping. Budgets count either optimizer steps or wall-clock
seconds; hurdle thresholds are given in the same unit.
"""

import dataclasses
import logging
import math
from typing import Callable, List, Optional, Sequence

import contexttimer
import torch
import torch.nn.functional as F

from ..config import TrainConfig
from ..errors import NumericOverflow
from ..layers.autograd import Tape, backward
from ..layers.modeling_decoder import DecoderStack
from .corpus import Corpus
from .record import CurvePoint, FitnessRecord, degeneracy_ceiling, \
    write_curve_csv
from .schedule import build_scheduler

__all__ = ['HurdleHook', 'TrainResult', 'Trainer', 'train', 'next_token_loss']

logger = logging.getLogger(__name__)

# (hurdle index, fitness at the hurdle) -> keep training
HurdleHook = Callable[[int, float], bool]


def next_token_loss(logits: torch.Tensor,
                    targets: torch.Tensor) -> torch.Tensor:
    return F.cross_entropy(logits.reshape(-1, logits.shape[-1]),
                           targets.reshape(-1))


@dataclasses.dataclass
class TrainResult:
    record: FitnessRecord
    curve: List[CurvePoint]

    def write_csv(self, path: str):
        write_curve_csv(path, self.curve)


class Trainer:
    def __init__(self,
                 stack: DecoderStack,
                 corpus: Corpus,
                 config: TrainConfig,
                 hurdles: Sequence[float] = (),
                 hurdle_hook: Optional[HurdleHook] = None,
                 candidate_id: Optional[int] = None):
        if corpus.vocab > stack.vocab:
            raise ValueError(
                f"corpus vocabulary {corpus.vocab} exceeds the stack's "
                f"{stack.vocab}")
        if config.seq_len != stack.seq_len:
            raise ValueError(
                f"train sequence length {config.seq_len} differs from the "
                f"stack's {stack.seq_len}")
        if any(b <= a for a, b in zip(hurdles, hurdles[1:])):
            raise ValueError("hurdle thresholds must increase")
        self.stack = stack
        self.corpus = corpus
        self.config = config
        self.hurdles = tuple(hurdles)
        self.hurdle_hook = hurdle_hook
        self.candidate_id = candidate_id
        self.ceiling = degeneracy_ceiling(stack.vocab)
        self.generator = torch.Generator().manual_seed(config.seed)
        self.parameters = dict(stack.named_parameters())
        self.optimizer = torch.optim.Adam(self.parameters.values(),
                                          lr=config.peak_lr,
                                          betas=config.betas,
                                          eps=config.eps)
        self.scheduler = build_scheduler(self.optimizer, config.warmup_steps)

    def evaluate(self) -> float:
        """Mean validation loss over the fixed held-out windows."""
        total, count = 0.0, 0
        with torch.no_grad():
            for x, y in self.corpus.valid_batches(
                    self.config.sequences_per_batch, self.config.seq_len,
                    self.config.eval_batches):
                loss = float(next_token_loss(self.stack(x), y))
                total += loss * y.numel()
                count += y.numel()
        loss = total / count
        if not math.isfinite(loss):
            raise NumericOverflow("validation loss")
        return loss

    def step(self) -> float:
        x, y = self.corpus.train_batch(self.config.sequences_per_batch,
                                       self.config.seq_len, self.generator)
        tape = Tape()
        loss = tape.record_loss(next_token_loss(self.stack(x, tape), y))
        if not bool(torch.isfinite(loss)):
            raise NumericOverflow("train loss")
        grads = backward(tape)
        grads.assign_to(self.parameters)
        torch.nn.utils.clip_grad_norm_(self.parameters.values(),
                                       self.config.clip_norm)
        self.optimizer.step()
        self.scheduler.step()
        return float(loss)

    def _budget_used(self, steps: int, seconds: float) -> float:
        return steps if self.config.budget_unit == "steps" else seconds

    def run(self) -> TrainResult:
        config = self.config
        curve: List[CurvePoint] = []
        steps, hurdle, stopped = 0, 0, False
        train_loss = valid_loss = float("nan")
        next_eval = config.eval_interval
        parameters = self.stack.parameter_count()

        def degenerate(error: str, elapsed: float) -> TrainResult:
            logger.warning("candidate %s degenerate after %d steps: %s",
                           self.candidate_id, steps, error)
            return TrainResult(
                FitnessRecord.degenerate_record(self.candidate_id,
                                                self.stack.vocab, error,
                                                hurdle, steps, elapsed,
                                                parameters), curve)

        with contexttimer.Timer() as timer:
            try:
                valid_loss = self.evaluate()
                curve.append(CurvePoint(0, timer.elapsed, valid_loss,
                                        valid_loss))
                while self._budget_used(steps, timer.elapsed) < config.budget:
                    train_loss = self.step()
                    steps += 1
                    used = self._budget_used(steps, timer.elapsed)
                    at_hurdle = hurdle < len(self.hurdles) and \
                        used >= self.hurdles[hurdle]
                    finished = used >= config.budget
                    if used >= next_eval or at_hurdle or finished:
                        valid_loss = self.evaluate()
                        curve.append(
                            CurvePoint(steps, timer.elapsed, train_loss,
                                       valid_loss))
                        while next_eval <= used:
                            next_eval += config.eval_interval
                    if at_hurdle and not finished:
                        fitness = math.exp(min(valid_loss, self.ceiling))
                        keep = self.hurdle_hook is None or \
                            self.hurdle_hook(hurdle, fitness)
                        logger.info("candidate %s hurdle %d at %g: %s",
                                    self.candidate_id, hurdle, used,
                                    "pass" if keep else "stop")
                        if not keep:
                            stopped = True
                            break
                        hurdle += 1
            except NumericOverflow as e:
                return degenerate(str(e), timer.elapsed)
            elapsed = timer.elapsed

        if valid_loss > self.ceiling:
            return degenerate(f"loss {valid_loss:.4f} above ceiling", elapsed)
        if not stopped:
            hurdle = len(self.hurdles)
        record = FitnessRecord.from_loss(valid_loss,
                                         candidate_id=self.candidate_id,
                                         hurdle=hurdle,
                                         steps=steps,
                                         wall_seconds=elapsed,
                                         degenerate=False,
                                         stopped_early=stopped,
                                         parameters=parameters)
        logger.info("candidate %s: loss %.4f after %d steps (%.1f s)",
                    self.candidate_id, valid_loss, steps, elapsed)
        return TrainResult(record, curve)


def train(stack: DecoderStack,
          corpus: Corpus,
          config: TrainConfig,
          hurdle_hook: Optional[HurdleHook] = None,
          hurdles: Sequence[float] = (),
          candidate_id: Optional[int] = None) -> TrainResult:
    """Next-token training under ``config.budget``.

    Args:
        stack: the decoder stack; trained in place.
        corpus: byte-level corpus; validation uses its held-out tail.
        config: budget, batch and optimizer settings.
        hurdle_hook: consulted once per threshold in ``hurdles`` with the
            perplexity reached there; returning False stops training.
        hurdles: increasing thresholds in the budget unit.
    Returns:
        TrainResult with the FitnessRecord and the validation curve.
    """
    return Trainer(stack, corpus, config, hurdles, hurdle_hook,
                   candidate_id).run()
