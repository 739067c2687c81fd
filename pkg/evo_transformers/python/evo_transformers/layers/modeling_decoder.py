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


import logging
from typing import Optional

import torch
from torch import nn

from ..errors import CompileError, ShapeMismatch
from .kernels import DTYPE
from .modeling_block import CompiledGraph
from .utils import check_rank, try_convert

__all__ = ['DecoderStack', 'build_stack', 'EMBEDDING_STD']

logger = logging.getLogger(__name__)

EMBEDDING_STD = 0.02


class DecoderStack(nn.Module):
    """Decoder-only language model around a compiled block.
    .. mermaid::
       graph BT
          A[tokens]
          B[embedding + positional embedding]
          C[block x L]
          D[projection]
          O[logits]
          A --> B
          B --> C
          C --> D
          D --> O
    Args:
        blocks: L compiled blocks with independent parameters.
        vocab: number of token ids.
        tie_embeddings: reuse the embedding table as output projection (plus
            a vocab bias) instead of a separate linear layer.
        seed: initialization seed of the embedding tables and projection.
    """
    def __init__(self,
                 blocks,
                 vocab: int,
                 tie_embeddings: bool = True,
                 seed: int = 0):
        super(DecoderStack, self).__init__()
        if len(blocks) < 1:
            raise ValueError("a stack needs at least one block")
        self.blocks = nn.ModuleList(blocks)
        first = self.blocks[0]
        self.d_model = first.d_model
        self.seq_len = first.seq_len
        self.vocab = vocab
        self.tie_embeddings = tie_embeddings
        generator = torch.Generator().manual_seed(seed)

        def normal(*shape):
            t = torch.empty(shape, dtype=DTYPE)
            return nn.Parameter(t.normal_(0.0, EMBEDDING_STD,
                                          generator=generator))

        self.embedding = normal(vocab, self.d_model)
        self.positional = normal(self.seq_len, self.d_model)
        if tie_embeddings:
            self.projection = None
        else:
            self.projection = normal(self.d_model, vocab)
        self.projection_bias = nn.Parameter(torch.zeros(vocab, dtype=DTYPE))

    @property
    def n_layers(self) -> int:
        return len(self.blocks)

    def parameter_count(self) -> int:
        return sum(p.numel() for p in self.parameters())

    def _project(self, h: torch.Tensor) -> torch.Tensor:
        weight = self.embedding.t() if self.projection is None \
            else self.projection
        return torch.matmul(h, weight) + self.projection_bias

    def forward(self, tokens, tape=None) -> torch.Tensor:
        """
        Args:
            tokens: [batch, seq_len] token ids (tensor or numpy array).
            tape: optional Tape; parameters are watched and every block
                node, the embedding and the projection are recorded.
        Returns:
            logits [batch, seq_len, vocab].
        """
        tokens = try_convert(tokens, torch.long)
        check_rank(tokens, 2, "tokens")
        if tokens.shape[1] != self.seq_len:
            raise ShapeMismatch(
                f"stack compiled for sequence length {self.seq_len}, got "
                f"{tokens.shape[1]}")
        if tape is not None:
            tape.watch(self.named_parameters())
        h = self.embedding[tokens] + self.positional
        if tape is not None:
            tape.record("EMBED", (self.embedding, self.positional), h)
        for block in self.blocks:
            h = block(h, tape)
        logits = self._project(h)
        if tape is not None:
            tape.record("PROJECT", (h, ), logits,
                        lambda args: self._project(args[0]))
        return logits

    def extra_repr(self) -> str:
        return (f"n_layers={self.n_layers}, d_model={self.d_model}, "
                f"vocab={self.vocab}, tie_embeddings={self.tie_embeddings}")

    @staticmethod
    def from_block(block: CompiledGraph,
                   n_layers: int,
                   vocab: int,
                   tie_embeddings: bool = True,
                   seed: Optional[int] = None):
        """Stacks ``n_layers`` replicas of ``block``, each initialized from
        its own seed."""
        if n_layers < 1:
            raise ValueError(f"n_layers must be >= 1, got {n_layers}")
        base = block.config.seed if seed is None else seed
        blocks = [block.replicate(base + layer) for layer in range(n_layers)]
        return DecoderStack(blocks, vocab, tie_embeddings, base)


def build_stack(block: CompiledGraph,
                n_layers: int,
                vocab: int,
                d_model: int,
                tie_embeddings: bool = True,
                seed: Optional[int] = None) -> DecoderStack:
    if block.d_model != d_model or \
            block.nodes[block.output].width != d_model:
        raise CompileError(
            f"block maps width {block.d_model} to "
            f"{block.nodes[block.output].width}, stack needs {d_model}")
    stack = DecoderStack.from_block(block, n_layers, vocab, tie_embeddings,
                                    seed)
    logger.info("stack of %d blocks: %d parameters", n_layers,
                stack.parameter_count())
    return stack
