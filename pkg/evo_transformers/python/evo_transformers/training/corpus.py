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
"""Byte-level corpora.

Token ids are raw bytes, so a file of newline-delimited text and a binary file
are read the same way. The last ``valid_fraction`` of the bytes is held out;
train windows never cross into it.
"""

import logging
import os
from typing import Iterator, Optional, Tuple

import numpy as np
import torch

from ..errors import InvalidData

__all__ = ['Corpus', 'BYTE_VOCAB', 'VALID_FRACTION']

logger = logging.getLogger(__name__)

BYTE_VOCAB = 256
VALID_FRACTION = 0.1


class Corpus:
    def __init__(self,
                 tokens,
                 vocab: int = BYTE_VOCAB,
                 valid_fraction: float = VALID_FRACTION,
                 name: str = ""):
        tokens = torch.as_tensor(np.asarray(tokens, dtype=np.int64))
        if tokens.dim() != 1 or tokens.numel() < 2:
            raise InvalidData("a corpus needs at least two tokens")
        if not 0.0 < valid_fraction < 1.0:
            raise ValueError(
                f"valid_fraction must be in (0, 1), got {valid_fraction}")
        if int(tokens.min()) < 0 or int(tokens.max()) >= vocab:
            raise InvalidData(
                f"token ids must lie in [0, {vocab}), got "
                f"[{int(tokens.min())}, {int(tokens.max())}]")
        self.tokens = tokens
        self.vocab = vocab
        self.name = name
        split = int(round(tokens.numel() * (1.0 - valid_fraction)))
        self.split = min(max(split, 1), tokens.numel() - 1)

    @staticmethod
    def from_bytes(data: bytes, name: str = "", **kwargs) -> 'Corpus':
        return Corpus(np.frombuffer(data, dtype=np.uint8), BYTE_VOCAB,
                      name=name, **kwargs)

    @staticmethod
    def from_file(path: str, **kwargs) -> 'Corpus':
        with open(path, "rb") as f:
            data = f.read()
        logger.info("corpus %s: %d bytes", path, len(data))
        return Corpus.from_bytes(data, name=os.path.basename(path), **kwargs)

    def __len__(self):
        return self.tokens.numel()

    @property
    def train_tokens(self) -> torch.Tensor:
        return self.tokens[:self.split]

    @property
    def valid_tokens(self) -> torch.Tensor:
        return self.tokens[self.split:]

    def _check_window(self, part: torch.Tensor, seq_len: int, what: str):
        if part.numel() < seq_len + 1:
            raise InvalidData(
                f"{what} split holds {part.numel()} tokens, a window of "
                f"{seq_len} needs {seq_len + 1}")

    def train_batch(self, batch: int, seq_len: int,
                    generator: torch.Generator
                    ) -> Tuple[torch.Tensor, torch.Tensor]:
        """Random windows of the train split.

        Returns:
            (inputs, targets), both [batch, seq_len]; targets are the inputs
            shifted by one token.
        """
        part = self.train_tokens
        self._check_window(part, seq_len, "train")
        starts = torch.randint(0,
                               part.numel() - seq_len, (batch, ),
                               generator=generator)
        windows = torch.stack([part[s:s + seq_len + 1] for s in starts])
        return windows[:, :-1], windows[:, 1:]

    def valid_batches(self,
                      batch: int,
                      seq_len: int,
                      count: Optional[int] = None
                      ) -> Iterator[Tuple[torch.Tensor, torch.Tensor]]:
        """Fixed contiguous windows of the held-out tail, in order.

        Yields at most ``count`` batches; a short final batch is dropped
        unless it is the only one.
        """
        part = self.valid_tokens
        self._check_window(part, seq_len, "validation")
        n_windows = (part.numel() - 1) // seq_len
        windows = [
            part[i * seq_len:i * seq_len + seq_len + 1]
            for i in range(n_windows)
        ]
        produced = 0
        for start in range(0, n_windows, batch):
            chunk = windows[start:start + batch]
            if len(chunk) < batch and produced > 0:
                break
            stacked = torch.stack(chunk)
            yield stacked[:, :-1], stacked[:, 1:]
            produced += 1
            if count is not None and produced >= count:
                break
