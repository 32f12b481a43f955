"""Corpus and vocabulary file access.

The trainer talks to the generator pipeline only through its files: a
JSON-lines corpus (fields a_ids/b_ids/a_text/b_text/config/seed) with a
manifest alongside, and token->id vocabulary JSON files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .model import PAD


@dataclass
class Corpus:
    sources: list[list[int]]
    targets: list[list[int]]
    manifest: dict

    def __len__(self) -> int:
        return len(self.sources)

    @property
    def src_max_len(self) -> int:
        return max(len(s) for s in self.sources)

    @property
    def tgt_max_len(self) -> int:
        return max(len(t) for t in self.targets)

    def vocab_sizes(self) -> tuple[int, int]:
        src = 1 + max(max(s) for s in self.sources)
        tgt = 1 + max(max(t) for t in self.targets)
        return src, tgt


def load_corpus(path) -> Corpus:
    path = Path(path)
    sources, targets = [], []
    for line in path.read_text().splitlines():
        if not line:
            continue
        d = json.loads(line)
        sources.append(list(d["a_ids"]))
        targets.append(list(d["b_ids"]))
    if not sources:
        raise ValueError(f"corpus {path} contains no records")
    manifest_path = Path(str(path) + ".manifest.json")
    manifest = json.loads(manifest_path.read_text()) if manifest_path.exists() else {}
    return Corpus(sources, targets, manifest)


def load_vocab(path) -> dict[str, int]:
    mapping = json.loads(Path(path).read_text())
    if len(set(mapping.values())) != len(mapping):
        raise ValueError(f"vocabulary {path} is not injective")
    return mapping


def pad_batch(seqs: list[list[int]], device=None) -> torch.Tensor:
    width = max(len(s) for s in seqs)
    out = torch.full((len(seqs), width), PAD, dtype=torch.long, device=device)
    for i, s in enumerate(seqs):
        out[i, : len(s)] = torch.tensor(s, dtype=torch.long)
    return out


def batches(corpus: Corpus, batch_size: int, rng: np.random.Generator):
    """One epoch of shuffled (src, tgt) tensor batches."""
    order = rng.permutation(len(corpus))
    for start in range(0, len(order), batch_size):
        idx = order[start:start + batch_size]
        yield (pad_batch([corpus.sources[i] for i in idx]),
               pad_batch([corpus.targets[i] for i in idx]))
