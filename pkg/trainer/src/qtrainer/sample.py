"""Candidate generation: nucleus sampling plus detokenization to files.

Sampled id sequences are detokenized through a vocabulary JSON file by
plain concatenation (codes tokenize without ambiguity), and written one
candidate per ``<target>_<k>.code`` file for the evaluation pipeline.
Sequences containing ids outside the vocabulary are dropped with a note;
generations that never emit EOS are truncated and flagged.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import torch

from .data import load_vocab, pad_batch
from .train import load_checkpoint


class VocabMismatchError(ValueError):
    """Vocabulary file does not match any hash the checkpoint trained with."""


def _vocab_file_hash(path) -> str:
    mapping = json.loads(Path(path).read_text())
    ordered = dict(sorted(mapping.items(), key=lambda kv: kv[1]))
    return hashlib.sha256(json.dumps(ordered, indent=1).encode()).hexdigest()


def detokenize(ids: list[int], vocab: dict[str, int]) -> str | None:
    """Ids -> text; None if any id has no token (caller drops the sample)."""
    id_to_token = {i: t for t, i in vocab.items()}
    parts = []
    for i in ids:
        tok = id_to_token.get(i)
        if tok is None:
            return None
        if tok.startswith("<"):
            continue
        parts.append(tok)
    return "".join(parts)


def sample_candidates(checkpoint_path, seq_a: list[int], count: int,
                      vocab_path, out_dir, target_name: str = "target",
                      top_p: float | None = None, temperature: float | None = None,
                      seed: int = 0, device: str = "cpu") -> dict:
    """Sample ``count`` candidate programs for one input sequence.

    Returns a small report: files written, drop/truncation counts.
    """
    model = load_checkpoint(checkpoint_path, device)
    vocab = load_vocab(vocab_path)
    trained_hashes = torch.load(checkpoint_path, map_location="cpu",
                                weights_only=False).get("vocab_hashes")
    if trained_hashes:
        if _vocab_file_hash(vocab_path) not in trained_hashes.values():
            raise VocabMismatchError(
                f"{vocab_path} does not match the corpus vocabularies the "
                f"checkpoint was trained on")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    src = pad_batch([list(seq_a)], device=device)
    generator = torch.Generator(device=device)
    generator.manual_seed(seed)

    written, dropped, truncated = [], 0, 0
    for k in range(count):
        ids, was_truncated = model.generate(
            src, top_p=top_p, temperature=temperature, generator=generator)
        truncated += was_truncated
        text = detokenize(ids, vocab)
        if text is None:
            dropped += 1
            continue
        if not text.endswith("\n"):
            text += "\n"
        path = out_dir / f"{target_name}_{k}.code"
        path.write_text(text)
        written.append(str(path))
    return {"written": written, "dropped": dropped, "truncated": truncated,
            "count": count}
