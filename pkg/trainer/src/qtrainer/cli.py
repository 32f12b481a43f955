"""qmeta-train: train on a corpus file, then sample candidate programs."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .data import load_corpus
from .model import ModelConfig
from .sample import sample_candidates
from .train import TrainConfig, train


def _build_parser():
    parser = argparse.ArgumentParser(prog="qmeta-train")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--lr", type=float, default=1e-4)
    p.add_argument("--lr-after-first-epoch", type=float, default=1e-5)
    p.add_argument("--warmup-steps", type=int, default=1000)
    p.add_argument("--n-emb", type=int, default=128)
    p.add_argument("--n-layer", type=int, default=4)
    p.add_argument("--n-heads", type=int, default=4)
    p.add_argument("--dropout", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sample")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--seq-a", required=True,
                   help="file of space-separated source token ids")
    p.add_argument("--vocab", required=True, help="target vocabulary JSON")
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--out", required=True)
    p.add_argument("--target-name", default="target")
    p.add_argument("--top-p", type=float, default=None)
    p.add_argument("--temperature", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "train":
        corpus = load_corpus(args.corpus)
        src_v, tgt_v = corpus.vocab_sizes()
        model_cfg = ModelConfig(
            src_vocab_size=src_v, tgt_vocab_size=tgt_v,
            src_max_len=max(corpus.src_max_len, 8),
            tgt_max_len=max(corpus.tgt_max_len, 8),
            n_emb=args.n_emb, n_layer=args.n_layer, n_heads=args.n_heads,
            dropout=args.dropout)
        train_cfg = TrainConfig(
            steps=args.steps, batch_size=args.batch_size, lr=args.lr,
            lr_after_first_epoch=args.lr_after_first_epoch,
            warmup_steps=args.warmup_steps, seed=args.seed)
        ckpt = train(corpus, model_cfg, train_cfg, args.out)
        print(json.dumps({"checkpoint": str(ckpt),
                          "samples": len(corpus)}))
        return 0
    if args.command == "sample":
        seq_a = [int(t) for t in Path(args.seq_a).read_text().split()]
        report = sample_candidates(
            args.checkpoint, seq_a, args.count, args.vocab, args.out,
            target_name=args.target_name, top_p=args.top_p,
            temperature=args.temperature, seed=args.seed)
        print(json.dumps(report))
        return 0
    return 1


if __name__ == "__main__":
    sys.exit(main())
