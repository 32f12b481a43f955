"""Training loop: Adam with a first-epoch learning-rate drop.

Emits a checkpoint (model weights plus config and corpus fingerprint)
and a step,loss,lr CSV curve.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .data import Corpus, batches
from .model import ModelConfig, Seq2Seq


@dataclass
class TrainConfig:
    steps: int = 2000
    batch_size: int = 32
    lr: float = 1e-4
    lr_after_first_epoch: float = 1e-5
    warmup_steps: int = 1000
    seed: int = 0
    log_every: int = 50


class TrainerError(RuntimeError):
    pass


def _lr_at(step: int, steps_per_epoch: int, cfg: TrainConfig) -> float:
    base = cfg.lr if step < steps_per_epoch else cfg.lr_after_first_epoch
    if cfg.warmup_steps and step < cfg.warmup_steps:
        base *= (step + 1) / cfg.warmup_steps
    return base


def train(corpus: Corpus, model_cfg: ModelConfig, train_cfg: TrainConfig,
          out_dir, device: str = "cpu") -> Path:
    """Train on a corpus; returns the checkpoint path."""
    src_needed, tgt_needed = corpus.vocab_sizes()
    if src_needed > model_cfg.src_vocab_size or tgt_needed > model_cfg.tgt_vocab_size:
        raise TrainerError(
            f"corpus ids need vocab sizes >= ({src_needed}, {tgt_needed}), "
            f"model has ({model_cfg.src_vocab_size}, {model_cfg.tgt_vocab_size})")
    if corpus.src_max_len > model_cfg.src_max_len or corpus.tgt_max_len > model_cfg.tgt_max_len:
        raise TrainerError("corpus sequences exceed the configured max lengths")

    torch.manual_seed(train_cfg.seed)
    rng = np.random.default_rng(train_cfg.seed)
    model = Seq2Seq(model_cfg).to(device)
    opt = torch.optim.Adam(model.parameters(), lr=train_cfg.lr)
    steps_per_epoch = max(math.ceil(len(corpus) / train_cfg.batch_size), 1)

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    curve_path = out_dir / "loss.csv"
    ckpt_path = out_dir / "checkpoint.pt"

    step = 0
    losses: list[float] = []
    with curve_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "loss", "lr"])
        model.train()
        while step < train_cfg.steps:
            for src, tgt in batches(corpus, train_cfg.batch_size, rng):
                if step >= train_cfg.steps:
                    break
                lr = _lr_at(step, steps_per_epoch, train_cfg)
                for group in opt.param_groups:
                    group["lr"] = lr
                loss = model.loss(src.to(device), tgt.to(device))
                opt.zero_grad()
                loss.backward()
                opt.step()
                loss_val = float(loss.detach())
                losses.append(loss_val)
                if step % train_cfg.log_every == 0 or step == train_cfg.steps - 1:
                    writer.writerow([step, f"{loss_val:.6f}", f"{lr:.2e}"])
                step += 1

    torch.save({
        "model": model.state_dict(),
        "model_config": model_cfg.to_dict(),
        "vocab_hashes": corpus.manifest.get("vocab_hashes"),
        "final_loss": losses[-1] if losses else None,
    }, ckpt_path)
    return ckpt_path


def load_checkpoint(path, device: str = "cpu") -> Seq2Seq:
    payload = torch.load(path, map_location=device, weights_only=False)
    model = Seq2Seq(ModelConfig(**payload["model_config"]))
    model.load_state_dict(payload["model"])
    model.to(device)
    model.eval()
    return model


def initial_loss(corpus: Corpus, model_cfg: ModelConfig, seed: int = 0) -> float:
    """Loss of an untrained model on one batch (uniform-prediction baseline)."""
    torch.manual_seed(seed)
    model = Seq2Seq(model_cfg)
    model.eval()
    rng = np.random.default_rng(seed)
    src, tgt = next(batches(corpus, min(len(corpus), 32), rng))
    with torch.no_grad():
        return float(model.loss(src, tgt))
