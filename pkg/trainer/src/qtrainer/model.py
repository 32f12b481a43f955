"""Encoder-decoder transformer with pre-layer normalization.

Sized for desk-scale experiments by default (128-dim, 4 layers, 4 heads);
the full-scale dimensions (512/18/8) are accepted via the config.
Positional information comes from learned embeddings on both sides.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import torch
import torch.nn as nn
import torch.nn.functional as F

PAD, SOS, EOS = 0, 1, 2


@dataclass
class ModelConfig:
    src_vocab_size: int
    tgt_vocab_size: int
    src_max_len: int = 640
    tgt_max_len: int = 640
    n_emb: int = 128
    n_layer: int = 4
    n_heads: int = 4
    dropout: float = 0.1
    # sampling defaults
    top_p: float = 0.5
    temperature: float = 0.2

    def to_dict(self) -> dict:
        return asdict(self)


class _FeedForward(nn.Module):
    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.net = nn.Sequential(
            nn.Linear(cfg.n_emb, 4 * cfg.n_emb), nn.GELU(),
            nn.Linear(4 * cfg.n_emb, cfg.n_emb), nn.Dropout(cfg.dropout))

    def forward(self, x):
        return self.net(x)


class _EncoderBlock(nn.Module):
    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.ln1 = nn.LayerNorm(cfg.n_emb)
        self.attn = nn.MultiheadAttention(cfg.n_emb, cfg.n_heads,
                                          dropout=cfg.dropout, batch_first=True)
        self.ln2 = nn.LayerNorm(cfg.n_emb)
        self.ff = _FeedForward(cfg)

    def forward(self, x, pad_mask):
        h = self.ln1(x)
        a, _ = self.attn(h, h, h, key_padding_mask=pad_mask, need_weights=False)
        x = x + a
        return x + self.ff(self.ln2(x))


class _DecoderBlock(nn.Module):
    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.ln1 = nn.LayerNorm(cfg.n_emb)
        self.self_attn = nn.MultiheadAttention(cfg.n_emb, cfg.n_heads,
                                               dropout=cfg.dropout, batch_first=True)
        self.ln2 = nn.LayerNorm(cfg.n_emb)
        self.cross_attn = nn.MultiheadAttention(cfg.n_emb, cfg.n_heads,
                                                dropout=cfg.dropout, batch_first=True)
        self.ln3 = nn.LayerNorm(cfg.n_emb)
        self.ff = _FeedForward(cfg)

    def forward(self, x, memory, causal_mask, tgt_pad_mask, src_pad_mask):
        h = self.ln1(x)
        a, _ = self.self_attn(h, h, h, attn_mask=causal_mask,
                              key_padding_mask=tgt_pad_mask, need_weights=False)
        x = x + a
        h = self.ln2(x)
        a, _ = self.cross_attn(h, memory, memory,
                               key_padding_mask=src_pad_mask, need_weights=False)
        x = x + a
        return x + self.ff(self.ln3(x))


class Seq2Seq(nn.Module):
    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.cfg = cfg
        self.src_tok = nn.Embedding(cfg.src_vocab_size, cfg.n_emb, padding_idx=PAD)
        self.src_pos = nn.Embedding(cfg.src_max_len, cfg.n_emb)
        self.tgt_tok = nn.Embedding(cfg.tgt_vocab_size, cfg.n_emb, padding_idx=PAD)
        self.tgt_pos = nn.Embedding(cfg.tgt_max_len, cfg.n_emb)
        self.drop = nn.Dropout(cfg.dropout)
        self.encoder = nn.ModuleList(_EncoderBlock(cfg) for _ in range(cfg.n_layer))
        self.enc_ln = nn.LayerNorm(cfg.n_emb)
        self.decoder = nn.ModuleList(_DecoderBlock(cfg) for _ in range(cfg.n_layer))
        self.dec_ln = nn.LayerNorm(cfg.n_emb)
        self.head = nn.Linear(cfg.n_emb, cfg.tgt_vocab_size, bias=False)

    def parameter_count(self) -> int:
        return sum(p.numel() for p in self.parameters())

    def encode(self, src):
        pad_mask = src == PAD
        pos = torch.arange(src.size(1), device=src.device)
        x = self.drop(self.src_tok(src) + self.src_pos(pos))
        for block in self.encoder:
            x = block(x, pad_mask)
        return self.enc_ln(x), pad_mask

    def decode(self, tgt_in, memory, src_pad_mask):
        t = tgt_in.size(1)
        causal = torch.triu(
            torch.ones((t, t), dtype=torch.bool, device=tgt_in.device), diagonal=1)
        tgt_pad_mask = tgt_in == PAD
        pos = torch.arange(t, device=tgt_in.device)
        x = self.drop(self.tgt_tok(tgt_in) + self.tgt_pos(pos))
        for block in self.decoder:
            x = block(x, memory, causal, tgt_pad_mask, src_pad_mask)
        return self.head(self.dec_ln(x))

    def forward(self, src, tgt_in):
        memory, src_pad_mask = self.encode(src)
        return self.decode(tgt_in, memory, src_pad_mask)

    def loss(self, src, tgt) -> torch.Tensor:
        """Next-token cross entropy; ``tgt`` includes SOS...EOS framing."""
        logits = self(src, tgt[:, :-1])
        return F.cross_entropy(
            logits.reshape(-1, logits.size(-1)), tgt[:, 1:].reshape(-1),
            ignore_index=PAD)

    @torch.no_grad()
    def generate(self, src, max_len: int | None = None,
                 top_p: float | None = None, temperature: float | None = None,
                 generator: torch.Generator | None = None) -> tuple[list[int], bool]:
        """Sample one target sequence for a single source sequence.

        ``temperature == 0`` is greedy decoding.  Returns (ids without
        frame, truncated_flag); truncated means EOS never arrived within
        ``max_len`` tokens.
        """
        self.eval()
        cfg = self.cfg
        max_len = max_len or cfg.tgt_max_len
        top_p = cfg.top_p if top_p is None else top_p
        temperature = cfg.temperature if temperature is None else temperature
        memory, src_pad_mask = self.encode(src)
        out = torch.full((1, 1), SOS, dtype=torch.long, device=src.device)
        ids: list[int] = []
        for _ in range(max_len - 2):
            logits = self.decode(out, memory, src_pad_mask)[0, -1]
            if temperature <= 0:
                nxt = int(torch.argmax(logits))
            else:
                probs = F.softmax(logits / temperature, dim=-1)
                sorted_probs, sorted_idx = torch.sort(probs, descending=True)
                cum = torch.cumsum(sorted_probs, dim=-1)
                keep = cum - sorted_probs < top_p  # smallest set covering top_p
                sorted_probs = sorted_probs * keep
                sorted_probs /= sorted_probs.sum()
                pick = torch.multinomial(sorted_probs, 1, generator=generator)
                nxt = int(sorted_idx[pick])
            if nxt == EOS:
                return ids, False
            ids.append(nxt)
            out = torch.cat([out, torch.tensor([[nxt]], device=src.device)], dim=1)
        return ids, True
