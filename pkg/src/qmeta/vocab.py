"""Fixed vocabularies and lossless tokenization for both sequence sides.

Sequence A is three state strings (sizes N=0,1,2) and sequence B is one
program.  The optics task shares a single 51-token vocabulary between
the two sides; the circuit and graph tasks use separate source (state)
and target (code) vocabularies.  Token ids are frozen: tests pin them
and the serialized JSON files are hash-checked.

State strings tokenize without the inter-term spaces (no space token
exists); ``decode`` re-inserts them, so decode(encode(x)) reproduces the
exact human-readable text.
"""

from __future__ import annotations

import hashlib
import json
from typing import Iterable, Sequence

from .states import MODE_CHARS, MODE_CHARS_UPPER, QuantumState, print_state

PAD, SOS, EOS = 0, 1, 2

POSITION_CHARS = "abcdefgh"  # particle positions a..h; caps states at 8 particles

MAIN_VOCAB: dict[str, int] = {
    "<PAD>": 0, "<SOS>": 1, "<EOS>": 2,
    **{str(d): 3 + d for d in range(10)},
    **{p + m: 13 + 8 * mi + pi
       for mi, m in enumerate("xyz") for pi, p in enumerate(POSITION_CHARS)},
    "[": 37, "]": 38, "|": 39,
    "+": 40, "-": 41, "*": 42,
    "for ii in range(N):": 43, "\n": 44, "    ": 45,
    "e(": 46, ")": 47, ",": 48, "N": 49, "ii": 50,
}

CIRCUIT_SOURCE_VOCAB: dict[str, int] = {
    "<PAD>": 0, "<SOS>": 1, "<EOS>": 2,
    **{str(d): 3 + d for d in range(10)},
    "X": 13, "Y": 14, "|": 15, ">": 16,
    "+": 17, "-": 18, "sqrt(": 19, "/": 20, "*": 21,
    "(": 22, ")": 23, "<SEP>": 24,
}

CIRCUIT_TARGET_VOCAB: dict[str, int] = {
    "<PAD>": 0, "<SOS>": 1, "<EOS>": 2,
    **{str(d): 3 + d for d in range(10)},
    "for ii in range(": 13, "):": 14, "\n": 15, "    ": 16,
    "qH": 17, "qCNOT": 18, "qX": 19, "qZ": 20,
    "+": 21, "-": 22, "*": 23,
    "NN": 24, "ii": 25, "(": 26, ")": 27, ",": 28,
    "qToffoli": 29, "qCSWAP": 30, "qCZ": 31,
}

# (source, target) length caps, frame tokens included
MAX_LEN = {
    "optics": (640, 640),
    "circuit": (640, 640),
    "graph": (1792, 640),
}


class TokenizeError(ValueError):
    """Text not representable, unknown id, or sequence over the length cap."""


class UnencodableStateError(TokenizeError):
    """State has more particles than position letters (a..h)."""


class LengthError(TokenizeError):
    pass


class Vocabulary:
    """Bidirectional token <-> id map for one task/side."""

    def __init__(self, name: str, mapping: dict[str, int]):
        self.name = name
        self.token_to_id = dict(mapping)
        self.id_to_token = {i: t for t, i in mapping.items()}
        if len(self.id_to_token) != len(self.token_to_id):
            raise ValueError(f"vocabulary {name} is not injective")
        # tokens bucketed by first character, longest first, for greedy matching
        self._by_first: dict[str, list[str]] = {}
        for tok in sorted((t for t in mapping if not t.startswith("<")),
                          key=len, reverse=True):
            self._by_first.setdefault(tok[0], []).append(tok)

    def __len__(self) -> int:
        return len(self.token_to_id)

    def tokenize(self, text: str) -> list[int]:
        """Greedy longest-match tokenization; fails on unmatchable text."""
        ids = []
        pos = 0
        while pos < len(text):
            for tok in self._by_first.get(text[pos], ()):
                if text.startswith(tok, pos):
                    ids.append(self.token_to_id[tok])
                    pos += len(tok)
                    break
            else:
                raise TokenizeError(
                    f"cannot tokenize {text[pos:pos + 12]!r} at position {pos} "
                    f"with vocabulary {self.name}")
        return ids

    def tokens(self, ids: Iterable[int]) -> list[str]:
        out = []
        for i in ids:
            if i not in self.id_to_token:
                raise TokenizeError(f"unknown token id {i} in vocabulary {self.name}")
            out.append(self.id_to_token[i])
        return out

    def to_json(self) -> str:
        ordered = dict(sorted(self.token_to_id.items(), key=lambda kv: kv[1]))
        return json.dumps(ordered, indent=1)

    def sha256(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()


MAIN = Vocabulary("main", MAIN_VOCAB)
CIRCUIT_SOURCE = Vocabulary("circuit_source", CIRCUIT_SOURCE_VOCAB)
CIRCUIT_TARGET = Vocabulary("circuit_target", CIRCUIT_TARGET_VOCAB)


def vocabulary(task: str, side: str) -> Vocabulary:
    """The vocabulary for a (task, side) pair; side is 'states' or 'code'."""
    if side not in ("states", "code"):
        raise ValueError(f"unknown side {side!r}")
    if task == "optics":
        return MAIN
    if task in ("circuit", "graph"):
        return CIRCUIT_SOURCE if side == "states" else CIRCUIT_TARGET
    raise ValueError(f"unknown task {task!r}")


def vocab_hashes() -> dict[str, str]:
    return {v.name: v.sha256() for v in (MAIN, CIRCUIT_SOURCE, CIRCUIT_TARGET)}


def _check_length(ids: list[int], limit: int, what: str) -> list[int]:
    if len(ids) > limit:
        raise LengthError(f"{what} has {len(ids)} tokens, limit {limit}")
    return ids


def encode_state_body(state: QuantumState, task: str) -> list[int]:
    """Token ids of one state, unframed (no SOS/EOS/separator)."""
    vocab = vocabulary(task, "states")
    ids: list[int] = []
    if task == "optics":
        if state.particle_count > len(POSITION_CHARS):
            raise UnencodableStateError(
                f"{state.particle_count} particles exceed position letters a..h")
        for ket, amp in state.terms.items():
            ids.append(vocab.token_to_id["+" if amp > 0 else "-"])
            ids.extend(vocab.token_to_id[d] for d in str(abs(amp)))
            ids.append(vocab.token_to_id["["])
            for pos, mode in enumerate(ket):
                ids.append(vocab.token_to_id[POSITION_CHARS[pos] + MODE_CHARS[mode]])
            ids.append(vocab.token_to_id["]"])
        return ids
    for i, (ket, amp) in enumerate(state.terms.items()):
        if i > 0:
            ids.append(vocab.token_to_id["+"])
        if amp < 0:
            ids.append(vocab.token_to_id["-"])
        ids.extend(vocab.token_to_id[d] for d in str(abs(amp)))
        ids.append(vocab.token_to_id["|"])
        for mode in ket:
            ids.append(vocab.token_to_id[MODE_CHARS_UPPER[mode]])
        ids.append(vocab.token_to_id[">"])
    return ids


def encode_states(states: Sequence[QuantumState], task: str) -> list[int]:
    """Sequence A: <SOS> state <sep> state <sep> state <EOS>.

    The separator is the ``|`` token for the optics task and ``<SEP>``
    for the circuit and graph tasks.
    """
    vocab = vocabulary(task, "states")
    sep = vocab.token_to_id["|" if task == "optics" else "<SEP>"]
    ids = [SOS]
    for i, state in enumerate(states):
        if i > 0:
            ids.append(sep)
        ids.extend(encode_state_body(state, task))
    ids.append(EOS)
    return _check_length(ids, MAX_LEN[task][0], "sequence A")


def encode_code(code_text: str, task: str) -> list[int]:
    """Sequence B: <SOS> tokenized program text <EOS>."""
    vocab = vocabulary(task, "code")
    ids = [SOS] + vocab.tokenize(code_text) + [EOS]
    return _check_length(ids, MAX_LEN[task][1], "sequence B")


def _strip_frame(ids: Sequence[int]) -> list[int]:
    ids = [i for i in ids if i != PAD]
    if ids and ids[0] == SOS:
        ids = ids[1:]
    if ids and ids[-1] == EOS:
        ids = ids[:-1]
    return ids


def decode(ids: Sequence[int], task: str, side: str) -> str:
    """Inverse of the encoders, reproducing the exact source text.

    For the code side this is plain token concatenation.  For the state
    side the inter-term spaces (dropped during tokenization) are
    restored and the state separator prints as ``|`` (optics) or
    ``<SEP>`` (circuit/graph).
    """
    vocab = vocabulary(task, side)
    toks = vocab.tokens(_strip_frame(ids))
    if side == "code":
        return "".join(toks)
    if task == "optics":
        out = []
        for i, t in enumerate(toks):
            if t in "+-" and i > 0 and toks[i - 1] == "]":
                out.append(" ")
            if len(t) == 2 and t[0] in POSITION_CHARS and t[1] in MODE_CHARS:
                out.append(t[1])  # positional token 'cx' prints as bare mode 'x'
            else:
                out.append(t)
        return "".join(out)
    out = []
    for i, t in enumerate(toks):
        if t == "<SEP>":
            out.append("<SEP>")
            continue
        if t == "+" and i > 0 and toks[i - 1] == ">":
            out.append(" +")
            continue
        out.append(t)
    return "".join(out)


def decode_states(ids: Sequence[int], task: str) -> list[str]:
    """Split a decoded sequence A back into the three state strings."""
    text = decode(ids, task, "states")
    return text.split("|" if task == "optics" else "<SEP>")


def states_text(states: Sequence[QuantumState], task: str) -> str:
    """Joined text form of sequence A, matching ``decode`` exactly."""
    style = "optics" if task == "optics" else "circuit"
    sep = "|" if task == "optics" else "<SEP>"
    return sep.join(print_state(s, style) for s in states)
