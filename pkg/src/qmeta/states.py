"""Exact sparse representation of multi-particle quantum states.

A state is a map from kets to amplitudes.  A ket assigns one mode
(0, 1 or 2, written x, y, z) to each particle position.  Amplitudes are
exact Python integers or :class:`fractions.Fraction`; floats are accepted
so that states with irrational coefficients (e.g. 1/sqrt(2)) can be
compared via the float path of :func:`fidelity`.

Normalization factors are never stored: a state stands for the ray it
spans, and :func:`fidelity` normalizes on the fly.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Tuple

Ket = Tuple[int, ...]

MODE_CHARS = "xyz"
MODE_CHARS_UPPER = "XY"


class StateError(ValueError):
    """Base class for state construction and algebra errors."""


class StateParseError(StateError):
    """Malformed state text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EmptyStateError(StateError):
    """Operation undefined on a state with no terms."""


class DimensionError(StateError):
    """Operands live on different particle counts."""


class QuantumState:
    """Sparse ket -> amplitude map with a fixed particle count.

    Terms are stored sorted by ket and amplitudes of zero are dropped, so
    two equal states compare equal structurally.  ``dim`` is the mode-space
    dimensionality (2 or 3); it bounds the mode indices but does not enter
    any inner product.
    """

    __slots__ = ("terms", "particle_count", "dim")

    def __init__(self, terms: Mapping[Ket, object] | Iterable[tuple[Ket, object]],
                 particle_count: int | None = None, dim: int | None = None):
        items = dict(terms).items() if isinstance(terms, Mapping) else list(terms)
        merged: dict[Ket, object] = {}
        for ket, amp in items:
            ket = tuple(int(m) for m in ket)
            if ket in merged:
                merged[ket] = merged[ket] + amp
            else:
                merged[ket] = amp
        merged = {k: a for k, a in merged.items() if a != 0}

        counts = {len(k) for k in merged}
        if len(counts) > 1:
            raise StateError(f"kets of mixed lengths {sorted(counts)}")
        if particle_count is None:
            if not counts:
                raise StateError("particle_count required for an empty state")
            particle_count = counts.pop()
        elif counts and counts.pop() != particle_count:
            raise StateError("ket length does not match particle_count")
        if particle_count < 1:
            raise StateError("particle_count must be >= 1")

        max_mode = max((max(k) for k in merged), default=0)
        min_mode = min((min(k) for k in merged), default=0)
        if min_mode < 0:
            raise StateError("negative mode index")
        if dim is None:
            dim = 3 if max_mode > 1 else 2
        if max_mode >= dim:
            raise StateError(f"mode index {max_mode} outside dimensionality {dim}")
        if dim not in (2, 3):
            raise StateError(f"unsupported dimensionality {dim}")

        self.terms = dict(sorted(merged.items()))
        self.particle_count = particle_count
        self.dim = dim

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, QuantumState)
                and self.particle_count == other.particle_count
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.particle_count, tuple(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return f"QuantumState(<empty>, n={self.particle_count})"
        return f"QuantumState({print_state(self)!r})"

    def scaled(self, factor) -> "QuantumState":
        if factor == 0:
            raise StateError("scaling factor must be nonzero")
        return QuantumState({k: a * factor for k, a in self.terms.items()},
                            self.particle_count, self.dim)

    def with_dim(self, dim: int) -> "QuantumState":
        return QuantumState(self.terms, self.particle_count, dim)


def canonicalize(state: QuantumState, *, make_first_positive: bool = False) -> QuantumState:
    """Reduce a state to its canonical integer form.

    Sorts terms, drops zero amplitudes (both already maintained by the
    constructor) and divides all amplitudes by the gcd of their absolute
    values when every amplitude is an integer.  With ``make_first_positive``
    the global sign is flipped so the first (lexicographically smallest ket)
    term has a positive amplitude; experiment-style state strings keep the
    sign produced by the simulation, circuit post-processing flips it.
    """
    if not state.terms:
        return state
    amps = list(state.terms.values())
    if all(isinstance(a, int) for a in amps):
        g = math.gcd(*(abs(a) for a in amps))
        if g > 1:
            state = QuantumState({k: a // g for k, a in state.terms.items()},
                                 state.particle_count, state.dim)
    if make_first_positive:
        first = next(iter(state.terms.values()))
        if first < 0:
            state = state.scaled(-1)
    return state


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def fidelity(a: QuantumState, b: QuantumState):
    """Squared overlap of the rays spanned by ``a`` and ``b``.

    Returns ``(sum_k a_k b_k)^2 / (sum a_k^2 * sum b_k^2)`` for the stored
    real amplitudes; an exact :class:`Fraction` when both states carry
    int/Fraction amplitudes, else a float.  Raises :class:`EmptyStateError`
    for a state with no terms and :class:`DimensionError` on mismatched
    particle counts.
    """
    if not a.terms or not b.terms:
        raise EmptyStateError("fidelity of an empty state is undefined")
    if a.particle_count != b.particle_count:
        raise DimensionError(
            f"particle counts differ: {a.particle_count} vs {b.particle_count}")

    exact = all(isinstance(v, (int, Fraction))
                for v in list(a.terms.values()) + list(b.terms.values()))
    if exact:
        overlap = sum((_as_fraction(a.terms[k]) * _as_fraction(b.terms[k])
                       for k in a.terms.keys() & b.terms.keys()), Fraction(0))
        norm_a = sum((_as_fraction(v) ** 2 for v in a.terms.values()), Fraction(0))
        norm_b = sum((_as_fraction(v) ** 2 for v in b.terms.values()), Fraction(0))
        return overlap * overlap / (norm_a * norm_b)
    overlap = sum(float(a.terms[k]) * float(b.terms[k])
                  for k in a.terms.keys() & b.terms.keys())
    norm_a = sum(float(v) ** 2 for v in a.terms.values())
    norm_b = sum(float(v) ** 2 for v in b.terms.values())
    return overlap * overlap / (norm_a * norm_b)


# --- text form ---------------------------------------------------------
#
# optics style (three-mode letters, every coefficient signed):
#     +1[xxxx] +1[yyyy]         -1[xxyy] +2[xyxy] ...
# circuit style (two-mode letters, first coefficient unsigned):
#     1|XX> +1|YY>              1|XY> +-1|YX>

_OPTICS_TERM = re.compile(r"([+-])(\d+)\[([a-z]+)\]")
_CIRCUIT_TERM = re.compile(r"(-?)(\d+)\|([A-Z]+)>")


def _ket_from_letters(letters: str, alphabet: str, position: int) -> Ket:
    modes = []
    for ch in letters:
        idx = alphabet.find(ch)
        if idx < 0:
            raise StateParseError(f"unknown mode letter {ch!r}", position)
        modes.append(idx)
    return tuple(modes)


def parse_state(text: str, style: str = "optics") -> QuantumState:
    """Parse a state string in the given style; inverse of :func:`print_state`."""
    if style == "optics":
        return _parse_terms(text, _OPTICS_TERM, MODE_CHARS, signed_first=True)
    if style == "circuit":
        return _parse_terms(text, _CIRCUIT_TERM, MODE_CHARS_UPPER, signed_first=False)
    raise ValueError(f"unknown style {style!r}")


def _parse_terms(text: str, pattern: re.Pattern, alphabet: str,
                 signed_first: bool) -> QuantumState:
    terms: dict[Ket, int] = {}
    pos = 0
    first = True
    n = len(text)
    while pos < n:
        if not first:
            if text[pos] != " ":
                raise StateParseError("expected single space between terms", pos)
            pos += 1
            if signed_first is False and pos < n and text[pos] == "+":
                pos += 1  # circuit style joins terms with " +"
        m = pattern.match(text, pos)
        if m is None:
            raise StateParseError("malformed term", pos)
        if signed_first:
            sign = -1 if m.group(1) == "-" else 1
        else:
            if first and m.group(1) == "-":
                raise StateParseError("first coefficient must be unsigned", pos)
            sign = -1 if m.group(1) == "-" else 1
        coeff = int(m.group(2))
        if coeff == 0:
            raise StateParseError("zero coefficient", pos)
        ket = _ket_from_letters(m.group(3), alphabet, m.start(3))
        if ket in terms:
            raise StateParseError("duplicate ket", pos)
        terms[ket] = sign * coeff
        pos = m.end()
        first = False
    if not terms:
        raise StateParseError("no terms", 0)
    lengths = {len(k) for k in terms}
    if len(lengths) > 1:
        raise StateParseError("inconsistent ket lengths", 0)
    return QuantumState(terms, dim=2 if alphabet == MODE_CHARS_UPPER else None)


def print_state(state: QuantumState, style: str = "optics") -> str:
    """Render a state in the given style; terms in stored (sorted) order."""
    if not state.terms:
        raise EmptyStateError("cannot print an empty state")
    parts = []
    if style == "optics":
        for ket, amp in state.terms.items():
            sign = "+" if amp > 0 else "-"
            letters = "".join(MODE_CHARS[m] for m in ket)
            parts.append(f"{sign}{abs(_int_amp(amp))}[{letters}]")
        return " ".join(parts)
    if style == "circuit":
        for i, (ket, amp) in enumerate(state.terms.items()):
            letters = "".join(MODE_CHARS_UPPER[m] for m in ket)
            coeff = _int_amp(amp)
            term = f"{coeff}|{letters}>"
            parts.append(term if i == 0 else f"+{term}")
        return " ".join(parts)
    raise ValueError(f"unknown style {style!r}")


def _int_amp(amp) -> int:
    if isinstance(amp, int):
        return amp
    if isinstance(amp, Fraction) and amp.denominator == 1:
        return amp.numerator
    raise StateError(f"non-integer amplitude {amp!r} has no text form")
