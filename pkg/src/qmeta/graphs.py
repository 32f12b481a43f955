"""Experimental setups as colored weighted multigraphs.

Vertices are detectors; an edge is a photon-pair source emitting one
photon into each endpoint, carrying a mode label per endpoint and a
signed integer weight.  Post-selecting on one photon per detector makes
the output state a sum over perfect matchings: each matching contributes
the product of its edge weights to the ket in which every vertex shows
the mode assigned by its covering edge (a Hafnian when the graph is
complete).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable

from .states import QuantumState


class SetupError(ValueError):
    """Invalid setup construction or serialization."""


class EnumerationTimeout(RuntimeError):
    """Perfect-matching enumeration exceeded its wall-clock budget."""


@dataclass(frozen=True)
class Edge:
    """Pair source between detectors ``u`` and ``v``.

    ``mu``/``mv`` are the modes deposited at ``u``/``v``; ``w`` is the
    signed integer weight.  Stored with ``u < v``.
    """

    u: int
    v: int
    mu: int
    mv: int
    w: int = 1

    def normalized(self) -> "Edge":
        if self.u > self.v:
            return Edge(self.v, self.u, self.mv, self.mu, self.w)
        return self


class Setup:
    """Multigraph on an even number of detector vertices.

    Edges with identical ``(u, v, mu, mv)`` merge by weight addition at
    construction; merged weight zero removes the edge.  Immutable after
    construction.
    """

    __slots__ = ("vertex_count", "dim", "edges", "_adj")

    def __init__(self, vertex_count: int, dim: int, edges: Iterable[Edge | tuple]):
        if vertex_count < 2 or vertex_count % 2:
            raise SetupError(f"vertex count must be even and >= 2, got {vertex_count}")
        if dim not in (2, 3):
            raise SetupError(f"dimensionality must be 2 or 3, got {dim}")
        merged: dict[tuple[int, int, int, int], int] = {}
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            e = e.normalized()
            if e.u == e.v:
                raise SetupError(f"self-loop on vertex {e.u}")
            if not (0 <= e.u < vertex_count and 0 <= e.v < vertex_count):
                raise SetupError(f"edge ({e.u},{e.v}) outside 0..{vertex_count - 1}")
            if not (0 <= e.mu < dim and 0 <= e.mv < dim):
                raise SetupError(f"edge mode outside 0..{dim - 1}")
            if e.w == 0:
                raise SetupError("zero edge weight")
            key = (e.u, e.v, e.mu, e.mv)
            merged[key] = merged.get(key, 0) + e.w
        self.vertex_count = vertex_count
        self.dim = dim
        self.edges = tuple(Edge(*k, w) for k, w in sorted(merged.items()) if w != 0)
        adj: list[list[Edge]] = [[] for _ in range(vertex_count)]
        for e in self.edges:
            adj[e.u].append(e)
            adj[e.v].append(e)
        self._adj = adj

    def __eq__(self, other) -> bool:
        return (isinstance(other, Setup) and self.vertex_count == other.vertex_count
                and self.dim == other.dim and self.edges == other.edges)

    def __repr__(self) -> str:
        return f"Setup(n={self.vertex_count}, dim={self.dim}, edges={len(self.edges)})"


def min_degree(setup: Setup) -> int:
    """Smallest number of merged edges incident to any vertex."""
    return min(len(setup._adj[v]) for v in range(setup.vertex_count))


def compute_state(setup: Setup, deadline: float | None = None) -> QuantumState:
    """Output state of a setup via perfect-matching enumeration.

    Enumeration pins the lowest-index uncovered vertex and branches over
    its incident edges, so each matching is visited exactly once.  The
    result drops zero-amplitude kets but is not gcd/sign normalized;
    callers canonicalize explicitly.  A setup with no perfect matching
    yields the empty state.  ``deadline`` (``time.monotonic()`` value)
    aborts long enumerations with :class:`EnumerationTimeout`.
    """
    n = setup.vertex_count
    amplitudes: dict[tuple[int, ...], int] = {}
    covered = [False] * n
    modes = [0] * n
    adj = setup._adj
    counter = [0]

    def extend(start: int, weight: int) -> None:
        v = start
        while v < n and covered[v]:
            v += 1
        if v == n:
            ket = tuple(modes)
            amplitudes[ket] = amplitudes.get(ket, 0) + weight
            return
        counter[0] += 1
        if deadline is not None and counter[0] % 256 == 0 and time.monotonic() > deadline:
            raise EnumerationTimeout("matching enumeration exceeded time budget")
        covered[v] = True
        for e in adj[v]:
            other = e.v if e.u == v else e.u
            if covered[other]:
                continue
            covered[other] = True
            modes[v] = e.mu if e.u == v else e.mv
            modes[other] = e.mv if e.u == v else e.mu
            extend(v + 1, weight * e.w)
            covered[other] = False
        covered[v] = False

    extend(0, 1)
    return QuantumState(amplitudes, particle_count=n, dim=setup.dim)


def count_perfect_matchings(setup: Setup) -> int:
    """Number of perfect matchings of the edge multiset (colors ignored)."""
    n = setup.vertex_count
    covered = [False] * n
    adj = setup._adj

    def extend(start: int) -> int:
        v = start
        while v < n and covered[v]:
            v += 1
        if v == n:
            return 1
        covered[v] = True
        total = 0
        for e in adj[v]:
            other = e.v if e.u == v else e.u
            if covered[other]:
                continue
            covered[other] = True
            total += extend(v + 1)
            covered[other] = False
        covered[v] = False
        return total

    return extend(0)


def double_factorial(n: int) -> int:
    if n < 0:
        return 1
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def flop_estimate(dim: int, particle_count: int) -> int:
    """Floating-point operations to compute all amplitudes of a setup state.

    ``dim ** n`` candidate kets times ``(n/2) * (n-1)!!`` multiply-adds per
    Hafnian evaluation.
    """
    n = particle_count
    if n < 2 or n % 2:
        raise ValueError(f"particle count must be even and >= 2, got {n}")
    return dim ** n * (n // 2) * double_factorial(n - 1)


# --- serialization -----------------------------------------------------
#
#   vertices=<n> dim=<k>
#   u v mu mv w          (one merged edge per line)


def format_setup(setup: Setup) -> str:
    lines = [f"vertices={setup.vertex_count} dim={setup.dim}"]
    for e in setup.edges:
        lines.append(f"{e.u} {e.v} {e.mu} {e.mv} {e.w}")
    return "\n".join(lines) + "\n"


def parse_setup(text: str) -> Setup:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise SetupError("empty setup text")
    header = lines[0].split()
    try:
        fields = dict(part.split("=", 1) for part in header)
        vertex_count = int(fields["vertices"])
        dim = int(fields["dim"])
    except (ValueError, KeyError) as exc:
        raise SetupError(f"bad header {lines[0]!r}") from exc
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 5:
            raise SetupError(f"bad edge line {ln!r}")
        u, v, mu, mv, w = (int(p) for p in parts)
        edges.append(Edge(u, v, mu, mv, w))
    return Setup(vertex_count, dim, edges)
