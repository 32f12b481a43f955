"""Catalog of target state classes, one generator per class and task.

Each class is a family ``psi(N)`` over the size index N with 2N+4
particles (optics task) or 2N+2 qubits (circuit and graph tasks).
Generators are combinatorial definitions (predicates on kets plus sign
rules), deliberately independent of the setup/circuit simulators used
elsewhere.  The shipped fixture files hold the verbatim N=0,1,2 strings
from the class tables; the canonical print of every generator must match
them byte for byte, which is enforced by the test suite.

Ancillary particles are trailing mode-0 positions padding a class to the
required particle count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from itertools import combinations, permutations, product
from math import inf
from typing import Callable

from .states import QuantumState


class TargetError(ValueError):
    pass


class UnknownTargetError(TargetError, KeyError):
    pass


class SizeError(TargetError):
    """Requested N exceeds the tractable particle bound."""


MAX_PARTICLES_DEFAULT = 24

X, Y, Z = 0, 1, 2


# --- ket family helpers -------------------------------------------------

def _uniform(kets, n, dim=None) -> QuantumState:
    return QuantumState({tuple(k): 1 for k in kets}, particle_count=n, dim=dim)


def _pad(kets, total):
    return [tuple(k) + (X,) * (total - len(k)) for k in kets]


def _ghz_kets(length: int, modes: int):
    return [(m,) * length for m in range(modes)]


def _single_one_kets(length: int):
    return [tuple(Y if i == j else X for i in range(length)) for j in range(length)]


def _tensor(parts_a, parts_b):
    return [a + b for a in parts_a for b in parts_b]


def _choose_kets(length: int, symbol: int, count: int):
    out = []
    for idx in combinations(range(length), count):
        ket = [X] * length
        for i in idx:
            ket[i] = symbol
        out.append(tuple(ket))
    return out


def _no_adjacent_ones(length: int):
    out = []
    for bits in product((X, Y), repeat=length):
        if any(bits[i] == Y and bits[i + 1] == Y for i in range(length - 1)):
            continue
        out.append(bits)
    return out


def _dyck_words(length: int, open_m: int, close_m: int):
    words = []

    def grow(word, opened, closed):
        if len(word) == length:
            words.append(tuple(word))
            return
        if opened < length // 2:
            grow(word + [open_m], opened + 1, closed)
        if closed < opened:
            grow(word + [close_m], opened, closed + 1)

    if length % 2 == 0:
        grow([], 0, 0)
    return words


def _motzkin_words(length: int):
    # x opens, y closes, z is flat
    words = []

    def grow(word, depth):
        if len(word) == length:
            if depth == 0:
                words.append(tuple(word))
            return
        if depth + (length - len(word)) < 0:
            return
        grow(word + [X], depth + 1)
        if depth > 0:
            grow(word + [Y], depth - 1)
        grow(word + [Z], depth)

    grow([], 0)
    return words


# --- matrix-product families -------------------------------------------

def _mps_trace_terms(matrices: dict[int, tuple[tuple[int, ...], ...]], length: int):
    """Words w with nonzero trace(M[w1]...M[wL]), via zero-pruned DFS."""
    size = len(next(iter(matrices.values())))
    identity = tuple(tuple(int(i == j) for j in range(size)) for i in range(size))
    out: dict[tuple[int, ...], int] = {}

    def matmul(a, b):
        return tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(size)) for j in range(size))
            for i in range(size))

    def grow(word, mat):
        if len(word) == length:
            trace = sum(mat[i][i] for i in range(size))
            if trace:
                out[tuple(word)] = trace
            return
        for sym, m in matrices.items():
            nxt = matmul(mat, m)
            if any(any(row) for row in nxt):
                grow(word + [sym], nxt)

    grow([], identity)
    return out


# Spin-chain ground-state transfer matrices: two-site singlet structure
# for the frustrated chain, spin-1 projector structure for the other.
_MG_MATRICES = {
    X: ((0, 0, 0), (1, 0, 0), (0, 1, 0)),
    Y: ((0, 1, 0), (0, 0, -1), (0, 0, 0)),
}
_AKLT_MATRICES = {
    X: ((0, 1), (0, 0)),       # raising, scaled by sqrt(2)
    Y: ((-1, 0), (0, 1)),      # diagonal, scaled by 2
    Z: ((0, 0), (-1, 0)),      # lowering, scaled by sqrt(2)
}


def _majumdar_ghosh(length: int) -> QuantumState:
    terms = _mps_trace_terms(_MG_MATRICES, length)
    return QuantumState(terms, particle_count=length, dim=2)


def _aklt_real(length: int):
    raw = _mps_trace_terms(_AKLT_MATRICES, length)
    # trace(prod A) = trace(prod scaled) / 2**(#x + #y); table weights carry
    # an extra 2**(length-1), leaving 2**(#x(word) - 1) per word.
    terms = {}
    for word, trace in raw.items():
        n_x = sum(1 for s in word if s == X)
        shift = n_x - 1
        terms[word] = trace * 2 ** shift if shift >= 0 else trace // 2
    return terms


def _singlet_product(pairs: int) -> QuantumState:
    terms = {(): 1}
    for _ in range(pairs):
        terms = {k + ext: v * sign
                 for k, v in terms.items()
                 for ext, sign in (((X, Y), 1), ((Y, X), -1))}
    return QuantumState(terms, particle_count=2 * pairs, dim=2)


# --- graph-state families ----------------------------------------------

def _graph_state_terms(n: int, edges):
    terms = {}
    for bits in product((0, 1), repeat=n):
        phase = sum(bits[u] * bits[v] for u, v in edges)
        terms[bits] = -1 if phase % 2 else 1
    return QuantumState(terms, particle_count=n, dim=2)


def path_edges(n: int):
    return [(i, i + 1) for i in range(n - 1)]


def ring_edges(n: int):
    return path_edges(n) + [(n - 1, 0)]


def star_edges(n: int):
    return [(i, n - 1) for i in range(n - 1)]


def _linear_graph(n: int) -> QuantumState:
    return _graph_state_terms(n, path_edges(n))


def _ring_graph(n: int) -> QuantumState:
    if n == 2:
        # the two-vertex ring doubles its single edge; the CZs cancel
        return _graph_state_terms(n, [])
    return _graph_state_terms(n, ring_edges(n))


def _star_graph(n: int) -> QuantumState:
    return _graph_state_terms(n, star_edges(n))


# --- catalog -------------------------------------------------------------

@dataclass(frozen=True)
class TargetClass:
    name: str
    slug: str
    task: str
    generator: Callable[[int], QuantumState]
    ancilla_count: Callable[[int], int]
    correct_states: object  # int, math.inf, or None (not reported)
    previously_known: bool | None

    def particle_count(self, N: int) -> int:
        return 2 * N + 4 if self.task == "optics" else 2 * N + 2


def _optics_generators() -> dict[str, Callable[[int], QuantumState]]:
    def padded(kets_fn):
        def gen(N):
            n = 2 * N + 4
            return _uniform(_pad(kets_fn(N), n), n)
        return gen

    return {
        "ghz": lambda N: _uniform(_ghz_kets(2 * N + 4, 2), 2 * N + 4),
        "w": lambda N: _uniform(_single_one_kets(2 * N + 4), 2 * N + 4),
        "bell_pairs_2d": lambda N: _uniform(
            [sum(p, ()) for p in product(((X, X), (Y, Y)), repeat=N + 2)], 2 * N + 4),
        "bell_pairs_3d": lambda N: _uniform(
            _pad([sum(p, ()) for p in product(((X, X), (Y, Y), (Z, Z)), repeat=N + 1)],
                 2 * N + 4), 2 * N + 4, dim=3),
        "ghz_x_w": lambda N: _uniform(
            _tensor(_ghz_kets(N + 2, 2), _single_one_kets(N + 2)), 2 * N + 4),
        "w_x_w": lambda N: _uniform(
            _tensor(_single_one_kets(N + 2), _single_one_kets(N + 2)), 2 * N + 4),
        "ghz_x_ghz": lambda N: _uniform(
            _tensor(_ghz_kets(N + 2, 2), _ghz_kets(N + 2, 2)), 2 * N + 4),
        "ghz3d_x_ghz3d": lambda N: _uniform(
            _tensor(_ghz_kets(N + 2, 3), _ghz_kets(N + 2, 3)), 2 * N + 4, dim=3),
        "spin_half": padded(lambda N: _no_adjacent_ones(N + 3)),
        "majumdar_ghosh": lambda N: _majumdar_ghosh(2 * N + 4),
        "dicke_1": padded(lambda N: _choose_kets(2 * N + 2, Z, N + 1)),
        "dicke_2": padded(lambda N: _choose_kets(N + 3, Z, 2)),
        "dicke_3": padded(
            lambda N: sorted(_place(N + 3, {i: Y, j: Z})
                             for i, j in permutations(range(N + 3), 2))),
        "dicke_4": lambda N: _uniform(_choose_kets(2 * N + 4, Y, 2), 2 * N + 4),
        "dicke_5": padded(lambda N: _choose_kets(N + 3, Z, 3)),
        "dyck_1": padded(lambda N: _dyck_words(2 * N + 2, Y, Z)),
        "dyck_2": lambda N: _uniform(_dyck_words(2 * N + 4, Y, Z), 2 * N + 4, dim=3),
        "aklt": lambda N: QuantumState(
            {k + (X,) * (N + 2): v for k, v in _aklt_real(N + 2).items()},
            particle_count=2 * N + 4, dim=3),
        "motzkin": padded(lambda N: _motzkin_words(N + 3)),
        "motzkin_small": padded(lambda N: _motzkin_words(N + 2)),
    }


def _place(length: int, assignment: dict[int, int]):
    ket = [X] * length
    for i, m in assignment.items():
        ket[i] = m
    return tuple(ket)


def _circuit_generators() -> dict[str, Callable[[int], QuantumState]]:
    def padded(kets_fn):
        def gen(N):
            n = 2 * N + 2
            return _uniform(_pad(kets_fn(N), n), n)
        return gen

    return {
        "ghz": lambda N: _uniform(_ghz_kets(2 * N + 2, 2), 2 * N + 2),
        "w": lambda N: _uniform(_single_one_kets(2 * N + 2), 2 * N + 2),
        "bell_pairs_2d": lambda N: _uniform(
            [sum(p, ()) for p in product(((X, X), (Y, Y)), repeat=N + 1)], 2 * N + 2),
        "ghz_x_w": lambda N: _uniform(
            _tensor(_ghz_kets(N + 1, 2), _single_one_kets(N + 1)), 2 * N + 2),
        "w_x_w": lambda N: _uniform(
            _tensor(_single_one_kets(N + 1), _single_one_kets(N + 1)), 2 * N + 2),
        "ghz_x_ghz": lambda N: _uniform(
            _tensor(_ghz_kets(N + 1, 2), _ghz_kets(N + 1, 2)), 2 * N + 2),
        "spin_half": padded(lambda N: _no_adjacent_ones(N + 2)),
        "dicke_1": padded(lambda N: _choose_kets(2 * N, Y, N)),
        "dicke_2": padded(lambda N: _choose_kets(N + 2, Y, 2)),
        "dicke_4": lambda N: _uniform(_choose_kets(2 * N + 2, Y, 2), 2 * N + 2),
        "dyck_1": padded(lambda N: _dyck_words(2 * N, X, Y)),
        "dyck_2": lambda N: _uniform(_dyck_words(2 * N + 2, Y, X), 2 * N + 2),
        "majumdar_ghosh": lambda N: _singlet_product(N + 1),
        "aklt": lambda N: _singlet_product(N + 1),
    }


def _graph_generators() -> dict[str, Callable[[int], QuantumState]]:
    return {
        "linear": lambda N: _linear_graph(2 * N + 2),
        "ring": lambda N: _ring_graph(2 * N + 2),
        "star": lambda N: _star_graph(2 * N + 2),
    }


_GENERATORS = {
    "optics": _optics_generators(),
    "circuit": _circuit_generators(),
    "graph": _graph_generators(),
}

# trailing mode-0 particles per class, as a function of N
_ANCILLAS = {
    "optics": {
        "ghz": lambda N: 0, "w": lambda N: 0, "bell_pairs_2d": lambda N: 0,
        "bell_pairs_3d": lambda N: 2, "ghz_x_w": lambda N: 0, "w_x_w": lambda N: 0,
        "ghz_x_ghz": lambda N: 0, "ghz3d_x_ghz3d": lambda N: 0,
        "spin_half": lambda N: N + 1, "majumdar_ghosh": lambda N: 0,
        "dicke_1": lambda N: 2, "dicke_2": lambda N: N + 1,
        "dicke_3": lambda N: N + 1, "dicke_4": lambda N: 0,
        "dicke_5": lambda N: N + 1, "dyck_1": lambda N: 2, "dyck_2": lambda N: 0,
        "aklt": lambda N: N + 2, "motzkin": lambda N: N + 1,
        "motzkin_small": lambda N: N + 2,
    },
    "circuit": {
        "ghz": lambda N: 0, "w": lambda N: 0, "bell_pairs_2d": lambda N: 0,
        "ghz_x_w": lambda N: 0, "w_x_w": lambda N: 0, "ghz_x_ghz": lambda N: 0,
        "spin_half": lambda N: N, "dicke_1": lambda N: 2, "dicke_2": lambda N: N,
        "dicke_4": lambda N: 0, "dyck_1": lambda N: 2, "dyck_2": lambda N: 0,
        "majumdar_ghosh": lambda N: 0, "aklt": lambda N: 0,
    },
    "graph": {"linear": lambda N: 0, "ring": lambda N: 0, "star": lambda N: 0},
}


def _load_catalog() -> dict[str, list[TargetClass]]:
    raw = json.loads(
        resources.files("qmeta").joinpath("data/targets/catalog.json").read_text())
    catalog: dict[str, list[TargetClass]] = {}
    for task, entries in raw.items():
        classes = []
        for e in entries:
            correct = e["correct_states"]
            if correct == "inf":
                correct = inf
            classes.append(TargetClass(
                name=e["name"], slug=e["slug"], task=task,
                generator=_GENERATORS[task][e["slug"]],
                ancilla_count=_ANCILLAS[task][e["slug"]],
                correct_states=correct,
                previously_known=e["previously_known"]))
        catalog[task] = classes
    return catalog


_CATALOG = _load_catalog()


def list_targets(task: str) -> list[TargetClass]:
    if task not in _CATALOG:
        raise TargetError(f"unknown task {task!r}")
    return list(_CATALOG[task])


def get_target(name: str, task: str) -> TargetClass:
    for tc in list_targets(task):
        if name in (tc.name, tc.slug):
            return tc
    raise UnknownTargetError(f"no target {name!r} for task {task!r}")


def target_state(name: str, N: int, task: str = "optics",
                 max_particles: int = MAX_PARTICLES_DEFAULT) -> QuantumState:
    """The class state at size index N, exactly as printed in the fixtures."""
    tc = get_target(name, task)
    if N < 0:
        raise TargetError(f"N must be >= 0, got {N}")
    n = tc.particle_count(N)
    if n > max_particles:
        raise SizeError(f"{tc.name} at N={N} needs {n} particles, bound is {max_particles}")
    return tc.generator(N)


def fixture_lines(slug_or_name: str, task: str) -> list[str]:
    """The three verbatim table strings (N=0,1,2) for a class."""
    tc = get_target(slug_or_name, task)
    text = resources.files("qmeta").joinpath(
        f"data/targets/{task}/{tc.slug}.txt").read_text()
    return text.splitlines()
