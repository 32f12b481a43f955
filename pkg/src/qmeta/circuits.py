"""Exact statevector simulation for the circuit and graph-state tasks.

The supported gate set (H, X, Z, CNOT, CZ, Toffoli, CSWAP) acting on
|0...0> keeps every amplitude an integer multiple of a common power of
1/sqrt(2), so the simulator stores amplitudes as Python integers plus a
global count of Hadamard applications.  There is no rounding anywhere:
the post-processing into integer-coefficient states is exact, and the
norm invariant ``sum(a_i^2) == 2**h`` is checked after every gate.

Qubit 0 is the leftmost letter of a ket, so statevector index order is
lexicographic ket order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dsl import CircuitProgram, GATE_ARITY
from .states import QuantumState


class CircuitError(ValueError):
    pass


class PostprocessError(CircuitError):
    """Amplitude ratios are not integers after dividing by the smallest."""


@dataclass
class StateVector:
    """2**n integer amplitudes with an implicit global factor 2**(-h/2)."""

    qubit_count: int
    amps: list[int]
    half_powers: int = 0  # h: number of Hadamards applied

    def norm_squared_scaled(self) -> int:
        return sum(a * a for a in self.amps)

    def check_norm(self) -> None:
        if self.norm_squared_scaled() != 1 << self.half_powers:
            raise CircuitError("norm invariant violated")

    def amplitude(self, index: int) -> float:
        return self.amps[index] / (2 ** (self.half_powers / 2))


def _mask(n: int, qubit: int) -> int:
    if not 0 <= qubit < n:
        raise CircuitError(f"qubit {qubit} outside 0..{n - 1}")
    return 1 << (n - 1 - qubit)


def apply_gate(sv: StateVector, gate: str, qubits: tuple[int, ...]) -> None:
    """Apply one gate in place."""
    n = sv.qubit_count
    amps = sv.amps
    if len(set(qubits)) != len(qubits):
        raise CircuitError(f"{gate} applied to coinciding qubits {qubits}")
    if gate == "qH":
        (q,) = qubits
        m = _mask(n, q)
        for i in range(len(amps)):
            if not i & m:
                a, b = amps[i], amps[i | m]
                amps[i], amps[i | m] = a + b, a - b
        sv.half_powers += 1
    elif gate == "qX":
        (q,) = qubits
        m = _mask(n, q)
        for i in range(len(amps)):
            if not i & m:
                amps[i], amps[i | m] = amps[i | m], amps[i]
    elif gate == "qZ":
        (q,) = qubits
        m = _mask(n, q)
        for i in range(len(amps)):
            if i & m:
                amps[i] = -amps[i]
    elif gate == "qCNOT":
        c, t = qubits
        mc, mt = _mask(n, c), _mask(n, t)
        for i in range(len(amps)):
            if i & mc and not i & mt:
                amps[i], amps[i | mt] = amps[i | mt], amps[i]
    elif gate == "qCZ":
        a, b = qubits
        ma, mb = _mask(n, a), _mask(n, b)
        for i in range(len(amps)):
            if i & ma and i & mb:
                amps[i] = -amps[i]
    elif gate == "qToffoli":
        c1, c2, t = qubits
        m1, m2, mt = _mask(n, c1), _mask(n, c2), _mask(n, t)
        for i in range(len(amps)):
            if i & m1 and i & m2 and not i & mt:
                amps[i], amps[i | mt] = amps[i | mt], amps[i]
    elif gate == "qCSWAP":
        c, a, b = qubits
        mc, ma, mb = _mask(n, c), _mask(n, a), _mask(n, b)
        for i in range(len(amps)):
            if i & mc and i & ma and not i & mb:
                amps[i], amps[(i ^ ma) | mb] = amps[(i ^ ma) | mb], amps[i]
    else:
        raise CircuitError(f"unknown gate {gate!r}")


def run_circuit(prog: CircuitProgram, check: bool = True) -> StateVector:
    """Execute a program on |0...0> (or |+...+> when ``plus_init``)."""
    n = prog.qubit_count
    if not 1 <= n <= 20:
        raise CircuitError(f"qubit count {n} outside supported range 1..20")
    if prog.plus_init:
        sv = StateVector(n, [1] * (1 << n), half_powers=n)
    else:
        sv = StateVector(n, [1] + [0] * ((1 << n) - 1))
    for gate, qubits in prog.gates:
        if len(qubits) != GATE_ARITY.get(gate, -1):
            raise CircuitError(f"bad arity for {gate}")
        apply_gate(sv, gate, qubits)
        if check:
            sv.check_norm()
    return sv


def build_graph_state(edges, qubit_count: int) -> StateVector:
    """H on every qubit, then CZ per edge; edge order cannot matter."""
    gates = tuple(("qCZ", (int(u), int(v))) for u, v in edges)
    return run_circuit(CircuitProgram(qubit_count, gates, plus_init=True))


def postprocess(sv: StateVector) -> QuantumState:
    """Normalize a statevector into an integer-coefficient state.

    Drops zero amplitudes, divides all coefficients by the smallest
    absolute coefficient (must divide exactly, else
    :class:`PostprocessError`), and flips the global sign so the first
    coefficient in ket order is positive.
    """
    n = sv.qubit_count
    nonzero = [(i, a) for i, a in enumerate(sv.amps) if a != 0]
    if not nonzero:
        raise PostprocessError("statevector is identically zero")
    smallest = min(abs(a) for _, a in nonzero)
    terms = {}
    for i, a in enumerate(sv.amps):
        if a == 0:
            continue
        if a % smallest:
            raise PostprocessError(
                f"coefficient {a} not divisible by smallest coefficient {smallest}")
        ket = tuple((i >> (n - 1 - q)) & 1 for q in range(n))
        terms[ket] = a // smallest
    flip = -1 if next(iter(sorted(terms.items())))[1] < 0 else 1
    if flip < 0:
        terms = {k: -v for k, v in terms.items()}
    return QuantumState(terms, particle_count=n, dim=2)


def stabilizer_fixes(sv: StateVector, vertex: int, neighbors) -> bool:
    """True iff X on ``vertex`` and Z on each neighbor leaves ``sv`` fixed."""
    probe = StateVector(sv.qubit_count, list(sv.amps), sv.half_powers)
    apply_gate(probe, "qX", (vertex,))
    for nb in neighbors:
        apply_gate(probe, "qZ", (int(nb),))
    return probe.amps == sv.amps
