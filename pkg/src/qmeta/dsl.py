"""Size-parametric design programs and their interpreter.

A program is a list of call lines before a ``for`` loop plus the loop
body (and, for circuit programs, lines after the loop).  Every numeric
argument is an affine formula ``c0 + cN*N + cII*ii`` in the size index N
and the loop variable ii.  Running the program at a concrete N yields an
optics :class:`~qmeta.graphs.Setup` on ``2N+4`` detectors or a
:class:`CircuitProgram` on ``2N+2`` qubits.

Three tasks share the surface syntax:

* ``optics``  -- lines are ``e(u,v,mu,mv[,w])`` edge calls, loop header is
  the fixed ``for ii in range(N):``.
* ``circuit`` -- lines are gate calls ``qH(...)``, ``qCNOT(...)``, ...;
  the loop bound is itself a formula, and lines may follow the loop.
* ``graph``   -- circuit syntax restricted to ``qCZ``.
"""

from __future__ import annotations

from dataclasses import dataclass
from .graphs import Edge, Setup

TASKS = ("optics", "circuit", "graph")

GATE_ARITY = {
    "qH": 1, "qX": 1, "qZ": 1,
    "qCNOT": 2, "qCZ": 2,
    "qToffoli": 3, "qCSWAP": 3,
}

# Component sets for randomly drawn formulas.  Printed text concatenates
# [constant][N part][ii part] and drops a leading '+'.
FORMULA_INTS = (-4, -3, -2, -1, 0, 1, 2, 3, 4)
FORMULA_SCALES = (0, 1, 2)     # coefficient of N
FORMULA_ITS = (-1, 0, 1, 2)    # coefficient of ii


class CodeError(ValueError):
    """Base class for program errors."""


class CodeParseError(CodeError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InstantiationError(CodeError):
    """Running a program at a concrete N failed; locates line and (N, ii)."""

    def __init__(self, message: str, line_no: int, N: int, ii: int | None = None):
        where = f"N={N}" if ii is None else f"N={N}, ii={ii}"
        super().__init__(f"line {line_no}: {message} ({where})")
        self.line_no = line_no
        self.N = N
        self.ii = ii


class OutOfRangeError(InstantiationError):
    pass


class CollisionError(InstantiationError):
    """Multi-qubit gate applied to coinciding qubits."""


@dataclass(frozen=True)
class Formula:
    """Affine expression ``c0 + cN*N + cII*ii``."""

    c0: int = 0
    cN: int = 0
    cII: int = 0

    def value(self, N: int, ii: int = 0) -> int:
        return self.c0 + self.cN * N + self.cII * ii

    def text(self) -> str:
        parts = []
        if self.c0 != 0:
            parts.append(str(self.c0))
        if self.cN == 1:
            parts.append("+N")
        elif self.cN:
            parts.append(f"+{self.cN}*N")
        if self.cII == 1:
            parts.append("+ii")
        elif self.cII == -1:
            parts.append("-ii")
        elif self.cII:
            parts.append(f"+{self.cII}*ii")
        if not parts:
            return "0"
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


def _format_formula(f: Formula, size_var: str) -> str:
    return f.text().replace("N", size_var) if size_var != "N" else f.text()


def parse_formula(text: str, size_var: str = "N") -> Formula:
    """Parse a sum of integer, ``N`` and ``ii`` terms in any order."""
    s = text.strip()
    if not s:
        raise ValueError("empty formula")
    c0 = cN = cII = 0
    seen: set[str] = set()
    pos = 0
    first = True
    while pos < len(s):
        sign = 1
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
        elif not first:
            raise ValueError(f"expected +/- at {pos} in {text!r}")
        first = False
        # optional coefficient
        digits = ""
        while pos < len(s) and s[pos].isdigit():
            digits += s[pos]
            pos += 1
        coeff = int(digits) if digits else None
        if pos < len(s) and s[pos] == "*":
            if coeff is None:
                raise ValueError(f"dangling '*' in {text!r}")
            pos += 1
        if s[pos:pos + len(size_var)] == size_var and size_var != "ii":
            kind = "N"
            pos += len(size_var)
        elif s[pos:pos + 2] == "ii":
            kind = "ii"
            pos += 2
        else:
            if coeff is None:
                raise ValueError(f"malformed term at {pos} in {text!r}")
            kind = "const"
        if kind in seen:
            raise ValueError(f"repeated {kind} term in {text!r}")
        seen.add(kind)
        value = coeff if coeff is not None else 1
        if kind == "const":
            c0 = sign * value
        elif kind == "N":
            cN = sign * value
        else:
            cII = sign * value
    return Formula(c0, cN, cII)


@dataclass(frozen=True)
class OpticsLine:
    """Edge call ``e(u,v,mu,mv[,w])``; weight 1 is implicit and unprinted."""

    u: Formula
    v: Formula
    mu: int
    mv: int
    w: int = 1

    def text(self) -> str:
        args = [self.u.text(), self.v.text(), str(self.mu), str(self.mv)]
        if self.w != 1:
            args.append(str(self.w))
        return "e(" + ",".join(args) + ")"


@dataclass(frozen=True)
class CircuitLine:
    gate: str
    args: tuple[Formula, ...]

    def __post_init__(self):
        if self.gate not in GATE_ARITY:
            raise CodeError(f"unknown gate {self.gate!r}")
        if len(self.args) != GATE_ARITY[self.gate]:
            raise CodeError(f"{self.gate} expects {GATE_ARITY[self.gate]} arguments")

    def text(self, size_var: str = "NN") -> str:
        return f"{self.gate}(" + ",".join(_format_formula(a, size_var) for a in self.args) + ")"


@dataclass(frozen=True)
class MetaCode:
    """Parsed program: pre-loop lines, loop, body lines, post-loop lines."""

    task: str
    pre: tuple
    body: tuple
    post: tuple = ()
    loop_range: Formula = Formula(0, 1, 0)  # optics loop is exactly N

    def __post_init__(self):
        if self.task not in TASKS:
            raise CodeError(f"unknown task {self.task!r}")
        if self.task == "optics" and self.post:
            raise CodeError("optics programs have no post-loop lines")
        if self.task == "graph":
            for ln in (*self.pre, *self.body, *self.post):
                if ln.gate != "qCZ":
                    raise CodeError("graph programs may only use qCZ")


@dataclass(frozen=True)
class CircuitProgram:
    """Concrete gate list produced by instantiating a circuit/graph program."""

    qubit_count: int
    gates: tuple[tuple[str, tuple[int, ...]], ...]
    plus_init: bool = False  # graph task: qubits start in |+> instead of |0>


ERR_BAD_INDENT = "body lines must be indented with exactly four spaces"


def print_code(code: MetaCode) -> str:
    """Render a program; ``parse_code`` inverts this exactly."""
    out = []
    if code.task == "optics":
        out.extend(ln.text() for ln in code.pre)
        out.append("for ii in range(N):")
        out.extend("    " + ln.text() for ln in code.body)
    else:
        out.extend(ln.text() for ln in code.pre)
        out.append(f"for ii in range({_format_formula(code.loop_range, 'NN')}):")
        out.extend("    " + ln.text() for ln in code.body)
        out.extend(ln.text() for ln in code.post)
    return "\n".join(out) + "\n"


def _parse_optics_line(text: str, line_no: int) -> OpticsLine:
    s = text.strip()
    if not (s.startswith("e(") and s.endswith(")")):
        raise CodeParseError(f"expected edge call e(...), got {s!r}", line_no)
    args = s[2:-1].split(",")
    if len(args) not in (4, 5):
        raise CodeParseError(f"edge call takes 4 or 5 arguments, got {len(args)}", line_no)
    try:
        u = parse_formula(args[0])
        v = parse_formula(args[1])
        mu = int(args[2])
        mv = int(args[3])
        w = int(args[4]) if len(args) == 5 else 1
    except ValueError as exc:
        raise CodeParseError(str(exc), line_no) from None
    if mu not in (0, 1, 2) or mv not in (0, 1, 2):
        raise CodeParseError("mode literals must be 0, 1 or 2", line_no)
    if w == 0:
        raise CodeParseError("zero edge weight", line_no)
    return OpticsLine(u, v, mu, mv, w)


def _parse_circuit_line(text: str, line_no: int) -> CircuitLine:
    s = text.strip()
    if not s.endswith(")") or "(" not in s:
        raise CodeParseError(f"expected gate call, got {s!r}", line_no)
    name, _, rest = s.partition("(")
    if name not in GATE_ARITY:
        raise CodeParseError(f"unknown gate {name!r}", line_no)
    arg_text = rest[:-1]
    try:
        args = tuple(parse_formula(a, size_var="NN") for a in arg_text.split(","))
    except ValueError as exc:
        raise CodeParseError(str(exc), line_no) from None
    if len(args) != GATE_ARITY[name]:
        raise CodeParseError(
            f"{name} expects {GATE_ARITY[name]} arguments, got {len(args)}", line_no)
    return CircuitLine(name, args)


def parse_code(text: str, task: str = "optics") -> MetaCode:
    """Parse program text; raises :class:`CodeParseError` with a line number."""
    if task not in TASKS:
        raise CodeError(f"unknown task {task!r}")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    pre: list = []
    body: list = []
    post: list = []
    loop_range: Formula | None = None
    section = "pre"
    parse_line = _parse_optics_line if task == "optics" else _parse_circuit_line
    for i, raw in enumerate(lines, start=1):
        if not raw.strip():
            raise CodeParseError("blank line", i)
        if raw.startswith("for"):
            if loop_range is not None:
                raise CodeParseError("second loop", i)
            if task == "optics":
                if raw != "for ii in range(N):":
                    raise CodeParseError(f"bad loop header {raw!r}", i)
                loop_range = Formula(0, 1, 0)
            else:
                if not (raw.startswith("for ii in range(") and raw.endswith("):")):
                    raise CodeParseError(f"bad loop header {raw!r}", i)
                expr = raw[len("for ii in range("):-2]
                try:
                    loop_range = parse_formula(expr, size_var="NN")
                except ValueError as exc:
                    raise CodeParseError(str(exc), i) from None
                if loop_range.cII:
                    raise CodeParseError("loop bound cannot depend on ii", i)
            section = "body"
            continue
        stripped = raw.lstrip(" \t")
        indent = raw[: len(raw) - len(stripped)]
        if indent not in ("", "    "):
            raise CodeParseError(ERR_BAD_INDENT, i)
        indented = indent == "    "
        if section == "pre":
            if indented:
                raise CodeParseError("indented line before loop", i)
            pre.append(parse_line(raw, i))
        elif indented:
            if section == "post":
                raise CodeParseError("indented line after loop body ended", i)
            body.append(parse_line(raw[4:], i))
        else:
            if task == "optics":
                raise CodeParseError("optics programs end with the loop body", i)
            section = "post"
            post.append(parse_line(raw, i))
    if loop_range is None:
        raise CodeParseError("missing loop", len(lines))
    if not body:
        raise CodeParseError("empty loop body", len(lines))
    for ln in pre + post:
        args = ln.args if task != "optics" else (ln.u, ln.v)
        for a in args:
            if a.cII:
                raise CodeParseError("ii outside loop body", 0)
    return MetaCode(task, tuple(pre), tuple(body), tuple(post),
                    loop_range if task != "optics" else Formula(0, 1, 0))


def instantiate(code: MetaCode, N: int, dim: int = 3):
    """Run a program at size index ``N``.

    Optics programs produce a :class:`Setup` on ``2N+4`` detectors whose
    edge list is the pre lines followed by the body lines for
    ``ii = 0..N-1``.  Circuit and graph programs produce a
    :class:`CircuitProgram` on ``2N+2`` qubits; the loop runs
    ``max(loop_range(N), 0)`` times.  Formulas evaluating outside the
    vertex/qubit range raise :class:`OutOfRangeError`; multi-qubit gates
    with coinciding arguments raise :class:`CollisionError`.
    """
    if N < 0:
        raise CodeError(f"N must be >= 0, got {N}")
    if code.task == "optics":
        return _instantiate_optics(code, N, dim)
    return _instantiate_circuit(code, N)


def _instantiate_optics(code: MetaCode, N: int, dim: int) -> Setup:
    vertex_count = 2 * N + 4
    edges = []

    def eval_line(ln: OpticsLine, line_no: int, ii: int | None) -> Edge:
        u = ln.u.value(N, ii or 0)
        v = ln.v.value(N, ii or 0)
        for val in (u, v):
            if not (0 <= val < vertex_count):
                raise OutOfRangeError(
                    f"vertex {val} outside 0..{vertex_count - 1}", line_no, N, ii)
        if u == v:
            raise CollisionError(f"edge endpoints coincide at vertex {u}", line_no, N, ii)
        if not (ln.mu < dim and ln.mv < dim):
            raise OutOfRangeError(f"mode outside 0..{dim - 1}", line_no, N, ii)
        return Edge(u, v, ln.mu, ln.mv, ln.w)

    for idx, ln in enumerate(code.pre, start=1):
        edges.append(eval_line(ln, idx, None))
    loop_line = len(code.pre) + 1
    for ii in range(N):
        for off, ln in enumerate(code.body, start=1):
            edges.append(eval_line(ln, loop_line + off, ii))
    return Setup(vertex_count, dim, edges)


def _instantiate_circuit(code: MetaCode, N: int) -> CircuitProgram:
    qubit_count = 2 * N + 2
    gates = []

    def eval_line(ln: CircuitLine, line_no: int, ii: int | None) -> None:
        qubits = tuple(a.value(N, ii or 0) for a in ln.args)
        for q in qubits:
            if not (0 <= q < qubit_count):
                raise OutOfRangeError(
                    f"qubit {q} outside 0..{qubit_count - 1}", line_no, N, ii)
        if len(set(qubits)) != len(qubits):
            raise CollisionError(
                f"{ln.gate} applied to coinciding qubits {qubits}", line_no, N, ii)
        gates.append((ln.gate, qubits))

    for idx, ln in enumerate(code.pre, start=1):
        eval_line(ln, idx, None)
    loop_line = len(code.pre) + 1
    for ii in range(max(code.loop_range.value(N), 0)):
        for off, ln in enumerate(code.body, start=1):
            eval_line(ln, loop_line + off, ii)
    post_line = loop_line + len(code.body)
    for off, ln in enumerate(code.post, start=1):
        eval_line(ln, post_line + off, None)
    return CircuitProgram(qubit_count, tuple(gates), plus_init=code.task == "graph")
