"""Constrained random program generation and corpus emission.

A sample is drawn by generating a random program, executing it at
N = 0, 1, 2 and rejecting on any constraint violation (rejection
sampling, with per-reason counters).  Accepted samples are canonicalized,
rendered and tokenized into a self-certifying record: re-executing the
stored program text must reproduce the stored state texts byte for byte.

Every record is produced from its own RNG stream derived from
(root seed, config tag, record index), so corpus generation is
reproducible bit for bit regardless of worker count.
"""

from __future__ import annotations

import json
import zlib
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np

from . import circuits, dsl, graphs, vocab
from .states import QuantumState, canonicalize, print_state

CORPUS_FORMAT = "qmeta-corpus-v1"

# term-count caps per N=0,1,2 (optics task)
STATE_TERM_CAPS = {"long": (8, 16, 32), "short": (6, 6, 6)}
CODE_LINE_BOUNDS = {"long": ((4, 12), (2, 12)), "short": ((4, 8), (2, 6))}

TRAIN_INDICES = (0, 1, 2)
GENERATION_N_BOUND = 8  # formulas are vetted for all N < 8


class DatagenError(RuntimeError):
    pass


class ProgressError(DatagenError):
    """Rejection rate too high to fill the requested quota."""


@dataclass(frozen=True)
class GenConfig:
    """One sub-dataset of the generation grid.

    The five optics switches span the 2**5 grid; circuit and graph
    configs only carry the task (their constraints are fixed).
    """

    task: str = "optics"
    code_length: str = "long"     # long | short
    min_degree: int = 1           # 1 | 2
    dim: int = 3                  # 2 | 3
    weighted: bool = True
    state_length: str = "long"    # long | short

    def __post_init__(self):
        if self.task not in dsl.TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        if self.code_length not in ("long", "short"):
            raise ValueError("code_length must be long or short")
        if self.min_degree not in (1, 2):
            raise ValueError("min_degree must be 1 or 2")
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        if self.state_length not in ("long", "short"):
            raise ValueError("state_length must be long or short")

    @property
    def tag(self) -> str:
        if self.task != "optics":
            return self.task
        return "-".join([
            f"{self.code_length}code", f"deg{self.min_degree}", f"dim{self.dim}",
            "weighted" if self.weighted else "unweighted",
            f"{self.state_length}states"])

    @staticmethod
    def grid() -> list["GenConfig"]:
        """The 32 optics sub-dataset configurations."""
        out = []
        for code_length, min_degree, dim, weighted, state_length in product(
                ("long", "short"), (1, 2), (2, 3), (True, False), ("long", "short")):
            out.append(GenConfig("optics", code_length, min_degree, dim,
                                 weighted, state_length))
        return out

    @staticmethod
    def from_tag(tag: str) -> "GenConfig":
        if tag in ("circuit", "graph"):
            return GenConfig(task=tag)
        for cfg in GenConfig.grid():
            if cfg.tag == tag:
                return cfg
        raise ValueError(f"unknown config tag {tag!r}")


@dataclass(frozen=True)
class SamplePair:
    """One accepted training record (sequence A tokens, sequence B tokens)."""

    a_ids: tuple[int, ...]
    b_ids: tuple[int, ...]
    state_texts: tuple[str, str, str]
    code_text: str
    config_tag: str
    seed: tuple[int, int, int]

    def to_json(self) -> str:
        task = GenConfig.from_tag(self.config_tag).task
        sep = "|" if task == "optics" else "<SEP>"
        return json.dumps({
            "a_ids": list(self.a_ids), "b_ids": list(self.b_ids),
            "a_text": sep.join(self.state_texts), "b_text": self.code_text,
            "config": self.config_tag, "seed": list(self.seed),
        }, sort_keys=True)

    @staticmethod
    def from_json(line: str) -> "SamplePair":
        d = json.loads(line)
        task = GenConfig.from_tag(d["config"]).task
        sep = "|" if task == "optics" else "<SEP>"
        return SamplePair(tuple(d["a_ids"]), tuple(d["b_ids"]),
                          tuple(d["a_text"].split(sep)), d["b_text"],
                          d["config"], tuple(d["seed"]))


# --- formula pools -------------------------------------------------------
#
# The drawable coefficient tuples.  Circuit/graph arguments follow the
# concatenation sets (no bare zero constant); optics vertex formulas allow
# the literal 0 so constant lines like e(0,1,0,0) stay reachable.

def _optics_pool(body: bool) -> list[dsl.Formula]:
    pool = []
    its = dsl.FORMULA_ITS if body else (0,)
    for c0, cN, cII in product(dsl.FORMULA_INTS, dsl.FORMULA_SCALES, its):
        f = dsl.Formula(c0, cN, cII)
        ok = True
        for N in range(GENERATION_N_BOUND):
            top = 2 * N + 3
            iis = range(max(N, 1)) if body else (0,)
            for ii in iis:
                if not 0 <= f.value(N, ii) <= top:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            pool.append(f)
    return pool


def _circuit_outer_pool() -> list[dsl.Formula]:
    pool = []
    for c0, cN in product(dsl.FORMULA_INTS, dsl.FORMULA_SCALES):
        if (c0, cN) == (0, 0):
            continue
        f = dsl.Formula(c0, cN, 0)
        if all(0 <= f.value(N) <= 2 * N + 2 for N in range(GENERATION_N_BOUND)):
            pool.append(f)
    return pool


def _circuit_range_pool() -> list[dsl.Formula]:
    return [dsl.Formula(c0, cN, 0)
            for c0, cN in product(dsl.FORMULA_INTS, dsl.FORMULA_SCALES)
            if (c0, cN) != (0, 0)]


def _circuit_body_pool(loop_range: dsl.Formula) -> list[dsl.Formula]:
    pool = []
    for c0, cN, cII in product(dsl.FORMULA_INTS, dsl.FORMULA_SCALES, dsl.FORMULA_ITS):
        if (c0, cN, cII) == (0, 0, 0):
            continue
        f = dsl.Formula(c0, cN, cII)
        ok = True
        for N in range(GENERATION_N_BOUND):
            for ii in range(max(loop_range.value(N), 0)):
                if not 0 <= f.value(N, ii) <= 2 * N + 2:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            pool.append(f)
    return pool


_OPTICS_PRE = _optics_pool(body=False)
_OPTICS_BODY = _optics_pool(body=True)
_CIRCUIT_OUTER = _circuit_outer_pool()
_CIRCUIT_RANGES = _circuit_range_pool()
_CIRCUIT_BODY_CACHE: dict[dsl.Formula, list[dsl.Formula]] = {}

WEIGHT_CHOICES = (-2, -1, 2)


def _clash_table(pool: list[dsl.Formula], points) -> list[list[bool]]:
    """clash[i][j]: formulas i and j coincide at some admissible point."""
    values = [tuple(f.value(N, ii) for N, ii in points) for f in pool]
    n = len(pool)
    table = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            hit = any(a == b for a, b in zip(values[i], values[j]))
            table[i][j] = table[j][i] = hit
    return table


_OPTICS_PRE_POINTS = [(N, 0) for N in range(GENERATION_N_BOUND)]
_OPTICS_BODY_POINTS = [(N, ii) for N in range(GENERATION_N_BOUND) for ii in range(N)]
_OPTICS_PRE_CLASH = _clash_table(_OPTICS_PRE, _OPTICS_PRE_POINTS)
_OPTICS_BODY_CLASH = _clash_table(_OPTICS_BODY, _OPTICS_BODY_POINTS)


def _admissible_points(loop_range: dsl.Formula, in_loop: bool):
    """(N, ii) pairs a gate argument can be evaluated at during screening."""
    points = []
    for N in range(GENERATION_N_BOUND):
        if in_loop:
            points.extend((N, ii) for ii in range(max(loop_range.value(N), 0)))
        else:
            points.append((N, 0))
    return points


def draw_code(config: GenConfig, rng: np.random.Generator) -> dsl.MetaCode | None:
    """Draw one random program, or None if argument screening fails."""
    if config.task == "optics":
        return _draw_optics_code(config, rng)
    return _draw_circuit_code(config.task, rng)


def _draw_optics_code(config: GenConfig,
                      rng: np.random.Generator) -> dsl.MetaCode | None:
    (pre_lo, pre_hi), (body_lo, body_hi) = CODE_LINE_BOUNDS[config.code_length]
    n_pre = int(rng.integers(pre_lo, pre_hi + 1))
    n_body = int(rng.integers(body_lo, body_hi + 1))

    def line(pool, clash):
        ui = int(rng.integers(len(pool)))
        # an edge must join two distinct detectors at every size it is
        # instantiated at, so the second endpoint is re-picked on clashes
        row = clash[ui]
        for _attempt in range(64):
            vi = int(rng.integers(len(pool)))
            if not row[vi]:
                break
        else:
            return None
        mu = int(rng.integers(config.dim))
        mv = int(rng.integers(config.dim))
        w = 1
        if config.weighted and rng.integers(2):
            w = WEIGHT_CHOICES[int(rng.integers(len(WEIGHT_CHOICES)))]
        return dsl.OpticsLine(pool[ui], pool[vi], mu, mv, w)

    pre = []
    for _ in range(n_pre):
        ln = line(_OPTICS_PRE, _OPTICS_PRE_CLASH)
        if ln is None:
            return None
        pre.append(ln)
    body = []
    for _ in range(n_body):
        ln = line(_OPTICS_BODY, _OPTICS_BODY_CLASH)
        if ln is None:
            return None
        body.append(ln)
    return dsl.MetaCode("optics", tuple(pre), tuple(body))


def _draw_circuit_code(task: str, rng: np.random.Generator) -> dsl.MetaCode | None:
    gates = ("qCZ",) if task == "graph" else tuple(dsl.GATE_ARITY)
    loop_range = _CIRCUIT_RANGES[int(rng.integers(len(_CIRCUIT_RANGES)))]
    if loop_range not in _CIRCUIT_BODY_CACHE:
        _CIRCUIT_BODY_CACHE[loop_range] = _circuit_body_pool(loop_range)
    body_pool = _CIRCUIT_BODY_CACHE[loop_range]
    if not body_pool:
        return None

    def draw_line(pool, in_loop):
        gate = gates[int(rng.integers(len(gates)))]
        arity = dsl.GATE_ARITY[gate]
        points = _admissible_points(loop_range, in_loop)
        args: list[dsl.Formula] = []
        for _ in range(arity):
            for _attempt in range(64):
                cand = pool[int(rng.integers(len(pool)))]
                collides = any(
                    any(cand.value(N, ii) == prev.value(N, ii) for N, ii in points)
                    for prev in args)
                if not collides:
                    args.append(cand)
                    break
            else:
                return None
        return dsl.CircuitLine(gate, tuple(args))

    sections = []
    for pool, in_loop in ((_CIRCUIT_OUTER, False), (body_pool, True), (_CIRCUIT_OUTER, False)):
        n = int(rng.integers(1, 6))
        lines = []
        for _ in range(n):
            ln = draw_line(pool, in_loop)
            if ln is None:
                return None
            lines.append(ln)
        sections.append(tuple(lines))
    if not body_pool:
        return None
    return dsl.MetaCode(task, sections[0], sections[1], sections[2], loop_range)


# --- sample generation ---------------------------------------------------

def execute_code(code: dsl.MetaCode, N: int, dim: int = 3) -> QuantumState:
    """Run a program at one N and return the canonical (unnormalized) state."""
    if code.task == "optics":
        setup = dsl.instantiate(code, N, dim=dim)
        return canonicalize(graphs.compute_state(setup))
    prog = dsl.instantiate(code, N)
    return circuits.postprocess(circuits.run_circuit(prog, check=False))


def try_sample(config: GenConfig, rng: np.random.Generator,
               seed: tuple[int, int, int]) -> SamplePair | str:
    """One draw: an accepted SamplePair or a rejection-reason string."""
    code = draw_code(config, rng)
    if code is None:
        return "argument_screening"
    states = []
    if config.task == "optics":
        caps = STATE_TERM_CAPS[config.state_length]
        for N in TRAIN_INDICES:
            try:
                setup = dsl.instantiate(code, N, dim=config.dim)
            except dsl.CollisionError:
                return "self_loop"
            except dsl.InstantiationError:
                return "out_of_range"
            if graphs.min_degree(setup) < config.min_degree:
                return "min_degree"
            state = graphs.compute_state(setup)
            if not state:
                return "empty_state"
            if len(state) > caps[N]:
                return "term_cap"
            states.append(canonicalize(state))
    else:
        for N in TRAIN_INDICES:
            try:
                prog = dsl.instantiate(code, N)
            except dsl.CollisionError:
                return "gate_collision"
            except dsl.InstantiationError:
                return "out_of_range"
            try:
                states.append(circuits.postprocess(circuits.run_circuit(prog, check=False)))
            except circuits.PostprocessError:
                return "postprocess"
    code_text = dsl.print_code(code)
    try:
        a_ids = vocab.encode_states(states, config.task)
        b_ids = vocab.encode_code(code_text, config.task)
    except vocab.LengthError:
        return "length_cap"
    style = "optics" if config.task == "optics" else "circuit"
    return SamplePair(tuple(a_ids), tuple(b_ids),
                      tuple(print_state(s, style) for s in states),
                      code_text, config.tag, seed)


def _record_stream_seed(root_seed: int, tag: str, index: int) -> tuple[int, int, int]:
    return (root_seed, zlib.crc32(tag.encode()), index)


def generate_record(config: GenConfig, root_seed: int, index: int,
                    max_attempts: int = 100_000) -> tuple[SamplePair, Counter]:
    """Deterministically produce record ``index`` of a config's stream."""
    seed = _record_stream_seed(root_seed, config.tag, index)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    rejections: Counter = Counter()
    for _ in range(max_attempts):
        result = try_sample(config, rng, seed)
        if isinstance(result, SamplePair):
            return result, rejections
        rejections[result] += 1
    raise ProgressError(
        f"no accepted sample for {config.tag} record {index} after "
        f"{max_attempts} attempts; rejections: {dict(rejections)}")


def verify_record(record: SamplePair, max_particles: int = 64) -> bool:
    """Self-certification: re-executing the code reproduces the record."""
    config = GenConfig.from_tag(record.config_tag)
    code = dsl.parse_code(record.code_text, config.task)
    style = "optics" if config.task == "optics" else "circuit"
    states = []
    for N in TRAIN_INDICES:
        state = execute_code(code, N, dim=config.dim)
        if print_state(state, style) != record.state_texts[N]:
            return False
        states.append(state)
    if tuple(vocab.encode_states(states, config.task)) != record.a_ids:
        return False
    if tuple(vocab.encode_code(record.code_text, config.task)) != record.b_ids:
        return False
    return True


def _worker_chunk(args) -> list[tuple[SamplePair, Counter]]:
    config_tag, root_seed, indices = args
    config = GenConfig.from_tag(config_tag)
    return [generate_record(config, root_seed, i) for i in indices]


def generate_corpus(configs, total: int, out_path, seed: int,
                    workers: int = 1, proportions=None) -> dict:
    """Write a shuffled JSON-lines corpus plus its manifest.

    Records are drawn per config (even split unless ``proportions`` is
    given), deduplicated on program text in stream order, shuffled with a
    seed-derived permutation and written one JSON object per line.  The
    manifest records counts, the rejection histogram, seeds and
    vocabulary hashes.  Output is byte-identical for any worker count.
    """
    configs = list(configs)
    if not configs or total <= 0:
        raise ValueError("need at least one config and a positive total")
    if proportions is None:
        proportions = [1] * len(configs)
    if len(proportions) != len(configs):
        raise ValueError("one proportion per config")
    weight_sum = sum(proportions)
    quotas = [total * p // weight_sum for p in proportions]
    for i in range(total - sum(quotas)):
        quotas[i % len(configs)] += 1

    records: list[SamplePair] = []
    seen_codes: set[str] = set()
    rejections: Counter = Counter()
    chunk = 64

    def consume(results):
        nonlocal accepted
        for rec, rej in results:
            rejections.update(rej)
            if accepted >= quota:
                continue
            if rec.code_text in seen_codes:
                rejections["duplicate_code"] += 1
                continue
            seen_codes.add(rec.code_text)
            records.append(rec)
            accepted += 1

    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for config, quota in zip(configs, quotas):
            accepted = 0
            next_index = 0
            while accepted < quota:
                todo = quota - accepted
                # batch policy must not depend on worker count: output bytes
                # are required to be identical for any parallelism level
                batch = max(1, min(2 * todo, 512))
                indices = range(next_index, next_index + batch)
                next_index = indices.stop
                if pool is None:
                    consume(generate_record(config, seed, i) for i in indices)
                else:
                    jobs = [(config.tag, seed, list(indices[k:k + chunk]))
                            for k in range(0, len(indices), chunk)]
                    for batch in pool.map(_worker_chunk, jobs):
                        consume(iter(batch))
    finally:
        if pool is not None:
            pool.shutdown()

    order = np.random.default_rng(
        np.random.SeedSequence((seed, len(records)))).permutation(len(records))
    lines = [records[i].to_json() for i in order]

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text("\n".join(lines) + "\n")

    per_config = Counter(r.config_tag for r in records)
    manifest = {
        "format": CORPUS_FORMAT,
        "total": len(records),
        "per_config": dict(sorted(per_config.items())),
        "rejections": dict(sorted(rejections.items())),
        "seed": seed,
        "vocab_hashes": vocab.vocab_hashes(),
        "max_len": {t: list(v) for t, v in vocab.MAX_LEN.items()},
    }
    manifest_path = out_path.with_suffix(out_path.suffix + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return manifest


def read_corpus(path) -> list[SamplePair]:
    return [SamplePair.from_json(line)
            for line in Path(path).read_text().splitlines() if line]
