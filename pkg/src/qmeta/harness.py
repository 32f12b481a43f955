"""Scoring candidate programs against target state classes.

For each size index N a candidate is instantiated, simulated and
compared to the target state by fidelity.  Any failure along the way
(parse error, out-of-range index, empty state, post-processing failure,
timeout) scores fidelity 0 at that N with a flag naming the failure.
Selection among candidates follows a two-stage rule: longest prefix of
exact fidelity-1 entries first, then highest mean fidelity over N <= 4,
with ties broken by candidate id.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import circuits, dsl, graphs
from .datagen import GenConfig, execute_code, read_corpus
from .states import EmptyStateError, QuantumState, canonicalize, fidelity
from .targets import get_target, target_state

FLAG_OK = "ok"
FLAG_EMPTY = "empty_state"
FLAG_TIMEOUT = "timeout"

DEFAULT_BUDGET_S = 60.0
SCREEN_N_MAX = 4     # initial extrapolation test
CONFIRM_N_MAX = 7    # confirmation runs for successful candidates


@dataclass(frozen=True)
class Candidate:
    """A program under evaluation; ``origin`` records where it came from."""

    code: dsl.MetaCode
    id: str
    origin: str = "handwritten"  # model-sample | corpus | handwritten

    @staticmethod
    def from_text(text: str, task: str, id: str, origin: str = "handwritten"):
        return Candidate(dsl.parse_code(text, task), id, origin)


@dataclass
class EvalResult:
    candidate_id: str
    target: str
    fidelities: list[float]
    exact: list[bool]          # fidelity exactly 1 at this N
    flags: list[str]

    @property
    def max_correct_n(self) -> int:
        """Largest N with all fidelities for 0..N exactly one (-1 if none)."""
        n = -1
        for ok in self.exact:
            if not ok:
                break
            n += 1
        return n

    @property
    def correct_states(self) -> int:
        """Number of leading correct states (the table convention)."""
        return self.max_correct_n + 1

    def mean_fidelity(self, n_max: int = SCREEN_N_MAX) -> float:
        vals = self.fidelities[:n_max + 1]
        return sum(vals) / len(vals) if vals else 0.0


def evaluate(candidate: Candidate, target_name: str, n_max: int = SCREEN_N_MAX,
             task: str = "optics", budget_s: float = DEFAULT_BUDGET_S,
             max_particles: int = 24) -> EvalResult:
    """Fidelity of a candidate against one target class for N = 0..n_max."""
    if candidate.code.task != task:
        raise ValueError(
            f"candidate is a {candidate.code.task} program, target task is {task}")
    tc = get_target(target_name, task)
    fidelities: list[float] = []
    exact: list[bool] = []
    flags: list[str] = []
    for N in range(n_max + 1):
        target = target_state(tc.slug, N, task, max_particles=max_particles)
        f, flag = _single_fidelity(candidate.code, target, N, budget_s)
        fidelities.append(float(f))
        exact.append(f == 1)
        flags.append(flag)
    return EvalResult(candidate.id, tc.slug, fidelities, exact, flags)


def _single_fidelity(code: dsl.MetaCode, target: QuantumState, N: int,
                     budget_s: float):
    deadline = time.monotonic() + budget_s
    try:
        if code.task == "optics":
            setup = dsl.instantiate(code, N)
            state = canonicalize(graphs.compute_state(setup, deadline=deadline))
        else:
            prog = dsl.instantiate(code, N)
            state = circuits.postprocess(circuits.run_circuit(prog, check=False))
    except graphs.EnumerationTimeout:
        return Fraction(0), FLAG_TIMEOUT
    except (dsl.InstantiationError, circuits.PostprocessError,
            circuits.CircuitError, graphs.SetupError) as exc:
        return Fraction(0), f"error:{type(exc).__name__}"
    if not state:
        return Fraction(0), FLAG_EMPTY
    try:
        return fidelity(state, target), FLAG_OK
    except EmptyStateError:
        return Fraction(0), FLAG_EMPTY


def select_best(results: list[EvalResult]) -> EvalResult:
    """Two-stage selection.

    Filter for the highest N such that all fidelities up to that N equal
    one, then take the highest average fidelity over N <= 4; remaining
    ties go to the lexicographically smallest candidate id.
    """
    if not results:
        raise ValueError("no results to select from")
    return min(results,
               key=lambda r: (-r.max_correct_n, -r.mean_fidelity(), r.candidate_id))


def _evaluate_one(args):
    candidate, target_name, n_max, task, budget_s = args
    return evaluate(candidate, target_name, n_max, task, budget_s)


def evaluate_candidates(candidates, target_name, n_max=SCREEN_N_MAX,
                        task="optics", budget_s=DEFAULT_BUDGET_S,
                        workers: int = 1):
    """Evaluate many candidates; order (and results) independent of workers."""
    jobs = [(c, target_name, n_max, task, budget_s) for c in candidates]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate_one, jobs))
    return [_evaluate_one(j) for j in jobs]


# --- corpus overlap ------------------------------------------------------

def corpus_overlap_scan(corpus_path, task: str = "optics", n_max: int = 3,
                        targets: list[str] | None = None,
                        bins: int = 20) -> dict:
    """Best fidelity of any corpus sample against each target, per N.

    The stored states cover N = 0, 1, 2; higher N re-instantiates the
    stored program.  Also returns a fidelity histogram per target and N.
    """
    from .states import parse_state
    from .targets import list_targets

    names = targets or [tc.slug for tc in list_targets(task)]
    target_cache = {(slug, N): target_state(slug, N, task)
                    for slug in names for N in range(n_max + 1)}
    style = "optics" if task == "optics" else "circuit"
    maxima = {slug: [Fraction(0)] * (n_max + 1) for slug in names}
    hists = {slug: [[0] * bins for _ in range(n_max + 1)] for slug in names}

    for record in read_corpus(corpus_path):
        config = GenConfig.from_tag(record.config_tag)
        if config.task != task:
            continue
        code = None
        states: dict[int, QuantumState] = {}
        for N in range(n_max + 1):
            if N <= 2:
                states[N] = parse_state(record.state_texts[N], style)
            else:
                if code is None:
                    code = dsl.parse_code(record.code_text, config.task)
                try:
                    states[N] = execute_code(code, N, dim=config.dim)
                except (dsl.InstantiationError, circuits.PostprocessError):
                    continue
        for slug in names:
            for N, state in states.items():
                if not state:
                    continue
                f = fidelity(state, target_cache[(slug, N)])
                if f > maxima[slug][N]:
                    maxima[slug][N] = f
                hists[slug][N][min(int(float(f) * bins), bins - 1)] += 1

    return {
        "task": task,
        "n_max": n_max,
        "max_fidelity": {s: [float(f) for f in m] for s, m in maxima.items()},
        "exact_hit": {s: [f == 1 for f in m] for s, m in maxima.items()},
        # observation only (holds on large corpora, not asserted): best
        # training-data overlap tends to fall as N grows
        "max_fidelity_non_increasing": {
            s: all(m[i] >= m[i + 1] for i in range(len(m) - 1))
            for s, m in maxima.items()},
        "histograms": hists,
        "bins": bins,
    }


# --- reports -------------------------------------------------------------

def write_report(results: list[EvalResult], out_dir) -> dict:
    """CSV of per-(candidate, target, N) fidelities plus a JSON summary."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    csv_path = out_dir / "fidelities.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["candidate", "target", "N", "fidelity", "exact", "flag"])
        for r in results:
            for N, (f, ex, flag) in enumerate(zip(r.fidelities, r.exact, r.flags)):
                writer.writerow([r.candidate_id, r.target, N, repr(f), int(ex), flag])

    by_target: dict[str, list[EvalResult]] = {}
    for r in results:
        by_target.setdefault(r.target, []).append(r)
    summary = {"targets": {}}
    for target, rs in sorted(by_target.items()):
        best = select_best(rs)
        summary["targets"][target] = {
            "best_candidate": best.candidate_id,
            "max_correct_n": best.max_correct_n,
            "correct_states": best.correct_states,
            "mean_fidelity_screen": best.mean_fidelity(),
            "candidates_evaluated": len(rs),
            "selection_trace": [
                {"candidate": r.candidate_id, "max_correct_n": r.max_correct_n,
                 "mean_fidelity": r.mean_fidelity()}
                for r in sorted(rs, key=lambda r: (-r.max_correct_n,
                                                   -r.mean_fidelity(), r.candidate_id))
            ],
        }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=1, sort_keys=True))
    return summary
