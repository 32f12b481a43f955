"""Scoring candidate programs against a target family.

A candidate is executed for N = 0..4 (screening) or up to 7
(confirmation); each state is compared to the target by fidelity. The
best sample is the one with the longest prefix of exact-1 fidelities,
ties broken by the mean fidelity over N <= 4, then by id.
"""

import tempfile
from importlib import resources
from pathlib import Path

from qmeta.harness import Candidate, evaluate, select_best, write_report

ref = resources.files("qmeta").joinpath("data/reference")

candidates = [
    Candidate.from_text(ref.joinpath("ghz.code").read_text(), "optics", "ghz-rule"),
    # a fixed 4-vertex setup: right at N=0, wrong beyond
    Candidate.from_text(
        "e(0,3,0,0)\ne(1,2,0,0)\ne(0,2,1,1)\ne(1,3,1,1)\n"
        "for ii in range(N):\n    e(2+2*ii,3+2*ii,0,0)\n",
        "optics", "constant-ghz4"),
    # structurally broken for N >= 1: index drifts out of range
    Candidate.from_text(
        "e(0,1,0,0)\ne(0,1,1,1)\ne(2,3,0,0)\ne(2,3,1,1)\n"
        "for ii in range(N):\n    e(4*ii-4,1,0,0)\n",
        "optics", "drifts-out"),
]

results = [evaluate(c, "GHZ", n_max=4) for c in candidates]
for r in results:
    print(f"{r.candidate_id:14s} fidelities {[round(f, 3) for f in r.fidelities]} "
          f"flags {r.flags} -> max_correct_N = {r.max_correct_n}")

best = select_best(results)
print("\nselected:", best.candidate_id)

with tempfile.TemporaryDirectory() as tmp:
    summary = write_report(results, Path(tmp))
    print("report summary:", summary["targets"]["ghz"]["best_candidate"],
          "correct_states =", summary["targets"]["ghz"]["correct_states"])
    print("files:", sorted(p.name for p in Path(tmp).iterdir()))
