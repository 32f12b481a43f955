"""Size-parametric programs: one text, a whole family of experiments.

A program has fixed lines, then a loop over ii whose body runs N times.
Instantiating at N = 0, 1, 2, ... yields setups on 2N+4 detectors. A
program that keeps matching a target class at every N is a closed-form
design rule for the whole family.
"""

from importlib import resources

from qmeta import (
    canonicalize, compute_state, fidelity, instantiate, list_targets,
    parse_code, print_state, target_state,
)

ghz_code = resources.files("qmeta").joinpath("data/reference/ghz.code").read_text()
print(ghz_code)

code = parse_code(ghz_code, task="optics")
for N in range(4):
    setup = instantiate(code, N)
    state = canonicalize(compute_state(setup))
    target = target_state("GHZ", N, "optics")
    print(f"N={N}: {setup.vertex_count} detectors, "
          f"state {print_state(state)}, fidelity vs GHZ = {fidelity(state, target)}")

# the target catalog: twenty families for the optics task, each pinned to
# verbatim table strings for N = 0, 1, 2
print("\ncatalog (optics):")
for tc in list_targets("optics"):
    label = "known" if tc.previously_known else "unknown"
    print(f"  {tc.name:18s} correct_states={tc.correct_states!s:4s} {label}")

print("\nSpin 1/2 at N=1 (no two adjacent excitations, trailing ancillas):")
print(" ", print_state(target_state("Spin 1/2", 1, "optics")))
