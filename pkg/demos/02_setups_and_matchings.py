"""Setups as colored graphs and states from perfect matchings.

Each edge is a photon-pair source: it deposits one photon (with a mode
label) at each endpoint. Conditioning on every detector firing once,
only perfect matchings of the graph contribute; a matching adds the
product of its edge weights to the amplitude of the ket it induces.
"""

from qmeta import (
    Edge, Setup, compute_state, count_perfect_matchings, flop_estimate,
    format_setup, min_degree, print_state,
)

# a 4-cycle with two mode-0 edges and two mode-1 edges: exactly two
# perfect matchings, one all-0 and one all-1 -> a GHZ state
ghz_setup = Setup(4, 2, [
    Edge(0, 1, 0, 0), Edge(2, 3, 0, 0),
    Edge(0, 2, 1, 1), Edge(1, 3, 1, 1),
])
print(format_setup(ghz_setup))
print("matchings:", count_perfect_matchings(ghz_setup))
print("state:", print_state(compute_state(ghz_setup)))
print("min degree:", min_degree(ghz_setup))

# parallel edges with different colors are distinct pair sources
bell = Setup(4, 2, [
    Edge(0, 1, 0, 0), Edge(0, 1, 1, 1),
    Edge(2, 3, 0, 0), Edge(2, 3, 1, 1),
])
print("\ntwo independent pair sources per arm:",
      print_state(compute_state(bell)))

# negative weights interfere: amplitudes can cancel exactly
interference = Setup(4, 2, [
    Edge(0, 1, 0, 0, 1), Edge(2, 3, 0, 0, 1),
    Edge(0, 2, 0, 0, 1), Edge(1, 3, 0, 0, -1),
    Edge(0, 3, 0, 0, 1), Edge(1, 2, 0, 0, 1),
])
print("\nK4 with one negative weight:",
      print_state(compute_state(interference)))
print("(three matchings contribute 1 + (-1) + 1 = 1 to the 0000 ket)")

# the cost of brute-force state computation explodes with size: this is
# the number of floating point multiply-adds to build all amplitudes
print("\ncost of computing a dim-3 state:")
for n in (4, 6, 8, 20):
    print(f"  {n:2d} particles: {flop_estimate(3, n):.3e} FLOP")
