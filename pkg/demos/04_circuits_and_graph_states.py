"""The circuit and graph-state tasks share the program syntax.

Circuit programs apply gates to 2N+2 qubits starting from |0...0>; the
graph task restricts gates to controlled-Z and starts from |+...+>, so
every program builds a graph state. Simulation is exact: amplitudes are
integers times a power of 1/sqrt(2).
"""

from qmeta import instantiate, parse_code, print_state
from qmeta.circuits import build_graph_state, postprocess, run_circuit, stabilizer_fixes
from qmeta.targets import ring_edges, star_edges

ghz_circuit = "qH(0)\nfor ii in range(1+2*NN):\n    qCNOT(ii,1+ii)\n"
print(ghz_circuit)
code = parse_code(ghz_circuit, task="circuit")
for N in range(3):
    prog = instantiate(code, N)
    state = postprocess(run_circuit(prog))
    print(f"N={N}: {prog.qubit_count} qubits ->", print_state(state, "circuit"))

# graph states: H everywhere, then CZ per edge; signs record the edges
print("\nring of 4 qubits:")
sv = build_graph_state(ring_edges(4), 4)
print(" ", print_state(postprocess(sv), "circuit"))

# defining property: X on a vertex and Z on its neighbors fixes the state
edges = star_edges(6)
sv = build_graph_state(edges, 6)
for v in range(6):
    nbrs = [b for a, b in edges if a == v] + [a for a, b in edges if b == v]
    assert stabilizer_fixes(sv, v, nbrs)
print("\nstar-6 stabilizer checks: all fixed")

# the same family as a program: the hub is the last qubit
star_code = parse_code("qCZ(0,1+2*NN)\nfor ii in range(2*NN):\n    qCZ(1+ii,1+2*NN)\n",
                       task="graph")
state = postprocess(run_circuit(instantiate(star_code, 1)))
print("star program at N=1:", print_state(state, "circuit")[:60], "...")
