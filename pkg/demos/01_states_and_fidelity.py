"""States, canonical text form, and fidelity.

Quantum states here are sparse integer-amplitude superpositions written
the same way the class tables print them: "+1[xxxx] +1[yyyy]" means
|0000> + |1111> up to normalization, with x/y/z naming the mode of each
particle position.
"""

import math

from qmeta import QuantumState, canonicalize, fidelity, parse_state, print_state

# parse / print round-trip on a four-particle GHZ state
ghz = parse_state("+1[xxxx] +1[yyyy]")
print("GHZ4:", print_state(ghz))
print("terms:", dict(ghz.terms))

# fidelity is the squared normalized overlap; exact rationals in, exact
# rationals out
w4 = parse_state("+1[xxxy] +1[xxyx] +1[xyxx] +1[yxxx]")
print("\nfidelity(GHZ4, W4) =", fidelity(ghz, w4))
print("fidelity(GHZ4, GHZ4) =", fidelity(ghz, ghz))

# scaling amplitudes changes nothing: states are rays
print("fidelity invariant under scaling:", fidelity(ghz.scaled(-7), w4))

# irrational amplitudes take the float path
psi = QuantumState({(0, 0, 0, 0): 1 / math.sqrt(2),
                    (1, 1, 1, 1): 0.5,
                    (1, 1, 0, 0): 0.5})
print("\npartial overlap with an extra term:", fidelity(ghz, psi))
print("closed form (3+2*sqrt(2))/8    =", (3 + 2 * math.sqrt(2)) / 8)

# canonicalization reduces amplitudes by their gcd; the sign flip is the
# circuit-style convention and is optional
raw = QuantumState({(0, 0, 1, 1): -3, (0, 1, 0, 1): 6, (1, 0, 1, 0): -3})
print("\nraw:      ", print_state(raw))
print("canonical:", print_state(canonicalize(raw)))
print("first +:  ", print_state(canonicalize(raw, make_first_positive=True)))
