"""Size-parametric design programs for quantum optics setups and circuits.

The package covers the full desk-scale pipeline: interpret programs that
build setups or circuits parametrically in a size index N, simulate the
resulting states exactly, generate constrained synthetic corpora of
(state triple, program) token pairs, and score candidate programs
against a catalog of target state classes.
"""

from .states import (
    QuantumState, canonicalize, fidelity, parse_state, print_state,
    StateError, StateParseError, EmptyStateError, DimensionError,
)
from .graphs import (
    Edge, Setup, compute_state, count_perfect_matchings, min_degree,
    flop_estimate, double_factorial, format_setup, parse_setup,
)
from .dsl import (
    Formula, OpticsLine, CircuitLine, MetaCode, CircuitProgram,
    parse_code, print_code, instantiate,
    CodeError, CodeParseError, InstantiationError, OutOfRangeError, CollisionError,
)
from .circuits import (
    StateVector, run_circuit, build_graph_state, postprocess, PostprocessError,
)
from .vocab import (
    Vocabulary, vocabulary, encode_states, encode_code, decode, decode_states,
    MAX_LEN, TokenizeError, LengthError, UnencodableStateError,
)
from .targets import (
    TargetClass, target_state, list_targets, get_target, fixture_lines,
    UnknownTargetError, SizeError,
)

__version__ = "0.1.0"
