"""Clifford+T transpilation and lattice-surgery scheduling.

Pipeline: gates -> rotations (:mod:`circuit_io`), Clifford removal
(:mod:`transpiler`), dependency DAG (:mod:`dependency`), and greedy
earliest-available-first scheduling with Steiner-tree routing over a
surface-code layout (:mod:`layout`, :mod:`router`, :mod:`scheduler`).
"""

from ._backend import BACKEND
from .circuit_io import (
    GateOp,
    RandomSpec,
    convert_gates,
    emit,
    emit_circuit,
    gen_random,
    parse_gate_circuit,
    parse_rotation_circuit,
)
from .dependency import DependencyGraph, build_dependency, graph_metrics
from .errors import (
    CapacityError,
    DimensionError,
    InvariantViolation,
    LsschedError,
    ParseError,
    SchedulingError,
    UnsupportedAngleError,
    ValidationError,
)
from .layout import LayoutGraph, LayoutSpec, VertexKind, assign_qubits, build_layout
from .pauli import (
    Angle,
    Circuit,
    PauliString,
    Rotation,
    commutes,
    multiply_pauli,
    trivially_disjoint,
)
from .router import (
    Occupancy,
    RoutedTree,
    Router,
    attach_storage,
    pack_forest,
    shortest_bus_path,
    terminal_steiner_tree,
)
from .scheduler import Report, Schedule, compute_gap, schedule
from .tableau import CliffordTableau, conjugate, from_rotation, identity_tableau, multiply
from .transpiler import merge_commuting_layers, optimize_fixpoint, transpile

__version__ = "0.1.0"
