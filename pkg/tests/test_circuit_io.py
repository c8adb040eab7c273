import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import gate_matrix, gates_unitary
from lssched.circuit_io import (
    GateOp,
    RandomSpec,
    convert_gates,
    emit,
    emit_circuit,
    emit_gates,
    gen_random,
    parse_gate_circuit,
    parse_rotation_circuit,
    random_gates,
)
from lssched.errors import ParseError, ValidationError
from lssched.layout import LayoutSpec, build_layout
from lssched.oracle import dense_unitary, equal_up_to_phase
from lssched.pauli import Angle, Circuit, PauliString
from lssched.scheduler import schedule


def test_parse_examples():
    c = parse_rotation_circuit("qubits 4\npi/8 IXYI\nM ZZII")
    assert len(c) == 2 and c.ops[0].pauli.qubits() == [1, 2]
    assert c.ops[1].angle is Angle.M
    c = parse_rotation_circuit("qubits 2\n-pi/4 XY")
    assert c.ops[0].angle is Angle.NEG_PI_4
    assert (c.ops[0].pauli.x, c.ops[0].pauli.z) == (0b11, 0b10)


@pytest.mark.parametrize(
    "text,line",
    [
        ("qubits 2\npi/8 XYZ", 2),
        ("pi/8 XY", 1),
        ("", 1),
        ("qubits 2\npi/3 XY", 2),
        ("qubits 2\npi/8 XQ", 2),
        ("qubits 2\n# c\n\npi/8 II", 4),
        ("qubits x", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse_rotation_circuit(text)
    assert info.value.lineno == line
    assert f"line {line}" in str(info.value)


def test_comments_and_signed_paulis():
    c = parse_rotation_circuit("# hdr\nqubits 2  # two\npi/8 -ZI # neg\nM -IZ\n")
    assert c.ops[0].angle is Angle.NEG_PI_8 and c.ops[0].pauli.phase == 0
    assert c.ops[1].pauli.phase == 1


def test_emit_round_trip_and_empty():
    text = "qubits 3\npi/8 XYZ\n-pi/4 IIZ\nM -ZII\npi/2 XII\n"
    c = parse_rotation_circuit(text)
    assert emit_circuit(c) == text
    assert parse_rotation_circuit(emit(c)) == c
    assert emit_circuit(Circuit(3)) == "qubits 3\n"


def test_gate_examples():
    assert convert_gates([GateOp("T", (0,))], 1) == Circuit.build(1, [("-pi/8", "Z")])
    assert convert_gates([GateOp("S", (0,))], 1) == Circuit.build(1, [("-pi/4", "Z")])
    for kind in ("X", "Y", "Z", "H", "S", "Sdg", "T", "Tdg"):
        g = GateOp(kind, (0,))
        assert equal_up_to_phase(dense_unitary(convert_gates([g], 1)), gate_matrix(g, 1))
    for c, t in ((0, 1), (1, 0)):
        g = GateOp("CNOT", (c, t))
        assert equal_up_to_phase(dense_unitary(convert_gates([g], 2)), gate_matrix(g, 2))


def test_gate_validation():
    with pytest.raises(ValidationError):
        GateOp("CZ", (0, 1))
    with pytest.raises(ValidationError):
        GateOp("CNOT", (1, 1))
    with pytest.raises(ValidationError):
        GateOp("H", (0, 1))
    with pytest.raises(ValidationError):
        convert_gates([GateOp("H", (3,))], 2)


def test_gate_file_round_trip():
    text = "qubits 3\nH 0\nCNOT 0 2\nTdg 1\n"
    gates, n = parse_gate_circuit(text)
    assert n == 3 and gates[1] == GateOp("CNOT", (0, 2))
    assert emit_gates(gates, n) == text
    with pytest.raises(ParseError):
        parse_gate_circuit("qubits 2\nCNOT 0 5")
    with pytest.raises(ParseError):
        parse_gate_circuit("qubits 2\nFOO 0")


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4), st.integers(0, 25), st.integers(0, 10**6))
def test_conversion_matches_dense(n, length, seed):
    gates = random_gates(n, length, seed)
    assert equal_up_to_phase(dense_unitary(convert_gates(gates, n)), gates_unitary(gates, n), 1e-9)


def test_gen_random_determinism_and_shape():
    spec = RandomSpec(3, 4, 0.5, 42)
    assert gen_random(spec) == gen_random(spec)
    c = gen_random(spec)
    assert len(c) == 3 + 4
    assert all(op.angle is Angle.PI_8 for op in c.ops[:3])
    assert [op.pauli for op in c.ops[3:]] == [PauliString.single(4, q, "Z") for q in range(4)]
    assert all(op.angle is Angle.M for op in c.ops[3:])


def test_gen_random_clamps_to_one():
    c = gen_random(RandomSpec(1, 1, 0.15, 0))
    assert c.ops[0].pauli.qubits() == [0]


def test_gen_random_mean_support():
    c = gen_random(RandomSpec(10000, 10, 0.5, 3))
    sizes = np.array([op.pauli.weight for op in c.ops[:10000]])
    assert 4.5 <= sizes.mean() <= 5.5
    assert sizes.min() >= 1 and sizes.max() <= 10


@given(st.integers(1, 50), st.integers(1, 12), st.floats(0.01, 1.0), st.integers(0, 1000))
@settings(max_examples=40, deadline=None)
def test_gen_random_bounds(m, n, npct, seed):
    c = gen_random(RandomSpec(m, n, npct, seed))
    assert len(c) == m + n
    assert all(1 <= op.pauli.weight <= n for op in c.ops)


def test_random_spec_validation():
    for bad in ((0, 1, 0.5), (1, 0, 0.5), (1, 1, 0.0), (1, 1, 1.5)):
        with pytest.raises(ValidationError):
            RandomSpec(*bad)


def test_schedule_json_shape():
    c = Circuit.build(2, [("pi/8", "ZI"), ("pi/8", "ZZ"), ("-pi/4", "XI")])
    g = build_layout(LayoutSpec("compact", 1, 1, 1, 1))
    sched, _ = schedule(c, g, "serial")
    obj = json.loads(emit(sched))
    assert len(obj["time_steps"]) == 3
    op = obj["time_steps"][2]["ops"][0]
    assert set(op) == {"source_index", "angle", "pauli", "tree", "storage_vertex", "ancillary_vertex"}
    assert op["storage_vertex"] is None and op["ancillary_vertex"] in g.ancillary_vertices
    assert set(obj["metrics"]) >= {"EN", "LB", "UB", "t_dep_s", "t_sch_s", "rule", "layout"}
    first = obj["time_steps"][0]["ops"][0]
    assert first["storage_vertex"] in g.storage_vertices
    assert set(first["tree"]) == {"vertices", "edges"}
