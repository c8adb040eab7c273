import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lssched.circuit_io import RandomSpec, gen_random
from lssched.dependency import build_dependency
from lssched.errors import SchedulingError, ValidationError
from lssched.layout import LayoutSpec, build_layout
from lssched.pauli import Circuit
from lssched.scheduler import check_schedule, compute_gap, reports_to_csv, schedule

FOUR_ROT = Circuit.build(4, [("pi/8", "IXYI"), ("pi/8", "ZIZI"), ("pi/8", "IYIY"), ("pi/8", "XXXY")])


def test_two_disjoint_ops():
    c = Circuit.build(2, [("pi/8", "ZI"), ("pi/8", "IZ")])
    g = build_layout(LayoutSpec("parallelizable", 1, 1, 2, 0))
    for rule, want in (("trivial", 1), ("general", 1), ("serial", 2)):
        _, rep = schedule(c, g, rule)
        assert rep.EN == want


def test_four_rotation_reaches_depth():
    g = build_layout(LayoutSpec("parallelizable", 2, 2, 4, 1))
    sched, rep = schedule(FOUR_ROT, g, "general")
    assert rep.EN == rep.LB == 3
    assert not check_schedule(FOUR_ROT, sched)


def test_serial_equals_length():
    c = gen_random(RandomSpec(40, 5, 0.4, 1))
    g = build_layout(LayoutSpec.for_qubits(5))
    _, rep = schedule(c, g, "serial")
    assert rep.EN == rep.UB == len(c)


def test_gap_examples():
    assert compute_gap(106, 100) == pytest.approx(6.0)
    assert compute_gap(100, 100) == 0.0
    assert compute_gap(130, 100) == pytest.approx(30.0)
    with pytest.raises(ValidationError):
        compute_gap(1, 0)


def test_unroutable_raises():
    c = Circuit.build(2, [("pi/8", "ZI")])
    g = build_layout(LayoutSpec("compact", 1, 1, 0, 0))
    with pytest.raises(SchedulingError, match="op 0"):
        schedule(c, g)


def test_pi2_rejected():
    c = Circuit.build(2, [("pi/2", "ZI")])
    with pytest.raises(ValidationError):
        schedule(c, build_layout(LayoutSpec("compact", 1, 1)))


def test_assignment_policies():
    c = gen_random(RandomSpec(30, 4, 0.5, 2))
    g = build_layout(LayoutSpec("compact", 2, 2, 2, 1))
    s1, _ = schedule(c, g, assignment="random:3")
    s2, _ = schedule(c, g, assignment="random:3")
    assert s1.assignment == s2.assignment
    assert json.dumps(s1.to_json(False)) == json.dumps(s2.to_json(False))
    assert not check_schedule(c, s1)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 60),
    st.integers(1, 9),
    st.floats(0.1, 1.0),
    st.integers(0, 10**6),
    st.sampled_from(["compact", "parallelizable"]),
    st.integers(1, 3),
    st.sampled_from(["serial", "trivial", "general"]),
    st.one_of(st.none(), st.integers(0, 100)),
)
def test_schedule_properties(m, n, npct, seed, style, n_storage, rule, order_seed):
    c = gen_random(RandomSpec(m, n, npct, seed))
    g = build_layout(LayoutSpec.for_qubits(n, style, n_storage, 1))
    sched, rep = schedule(c, g, rule, order_seed=order_seed)
    assert rep.LB <= rep.EN <= rep.UB
    if rule == "serial":
        assert rep.EN == rep.UB
    assert not check_schedule(c, sched, build_dependency(c, rule))
    again, _ = schedule(c, g, rule, order_seed=order_seed)
    assert json.dumps(again.to_json(False)) == json.dumps(sched.to_json(False))


def test_report_csv():
    c = gen_random(RandomSpec(20, 4, 0.3, 0))
    g = build_layout(LayoutSpec.for_qubits(4))
    _, a = schedule(c, g, "serial")
    _, b = schedule(c, g, "general")
    b.gap_pct = compute_gap(a.EN, b.EN)
    text = reports_to_csv([("x", a), ("x", b)])
    lines = text.strip().splitlines()
    assert lines[0].startswith("name,rule,EN,LB,UB")
    assert len(lines) == 3 and lines[1].split(",")[1] == "serial"
    assert b.t_tot_s == pytest.approx(b.t_dep_s + b.t_sch_s)
