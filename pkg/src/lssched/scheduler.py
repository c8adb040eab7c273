"""Earliest-available-first scheduling of a rotation circuit onto a layout."""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass, field

from .dependency import DependencyGraph, build_dependency, check_rule, graph_metrics
from .errors import SchedulingError, ValidationError
from .layout import LayoutGraph, assign_qubits
from .pauli import Circuit, Rotation
from .router import Occupancy, RoutedTree, Router


@dataclass
class Report:
    EN: int
    LB: int
    UB: int
    t_dep_s: float
    t_sch_s: float
    rule: str
    layout: dict
    W_bar: float = 0.0
    gap_pct: float | None = None

    @property
    def t_tot_s(self) -> float:
        return self.t_dep_s + self.t_sch_s

    def to_json(self) -> dict:
        out = {
            "EN": self.EN,
            "LB": self.LB,
            "UB": self.UB,
            "t_dep_s": self.t_dep_s,
            "t_sch_s": self.t_sch_s,
            "t_tot_s": self.t_tot_s,
            "W_bar": self.W_bar,
            "rule": self.rule,
            "layout": self.layout,
        }
        if self.gap_pct is not None:
            out["gap_pct"] = self.gap_pct
        return out


CSV_FIELDS = ("name", "rule", "EN", "LB", "UB", "W_bar", "t_dep_s", "t_sch_s", "t_tot_s", "gap_pct")


def reports_to_csv(rows) -> str:
    """``rows`` is an iterable of ``(name, Report)``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for name, r in rows:
        w.writerow([
            name, r.rule, r.EN, r.LB, r.UB, f"{r.W_bar:.6g}", f"{r.t_dep_s:.6g}",
            f"{r.t_sch_s:.6g}", f"{r.t_tot_s:.6g}",
            "" if r.gap_pct is None else f"{r.gap_pct:.6g}",
        ])
    return buf.getvalue()


@dataclass
class Schedule:
    steps: list[list[tuple[Rotation, RoutedTree]]]
    layout: LayoutGraph
    rule: str
    assignment: list[int]
    report: Report | None = None

    def __len__(self):
        return len(self.steps)

    def step_of(self) -> dict[int, int]:
        """``source_index -> step`` for every scheduled op."""
        return {op.source_index: k for k, step in enumerate(self.steps) for op, _ in step}

    def to_json(self, timings: bool = True) -> dict:
        steps = []
        for step in self.steps:
            ops = []
            for op, tree in step:
                entry = {
                    "source_index": op.source_index,
                    "angle": op.angle.value,
                    "pauli": op.pauli.label(signed=True),
                    "tree": tree.to_json(),
                    "storage_vertex": tree.storage_vertex,
                }
                if tree.ancillary_vertex is not None:
                    entry["ancillary_vertex"] = tree.ancillary_vertex
                ops.append(entry)
            steps.append({"ops": ops})
        metrics = self.report.to_json() if self.report else {}
        if not timings:
            for k in ("t_dep_s", "t_sch_s", "t_tot_s"):
                metrics.pop(k, None)
        return {"time_steps": steps, "metrics": metrics}


def compute_gap(S: float, S_star: float) -> float:
    """Percentage gap ``100 (S - S*) / S*``."""
    if S_star == 0:
        raise ValidationError("reference value must be non-zero")
    return 100.0 * (S - S_star) / S_star


def schedule(
    c: Circuit,
    g: LayoutGraph,
    rule: str = "general",
    order_seed: int | None = None,
    allow_shared_data: bool = False,
    assignment=None,
    cache: bool = True,
    backend: str | None = None,
    dep: DependencyGraph | None = None,
) -> tuple[Schedule, Report]:
    """Repeatedly pack the current dependency roots into one time step.

    Each step starts from an empty bus and the full storage/ancillary pool.
    ``order_seed`` shuffles the candidate order of every step with a seeded
    generator; by default candidates are taken by ascending index.
    """
    check_rule(rule)
    for op in c.ops:
        if op.angle.is_pi2:
            raise ValidationError(
                f"op {op.source_index}: pi/2 rotations are Pauli-frame updates; drop them first"
            )
    if assignment is None or isinstance(assignment, (str, tuple)):
        assignment = assign_qubits(c, g, assignment or "sequential")
    assignment = list(assignment)
    if len(assignment) < c.n:
        raise ValidationError("assignment does not cover every circuit qubit")

    t0 = time.perf_counter()
    if dep is None:
        dep = build_dependency(c, rule, backend=backend)
    metrics = graph_metrics(dep)
    t1 = time.perf_counter()

    router = Router(g, cache=cache, backend=backend)
    rng = random.Random(order_seed) if order_seed is not None else None
    indeg = dep.indegrees()
    roots = [j for j in range(dep.m) if indeg[j] == 0]
    steps = []
    while roots:
        roots.sort()
        if rng is not None:
            rng.shuffle(roots)
        cands = [c.ops[j] for j in roots]
        packed = router.pack_forest(cands, assignment, Occupancy(g), allow_shared_data)
        if not packed:
            first = cands[0] if rng is None else c.ops[min(roots)]
            raise SchedulingError(
                f"op {first.source_index} ({first}) cannot be routed on an empty layout"
            )
        pos = {id(op): j for j, op in zip(roots, cands)}
        done = set()
        for op, _ in packed:
            done.add(pos[id(op)])
        nxt = [j for j in roots if j not in done]
        for j in sorted(done):
            for s in dep.succs(j):
                indeg[s] -= 1
                if indeg[s] == 0:
                    nxt.append(s)
        roots = nxt
        steps.append(packed)
    t2 = time.perf_counter()

    report = Report(
        EN=len(steps),
        LB=metrics.D_max,
        UB=len(c.ops),
        t_dep_s=t1 - t0,
        t_sch_s=t2 - t1,
        rule=rule,
        layout=g.spec.to_json(),
        W_bar=metrics.W_bar,
    )
    sched = Schedule(steps, g, rule, assignment, report)
    return sched, report


def check_schedule(c: Circuit, sched: Schedule, dep: DependencyGraph | None = None) -> list[str]:
    """Exactly-once coverage, precedence and per-step disjointness violations."""
    from .router import check_disjoint, check_tree

    errs = []
    where = sched.step_of()
    count = sum(len(s) for s in sched.steps)
    if count != len(c.ops) or set(where) != {op.source_index for op in c.ops}:
        errs.append("ops not scheduled exactly once")
    if dep is None:
        dep = build_dependency(c, sched.rule)
    idx = [op.source_index for op in c.ops]
    for i, j in dep.arcs:
        if where.get(idx[i], -1) >= where.get(idx[j], -1):
            errs.append(f"precedence {i}->{j} violated")
    for k, step in enumerate(sched.steps):
        for _, tree in step:
            errs += [f"step {k}: {e}" for e in check_tree(sched.layout, tree)]
        errs += [f"step {k}: {e}" for e in check_disjoint(sched.layout, [t for _, t in step])]
    return errs
