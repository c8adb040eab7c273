"""Exact desk-scale baselines.

* dense matrix semantics of rotation circuits (validates the transpiler),
* exhaustive minimum-bus forest packing with a constraint replay checker,
* exhaustive minimum-step scheduling over precedence-feasible packs.

Everything here is exponential on purpose and guarded by size limits.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, DimensionError, ValidationError
from .layout import LayoutGraph, VertexKind
from .pauli import Angle, Circuit, PauliString, Rotation
from .router import RoutedTree

MAX_DENSE_QUBITS = 6
MAX_STEP_OPS = 10
MAX_BUS_VERTICES = 28

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SINGLE = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Dense matrix with qubit 0 as the most significant tensor factor."""
    if p.n > MAX_DENSE_QUBITS:
        raise CapacityError(f"dense oracle limited to {MAX_DENSE_QUBITS} qubits")
    m = np.ones((1, 1), dtype=complex)
    for j in range(p.n):
        m = np.kron(m, _SINGLE[p.letter(j)])
    return -m if p.phase else m


def rotation_matrix(r: Rotation) -> np.ndarray:
    if r.angle.is_measurement:
        raise ValidationError("measurements have no unitary")
    theta = r.angle.radians
    dim = 1 << r.pauli.n
    return np.cos(theta) * np.eye(dim) + 1j * np.sin(theta) * pauli_matrix(r.pauli)


def dense_unitary(c: Circuit | Sequence[Rotation], n: int | None = None) -> np.ndarray:
    """Ordered product ``D_1 D_2 ... D_m`` of ``exp(i theta_k P_k)``."""
    ops = c.ops if isinstance(c, Circuit) else list(c)
    if n is None:
        if isinstance(c, Circuit):
            n = c.n
        elif ops:
            n = ops[0].n
        else:
            raise DimensionError("qubit count needed for an empty op list")
    if n > MAX_DENSE_QUBITS:
        raise CapacityError(f"dense oracle limited to {MAX_DENSE_QUBITS} qubits")
    u = np.eye(1 << n, dtype=complex)
    for op in ops:
        if op.angle.is_measurement:
            raise ValidationError("dense_unitary does not accept measurements")
        u = u @ rotation_matrix(op)
    return u


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    k = int(np.argmax(np.abs(b)))
    bk = b.flat[k]
    if abs(bk) < tol:
        return bool(np.allclose(a, b, atol=tol))
    ph = a.flat[k] / bk
    if abs(abs(ph) - 1) > tol:
        return False
    return bool(np.max(np.abs(a - ph * b)) <= tol)


def tableau_matches_unitary(tab, u: np.ndarray, tol: float = 1e-9) -> bool:
    """True when ``u G u^dag`` equals every tableau row as a dense matrix.

    A unitary is fixed up to global phase by its action on the generators,
    so this is equality of ``u`` with the tableau's Clifford up to phase.
    """
    n = tab.n
    ud = u.conj().T
    for k in range(2 * n):
        gen = PauliString.single(n, k // 2, "X" if k % 2 == 0 else "Z")
        image = u @ pauli_matrix(gen) @ ud
        if np.max(np.abs(image - pauli_matrix(tab.row(k)))) > tol:
            return False
    return True


# --------------------------------------------------------------------------
# Exact forest packing
# --------------------------------------------------------------------------


def _bus_bitmaps(g: LayoutGraph):
    """Compact bit indexing of bus vertices plus per-vertex bus-neighbour masks."""
    bus = list(g.bus_vertices)
    if len(bus) > MAX_BUS_VERTICES:
        raise CapacityError(f"exact search limited to {MAX_BUS_VERTICES} bus vertices")
    pos = {v: i for i, v in enumerate(bus)}
    nbr = [0] * g.n_vertices
    for v in range(g.n_vertices):
        for w in g.neighbors(v):
            if w in pos:
                nbr[v] |= 1 << pos[w]
    return bus, pos, nbr


@functools.lru_cache(maxsize=8)
def _connected_bus_sets(g: LayoutGraph) -> tuple[int, ...]:
    """Every non-empty connected bus subset, as bitmasks (ESU-style enumeration)."""
    bus, pos, nbr = _bus_bitmaps(g)
    bus_nbr = [nbr[v] for v in bus]
    out = []

    def extend(sub: int, ext: int, root: int):
        out.append(sub)
        while ext:
            low = ext & -ext
            w = low.bit_length() - 1
            ext ^= low
            # only vertices above the root, not yet in or next to the subgraph
            fresh = bus_nbr[w] & ~sub & ~ext & ~((1 << (root + 1)) - 1)
            excl = 0
            s = sub
            while s:
                b = s & -s
                excl |= bus_nbr[b.bit_length() - 1]
                s ^= b
            fresh &= ~excl
            extend(sub | low, ext | fresh, root)

    for r in range(len(bus)):
        above = ~((1 << (r + 1)) - 1)
        extend(1 << r, bus_nbr[r] & above, r)
    return tuple(out)


def _is_connected(mask: int, bus_nbr: list[int]) -> bool:
    if not mask:
        return True
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        grow = 0
        f = frontier
        while f:
            b = f & -f
            grow |= bus_nbr[b.bit_length() - 1]
            f ^= b
        frontier = grow & mask & ~seen
        seen |= frontier
    return seen == mask


@dataclass(frozen=True)
class _Option:
    bus: int
    size: int
    resource: int | None


class _PackContext:
    """Per-layout data shared by every exact query on that layout."""

    def __init__(self, g: LayoutGraph):
        self.g = g
        self.bus, self.pos, self.nbr = _bus_bitmaps(g)
        self.bus_nbr = [self.nbr[v] for v in self.bus]
        self.sets = _connected_bus_sets(g)
        self._opts: dict = {}

    def _feasible(self, s: int, leaves: Sequence[int]) -> bool:
        return all(self.nbr[t] & s for t in leaves)

    def options(self, terminals: tuple[int, ...], resources: tuple[int | None, ...]) -> list[_Option]:
        key = (terminals, resources)
        if key in self._opts:
            return self._opts[key]
        opts = []
        for r in resources:
            leaves = list(terminals) + ([r] if r is not None else [])
            if len(terminals) == 1 and (r is None or self.g.has_edge(terminals[0], r)):
                opts.append(_Option(0, 0, r))
                continue
            for s in self.sets:
                if not self._feasible(s, leaves):
                    continue
                minimal = True
                b = s
                while b:
                    low = b & -b
                    b ^= low
                    t = s ^ low
                    if t and self._feasible(t, leaves) and _is_connected(t, self.bus_nbr):
                        minimal = False
                        break
                if minimal:
                    opts.append(_Option(s, s.bit_count(), r))
        opts.sort(key=lambda o: (o.size, o.bus, -1 if o.resource is None else o.resource))
        self._opts[key] = opts
        return opts

    def tree(self, terminals: tuple[int, ...], opt: _Option) -> RoutedTree:
        g = self.g
        members = [self.bus[i] for i in range(len(self.bus)) if opt.bus >> i & 1]
        inside = set(members)
        verts = set(members) | set(terminals)
        edges = set()
        if members:
            root = members[0]
            seen = {root}
            stack = [root]
            while stack:
                u = stack.pop()
                for w in g.neighbors(u):
                    if w in inside and w not in seen:
                        seen.add(w)
                        edges.add((min(u, w), max(u, w)))
                        stack.append(w)
        leaves = list(terminals) + ([opt.resource] if opt.resource is not None else [])
        for t in leaves:
            if members:
                w = min(x for x in g.neighbors(t) if x in inside)
            else:
                w = terminals[0] if t != terminals[0] else None
                if w is None:
                    continue
            verts.add(t)
            edges.add((min(t, w), max(t, w)))
        storage = ancillary = None
        if opt.resource is not None:
            if g.kind(opt.resource) == VertexKind.STORAGE:
                storage = opt.resource
            else:
                ancillary = opt.resource
        return RoutedTree(tuple(sorted(verts)), tuple(sorted(edges)), tuple(sorted(terminals)),
                          storage, ancillary)


_CONTEXTS: dict[int, _PackContext] = {}


def _context(g: LayoutGraph) -> _PackContext:
    ctx = _CONTEXTS.get(id(g))
    if ctx is None or ctx.g is not g:
        ctx = _PackContext(g)
        _CONTEXTS.clear()
        _CONTEXTS[id(g)] = ctx
    return ctx


def _resources_for(op: Rotation, g: LayoutGraph) -> tuple[int | None, ...]:
    if op.angle.is_pi8:
        return tuple(g.storage_vertices)
    if op.angle.is_pi4:
        return tuple(g.ancillary_vertices)
    if op.angle.is_measurement:
        return (None,)
    raise ValidationError("pi/2 rotations are not scheduled")


@dataclass
class ExactPack:
    bus_count: int
    forest: list[tuple[Rotation, RoutedTree]]


def exact_min_bus(candidates: Sequence[Rotation], g: LayoutGraph, assignment: Sequence[int] | None = None,
                  allow_shared_data: bool = False, feasibility_only: bool = False,
                  max_candidates: int = MAX_STEP_OPS) -> ExactPack | None:
    """Minimum total bus usage for routing *all* candidates at once.

    Every candidate gets a connected bus set touching each of its terminals
    and (for pi/8 or pi/4) one distinct storage or ancillary vertex.  Only
    inclusion-minimal bus sets are considered, which loses nothing because a
    minimal subset of an optimal set is also feasible and disjoint.
    Returns None when no element-disjoint forest exists.
    """
    if len(candidates) > max_candidates:
        raise CapacityError(f"exact packing limited to {max_candidates} candidates")
    if assignment is None:
        assignment = g.data_vertices
    ctx = _context(g)
    terms = [tuple(sorted(assignment[q] for q in op.pauli.qubits())) for op in candidates]
    if not allow_shared_data:
        seen: set[int] = set()
        for ts in terms:
            if seen & set(ts):
                return None
            seen.update(ts)
    need_s = sum(op.angle.is_pi8 for op in candidates)
    need_a = sum(op.angle.is_pi4 for op in candidates)
    if need_s > len(g.storage_vertices) or need_a > len(g.ancillary_vertices):
        return None
    opts = [ctx.options(ts, _resources_for(op, g)) for op, ts in zip(candidates, terms)]
    if any(not o for o in opts):
        return None
    order = sorted(range(len(candidates)), key=lambda k: len(opts[k]))
    suffix_min = [0] * (len(order) + 1)
    for pos in range(len(order) - 1, -1, -1):
        suffix_min[pos] = suffix_min[pos + 1] + opts[order[pos]][0].size

    best = [None, None]  # (cost, choice)
    choice: list[_Option | None] = [None] * len(candidates)

    def dfs(pos: int, used: int, used_res: frozenset, cost: int) -> bool:
        if best[0] is not None and cost + suffix_min[pos] >= best[0]:
            return False
        if pos == len(order):
            best[0], best[1] = cost, list(choice)
            return feasibility_only
        k = order[pos]
        for o in opts[k]:
            if o.bus & used:
                continue
            if o.resource is not None and o.resource in used_res:
                continue
            if best[0] is not None and cost + o.size + suffix_min[pos + 1] >= best[0]:
                break
            choice[k] = o
            res = used_res | {o.resource} if o.resource is not None else used_res
            if dfs(pos + 1, used | o.bus, res, cost + o.size):
                return True
        choice[k] = None
        return False

    dfs(0, 0, frozenset(), 0)
    if best[0] is None:
        return None
    forest = [(op, ctx.tree(ts, o)) for op, ts, o in zip(candidates, terms, best[1])]
    return ExactPack(best[0], forest)


def check_pack(g: LayoutGraph, packed: Sequence[tuple[Rotation, RoutedTree]],
               assignment: Sequence[int] | None = None, allow_shared_data: bool = False) -> list[str]:
    """Replay the packing constraints on a forest; returns the violations.

    Single-edge leaf attachment of terminals and resources, exactly one
    storage per pi/8 and one ancillary per pi/4, bus tiles and resources used
    by at most one tree, and ``|E| = |V| - 1`` plus connectivity per tree.
    """
    from .router import check_disjoint, check_tree

    if assignment is None:
        assignment = g.data_vertices
    errs = []
    for k, (op, tree) in enumerate(packed):
        want = tuple(sorted(assignment[q] for q in op.pauli.qubits()))
        if tuple(tree.terminals) != want:
            errs.append(f"tree {k}: terminals {tree.terminals} != {want}")
        errs += [f"tree {k}: {e}" for e in check_tree(g, tree)]
        has_s = tree.storage_vertex is not None
        has_a = tree.ancillary_vertex is not None
        if op.angle.is_pi8 and not (has_s and not has_a):
            errs.append(f"tree {k}: pi/8 needs exactly one storage vertex")
        elif op.angle.is_pi4 and not (has_a and not has_s):
            errs.append(f"tree {k}: pi/4 needs exactly one ancillary vertex")
        elif op.angle.is_measurement and (has_s or has_a):
            errs.append(f"tree {k}: measurement must not consume a resource")
        extra = [v for v in tree.vertices
                 if v not in tree.terminals and v not in (tree.storage_vertex, tree.ancillary_vertex)
                 and not g.is_bus[v]]
        if extra:
            errs.append(f"tree {k}: non-bus interior vertices {extra}")
    errs += check_disjoint(g, [t for _, t in packed], allow_shared_data)
    return errs


# --------------------------------------------------------------------------
# Exact minimum-step scheduling
# --------------------------------------------------------------------------


def exact_min_steps(c: Circuit, g: LayoutGraph, rule: str = "general",
                    assignment: Sequence[int] | None = None, allow_shared_data: bool = False) -> int:
    """Fewest packs covering the circuit in a precedence-respecting order.

    Breadth-first search over downward-closed sets of finished ops; each
    move schedules a non-empty feasible pack of currently available ops.
    """
    from .dependency import build_dependency

    m = len(c.ops)
    if m > MAX_STEP_OPS:
        raise CapacityError(f"exact scheduling limited to {MAX_STEP_OPS} ops")
    if m == 0:
        return 0
    dep = build_dependency(c, rule)
    pred_mask = [sum(1 << i for i in dep.preds(j)) for j in range(m)]
    full = (1 << m) - 1
    feasible: dict[int, bool] = {}

    def pack_ok(mask: int) -> bool:
        got = feasible.get(mask)
        if got is None:
            ops = [c.ops[j] for j in range(m) if mask >> j & 1]
            got = exact_min_bus(ops, g, assignment, allow_shared_data, feasibility_only=True) is not None
            feasible[mask] = got
        return got

    frontier = {0}
    seen = {0}
    steps = 0
    while frontier:
        steps += 1
        nxt = set()
        for done in frontier:
            avail = [j for j in range(m) if not done >> j & 1 and pred_mask[j] & ~done == 0]
            bad: list[int] = []
            for r in range(1, len(avail) + 1):
                for combo in itertools.combinations(avail, r):
                    mask = sum(1 << j for j in combo)
                    if any(b & mask == b for b in bad):
                        continue
                    if not pack_ok(mask):
                        bad.append(mask)
                        continue
                    state = done | mask
                    if state == full:
                        return steps
                    if state not in seen:
                        seen.add(state)
                        nxt.add(state)
        frontier = nxt
    raise CapacityError("some op cannot be routed even alone")
