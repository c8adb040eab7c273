"""Dependency DAGs under the serial, trivial and general rules.

* serial: a chain in program order;
* trivial: ops depend when their supports overlap;
* general: ops depend when their Paulis anticommute.

Trivial and general graphs are built transitively reduced.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from . import _backend
from .errors import InvariantViolation, ValidationError
from .pauli import Circuit

RULES = ("serial", "trivial", "general")
_RULE_CODE = {"serial": 0, "trivial": 1, "general": 2}


def check_rule(rule: str) -> str:
    if rule not in _RULE_CODE:
        raise ValidationError(f"unknown dependency rule {rule!r}; choose from {RULES}")
    return rule


class DependencyGraph:
    """DAG over op indices ``0..m-1`` stored as predecessor lists."""

    def __init__(self, m: int, preds: list[list[int]], rule: str | None = None):
        self.m = m
        self.rule = rule
        self._preds = [list(p) for p in preds]
        succs: list[list[int]] = [[] for _ in range(m)]
        for j, ps in enumerate(self._preds):
            for i in ps:
                succs[i].append(j)
        self._succs = succs

    @classmethod
    def from_arcs(cls, m: int, arcs: Iterable[tuple[int, int]], rule=None) -> DependencyGraph:
        preds: list[list[int]] = [[] for _ in range(m)]
        for i, j in arcs:
            preds[j].append(i)
        for p in preds:
            p.sort()
        return cls(m, preds, rule)

    def preds(self, j: int) -> list[int]:
        return self._preds[j]

    def succs(self, i: int) -> list[int]:
        return self._succs[i]

    @property
    def arcs(self) -> set[tuple[int, int]]:
        return {(i, j) for j, ps in enumerate(self._preds) for i in ps}

    @property
    def n_arcs(self) -> int:
        return sum(len(p) for p in self._preds)

    def indegrees(self) -> list[int]:
        return [len(p) for p in self._preds]

    def roots(self) -> list[int]:
        return [j for j, p in enumerate(self._preds) if not p]

    def depths(self) -> list[int]:
        """Longest-path level from the roots (roots have depth 1)."""
        indeg = self.indegrees()
        depth = [1] * self.m
        queue = deque(j for j in range(self.m) if indeg[j] == 0)
        seen = 0
        while queue:
            u = queue.popleft()
            seen += 1
            for v in self._succs[u]:
                depth[v] = max(depth[v], depth[u] + 1)
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        if seen != self.m:
            raise InvariantViolation("dependency graph contains a cycle")
        return depth

    def closure(self) -> set[tuple[int, int]]:
        """All (i, j) with a directed path i -> j (test helper, O(m * arcs))."""
        out = set()
        for i in range(self.m):
            stack = list(self._succs[i])
            seen = set()
            while stack:
                v = stack.pop()
                if v in seen:
                    continue
                seen.add(v)
                stack.extend(self._succs[v])
            out.update((i, v) for v in seen)
        return out


@dataclass(frozen=True)
class GraphMetrics:
    D_max: int
    widths: tuple[int, ...]
    W_bar: float


def build_dependency(c: Circuit, rule: str = "general", backend: str | None = None) -> DependencyGraph:
    check_rule(rule)
    k = _backend.load(backend)
    xs = [op.pauli.x for op in c.ops]
    zs = [op.pauli.z for op in c.ops]
    indptr, indices = k.dependency_preds(xs, zs, _RULE_CODE[rule])
    indptr = [int(v) for v in indptr]
    indices = [int(v) for v in indices]
    preds = [indices[indptr[j]:indptr[j + 1]] for j in range(len(c.ops))]
    return DependencyGraph(len(c.ops), preds, rule)


def graph_metrics(g: DependencyGraph) -> GraphMetrics:
    """Depth ``D_max`` (a lower bound on steps), per-level widths and mean width."""
    if g.m == 0:
        return GraphMetrics(0, (), 0.0)
    depth = g.depths()
    d_max = max(depth)
    widths = [0] * d_max
    for d in depth:
        widths[d - 1] += 1
    return GraphMetrics(d_max, tuple(widths), g.m / d_max)
