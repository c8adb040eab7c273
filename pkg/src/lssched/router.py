"""Steiner-tree routing of multi-qubit operations over the bus.

All shortest paths come from one canonical BFS kernel (see
``_kernels_py.bfs_path``): the path returned depends only on the graph, the
blocked set and the endpoint sets, never on visiting order.  Two
consequences are relied on here:

* both kernel backends produce identical trees;
* a path cached on the empty occupancy is still the canonical answer under
  any blocked set it avoids, so the route cache cannot change a schedule.
"""

from __future__ import annotations

import os
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _backend
from .errors import ValidationError
from .layout import LayoutGraph, VertexKind
from .pauli import Rotation

DEFAULT_CACHE_SIZE = 1 << 16


def cache_size_from_env() -> int:
    raw = os.environ.get("LSSCHED_CACHE_SIZE")
    if raw is None or raw == "":
        return DEFAULT_CACHE_SIZE
    try:
        return max(0, int(raw))
    except ValueError:
        raise ValidationError(f"LSSCHED_CACHE_SIZE must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class RoutedTree:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    terminals: tuple[int, ...]
    storage_vertex: int | None = None
    ancillary_vertex: int | None = None

    def bus_vertices(self, g: LayoutGraph) -> list[int]:
        return [v for v in self.vertices if g.is_bus[v]]

    def bus_count(self, g: LayoutGraph) -> int:
        return len(self.bus_vertices(g))

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}


def _tree(vertices: set[int], edges: set[tuple[int, int]], terminals, storage=None, ancillary=None):
    return RoutedTree(
        tuple(sorted(vertices)),
        tuple(sorted(edges)),
        tuple(sorted(terminals)),
        storage,
        ancillary,
    )


def _path_edges(path: Sequence[int]) -> list[tuple[int, int]]:
    return [(min(a, b), max(a, b)) for a, b in zip(path, path[1:])]


class Occupancy:
    """Step-local state: claimed bus tiles, used terminals, free resources."""

    def __init__(self, g: LayoutGraph, storage=None, ancillary=None):
        self.blocked = bytearray(g.n_vertices)
        self.used_terminals: set[int] = set()
        self.storage_available = list(g.storage_vertices if storage is None else storage)
        self.ancillary_available = list(g.ancillary_vertices if ancillary is None else ancillary)

    def claim(self, g: LayoutGraph, tree: RoutedTree) -> None:
        for v in tree.vertices:
            if g.is_bus[v]:
                self.blocked[v] = 1
        self.used_terminals.update(tree.terminals)
        if tree.storage_vertex is not None:
            self.storage_available.remove(tree.storage_vertex)
        if tree.ancillary_vertex is not None:
            self.ancillary_available.remove(tree.ancillary_vertex)


class RouteCache:
    """LRU map from terminal pairs to their canonical path on an empty bus."""

    def __init__(self, maxsize: int | None = None):
        self.maxsize = cache_size_from_env() if maxsize is None else maxsize
        self._data: OrderedDict = OrderedDict()
        self.hits = 0
        self.misses = 0

    def get(self, key):
        try:
            val = self._data[key]
        except KeyError:
            self.misses += 1
            raise
        self._data.move_to_end(key)
        self.hits += 1
        return val

    def put(self, key, val) -> None:
        if self.maxsize <= 0:
            return
        self._data[key] = val
        self._data.move_to_end(key)
        while len(self._data) > self.maxsize:
            self._data.popitem(last=False)

    def __len__(self):
        return len(self._data)


class Router:
    """Routing primitives bound to one layout graph.

    Not thread-safe: the compiled kernel reuses per-handle work buffers.
    Give each concurrent scheduling run its own router.
    """

    def __init__(self, g: LayoutGraph, cache: bool | RouteCache = True, backend: str | None = None):
        self.g = g
        self.kernels = _backend.load(backend)
        self.handle = self.kernels.GraphHandle(g.indptr, g.indices, g.is_bus)
        if cache is True:
            cache = RouteCache()
        self.cache = cache or None
        self._empty = bytearray(g.n_vertices)

    def _bfs(self, blocked, sources, target_set) -> list[int] | None:
        mask = bytearray(self.g.n_vertices)
        for t in target_set:
            mask[t] = 1
        return self.kernels.bfs_path(self.handle, blocked, list(sources), mask)

    def shortest_bus_path(self, s: int, t: int, blocked=None) -> list[int] | None:
        """Canonical min-hop path whose interior is unblocked bus, or None."""
        if s == t:
            raise ValidationError("path endpoints must differ")
        flip = s > t
        a, b = (t, s) if flip else (s, t)
        if blocked is None:
            blocked = self._empty
        if self.cache is None:
            path = self._bfs(blocked, [a], [b])
        else:
            try:
                path = self.cache.get((a, b))
            except KeyError:
                path = self._bfs(self._empty, [a], [b])
                self.cache.put((a, b), path)
            if path is not None and any(blocked[v] for v in path[1:-1]):
                path = self._bfs(blocked, [a], [b])
        if path is None:
            return None
        return path[::-1] if flip else list(path)

    def terminal_steiner_tree(self, terminals: Iterable[int], blocked=None) -> RoutedTree | None:
        """MST-guided Steiner tree with every terminal a leaf.

        Pairwise shortest paths weight a complete terminal graph whose
        Kruskal MST (ties broken on ``(weight, i, j)``) fixes the order in
        which terminals join: the lightest MST edge's path seeds the tree,
        then each further terminal is linked by a fresh shortest path to the
        nearest bus tile already in the tree.
        """
        terms = sorted(set(terminals))
        if blocked is None:
            blocked = self._empty
        if len(terms) == 1:
            return _tree({terms[0]}, set(), terms)
        pair_paths = {}
        weighted = []
        for i in range(len(terms)):
            for j in range(i + 1, len(terms)):
                p = self.shortest_bus_path(terms[i], terms[j], blocked)
                if p is not None:
                    pair_paths[(i, j)] = p
                    weighted.append((len(p) - 1, i, j))
        weighted.sort()
        parent = list(range(len(terms)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        mst = []
        for w, i, j in weighted:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
                mst.append((i, j))
        if len(mst) != len(terms) - 1:
            return None
        first = pair_paths[mst[0]]
        verts = set(first)
        edges = set(_path_edges(first))
        joined = {mst[0][0], mst[0][1]}
        pending = mst[1:]
        while pending:
            for idx, (i, j) in enumerate(pending):
                if (i in joined) != (j in joined):
                    break
            else:  # pragma: no cover - an MST is connected
                return None
            del pending[idx]
            new = j if i in joined else i
            local = bytearray(blocked)
            for v in verts:
                local[v] = 1
            path = self._bfs(local, [terms[new]], [v for v in verts if self.g.is_bus[v]])
            if path is None:
                return None
            verts.update(path)
            edges.update(_path_edges(path))
            joined.add(new)
        return _tree(verts, edges, terms)

    def attach_resource(self, tree: RoutedTree, available: Sequence[int], kind: VertexKind,
                        blocked=None) -> RoutedTree | None:
        """Link the nearest available storage/ancillary vertex to the tree.

        The tree is contracted to a multi-source (its bus tiles, or the bare
        terminal of a single-qubit op); the closest resource wins, lowest id
        on ties.
        """
        if not available:
            return None
        if blocked is None:
            blocked = self._empty
        local = bytearray(blocked)
        for v in tree.vertices:
            local[v] = 1
        sources = [v for v in tree.vertices if self.g.is_bus[v]] or list(tree.terminals)
        path = self._bfs(local, sources, available)
        if path is None:
            return None
        res = path[-1]
        verts = set(tree.vertices) | set(path)
        edges = set(tree.edges) | set(_path_edges(path))
        if kind == VertexKind.STORAGE:
            return _tree(verts, edges, tree.terminals, storage=res)
        return _tree(verts, edges, tree.terminals, ancillary=res)

    def route(self, op: Rotation, terminals: Sequence[int], occ: Occupancy) -> RoutedTree | None:
        """Tree for one op under ``occ``, or None when it cannot be routed now."""
        a = op.angle
        if a.is_pi2:
            raise ValidationError("pi/2 rotations are Pauli-frame updates and are not scheduled")
        if a.is_pi8:
            kind, pool = VertexKind.STORAGE, occ.storage_available
        elif a.is_pi4:
            kind, pool = VertexKind.ANCILLARY, occ.ancillary_available
        else:
            kind, pool = None, None
        if kind is not None and not pool:
            return None
        tree = self.terminal_steiner_tree(terminals, occ.blocked)
        if tree is None or kind is None:
            return tree
        return self.attach_resource(tree, pool, kind, occ.blocked)

    def pack_forest(self, candidates: Sequence[Rotation], assignment: Sequence[int],
                    occ: Occupancy | None = None, allow_shared_data: bool = False):
        """Greedy element-disjoint packing in candidate order.

        Candidates that cannot be routed (busy terminals, no free resource,
        no bus path) are skipped.  Returns ``[(op, tree), ...]``.
        """
        if occ is None:
            occ = Occupancy(self.g)
        packed = []
        for op in candidates:
            terms = sorted(assignment[q] for q in op.pauli.qubits())
            if not allow_shared_data and any(t in occ.used_terminals for t in terms):
                continue
            tree = self.route(op, terms, occ)
            if tree is None:
                continue
            occ.claim(self.g, tree)
            packed.append((op, tree))
        return packed


def shortest_bus_path(g: LayoutGraph, s: int, t: int, occ: Occupancy | None = None,
                      backend: str | None = None):
    return Router(g, cache=False, backend=backend).shortest_bus_path(
        s, t, None if occ is None else occ.blocked
    )


def terminal_steiner_tree(g: LayoutGraph, terminals, occ: Occupancy | None = None,
                          backend: str | None = None):
    return Router(g, cache=False, backend=backend).terminal_steiner_tree(
        terminals, None if occ is None else occ.blocked
    )


def attach_storage(g: LayoutGraph, tree: RoutedTree, storage_available, occ: Occupancy | None = None,
                   backend: str | None = None):
    return Router(g, cache=False, backend=backend).attach_resource(
        tree, list(storage_available), VertexKind.STORAGE, None if occ is None else occ.blocked
    )


def pack_forest(g: LayoutGraph, candidates, storage_available=None, ancillary_available=None,
                assignment=None, allow_shared_data: bool = False, backend: str | None = None,
                router: Router | None = None):
    """Module-level convenience wrapper around :meth:`Router.pack_forest`."""
    if assignment is None:
        assignment = g.data_vertices
    router = router or Router(g, backend=backend)
    occ = Occupancy(g, storage_available, ancillary_available)
    return router.pack_forest(candidates, assignment, occ, allow_shared_data)


def check_tree(g: LayoutGraph, tree: RoutedTree) -> list[str]:
    """Violations of the tree, leaf and bus-interior rules (empty when valid)."""
    errs = []
    verts = set(tree.vertices)
    if len(tree.edges) != len(verts) - 1:
        errs.append("edge count is not |V| - 1")
    deg = {v: 0 for v in verts}
    adj = {v: [] for v in verts}
    for u, v in tree.edges:
        if u not in verts or v not in verts:
            errs.append(f"edge {(u, v)} leaves the vertex set")
            continue
        if not g.has_edge(u, v):
            errs.append(f"{(u, v)} is not a layout edge")
        deg[u] += 1
        deg[v] += 1
        adj[u].append(v)
        adj[v].append(u)
    if verts:
        start = next(iter(verts))
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != verts:
            errs.append("tree is disconnected")
    leaves = set(tree.terminals)
    for r in (tree.storage_vertex, tree.ancillary_vertex):
        if r is not None:
            leaves.add(r)
    if tree.storage_vertex is not None and g.kind(tree.storage_vertex) != VertexKind.STORAGE:
        errs.append("storage vertex has the wrong kind")
    if tree.ancillary_vertex is not None and g.kind(tree.ancillary_vertex) != VertexKind.ANCILLARY:
        errs.append("ancillary vertex has the wrong kind")
    for t in tree.terminals:
        if g.kind(t) != VertexKind.DATA:
            errs.append(f"terminal {t} is not a data vertex")
    if len(verts) > 1:
        for v in leaves:
            if deg.get(v) != 1:
                errs.append(f"leaf {v} has degree {deg.get(v)}")
    for v in verts - leaves:
        if not g.is_bus[v]:
            errs.append(f"interior vertex {v} is not bus")
    return errs


def check_disjoint(g: LayoutGraph, trees: Sequence[RoutedTree], allow_shared_data: bool = False) -> list[str]:
    errs = []
    seen: dict[int, int] = {}
    for k, tree in enumerate(trees):
        for v in tree.vertices:
            if v in seen:
                shared_terminal = (
                    allow_shared_data and v in tree.terminals and v in trees[seen[v]].terminals
                )
                if not shared_terminal:
                    errs.append(f"vertex {v} shared by trees {seen[v]} and {k}")
            else:
                seen[v] = k
    return errs
