"""Central-zone adjacency graphs for the compact and parallelizable layouts.

Tile grid with ``H = 2A + 1`` rows.  Even rows are bus aisles.  Odd rows hold
one aisle of ``P`` horizontal two-tile patches (one data qubit per tile):

* compact, width ``2P + 2``: bus at both ends of each aisle row;
* parallelizable, width ``3P + 2``: a bus tile to the left of the aisle and
  after every patch.

Magic-state storage and ancillary vertices sit just outside the grid, on the
perimeter, so each touches exactly one boundary bus tile.  Vertex ids follow
row-major order of ``(row, col)`` coordinates, off-grid rows included.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, ValidationError


class VertexKind(enum.IntEnum):
    BUS = 0
    DATA = 1
    STORAGE = 2
    ANCILLARY = 3


STYLES = ("compact", "parallelizable")


@dataclass(frozen=True)
class LayoutSpec:
    style: str = "compact"
    A: int = 1
    P: int = 1
    n_storage: int = 1
    n_ancillary: int = 1

    def __post_init__(self):
        if self.style not in STYLES:
            raise ValidationError(f"unknown layout style {self.style!r}")
        if self.A < 1 or self.P < 1:
            raise ValidationError("aisles and patches per aisle must be >= 1")
        if self.n_storage < 0 or self.n_ancillary < 0:
            raise ValidationError("resource counts must be non-negative")

    @property
    def data_capacity(self) -> int:
        return 2 * self.A * self.P

    @property
    def shape(self) -> tuple[int, int]:
        w = 2 * self.P + 2 if self.style == "compact" else 3 * self.P + 2
        return 2 * self.A + 1, w

    @classmethod
    def for_qubits(cls, n: int, style: str = "compact", n_storage: int = 1,
                   n_ancillary: int = 1) -> LayoutSpec:
        """Smallest near-square layout holding ``n`` data qubits."""
        p = max(1, math.ceil(math.sqrt(n / 2)))
        a = max(1, math.ceil(n / (2 * p)))
        return cls(style, a, p, n_storage, n_ancillary)

    def to_json(self) -> dict:
        return {
            "style": self.style,
            "aisles": self.A,
            "patches_per_aisle": self.P,
            "n_storage": self.n_storage,
            "n_ancillary": self.n_ancillary,
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> LayoutSpec:
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            return cls(
                obj.get("style", "compact"),
                int(obj["aisles"]),
                int(obj["patches_per_aisle"]),
                int(obj.get("n_storage", 1)),
                int(obj.get("n_ancillary", 1)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad layout config: {exc}") from None


def _grid_kinds(spec: LayoutSpec) -> np.ndarray:
    h, w = spec.shape
    kinds = np.full((h, w), VertexKind.BUS, dtype=np.uint8)
    for r in range(1, h, 2):
        for j in range(spec.P):
            if spec.style == "compact":
                cols = (2 * j + 1, 2 * j + 2)
            else:
                cols = (3 * j + 1, 3 * j + 2)
            kinds[r, list(cols)] = VertexKind.DATA
    return kinds


def perimeter_slots(h: int, w: int) -> list[tuple[int, int]]:
    """Off-grid slots clockwise from the top-left corner."""
    top = [(-1, c) for c in range(w)]
    right = [(r, w) for r in range(h)]
    bottom = [(h, c) for c in reversed(range(w))]
    left = [(r, -1) for r in reversed(range(h))]
    return top + right + bottom + left


_RESOURCES = (VertexKind.STORAGE, VertexKind.ANCILLARY)


def _linked(a: int, b: int) -> bool:
    """Adjacent tiles share an edge when one is bus, or data meets a resource."""
    if a == VertexKind.BUS or b == VertexKind.BUS:
        return True
    return (a == VertexKind.DATA and b in _RESOURCES) or (b == VertexKind.DATA and a in _RESOURCES)


class LayoutGraph:
    """Immutable typed-vertex graph stored in CSR form.

    Built by :func:`build_layout`; the constructor also accepts arbitrary
    coordinates and kinds for hand-made test graphs.
    """

    def __init__(self, spec: LayoutSpec, coords: Sequence[tuple[int, int]], kinds: Sequence[int]):
        self.spec = spec
        self.coords = tuple(coords)
        self.kinds = np.asarray(kinds, dtype=np.uint8)
        self.n_vertices = len(self.coords)
        index = {c: i for i, c in enumerate(self.coords)}
        adj: list[list[int]] = [[] for _ in self.coords]
        for i, (r, c) in enumerate(self.coords):
            for nb in ((r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)):
                j = index.get(nb)
                if j is None:
                    continue
                if _linked(int(self.kinds[i]), int(self.kinds[j])):
                    adj[i].append(j)
        for a in adj:
            a.sort()
        self.indptr = np.zeros(self.n_vertices + 1, dtype=np.int32)
        self.indptr[1:] = np.cumsum([len(a) for a in adj])
        self.indices = np.array([j for a in adj for j in a], dtype=np.int32)
        self.is_bus = (self.kinds == VertexKind.BUS).astype(np.uint8)
        self._adj = tuple(tuple(a) for a in adj)
        self._index = index
        self.data_vertices = self.vertices_of(VertexKind.DATA)
        self.storage_vertices = self.vertices_of(VertexKind.STORAGE)
        self.ancillary_vertices = self.vertices_of(VertexKind.ANCILLARY)
        self.bus_vertices = self.vertices_of(VertexKind.BUS)

    def vertices_of(self, kind: VertexKind) -> tuple[int, ...]:
        return tuple(int(v) for v in np.flatnonzero(self.kinds == kind))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def kind(self, v: int) -> VertexKind:
        return VertexKind(int(self.kinds[v]))

    def vertex_at(self, row: int, col: int) -> int:
        return self._index[(row, col)]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n_vertices) for v in self._adj[u] if u < v]

    @property
    def bus_count(self) -> int:
        return len(self.bus_vertices)

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "vertices": [
                {"id": i, "kind": self.kind(i).name.lower(), "coord": list(c)}
                for i, c in enumerate(self.coords)
            ],
            "edges": [list(e) for e in self.edges()],
        }

    def __repr__(self):
        return (
            f"LayoutGraph({self.spec.style}, A={self.spec.A}, P={self.spec.P}, "
            f"|V|={self.n_vertices}, bus={self.bus_count})"
        )


def build_layout(spec: LayoutSpec) -> LayoutGraph:
    h, w = spec.shape
    grid = _grid_kinds(spec)
    slots = perimeter_slots(h, w)
    k = spec.n_storage + spec.n_ancillary
    if k > len(slots):
        raise CapacityError(
            f"{k} storage/ancillary vertices exceed the {len(slots)} boundary slots"
        )
    placed: dict[tuple[int, int], int] = {}
    for i in range(k):
        slot = slots[(i * len(slots)) // k]
        placed[slot] = VertexKind.STORAGE if i < spec.n_storage else VertexKind.ANCILLARY
    cells = {(r, c): int(grid[r, c]) for r in range(h) for c in range(w)}
    cells.update(placed)
    coords = sorted(cells)
    return LayoutGraph(spec, coords, [cells[c] for c in coords])


def parse_policy(policy) -> tuple[str, int | None]:
    if isinstance(policy, tuple):
        return policy
    if policy == "sequential":
        return ("sequential", None)
    if isinstance(policy, str) and policy.startswith("random"):
        _, _, seed = policy.partition(":")
        try:
            return ("random", int(seed) if seed else 0)
        except ValueError:
            raise ValidationError(f"bad seed in assignment policy {policy!r}") from None
    raise ValidationError(f"unknown assignment policy {policy!r}")


def assign_qubits(c, g: LayoutGraph, policy="sequential") -> list[int]:
    """Map circuit qubit ``k`` to a data vertex id (``result[k]``)."""
    n = c if isinstance(c, int) else c.n
    data = g.data_vertices
    if n > len(data):
        raise CapacityError(f"{n} qubits do not fit into {len(data)} data vertices")
    kind, seed = parse_policy(policy)
    if kind == "sequential":
        return list(data[:n])
    perm = np.random.default_rng(seed).permutation(len(data))
    return [data[int(i)] for i in perm[:n]]
