"""Pure-Python kernels; behaviour must match ``_kernels.pyx`` exactly."""

from __future__ import annotations

RULE_SERIAL = 0
RULE_TRIVIAL = 1
RULE_GENERAL = 2

BACKEND = "python"


class GraphHandle:
    __slots__ = ("n", "adj", "is_bus")

    def __init__(self, indptr, indices, is_bus):
        ip = [int(v) for v in indptr]
        ix = [int(v) for v in indices]
        self.n = len(ip) - 1
        self.adj = [ix[ip[v]:ip[v + 1]] for v in range(self.n)]
        self.is_bus = bytes(int(b) for b in is_bus)


def bfs_path(h: GraphHandle, blocked, sources, targets):
    """Canonical shortest path from any source to any target.

    Interior vertices must be unblocked bus vertices.  Targets are never
    expanded.  Among targets first reached at the minimal distance the
    lowest id wins; the walk back always steps to the lowest-id neighbour
    one level closer.  Returns the vertex list source-first, or None.
    """
    n = h.n
    adj = h.adj
    is_bus = h.is_bus
    dist = [-1] * n
    frontier = []
    for s in sources:
        if dist[s] < 0:
            dist[s] = 0
            frontier.append(s)
    d = 0
    best = -1
    while frontier and best < 0:
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if targets[w] and dist[w] != 0:
                    if best < 0 or w < best:
                        best = w
                elif dist[w] < 0 and is_bus[w] and not blocked[w]:
                    dist[w] = d + 1
                    nxt.append(w)
        frontier = nxt
        d += 1
    if best < 0:
        return None
    path = [best]
    cur = best
    level = d - 1
    while level >= 0:
        step = -1
        for w in adj[cur]:
            if dist[w] == level and (step < 0 or w < step):
                step = w
        path.append(step)
        cur = step
        level -= 1
    path.reverse()
    return path


def dependency_preds(xs, zs, rule: int):
    """Transitively reduced predecessor lists, returned as CSR arrays.

    For each op ``j`` earlier ops are scanned from ``j - 1`` down; ops already
    known to be ancestors are skipped, a conflicting op gets an arc and its
    ancestors are marked.
    """
    m = len(xs)
    indptr = [0]
    indices: list[int] = []
    preds: list[list[int]] = []
    if rule == RULE_SERIAL:
        for j in range(m):
            p = [j - 1] if j else []
            preds.append(p)
            indices += p
            indptr.append(len(indices))
        return indptr, indices
    sup = [x | z for x, z in zip(xs, zs)]
    mark = [-1] * m
    for j in range(m):
        xj, zj, sj = xs[j], zs[j], sup[j]
        mine = []
        for i in range(j - 1, -1, -1):
            if mark[i] == j:
                continue
            if rule == RULE_GENERAL:
                hit = ((xs[i] & zj) ^ (xj & zs[i])).bit_count() & 1
            else:
                hit = sup[i] & sj
            if not hit:
                continue
            mine.append(i)
            mark[i] = j
            stack = list(preds[i])
            while stack:
                a = stack.pop()
                if mark[a] != j:
                    mark[a] = j
                    stack.extend(preds[a])
        mine.sort()
        preds.append(mine)
        indices += mine
        indptr.append(len(indices))
    return indptr, indices
