# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; behaviour must match ``_kernels_py.py`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, uint8_t, uint64_t

cnp.import_array()

RULE_SERIAL = 0
RULE_TRIVIAL = 1
RULE_GENERAL = 2

BACKEND = "cython"

cdef extern from *:
    int popcountll "__builtin_popcountll"(unsigned long long)


cdef class GraphHandle:
    cdef public int n
    cdef int32_t[::1] indptr
    cdef int32_t[::1] indices
    cdef uint8_t[::1] is_bus
    cdef int32_t[::1] dist
    cdef int32_t[::1] cur
    cdef int32_t[::1] nxt

    def __init__(self, indptr, indices, is_bus):
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int32)
        self.indices = np.ascontiguousarray(indices, dtype=np.int32)
        self.is_bus = np.ascontiguousarray(is_bus, dtype=np.uint8)
        self.n = self.indptr.shape[0] - 1
        self.dist = np.empty(self.n, dtype=np.int32)
        self.cur = np.empty(self.n, dtype=np.int32)
        self.nxt = np.empty(self.n, dtype=np.int32)


def bfs_path(GraphHandle h, const uint8_t[:] blocked, sources, const uint8_t[:] targets):
    cdef int n = h.n
    cdef int32_t[::1] dist = h.dist
    cdef int32_t[::1] cur = h.cur
    cdef int32_t[::1] nxt = h.nxt
    cdef int32_t[::1] ip = h.indptr
    cdef int32_t[::1] ix = h.indices
    cdef uint8_t[::1] bus = h.is_bus
    cdef int i, k, u, w, ncur = 0, nnxt, d = 0, best = -1, level, step
    for i in range(n):
        dist[i] = -1
    for s in sources:
        u = s
        if dist[u] < 0:
            dist[u] = 0
            cur[ncur] = u
            ncur += 1
    while ncur > 0 and best < 0:
        nnxt = 0
        for i in range(ncur):
            u = cur[i]
            for k in range(ip[u], ip[u + 1]):
                w = ix[k]
                if targets[w] and dist[w] != 0:
                    if best < 0 or w < best:
                        best = w
                elif dist[w] < 0 and bus[w] and not blocked[w]:
                    dist[w] = d + 1
                    nxt[nnxt] = w
                    nnxt += 1
        for i in range(nnxt):
            cur[i] = nxt[i]
        ncur = nnxt
        d += 1
    if best < 0:
        return None
    path = [best]
    u = best
    level = d - 1
    while level >= 0:
        step = -1
        for k in range(ip[u], ip[u + 1]):
            w = ix[k]
            if dist[w] == level and (step < 0 or w < step):
                step = w
        path.append(step)
        u = step
        level -= 1
    path.reverse()
    return path


cdef cnp.ndarray _words(list vals, int nw):
    cdef Py_ssize_t m = len(vals)
    buf = b"".join([(<object>v).to_bytes(8 * nw, "little") for v in vals])
    if m == 0:
        return np.zeros((0, nw), dtype=np.uint64)
    return np.frombuffer(buf, dtype="<u8").astype(np.uint64).reshape(m, nw)


def dependency_preds(xs, zs, int rule):
    cdef Py_ssize_t m = len(xs)
    cdef Py_ssize_t j, i, a, t, lo, hi, cap
    cdef int nw, ww, par
    cdef uint64_t hit
    if rule == RULE_SERIAL:
        indptr = [0]
        indices = []
        for j in range(m):
            if j:
                indices.append(j - 1)
            indptr.append(len(indices))
        return indptr, indices
    xs = [int(v) for v in xs]
    zs = [int(v) for v in zs]
    width = 1
    for v in xs:
        width = max(width, (<object>v).bit_length())
    for v in zs:
        width = max(width, (<object>v).bit_length())
    nw = (width + 63) // 64
    cdef uint64_t[:, ::1] X = _words(xs, nw)
    cdef uint64_t[:, ::1] Z = _words(zs, nw)
    cdef uint64_t[:, ::1] S = np.bitwise_or(np.asarray(X), np.asarray(Z))
    cdef int32_t[::1] ptr = np.zeros(m + 1, dtype=np.int32)
    cap = max(16, 4 * m)
    arcs_arr = np.empty(cap, dtype=np.int32)
    cdef int32_t[::1] arcs = arcs_arr
    cdef int32_t[::1] mark = np.full(max(m, 1), -1, dtype=np.int32)
    cdef int32_t[::1] stack = np.empty(max(m, 1), dtype=np.int32)
    cdef Py_ssize_t narcs = 0, top
    for j in range(m):
        lo = narcs
        for i in range(j - 1, -1, -1):
            if mark[i] == j:
                continue
            if rule == RULE_GENERAL:
                par = 0
                for ww in range(nw):
                    par += popcountll((X[i, ww] & Z[j, ww]) ^ (X[j, ww] & Z[i, ww]))
                if not (par & 1):
                    continue
            else:
                hit = 0
                for ww in range(nw):
                    hit |= S[i, ww] & S[j, ww]
                if not hit:
                    continue
            if narcs == cap:
                cap *= 2
                arcs_arr = np.resize(arcs_arr, cap)
                arcs = arcs_arr
            arcs[narcs] = i
            narcs += 1
            mark[i] = j
            top = 0
            for t in range(ptr[i], ptr[i + 1]):
                a = arcs[t]
                if mark[a] != j:
                    mark[a] = j
                    stack[top] = a
                    top += 1
            while top > 0:
                top -= 1
                a = stack[top]
                for t in range(ptr[a], ptr[a + 1]):
                    if mark[arcs[t]] != j:
                        mark[arcs[t]] = j
                        stack[top] = arcs[t]
                        top += 1
        hi = narcs
        # collected in descending order; flip to ascending
        t = hi - 1
        while lo < t:
            a = arcs[lo]
            arcs[lo] = arcs[t]
            arcs[t] = a
            lo += 1
            t -= 1
        ptr[j + 1] = narcs
    return list(np.asarray(ptr)), list(np.asarray(arcs_arr[:narcs]))
