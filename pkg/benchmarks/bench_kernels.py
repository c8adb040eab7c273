"""Compiled vs pure-Python kernel timings.

Usage: python3 benchmarks/bench_kernels.py [--m 1000] [--repeat 3]
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from lssched import _backend
from lssched.circuit_io import RandomSpec, gen_random
from lssched.dependency import build_dependency
from lssched.layout import LayoutSpec, build_layout
from lssched.scheduler import schedule


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench(backend: str, m: int, n: int, repeat: int) -> dict:
    k = _backend.load(backend)
    g = build_layout(LayoutSpec.for_qubits(n, "parallelizable", 3, 1))
    h = k.GraphHandle(g.indptr, g.indices, g.is_bus)
    rng = np.random.default_rng(0)
    blocked = bytearray(g.n_vertices)
    pairs = [tuple(int(v) for v in rng.choice(g.data_vertices, 2, replace=False)) for _ in range(2000)]
    masks = []
    for _, t in pairs:
        mask = bytearray(g.n_vertices)
        mask[t] = 1
        masks.append(mask)

    def bfs():
        for (s, _), mask in zip(pairs, masks):
            k.bfs_path(h, blocked, [s], mask)

    c = gen_random(RandomSpec(m, n, 0.3, 1))
    return {
        "backend": backend,
        "bfs_2000_s": best_of(bfs, repeat),
        "dependency_general_s": best_of(lambda: build_dependency(c, "general", backend=backend), repeat),
        "schedule_general_s": best_of(lambda: schedule(c, g, "general", backend=backend), repeat),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=1000)
    ap.add_argument("--N", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rows = [bench(b, args.m, args.N, args.repeat) for b in _backend.available()]
    for r in rows:
        print(json.dumps(r))
    if len(rows) == 2:
        cy, py = rows
        for key in ("bfs_2000_s", "dependency_general_s", "schedule_general_s"):
            print(f"{key}: speedup {py[key] / cy[key]:.1f}x")


if __name__ == "__main__":
    main()
