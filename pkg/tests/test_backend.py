import subprocess
import sys

import numpy as np
import pytest

from lssched import _backend, _kernels_py
from lssched.layout import LayoutSpec, build_layout


def test_python_backend_always_loads():
    assert _backend.load("python") is _kernels_py
    assert "python" in _backend.available()
    assert _backend.BACKEND in _backend.available()


def test_env_forces_fallback(monkeypatch):
    monkeypatch.setenv("LSSCHED_PURE_PYTHON", "1")
    assert _backend.load() is _kernels_py
    monkeypatch.setenv("LSSCHED_PURE_PYTHON", "0")
    assert _backend.load().BACKEND == _backend.available()[0]


def test_env_at_import_time():
    code = "import lssched; print(lssched.BACKEND)"
    env = {"LSSCHED_PURE_PYTHON": "1", "PATH": ""}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.skipif("cython" not in _backend.available(), reason="extension not built")
def test_kernel_parity_random():
    cy = _backend.load("cython")
    rng = np.random.default_rng(0)
    for k in range(30):
        g = build_layout(LayoutSpec(("compact", "parallelizable")[k % 2], 1 + k % 3, 1 + k % 4, 2, 1))
        hp, hc = _kernels_py.GraphHandle(g.indptr, g.indices, g.is_bus), cy.GraphHandle(g.indptr, g.indices, g.is_bus)
        blocked = bytearray((rng.random(g.n_vertices) < 0.2).astype(np.uint8).tobytes())
        src = [int(v) for v in rng.choice(g.data_vertices, 2, replace=False)]
        tgt = bytearray(g.n_vertices)
        for v in g.data_vertices:
            tgt[v] = v not in src
        assert _kernels_py.bfs_path(hp, blocked, src, tgt) == cy.bfs_path(hc, blocked, src, tgt)
        n = 9
        xs = [int(v) for v in rng.integers(0, 1 << n, 40)]
        zs = [int(v) for v in rng.integers(0, 1 << n, 40)]
        for rule in (0, 1, 2):
            a = _kernels_py.dependency_preds(xs, zs, rule)
            b = cy.dependency_preds(xs, zs, rule)
            assert [list(map(int, x)) for x in a] == [list(map(int, x)) for x in b]
