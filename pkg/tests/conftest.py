import numpy as np
import pytest

from lssched import _backend

BACKENDS = _backend.available()

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j])
_T = np.diag([1, np.exp(1j * np.pi / 4)])
GATE_MATS = {"X": _X, "Y": _Y, "Z": _Z, "H": _H, "S": _S, "Sdg": _S.conj(), "T": _T, "Tdg": _T.conj()}


def gate_matrix(g, n):
    """Dense gate with qubit 0 as the most significant factor."""
    if g.kind != "CNOT":
        m = np.ones((1, 1), dtype=complex)
        for q in range(n):
            m = np.kron(m, GATE_MATS[g.kind] if q == g.targets[0] else _I)
        return m
    c, t = g.targets
    p0, p1 = np.diag([1, 0]), np.diag([0, 1])
    a = np.ones((1, 1), dtype=complex)
    b = np.ones((1, 1), dtype=complex)
    for q in range(n):
        a = np.kron(a, p0 if q == c else _I)
        b = np.kron(b, p1 if q == c else (_X if q == t else _I))
    return a + b


def gates_unitary(gates, n):
    """Product of gate matrices in list order (same convention as rotations)."""
    u = np.eye(1 << n, dtype=complex)
    for g in gates:
        u = u @ gate_matrix(g, n)
    return u


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param
