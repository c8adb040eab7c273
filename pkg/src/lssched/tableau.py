"""Clifford tableaux: conjugation, composition and initialization from rotations.

Row ``2j`` holds ``C X_j C^dag`` and row ``2j + 1`` holds ``C Z_j C^dag``.
Rows are signed Pauli strings stored column-wise (three parallel tuples of
ints) so that conjugation touches only plain integers.
"""

from __future__ import annotations

from .errors import DimensionError, InvariantViolation, UnsupportedAngleError
from .pauli import PauliString, Rotation, product_exponent


class CliffordTableau:
    __slots__ = ("n", "_x", "_z", "_s")

    def __init__(self, n: int, xs, zs, signs):
        if n < 1:
            raise DimensionError(f"tableau needs at least one qubit, got {n}")
        if not (len(xs) == len(zs) == len(signs) == 2 * n):
            raise DimensionError("tableau must have 2n rows")
        self.n = n
        self._x = tuple(xs)
        self._z = tuple(zs)
        self._s = tuple(signs)

    @classmethod
    def identity(cls, n: int) -> CliffordTableau:
        if n < 1:
            raise DimensionError(f"tableau needs at least one qubit, got {n}")
        xs, zs = [], []
        for j in range(n):
            xs += [1 << j, 0]
            zs += [0, 1 << j]
        return cls(n, xs, zs, [0] * (2 * n))

    @classmethod
    def from_rows(cls, rows) -> CliffordTableau:
        rows = list(rows)
        n = rows[0].n if rows else 0
        return cls(n, [r.x for r in rows], [r.z for r in rows], [r.phase for r in rows])

    def row(self, k: int) -> PauliString:
        return PauliString(self.n, self._x[k], self._z[k], self._s[k])

    @property
    def rows(self) -> list[PauliString]:
        return [self.row(k) for k in range(2 * self.n)]

    def is_identity(self) -> bool:
        return self == CliffordTableau.identity(self.n)

    def conjugate(self, p: PauliString) -> PauliString:
        return conjugate(self, p)

    def __eq__(self, other):
        if not isinstance(other, CliffordTableau):
            return NotImplemented
        return (
            self.n == other.n
            and self._x == other._x
            and self._z == other._z
            and self._s == other._s
        )

    def __hash__(self):
        return hash((self.n, self._x, self._z, self._s))

    def __repr__(self):
        body = ", ".join(str(r) for r in self.rows)
        return f"CliffordTableau([{body}])"

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [str(r) for r in self.rows]}

    @classmethod
    def from_json(cls, obj: dict) -> CliffordTableau:
        return cls.from_rows(PauliString.from_label(r) for r in obj["rows"])


def identity_tableau(n: int) -> CliffordTableau:
    return CliffordTableau.identity(n)


def _conjugate_bits(tab: CliffordTableau, x: int, z: int, phase: int):
    # Expand P = (-1)^phase i^|x&z| prod_j X_j^x_j prod_j Z_j^z_j, map each
    # generator through its row and multiply left to right, tracking the
    # power of i exactly.
    xs, zs, ss = tab._x, tab._z, tab._s
    k = 2 * phase + (x & z).bit_count()
    ax = az = 0
    for bits, off in ((x, 0), (z, 1)):
        while bits:
            low = bits & -bits
            r = 2 * (low.bit_length() - 1) + off
            rx, rz = xs[r], zs[r]
            nx, nz = ax ^ rx, az ^ rz
            k += (
                (ax & az).bit_count()
                + (rx & rz).bit_count()
                - (nx & nz).bit_count()
                + 2 * ((az & rx).bit_count() + ss[r])
            )
            ax, az = nx, nz
            bits ^= low
    if k & 1:
        raise InvariantViolation("conjugation produced a non-Hermitian image")
    return ax, az, (k >> 1) & 1


def conjugate(tab: CliffordTableau, p: PauliString) -> PauliString:
    """Return ``C P C^dag``."""
    if tab.n != p.n:
        raise DimensionError(f"tableau on {tab.n} qubits, Pauli on {p.n}")
    x, z, s = _conjugate_bits(tab, p.x, p.z, p.phase)
    return PauliString(p.n, x, z, s)


def multiply(u: CliffordTableau, v: CliffordTableau) -> CliffordTableau:
    """Tableau of ``U V``: row ``k`` is ``U (V G_k V^dag) U^dag``."""
    if u.n != v.n:
        raise DimensionError(f"tableau sizes differ: {u.n} vs {v.n}")
    xs, zs, ss = [], [], []
    for k in range(2 * u.n):
        vx, vz, vs = v._x[k], v._z[k], v._s[k]
        bit = 1 << (k >> 1)
        if not vs and ((vx, vz) == (bit, 0) if k % 2 == 0 else (vx, vz) == (0, bit)):
            # V fixes this generator, so the row is U's own.
            xs.append(u._x[k])
            zs.append(u._z[k])
            ss.append(u._s[k])
            continue
        x, z, s = _conjugate_bits(u, vx, vz, vs)
        xs.append(x)
        zs.append(z)
        ss.append(s)
    return CliffordTableau(u.n, xs, zs, ss)


def from_rotation(r: Rotation) -> CliffordTableau:
    """Tableau of ``exp(i theta P)`` for theta in {+-pi/4, +-pi/2}.

    Generators commuting with ``P`` are fixed.  An anticommuting generator
    ``Q`` maps to ``+-i P Q`` for quarter turns and to ``-Q`` for half turns.
    """
    angle = r.angle
    if not angle.is_clifford:
        raise UnsupportedAngleError(f"cannot build a tableau from {angle.value}")
    p = r.pauli
    n = p.n
    # exp(i theta (-P)) == exp(-i theta P)
    sign = angle.sign * (-1 if p.phase else 1)
    tab = CliffordTableau.identity(n)
    xs, zs, ss = list(tab._x), list(tab._z), list(tab._s)
    for k in range(2 * n):
        qx, qz = xs[k], zs[k]
        if not (((p.x & qz).bit_count() + (qx & p.z).bit_count()) & 1):
            continue
        if angle.is_pi2:
            ss[k] = 1
            continue
        e, x, z = product_exponent(p.x, p.z, qx, qz)
        e += 1 if sign > 0 else 3
        if e & 1:
            raise InvariantViolation("quarter turn of an anticommuting pair is not Hermitian")
        xs[k], zs[k], ss[k] = x, z, (e >> 1) & 1
    return CliffordTableau(n, xs, zs, ss)


def is_symplectic(tab: CliffordTableau) -> bool:
    """Row images keep the generators' commutation pattern."""
    n = tab.n
    for a in range(2 * n):
        for b in range(a + 1, 2 * n):
            anti = ((tab._x[a] & tab._z[b]).bit_count() + (tab._x[b] & tab._z[a]).bit_count()) & 1
            expected = 1 if (a // 2 == b // 2) else 0
            if anti != expected:
                return False
    return True
