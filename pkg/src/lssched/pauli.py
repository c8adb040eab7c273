"""Symplectic Pauli strings, rotation angles, rotations and circuits.

A :class:`PauliString` on ``n`` qubits is stored as a sign bit plus two
``n``-bit integers ``x`` and ``z`` (bit ``j`` is qubit ``j``).  Qubit ``j``
carries I, X, Y or Z for ``(x_j, z_j)`` equal to ``(0,0)``, ``(1,0)``,
``(1,1)``, ``(0,1)``.  The string represents ``(-1)**phase`` times the tensor
product of those single-qubit matrices, so the factor ``i`` hidden in
``Y = iXZ`` is never stored; it is recounted from ``popcount(x & z)`` whenever
two strings are multiplied.

Python integers give word-parallel AND/XOR/popcount for free, which is what
the commutation test needs when it is run millions of times.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DimensionError, ValidationError

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}

# i**k for k mod 4
UNIT_PHASES = (1, 1j, -1, -1j)


@dataclass(frozen=True, slots=True)
class PauliString:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError(f"negative qubit count {self.n}")
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise DimensionError(f"bit vectors exceed {self.n} qubits")
        if self.phase not in (0, 1):
            raise ValidationError(f"phase bit must be 0 or 1, got {self.phase!r}")

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse ``"IXYZ"`` (qubit 0 first), optionally prefixed by ``+`` or ``-``."""
        phase = 0
        if label and label[0] in "+-":
            phase = 1 if label[0] == "-" else 0
            label = label[1:]
        x = z = 0
        for j, ch in enumerate(label):
            try:
                bx, bz = _LETTER_BITS[ch]
            except KeyError:
                raise ValidationError(f"bad Pauli letter {ch!r}") from None
            x |= bx << j
            z |= bz << j
        return cls(len(label), x, z, phase)

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliString:
        if not 0 <= qubit < n:
            raise DimensionError(f"qubit {qubit} out of range for n={n}")
        bx, bz = _LETTER_BITS[letter]
        return cls(n, bx << qubit, bz << qubit)

    @property
    def support(self) -> int:
        return self.x | self.z

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def qubits(self) -> list[int]:
        s = self.x | self.z
        out = []
        while s:
            low = s & -s
            out.append(low.bit_length() - 1)
            s ^= low
        return out

    def letter(self, qubit: int) -> str:
        return _BITS_LETTER[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    def label(self, signed: bool = False) -> str:
        body = "".join(self.letter(j) for j in range(self.n))
        if signed:
            return ("-" if self.phase else "") + body
        return body

    def is_identity(self) -> bool:
        return not (self.x | self.z)

    def unsigned(self) -> PauliString:
        if not self.phase:
            return self
        return PauliString(self.n, self.x, self.z, 0)

    def negate(self) -> PauliString:
        return PauliString(self.n, self.x, self.z, self.phase ^ 1)

    def __str__(self):
        return self.label(signed=True)


def _check_dims(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise DimensionError(f"qubit count mismatch: {p.n} vs {q.n}")


def commutes(p: PauliString, q: PauliString) -> bool:
    _check_dims(p, q)
    return not (((p.x & q.z).bit_count() + (q.x & p.z).bit_count()) & 1)


def trivially_disjoint(p: PauliString, q: PauliString) -> bool:
    """True when the two supports share no qubit."""
    _check_dims(p, q)
    return not ((p.x | p.z) & (q.x | q.z))


def product_exponent(x1: int, z1: int, x2: int, z2: int) -> tuple[int, int, int]:
    """Multiply two unsigned Pauli strings given as bit vectors.

    Returns ``(k, x, z)`` with ``P1 * P2 == i**k * P(x, z)``; ``k`` is not
    reduced mod 4.  With ``P = i**|x&z| X^x Z^z`` the only reordering is
    ``Z^{z1} X^{x2}``, which contributes ``(-1)**|z1 & x2|``.
    """
    x = x1 ^ x2
    z = z1 ^ z2
    k = (x1 & z1).bit_count() + (x2 & z2).bit_count() - (x & z).bit_count()
    k += 2 * (z1 & x2).bit_count()
    return k, x, z


def multiply_pauli(p: PauliString, q: PauliString) -> tuple[complex, PauliString]:
    """Matrix product ``p @ q`` as ``(unit_phase, R)`` with ``R`` unsigned."""
    _check_dims(p, q)
    k, x, z = product_exponent(p.x, p.z, q.x, q.z)
    k += 2 * (p.phase + q.phase)
    return UNIT_PHASES[k % 4], PauliString(p.n, x, z, 0)


class Angle(enum.Enum):
    """Rotation angle tag; ``M`` marks a measurement."""

    PI_8 = "pi/8"
    NEG_PI_8 = "-pi/8"
    PI_4 = "pi/4"
    NEG_PI_4 = "-pi/4"
    PI_2 = "pi/2"
    NEG_PI_2 = "-pi/2"
    M = "M"

    @classmethod
    def parse(cls, token: str) -> Angle:
        try:
            return cls(token)
        except ValueError:
            raise ValidationError(f"unknown angle token {token!r}") from None

    @property
    def eighths(self) -> int:
        """Signed multiple of pi/8 (0 for measurements)."""
        return _EIGHTHS[self]

    @classmethod
    def from_eighths(cls, k: int) -> Angle:
        return _FROM_EIGHTHS[k]

    @property
    def radians(self) -> float | None:
        if self is Angle.M:
            return None
        return self.eighths * math.pi / 8

    @property
    def is_measurement(self) -> bool:
        return self is Angle.M

    @property
    def is_pi8(self) -> bool:
        return self in (Angle.PI_8, Angle.NEG_PI_8)

    @property
    def is_pi4(self) -> bool:
        return self in (Angle.PI_4, Angle.NEG_PI_4)

    @property
    def is_pi2(self) -> bool:
        return self in (Angle.PI_2, Angle.NEG_PI_2)

    @property
    def is_clifford(self) -> bool:
        return self.is_pi4 or self.is_pi2

    @property
    def sign(self) -> int:
        return -1 if self.eighths < 0 else 1

    def negated(self) -> Angle:
        if self is Angle.M:
            return self
        return Angle.from_eighths(-self.eighths)

    def __str__(self):
        return self.value


_EIGHTHS = {
    Angle.PI_8: 1,
    Angle.NEG_PI_8: -1,
    Angle.PI_4: 2,
    Angle.NEG_PI_4: -2,
    Angle.PI_2: 4,
    Angle.NEG_PI_2: -4,
    Angle.M: 0,
}
_FROM_EIGHTHS = {v: k for k, v in _EIGHTHS.items() if k is not Angle.M}


@dataclass(frozen=True, slots=True)
class Rotation:
    angle: Angle
    pauli: PauliString
    source_index: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.pauli.is_identity():
            what = "measurement" if self.angle.is_measurement else "rotation"
            raise ValidationError(f"{what} with empty support")

    @property
    def n(self) -> int:
        return self.pauli.n

    def __str__(self):
        return f"{self.angle.value} {self.pauli}"


@dataclass
class Circuit:
    n: int
    ops: list[Rotation] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"circuit needs at least one qubit, got {self.n}")
        prev = None
        for op in self.ops:
            if op.pauli.n != self.n:
                raise DimensionError(
                    f"op on {op.pauli.n} qubits in a {self.n}-qubit circuit"
                )
            if prev is not None and op.source_index <= prev:
                raise ValidationError("source_index must be strictly increasing")
            prev = op.source_index

    @classmethod
    def build(cls, n: int, items: Iterable[tuple[str, str]]) -> Circuit:
        """``Circuit.build(2, [("pi/8", "ZI"), ("M", "IZ")])``; indices by position."""
        ops = [
            Rotation(Angle.parse(a), PauliString.from_label(p), i)
            for i, (a, p) in enumerate(items)
        ]
        return cls(n, ops)

    @classmethod
    def from_rotations(cls, n: int, rotations: Sequence[Rotation]) -> Circuit:
        """Re-index ``rotations`` by position."""
        return cls(n, [Rotation(r.angle, r.pauli, i) for i, r in enumerate(rotations)])

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def count(self, predicate) -> int:
        return sum(1 for op in self.ops if predicate(op.angle))

    @property
    def pi8_count(self) -> int:
        return self.count(lambda a: a.is_pi8)
