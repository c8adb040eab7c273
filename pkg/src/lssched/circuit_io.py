"""Text formats, gate-to-rotation conversion and random circuit generation.

Rotation format::

    qubits 4
    pi/8 IXYI     # comment
    M -ZZII

Gate format::

    qubits 2
    H 0
    CNOT 0 1
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ParseError, ValidationError
from .pauli import Angle, Circuit, PauliString, Rotation

GATE_KINDS = ("X", "Y", "Z", "H", "S", "Sdg", "T", "Tdg", "CNOT")
_GATE_LOOKUP = {k.lower(): k for k in GATE_KINDS}
_LETTERS = np.array(list("IXYZ"))


@dataclass(frozen=True)
class GateOp:
    kind: str
    targets: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValidationError(f"unknown gate {self.kind!r}")
        want = 2 if self.kind == "CNOT" else 1
        if len(self.targets) != want:
            raise ValidationError(f"{self.kind} takes {want} target(s), got {len(self.targets)}")
        if want == 2 and self.targets[0] == self.targets[1]:
            raise ValidationError("CNOT control and target must differ")


@dataclass(frozen=True)
class RandomSpec:
    m: int
    N: int
    npct: float
    seed: int = 0

    def __post_init__(self):
        if self.m < 1 or self.N < 1:
            raise ValidationError("m and N must be positive")
        if not 0 < self.npct <= 1:
            raise ValidationError("npct must lie in (0, 1]")


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _header(it) -> int:
    for lineno, toks in it:
        if len(toks) != 2 or toks[0] != "qubits":
            raise ParseError("expected header 'qubits <N>'", lineno)
        try:
            n = int(toks[1])
        except ValueError:
            raise ParseError(f"bad qubit count {toks[1]!r}", lineno) from None
        if n < 1:
            raise ParseError("qubit count must be positive", lineno)
        return n
    raise ParseError("missing 'qubits <N>' header", 1)


def parse_rotation_circuit(text: str) -> Circuit:
    it = _lines(text)
    n = _header(it)
    ops = []
    for lineno, toks in it:
        if len(toks) != 2:
            raise ParseError("expected '<angle> <paulistring>'", lineno)
        try:
            angle = Angle.parse(toks[0])
            p = PauliString.from_label(toks[1])
            if p.n != n:
                raise ParseError(f"Pauli string has length {p.n}, expected {n}", lineno)
            if p.phase and not angle.is_measurement:
                angle, p = angle.negated(), p.unsigned()
            ops.append(Rotation(angle, p, len(ops)))
        except ParseError:
            raise
        except ValidationError as exc:
            raise ParseError(str(exc), lineno) from None
    return Circuit(n, ops)


def parse_gate_circuit(text: str) -> tuple[list[GateOp], int]:
    it = _lines(text)
    n = _header(it)
    gates = []
    for lineno, toks in it:
        kind = _GATE_LOOKUP.get(toks[0].lower())
        if kind is None:
            raise ParseError(f"unknown gate {toks[0]!r}", lineno)
        try:
            targets = tuple(int(t) for t in toks[1:])
        except ValueError:
            raise ParseError("qubit indices must be integers", lineno) from None
        if any(not 0 <= q < n for q in targets):
            raise ParseError(f"qubit index out of range for {n} qubits", lineno)
        try:
            gates.append(GateOp(kind, targets))
        except ValidationError as exc:
            raise ParseError(str(exc), lineno) from None
    return gates, n


def _gate_rotations(g: GateOp, n: int) -> list[tuple[Angle, PauliString]]:
    q = g.targets[0]

    def one(letter, qubit=q):
        return PauliString.single(n, qubit, letter)

    k = g.kind
    if k in ("X", "Y", "Z"):
        return [(Angle.PI_2, one(k))]
    if k == "T":
        return [(Angle.NEG_PI_8, one("Z"))]
    if k == "Tdg":
        return [(Angle.PI_8, one("Z"))]
    if k == "S":
        return [(Angle.NEG_PI_4, one("Z"))]
    if k == "Sdg":
        return [(Angle.PI_4, one("Z"))]
    if k == "H":
        return [(Angle.PI_4, one("Z")), (Angle.PI_4, one("X")), (Angle.PI_4, one("Z"))]
    c, t = g.targets
    zx = PauliString(n, 1 << t, 1 << c)
    return [(Angle.PI_4, zx), (Angle.NEG_PI_4, one("Z", c)), (Angle.NEG_PI_4, one("X", t))]


def convert_gates(gates: Sequence[GateOp], n: int) -> Circuit:
    """Replace each Clifford+T gate by an equivalent rotation sequence.

    Under ``exp(i theta P)``: T = Z(-pi/8), S = Z(-pi/4), Paulis are
    half turns, H = Z(pi/4) X(pi/4) Z(pi/4) and
    CNOT = ZX(pi/4) Z_c(-pi/4) X_t(-pi/4), all up to global phase.
    """
    if n < 1:
        raise DimensionError("qubit count must be positive")
    ops = []
    for g in gates:
        if any(not 0 <= q < n for q in g.targets):
            raise ValidationError(f"{g.kind} target out of range for {n} qubits")
        for angle, p in _gate_rotations(g, n):
            ops.append(Rotation(angle, p, len(ops)))
    return Circuit(n, ops)


def _support_sizes(rng: np.random.Generator, m: int, N: int, npct: float) -> np.ndarray:
    draws = rng.normal(N * npct, 2.0, size=m)
    return np.clip(np.rint(draws), 1, N).astype(np.int64)


def _random_paulis(rng, m: int, N: int, npct: float) -> list[PauliString]:
    sizes = _support_sizes(rng, m, N, npct)
    out = []
    chunk = max(1, 200_000 // N)
    weights = 1 << np.arange(N, dtype=object)
    for lo in range(0, m, chunk):
        hi = min(m, lo + chunk)
        order = np.argsort(rng.random((hi - lo, N)), axis=1)
        letters = rng.integers(1, 4, size=(hi - lo, N))
        for r in range(hi - lo):
            k = sizes[lo + r]
            qs = order[r, :k]
            ls = letters[r, :k]
            x = int(weights[qs[ls != 3]].sum()) if np.any(ls != 3) else 0
            z = int(weights[qs[ls != 1]].sum()) if np.any(ls != 1) else 0
            out.append(PauliString(N, x, z))
    return out


def gen_random(spec: RandomSpec) -> Circuit:
    """``m`` +pi/8 rotations with normally distributed support, then Z readout."""
    rng = np.random.default_rng(spec.seed)
    ops = [Rotation(Angle.PI_8, p, i) for i, p in enumerate(_random_paulis(rng, spec.m, spec.N, spec.npct))]
    for q in range(spec.N):
        ops.append(Rotation(Angle.M, PauliString.single(spec.N, q, "Z"), len(ops)))
    return Circuit(spec.N, ops)


def random_gates(n: int, length: int, seed=None) -> list[GateOp]:
    """Uniform random Clifford+T gate list (test and benchmark workload)."""
    rng = np.random.default_rng(seed)
    kinds = GATE_KINDS if n > 1 else GATE_KINDS[:-1]
    gates = []
    for _ in range(length):
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind == "CNOT":
            c, t = rng.choice(n, size=2, replace=False)
            gates.append(GateOp(kind, (int(c), int(t))))
        else:
            gates.append(GateOp(kind, (int(rng.integers(n)),)))
    return gates


def random_rotation_circuit(n: int, m: int, seed=None, npct: float = 0.3,
                            measure_every: int = 0) -> Circuit:
    """Mixed-angle rotation circuit drawing every angle tag uniformly."""
    rng = np.random.default_rng(seed)
    angles = [a for a in Angle if not a.is_measurement]
    picks = rng.integers(len(angles), size=m)
    ops = []
    for i, p in enumerate(_random_paulis(rng, m, n, npct)):
        if measure_every and i % measure_every == measure_every - 1:
            ops.append(Rotation(Angle.M, p, len(ops)))
        else:
            ops.append(Rotation(angles[picks[i]], p, len(ops)))
    return Circuit(n, ops)


def emit_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n}"]
    lines += [f"{op.angle.value} {op.pauli.label(signed=True)}" for op in c.ops]
    return "\n".join(lines) + "\n"


def emit_gates(gates: Iterable[GateOp], n: int) -> str:
    lines = [f"qubits {n}"] + [" ".join([g.kind, *map(str, g.targets)]) for g in gates]
    return "\n".join(lines) + "\n"


def emit(obj) -> str:
    """Circuits become rotation text; schedules and reports become JSON."""
    if isinstance(obj, Circuit):
        return emit_circuit(obj)
    if hasattr(obj, "to_json"):
        return json.dumps(obj.to_json(), indent=2, sort_keys=False) + "\n"
    raise TypeError(f"cannot emit {type(obj).__name__}")
