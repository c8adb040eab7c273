"""Clifford removal by tableau accumulation, and commuting-layer merging.

Product convention: a circuit ``[D_1, ..., D_m]`` denotes ``D_1 D_2 ... D_m``.
:func:`transpile` returns ``(out, C)`` with ``prod(in) == prod(out) U_C`` up
to global phase, where ``U_C`` is the Clifford whose tableau is ``C``.
"""

from __future__ import annotations

from .errors import ValidationError
from .pauli import Angle, Circuit, PauliString, Rotation, commutes
from .tableau import CliffordTableau, conjugate, from_rotation, multiply


def _fold(angle: Angle, p: PauliString) -> tuple[Angle, PauliString]:
    # exp(i t (-P)) == exp(-i t P)
    if p.phase and not angle.is_measurement:
        return angle.negated(), p.unsigned()
    return angle, p


def transpile(c: Circuit) -> tuple[Circuit, CliffordTableau]:
    """Push every Clifford rotation to the end of the circuit.

    One pass: pi/8 rotations and measurements are conjugated by the Clifford
    accumulated so far; Clifford rotations are absorbed into it.
    """
    tab = CliffordTableau.identity(c.n)
    out = []
    for op in c.ops:
        a = op.angle
        if a.is_clifford:
            tab = multiply(tab, from_rotation(op))
            continue
        if not (a.is_pi8 or a.is_measurement):
            raise ValidationError(f"unsupported angle {a.value}")
        angle, p = _fold(a, conjugate(tab, op.pauli))
        out.append(Rotation(angle, p, op.source_index))
    return Circuit(c.n, out), tab


def _quarter_ops(q: int, p: PauliString, idx: int) -> list[Rotation]:
    q %= 4
    if q == 0:
        return []
    angle = {1: Angle.PI_4, 2: Angle.PI_2, 3: Angle.NEG_PI_4}[q]
    return [Rotation(angle, p, idx)]


def _flush(layer: list[Rotation], n: int, out: list[Rotation]) -> None:
    groups: dict[tuple[int, int], list[Rotation]] = {}
    for op in layer:
        groups.setdefault((op.pauli.x, op.pauli.z), []).append(op)
    emitted = []
    for (x, z), ops in groups.items():
        if len(ops) == 1:
            emitted.append(ops[0])
            continue
        p = PauliString(n, x, z)
        e = sum(op.angle.eighths for op in ops)
        lo = min(op.source_index for op in ops)
        hi = max(op.source_index for op in ops)
        r = 0 if e % 2 == 0 else (1 if e > 0 else -1)
        if r:
            emitted.append(Rotation(Angle.from_eighths(r), p, hi))
        emitted += _quarter_ops((e - r) // 2, p, lo)
    emitted.sort(key=lambda op: op.source_index)
    out.extend(emitted)


def merge_commuting_layers(c: Circuit) -> Circuit:
    """Combine equal-axis pi/8 rotations inside greedy commuting layers.

    A layer grows while the next pi/8 rotation commutes with all members; a
    measurement or an anticommuting rotation closes it.  Per axis the net
    angle is split into at most one pi/8 survivor (keeping the last index)
    plus a Clifford remainder (keeping the first index).
    """
    out: list[Rotation] = []
    layer: list[Rotation] = []
    axes: dict[tuple[int, int], PauliString] = {}
    for op in c.ops:
        if not (op.angle.is_pi8 or op.angle.is_measurement):
            raise ValidationError("merge expects transpiled input (pi/8 and M only)")
        if op.angle.is_measurement:
            _flush(layer, c.n, out)
            layer, axes = [], {}
            out.append(op)
            continue
        angle, p = _fold(op.angle, op.pauli)
        if p is not op.pauli:
            op = Rotation(angle, p, op.source_index)
        key = (p.x, p.z)
        if key not in axes and not all(commutes(p, q) for q in axes.values()):
            _flush(layer, c.n, out)
            layer, axes = [], {}
        layer.append(op)
        axes.setdefault(key, p)
    _flush(layer, c.n, out)
    return Circuit(c.n, out)


def optimize_fixpoint(c: Circuit, max_rounds: int | None = None) -> tuple[Circuit, CliffordTableau]:
    """Alternate transpile and merge until the pi/8 count stops changing.

    The returned tableau is the product of the per-round tableaux, so the
    ``prod(in) == prod(out) U_C`` relation of :func:`transpile` still holds.
    """
    out, total = transpile(c)
    rounds = 0
    while max_rounds is None or rounds < max_rounds:
        merged = merge_commuting_layers(out)
        if merged.pi8_count == out.pi8_count:
            break
        out, tab = transpile(merged)
        total = multiply(tab, total)
        rounds += 1
    return out, total
