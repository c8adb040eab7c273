"""Command-line front end.

Exit codes: 0 ok, 2 usage, 3 invalid input, 4 capacity, 5 scheduling,
6 I/O, 7 internal invariant.  Failures print one JSON object to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .circuit_io import (
    RandomSpec,
    convert_gates,
    emit_circuit,
    gen_random,
    parse_gate_circuit,
    parse_rotation_circuit,
)
from .errors import LsschedError, ValidationError
from .layout import LayoutSpec, build_layout
from .pauli import Circuit
from .scheduler import compute_gap, reports_to_csv, schedule
from .transpiler import optimize_fixpoint, transpile

EXIT_IO = 6


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_circuit(path: str, gates: bool = False) -> Circuit:
    text = _read(path)
    if gates:
        gl, n = parse_gate_circuit(text)
        return convert_gates(gl, n)
    return parse_rotation_circuit(text)


def _drop_pauli(c: Circuit) -> Circuit:
    """Remove pi/2 rotations; they are tracked in the Pauli frame at no cost."""
    return Circuit(c.n, [op for op in c.ops if not op.angle.is_pi2])


def _layout_spec(args, n: int) -> LayoutSpec:
    if args.layout:
        raw = args.layout
        if os.path.exists(raw):
            raw = _read(raw)
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"--layout is neither a file nor JSON: {exc}") from None
        return LayoutSpec.from_json(obj)
    if args.aisles is None or args.patches is None:
        spec = LayoutSpec.for_qubits(n, args.style, args.n_storage, args.n_ancillary)
        return LayoutSpec(
            args.style,
            args.aisles if args.aisles is not None else spec.A,
            args.patches if args.patches is not None else spec.P,
            args.n_storage,
            args.n_ancillary,
        )
    return LayoutSpec(args.style, args.aisles, args.patches, args.n_storage, args.n_ancillary)


def _add_layout_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("layout")
    g.add_argument("--layout", help="layout JSON object or path to a JSON file")
    g.add_argument("--style", choices=("compact", "parallelizable"), default="compact")
    g.add_argument("--aisles", type=int, help="aisle count A (default: sized to the circuit)")
    g.add_argument("--patches", type=int, help="patches per aisle P (default: sized to the circuit)")
    g.add_argument("--n-storage", type=int, default=1)
    g.add_argument("--n-ancillary", type=int, default=1)
    g.add_argument("--assign", default="sequential", help="sequential | random:<seed>")


def _add_sched_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order-seed", type=int, help="shuffle candidate order with this seed")
    p.add_argument("--allow-shared-data", action="store_true")
    p.add_argument("--no-cache", action="store_true", help="disable the route cache")


def _run_schedule(c: Circuit, args, rule: str):
    spec = _layout_spec(args, c.n)
    g = build_layout(spec)
    return schedule(
        c, g, rule,
        order_seed=args.order_seed,
        allow_shared_data=args.allow_shared_data,
        assignment=args.assign,
        cache=not args.no_cache,
    )


def cmd_convert(args) -> int:
    _write(args.output, emit_circuit(_load_circuit(args.input, gates=True)))
    return 0


def cmd_transpile(args) -> int:
    c = _load_circuit(args.input, gates=args.gates)
    out, tab = optimize_fixpoint(c) if args.fixpoint else transpile(c)
    _write(args.output, emit_circuit(out))
    if args.tableau:
        _write(args.tableau, json.dumps(tab.to_json(), indent=2) + "\n")
    return 0


def cmd_gen_random(args) -> int:
    spec = RandomSpec(args.m, args.N, args.npct, args.seed)
    header = f"# gen-random m={spec.m} N={spec.N} npct={spec.npct} seed={spec.seed}\n"
    _write(args.output, header + emit_circuit(gen_random(spec)))
    return 0


def cmd_schedule(args) -> int:
    c = _drop_pauli(_load_circuit(args.input, gates=args.gates))
    sched, _ = _run_schedule(c, args, args.rule)
    text = json.dumps(sched.to_json(timings=not args.no_timings), indent=2) + "\n"
    _write(args.output, text)
    return 0


def _summary(rep, elapsed: float) -> dict:
    return {"EN": rep.EN, "LB": rep.LB, "UB": rep.UB, "W_bar": rep.W_bar, "t_s": elapsed}


def cmd_compare(args) -> int:
    raw = _load_circuit(args.input, gates=args.gates)
    t0 = time.perf_counter()
    opt, _ = optimize_fixpoint(raw)
    t_tr = time.perf_counter() - t0
    before = _drop_pauli(raw)
    rows = {}
    for label, circ in (("before", before), ("after", opt)):
        t = time.perf_counter()
        _, rep = _run_schedule(circ, args, args.rule)
        rows[label] = _summary(rep, time.perf_counter() - t)
    rows["after"]["t_transpile_s"] = t_tr
    b, a = rows["before"]["EN"], rows["after"]["EN"]
    rows["reduction_pct"] = 100.0 * (b - a) / b if b else 0.0
    rows["rule"] = args.rule
    if args.no_timings:
        for k in ("before", "after"):
            rows[k] = {kk: v for kk, v in rows[k].items() if not kk.startswith("t_")}
    _write(args.output, json.dumps(rows, indent=2) + "\n")
    return 0


def cmd_report(args) -> int:
    jobs = []
    for path in args.inputs:
        jobs.append((path, lambda p=path: _drop_pauli(_load_circuit(p, gates=args.gates))))
    for m, n, npct, seed in args.random or []:
        spec = RandomSpec(int(m), int(n), float(npct), int(seed))
        name = f"random:m={spec.m}:N={spec.N}:npct={spec.npct}:seed={spec.seed}"
        jobs.append((name, lambda s=spec: gen_random(s)))
    if not jobs:
        raise ValidationError("report needs circuit files or --random specs")
    rules = args.rules.split(",")

    def run(job):
        name, load = job
        c = load()
        reps = {r: _run_schedule(c, args, r)[1] for r in rules}
        if "serial" in reps:
            for r, rep in reps.items():
                rep.gap_pct = compute_gap(reps["serial"].EN, rep.EN)
        return [(name, reps[r]) for r in rules]

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    _write(args.output, reports_to_csv(row for rows in results for row in rows))
    return 0


def cmd_oracle(args) -> int:
    from .oracle import exact_min_steps

    c = _drop_pauli(_load_circuit(args.input, gates=args.gates))
    spec = _layout_spec(args, c.n)
    g = build_layout(spec)
    from .layout import assign_qubits

    assignment = assign_qubits(c, g, args.assign)
    _, rep = schedule(c, g, args.rule, assignment=assignment,
                      allow_shared_data=args.allow_shared_data)
    exact = exact_min_steps(c, g, args.rule, assignment, args.allow_shared_data)
    _write(args.output, json.dumps({"exact_min_steps": exact, "greedy_EN": rep.EN, "LB": rep.LB}) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lssched", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("convert", help="Clifford+T gate file to rotation file")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("transpile", help="remove Clifford rotations")
    p.add_argument("input")
    p.add_argument("--gates", action="store_true", help="input is a gate file")
    p.add_argument("--fixpoint", action="store_true", help="merge commuting layers until stable")
    p.add_argument("--tableau", help="write the final Clifford tableau JSON here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_transpile)

    p = sub.add_parser("gen-random", help="random pi/8 rotation circuit")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-N", type=int, required=True)
    p.add_argument("--npct", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen_random)

    p = sub.add_parser("schedule", help="schedule a rotation circuit")
    p.add_argument("input")
    p.add_argument("--gates", action="store_true")
    p.add_argument("--rule", choices=("serial", "trivial", "general"), default="general")
    p.add_argument("--no-timings", action="store_true", help="omit wall-clock fields")
    p.add_argument("-o", "--output")
    _add_layout_flags(p)
    _add_sched_flags(p)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("compare", help="schedule before and after transpilation")
    p.add_argument("input")
    p.add_argument("--gates", action="store_true")
    p.add_argument("--rule", choices=("serial", "trivial", "general"), default="general")
    p.add_argument("--no-timings", action="store_true")
    p.add_argument("-o", "--output")
    _add_layout_flags(p)
    _add_sched_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="CSV of metrics over circuits and rules")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--gates", action="store_true")
    p.add_argument("--random", nargs=4, action="append", metavar=("M", "N", "NPCT", "SEED"))
    p.add_argument("--rules", default="serial,trivial,general")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("-o", "--output")
    _add_layout_flags(p)
    _add_sched_flags(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("oracle")  # debugging aid, deliberately undocumented
    p.add_argument("input")
    p.add_argument("--gates", action="store_true")
    p.add_argument("--rule", choices=("serial", "trivial", "general"), default="general")
    p.add_argument("-o", "--output")
    _add_layout_flags(p)
    _add_sched_flags(p)
    p.set_defaults(func=cmd_oracle)
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "oracle"]
    return ap


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "rules", None):
        for r in args.rules.split(","):
            if r not in ("serial", "trivial", "general"):
                return _fail("ValidationError", f"unknown rule {r!r}", 3)
    try:
        return args.func(args)
    except LsschedError as exc:
        return _fail(type(exc).__name__, str(exc), exc.exit_code)
    except OSError as exc:
        return _fail("IOError", str(exc), EXIT_IO)


if __name__ == "__main__":
    sys.exit(main())
