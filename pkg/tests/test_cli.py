import json
import subprocess
import sys

import pytest

from lssched.circuit_io import parse_rotation_circuit
from lssched.cli import main

GATES = "qubits 3\nH 0\nT 0\nCNOT 0 1\nT 1\nS 2\nTdg 2\nCNOT 1 2\nT 2\n"
ROTS = "qubits 4\npi/8 IXYI\npi/8 ZIZI\npi/8 IYIY\npi/8 XXXY\n"


@pytest.fixture
def files(tmp_path):
    g = tmp_path / "c.gates"
    g.write_text(GATES)
    r = tmp_path / "c.rot"
    r.write_text(ROTS)
    return tmp_path, g, r


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_convert(files, capsys):
    tmp, g, _ = files
    code, out, _ = run(["convert", g], capsys)
    assert code == 0
    c = parse_rotation_circuit(out)
    assert c.n == 3 and c.pi8_count == 4


def test_transpile_writes_tableau(files, capsys):
    tmp, g, _ = files
    dst, tab = tmp / "out.rot", tmp / "tab.json"
    code, _, _ = run(["transpile", g, "--gates", "--fixpoint", "--tableau", tab, "-o", dst], capsys)
    assert code == 0
    c = parse_rotation_circuit(dst.read_text())
    assert all(op.angle.is_pi8 or op.angle.is_measurement for op in c.ops)
    assert json.loads(tab.read_text())["n"] == 3


def test_gen_random_deterministic(tmp_path, capsys):
    a = run(["gen-random", "-m", 50, "-N", 6, "--npct", 0.3, "--seed", 4], capsys)[1]
    b = run(["gen-random", "-m", 50, "-N", 6, "--npct", 0.3, "--seed", 4], capsys)[1]
    assert a == b and a.startswith("# gen-random")
    c = parse_rotation_circuit(a)
    assert c.pi8_count == 50 and len(c) == 56


def test_schedule_json(files, capsys):
    _, _, r = files
    argv = ["schedule", r, "--rule", "general", "--style", "parallelizable", "--aisles", 2,
            "--patches", 2, "--n-storage", 4, "--no-timings"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    obj = json.loads(out)
    assert len(obj["time_steps"]) == 3
    assert obj["metrics"]["LB"] == 3 and "t_sch_s" not in obj["metrics"]
    assert run(argv, capsys)[1] == out


def test_schedule_layout_json(files, capsys):
    tmp, _, r = files
    lay = tmp / "lay.json"
    lay.write_text(json.dumps({"style": "compact", "aisles": 1, "patches_per_aisle": 2, "n_storage": 1}))
    code, out, _ = run(["schedule", r, "--layout", lay, "--rule", "serial"], capsys)
    assert code == 0 and json.loads(out)["metrics"]["EN"] == 4


def test_compare(files, capsys):
    _, g, _ = files
    code, out, _ = run(["compare", g, "--gates", "--no-timings"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["after"]["EN"] <= obj["before"]["UB"]
    assert "t_transpile_s" not in obj["after"]


def test_report_csv(files, capsys):
    _, _, r = files
    code, out, _ = run(["report", r, "--random", 30, 4, 0.3, 1, "--threads", 2], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("name,rule,EN")
    assert len(lines) == 1 + 2 * 3
    serial = [ln for ln in lines[1:] if ",serial," in ln]
    assert all(ln.endswith(",0") for ln in serial)


def test_oracle_hidden(files, capsys):
    _, _, r = files
    code, out, _ = run(["oracle", r, "--style", "parallelizable", "--aisles", 1, "--patches", 2,
                        "--n-storage", 4], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["LB"] == 3 <= obj["exact_min_steps"] <= obj["greedy_EN"]
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "oracle" not in capsys.readouterr().out


@pytest.mark.parametrize(
    "text, extra, code, kind",
    [
        ("qubits 2\npi/3 ZI\n", [], 3, "ParseError"),
        ("qubits 2\npi/8 ZIZ\n", [], 3, "ParseError"),
        ("qubits 9\npi/8 ZIIIIIIII\n", ["--aisles", 1, "--patches", 1], 4, "CapacityError"),
        ("qubits 2\npi/8 ZI\n", ["--n-storage", 0], 5, "SchedulingError"),
        ("qubits 2\npi/8 ZI\n", ["--layout", "{bad"], 3, "ValidationError"),
    ],
)
def test_error_codes(tmp_path, capsys, text, extra, code, kind):
    f = tmp_path / "bad.rot"
    f.write_text(text)
    got, _, err = run(["schedule", f, *extra], capsys)
    assert got == code
    obj = json.loads(err)
    assert obj["error"] == kind and obj["exit_code"] == code


def test_missing_file(tmp_path, capsys):
    code, _, err = run(["schedule", tmp_path / "nope.rot"], capsys)
    assert code == 6 and json.loads(err)["error"] == "IOError"


def test_bad_rule_list(files, capsys):
    _, _, r = files
    code, _, err = run(["report", r, "--rules", "serial,bogus"], capsys)
    assert code == 3


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["schedule"])
    assert exc.value.code == 2


def test_module_entry_point(files):
    _, _, r = files
    proc = subprocess.run([sys.executable, "-m", "lssched", "schedule", str(r), "--rule", "serial",
                           "--no-timings"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["metrics"]["EN"] == 4
