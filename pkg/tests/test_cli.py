from __future__ import annotations

import subprocess
import sys

import pytest

from eqlines.cli import main, run

TABLE3 = """\
  a   D3(a)      D4(a)
  3      11      14.42
  5      59      64.56
  7     131     144.52
  9     227     250.41
 11     347     380.96
"""


def test_table3_golden():
    code, out = run(["table3"])
    assert code == 0 and out == TABLE3


def test_table3_machine_precision():
    code, out = run(["table3", "--machine", "--precision", "3"])
    assert code == 0
    assert out.splitlines()[0] == "row = 3 11 14.423"


def test_certificate_ok():
    code, out = run(["certificate", "5", "64"])
    assert code == 0
    assert "Certified: N ≤ 276" in out
    assert "three routes agree: yes" in out


def test_certificate_fails_above_root():
    code, out = run(["certificate", "5", "66"])
    assert code == 1
    assert "Not certified" in out


def test_certificate_machine():
    code, out = run(["certificate", "3", "14", "--machine"])
    lines = dict(line.split(" = ", 1) for line in out.splitlines())
    assert code == 0
    assert lines["f1"] == "297/112" and lines["certified"] == "yes" and lines["bound"] == "28"


def test_bound():
    code, out = run(["bound", "5", "--machine"])
    kv = dict(line.split(" = ", 1) for line in out.splitlines())
    assert code == 0
    assert kv["D3"] == "59" and kv["D4"] == "64.56" and kv["D4_floor"] == "64" and kv["bound"] == "276"


def test_classes():
    code, out = run(["classes", "6"])
    lines = out.splitlines()
    assert code == 0 and lines[0] == "16 classes"
    assert len(lines) == 17 and all(len(s) == 15 and set(s) <= {"+", "-"} for s in lines[1:])


@pytest.mark.parametrize("argv", [
    [], ["nonsense"], ["bound", "4"], ["bound", "x"], ["certificate", "5"],
    ["classes", "9"], ["classes", "0"], ["check", "/nonexistent/file", "--alpha", "1/3"],
    ["check", "f", "--alpha", "one"], ["table3", "--precision", "-1"],
])
def test_usage_errors(argv, capsys):
    code, _ = run(argv)
    assert code == 2


def test_gen28_check_srg(tmp_path):
    path = tmp_path / "g28.txt"
    assert run(["gen28", "--out", str(path)])[0] == 0
    code, out = run(["check", str(path), "--alpha", "1/3", "--max-k", "3"])
    assert code == 0
    assert "y1: 12096" in out and "z2: 60480" in out and "all constraints pass: yes" in out
    code, out = run(["srg", str(path), "--alpha", "1/3"])
    assert code == 0 and "SRG(27, 16, 10, 8)" in out


def test_gen28_stdout():
    code, out = run(["gen28"])
    assert code == 0 and out.startswith("28 7 1/3\n") and len(out.splitlines()) == 29


def test_check_verification_failure(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 3 3/5\n1 -3/5 -3/5\n-3/5 1 -3/5\n-3/5 -3/5 1\n")
    assert run(["check", str(bad), "--alpha", "3/5"])[0] == 1
    sub = tmp_path / "sub.txt"
    sub.write_text("4 7 1/3\n1 1/3 1/3 1/3\n1/3 1 1/3 1/3\n1/3 1/3 1 1/3\n1/3 1/3 1/3 1\n")
    assert run(["srg", str(sub), "--alpha", "1/3"])[0] == 1


def test_output_is_stable():
    assert run(["certificate", "7", "144"]) == run(["certificate", "7", "144"])


def test_main_writes_stdout(capsys):
    assert main(["classes", "3"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("2 classes\n")
    assert "classes" in captured.err and "s]" in captured.err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "eqlines", "classes", "5"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("7 classes")
