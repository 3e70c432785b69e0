import csv
import json
import subprocess
import sys

import pytest

from trisqueeze.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main


def run(*argv):
    return main(list(argv))


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        run("nonsense")
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        run("scan")
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        run("figure", "F99")
    assert info.value.code == EXIT_USAGE
    assert run("--epsilon", "0", "table1") == EXIT_USAGE
    assert run("extremum", "--family", "III_1A", "--objective", "lambda_jk", "--pin", "000=0", "--pin", "100=0") == EXIT_USAGE


def test_scan_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("--seed", "5", "--count", "500", "scan", "--family", "III-2", "--out", str(a)) == EXIT_OK
    # globals may also follow the subcommand
    assert run("scan", "--family", "III_2", "--seed", "5", "--count", "500", "--out", str(b)) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    summary = json.loads(capsys.readouterr().out.split("\n}\n")[0] + "\n}")
    assert summary["count"] == 500 and summary["seed"] == 5


def test_scan_io_error(tmp_path):
    blocker = tmp_path / "f"
    blocker.write_text("")
    assert run("--count", "5", "scan", "--family", "III_0", "--out", str(blocker / "x.csv")) == EXIT_IO


def test_extremum_json(tmp_path, capsys):
    out = tmp_path / "ext.json"
    code = run("extremum", "--family", "III_1A", "--objective", "lambda_ij", "--pin", "111=0", "--out", str(out))
    assert code == EXIT_OK
    data = json.loads(out.read_text())
    assert data["value"] == pytest.approx(1.75, abs=1e-9)
    assert data["probabilities"]["100"] == pytest.approx(0.25, abs=1e-6)


def test_threshold(capsys):
    assert run("--count", "5000", "threshold", "--family", "III_3") == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["found"] and data["threshold"] == pytest.approx(0.89, abs=0.02)


def test_figure(tmp_path, capsys):
    assert run("--count", "200", "figure", "F6b", "--points", "20", "--out", str(tmp_path)) == EXIT_OK
    with open(tmp_path / "scatter.csv", newline="") as fh:
        assert next(csv.reader(fh))[:4] == ["series", "family", "x", "y"]


def test_table1(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert run("--count", "20000", "table1", "--out", str(out)) == EXIT_OK
    data = json.loads(out.read_text())
    assert data["mismatches"] == []
    assert data["matrix"]["lambda_ijk"]["III_0"] is False


def test_verify_pass_and_corrupted_tolerance(tmp_path, capsys):
    assert run("verify", "--only", "1,2", "--out", str(tmp_path / "ok")) == EXIT_OK
    report = json.loads((tmp_path / "ok" / "report.json").read_text())
    assert report["passed"] and len(report["criteria"]) == 2
    code = run("verify", "--only", "1", "--tolerance-override", "1=-1", "--out", str(tmp_path / "bad"))
    assert code == EXIT_VERIFY
    assert "[FAIL]" in (tmp_path / "bad" / "report.txt").read_text()
    assert run("verify", "--only", "14") == EXIT_USAGE


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "trisqueeze.cli", "--version"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and "trisqueeze" in proc.stdout
