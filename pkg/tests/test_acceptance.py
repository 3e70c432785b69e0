"""One test per acceptance criterion; each prints its pass/fail line with measured values."""

import json

import pytest

from trisqueeze.acceptance import CRITERIA, run_acceptance, run_criterion
from trisqueeze.states import SamplerConfig

CFG = SamplerConfig()


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA], ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, capsys):
    result = run_criterion(number, CFG)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()


def test_report_lists_every_criterion(tmp_path):
    report = run_acceptance(CFG, only=[1, 2])
    paths = report.write(tmp_path)
    data = json.loads(open(paths[0]).read())
    assert [c["criterion"] for c in data["criteria"]] == [1, 2]
    assert len(CRITERIA) >= 13
    for c in data["criteria"][0]["checks"]:
        assert {"measured", "expected", "tolerance", "passed"} <= set(c)


def test_corrupted_tolerance_fails():
    report = run_acceptance(CFG, overrides={1: -1.0}, only=[1])
    assert not report.passed
    assert report.results[0].checks[0].tolerance == -1.0


def test_report_json_with_numpy_measurements(tmp_path):
    report = run_acceptance(CFG, only=[4])
    data = json.loads(open(report.write(tmp_path)[0]).read())
    assert isinstance(data["criteria"][0]["passed"], bool)
    assert all(isinstance(c["passed"], bool) for c in data["criteria"][0]["checks"])
