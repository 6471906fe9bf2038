"""Tests for the verification suite runner.

Tasks are plain callables, so ordering is checked by patching the task
builder with reports that finish out of order.
"""

from __future__ import annotations

import time

import pytest

from src.config import RunSettings
from src.models import AxiomReport, Discrepancy, Verdict
from src.pipeline import SUITES, CheckTask, UnknownSuiteError, build_tasks, run_suite, sample_states
from src.singfun import UnsupportedExpansionError

RUN = RunSettings(cutoff=4, degree=1, seed=0)


def _report(name: str, holds: bool = True) -> AxiomReport:
    if holds:
        return AxiomReport(axiom=name, cutoff=4)
    return AxiomReport(
        axiom=name,
        cutoff=4,
        verdict=Verdict.FAILS,
        discrepancy=Discrepancy(monomial="1", degree=0, expected="1", actual="0"),
    )


def _slow(name: str, delay: float, holds: bool = True):
    def run() -> AxiomReport:
        time.sleep(delay)
        return _report(name, holds)

    return run


def test_task_counts_follow_the_basis(line_algebra):
    # degree 1 on the line: {1, phi}
    assert len(build_tasks("identity", line_algebra, RUN)) == 2
    assert len(build_tasks("commutativity", line_algebra, RUN)) == 2 + 8
    assert len(build_tasks("skew", line_algebra, RUN)) == 4
    assert len(build_tasks("invariance", line_algebra, RUN)) == 8
    assert len(build_tasks("trees", line_algebra, RUN)) == 2 + 4 * 8


def test_unknown_suite(line_algebra):
    with pytest.raises(UnknownSuiteError):
        build_tasks("jacobi", line_algebra, RUN)


@pytest.mark.parametrize("suite", ["associativity", "skew", "order1", "double-integral", "trees"])
def test_region_suites_need_a_line(plane_algebra, suite):
    with pytest.raises(UnsupportedExpansionError):
        build_tasks(suite, plane_algebra, RUN)


def test_every_suite_builds_on_the_line(line_algebra):
    for suite in SUITES:
        assert build_tasks(suite, line_algebra, RUN)


def test_sample_states_are_seeded():
    assert sample_states(1, 3, 7) == sample_states(1, 3, 7)
    assert sample_states(1, 3, 7)[0].render() == "1"


def test_reports_merge_in_task_order(mocker, line_algebra, capsys):
    tasks = [
        CheckTask("a", _slow("a", 0.05)),
        CheckTask("b", _slow("b", 0.0, holds=False)),
        CheckTask("c", _slow("c", 0.02)),
    ]
    mocker.patch("src.pipeline.suite.build_tasks", return_value=tasks)
    summary = run_suite("identity", line_algebra, RUN, workers=3)
    assert [r.axiom for r in summary.reports] == ["a", "b", "c"]
    assert [r.axiom for r in summary.failed] == ["b"]
    captured = capsys.readouterr()
    assert "[verify] identity 3/3" in captured.err
    assert captured.out == ""


def test_task_errors_propagate_and_are_logged(mocker, line_algebra):
    def boom() -> AxiomReport:
        raise ValueError("window too small")

    mocker.patch("src.pipeline.suite.build_tasks", return_value=[CheckTask("x", boom)])
    logger = mocker.Mock()
    with pytest.raises(ValueError, match="window too small"):
        run_suite("identity", line_algebra, RUN, workers=1, logger=logger)
    logger.log_error.assert_called_once_with("identity", "window too small")


def test_real_suite_holds(line_algebra):
    summary = run_suite("skew", line_algebra, RUN, workers=2)
    assert summary.all_hold
    assert len(summary.reports) == 4
