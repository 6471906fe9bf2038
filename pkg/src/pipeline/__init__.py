"""Verification suites fanned out over a worker pool."""

from src.pipeline.suite import SUITES, CheckTask, UnknownSuiteError, build_tasks, run_suite, sample_states

__all__ = ["SUITES", "CheckTask", "UnknownSuiteError", "build_tasks", "run_suite", "sample_states"]
