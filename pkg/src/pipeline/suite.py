"""Verification suites: one task per (axiom, states) tuple, fanned out over a pool.

Reports are merged back in task order, so a suite's output does not depend
on which worker finished first. Progress goes to stderr; stdout only ever
carries the rendered summary.
"""

from __future__ import annotations

import random
import sys
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from functools import partial
from itertools import product

from src.axioms.checks import (
    check_associativity,
    check_bilinear_invariance,
    check_commutativity,
    check_commutator_relation,
    check_identity,
    check_skew,
    check_translation_covariance,
)
from src.config import RunSettings
from src.fieldring.monomials import FieldElement, basis_elements, random_field_element
from src.freefield.algebra import FreeFieldAlgebra
from src.models import AxiomReport, SuiteSummary
from src.modes.residues import check_double_integral, check_integration_by_parts, check_order1
from src.session_logger import SessionLogger
from src.singfun.errors import UnsupportedExpansionError
from src.trees.laws import check_collapse_laws, check_graft_associativity
from src.trees.rooted import enumerate_trees
from src.trees.shapes import shape_coherence

SUITES = (
    "identity",
    "commutativity",
    "associativity",
    "skew",
    "invariance",
    "order1",
    "double-integral",
    "trees",
)
# Suites built on region expansions; these only exist for d = 1.
LINE_ONLY = frozenset({"associativity", "skew", "order1", "double-integral", "trees"})

TREE_STATE_DEGREE = 2
SAMPLE_COUNT = 2
INTEGRATION_BY_PARTS_INDICES = (0, 1, 2)


class UnknownSuiteError(ValueError):
    pass


@dataclass(frozen=True)
class CheckTask:
    label: str
    run: Callable[[], AxiomReport]


def sample_states(dim: int, degree: int, seed: int, count: int = SAMPLE_COUNT) -> list[FieldElement]:
    """The unit plus `count` seeded random states of degree <= degree + 1."""
    rng = random.Random(seed)
    return [FieldElement.one(dim)] + [
        random_field_element(rng, dim, degree + 1) for _ in range(count)
    ]


def build_tasks(suite: str, algebra: FreeFieldAlgebra, run: RunSettings) -> list[CheckTask]:
    if suite not in SUITES:
        raise UnknownSuiteError(f"unknown axiom {suite!r}; choose from {', '.join(SUITES)}")
    if suite in LINE_ONLY and algebra.dim != 1:
        raise UnsupportedExpansionError(
            f"{suite} compares region expansions, which need d = 1 (got d = {algebra.dim})"
        )
    dim, cutoff = algebra.dim, run.cutoff
    basis = basis_elements(dim, run.degree)
    tasks: list[CheckTask] = []

    def add(label: str, fn: Callable[..., AxiomReport], *args) -> None:
        tasks.append(CheckTask(label, partial(fn, algebra, *args, cutoff)))

    if suite == "identity":
        for b in basis:
            add("identity", check_identity, b)
    elif suite == "commutativity":
        for c in basis:
            add("commutator", check_commutator_relation, c)
        for a, b, c in product(basis, repeat=3):
            add("commutativity", check_commutativity, a, b, c)
    elif suite == "associativity":
        for a, b, c in product(basis, repeat=3):
            add("associativity", check_associativity, a, b, c)
    elif suite == "skew":
        for a, b in product(basis, repeat=2):
            add("skew", check_skew, a, b)
    elif suite == "invariance":
        for a, b in product(basis, repeat=2):
            add("bilinear-invariance", check_bilinear_invariance, a, b)
        for v, s in product(basis, repeat=2):
            add("translation-covariance", check_translation_covariance, v, s)
    elif suite == "order1":
        samples = sample_states(dim, run.degree, run.seed)
        for a, b in product(basis, repeat=2):
            add("order1", check_order1, a, b, samples)
        for a, s in product(basis, samples):
            for n in INTEGRATION_BY_PARTS_INDICES:
                add("integration-by-parts", check_integration_by_parts, a, n, s)
    elif suite == "double-integral":
        samples = sample_states(dim, run.degree, run.seed)
        for a, b in product(basis, repeat=2):
            add("double-integral", check_double_integral, a, b, samples)
    else:
        tasks.append(CheckTask("graft-associativity", check_graft_associativity))
        tasks.append(CheckTask("collapse", check_collapse_laws))
        small = basis_elements(dim, min(run.degree, TREE_STATE_DEGREE))
        for p in enumerate_trees(3):
            for a, b, c in product(small, repeat=3):
                tasks.append(
                    CheckTask(f"shape{p}", partial(shape_coherence, algebra, p, a, b, c, cutoff))
                )
    return tasks


def run_suite(
    suite: str,
    algebra: FreeFieldAlgebra,
    run: RunSettings,
    *,
    workers: int,
    logger: SessionLogger | None = None,
) -> SuiteSummary:
    tasks = build_tasks(suite, algebra, run)
    total = len(tasks)
    if logger is not None:
        logger.log_suite_start(suite, total, run.cutoff)
    print(f"[verify] {suite}: {total} checks on {max(1, workers)} workers", file=sys.stderr)

    reports: list[AxiomReport | None] = [None] * total
    step = max(1, total // 10)
    with ThreadPoolExecutor(max_workers=max(1, workers), thread_name_prefix="verify") as exe:
        future_to_index = {exe.submit(task.run): k for k, task in enumerate(tasks)}
        done = 0
        try:
            for fut in as_completed(future_to_index):
                k = future_to_index[fut]
                reports[k] = fut.result()
                done += 1
                if logger is not None:
                    logger.log_verdict(reports[k])  # type: ignore[arg-type]
                if done % step == 0 or done == total:
                    print(f"[verify] {suite} {done}/{total}", file=sys.stderr)
        except Exception as exc:
            exe.shutdown(wait=False, cancel_futures=True)
            if logger is not None:
                logger.log_error(suite, str(exc))
            raise

    summary = SuiteSummary(suite=suite, reports=[r for r in reports if r is not None])
    if logger is not None:
        logger.log_suite_finish(summary)
    failed = len(summary.failed)
    print(f"[verify] {suite}: {total - failed}/{total} hold", file=sys.stderr)
    return summary
