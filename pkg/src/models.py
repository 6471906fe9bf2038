"""Pydantic data contracts for verification results.

A check never raises on a mathematical failure: it returns an `AxiomReport`
whose verdict is `fails` and whose `discrepancy` names the first coefficient
that disagreed. `to_records()` gives the line-oriented `key=value` form the
CLI prints and the golden files pin.
"""

from __future__ import annotations

from enum import StrEnum

from pydantic import BaseModel, Field, model_validator


class Verdict(StrEnum):
    HOLDS = "holds"
    FAILS = "fails"


class Discrepancy(BaseModel):
    """The first coefficient where the two sides of an identity differ."""

    monomial: str
    degree: int = Field(ge=0)
    exponent: str = ""
    expected: str
    actual: str


class AxiomReport(BaseModel):
    axiom: str
    states: list[str] = Field(default_factory=list)
    cutoff: int
    region: str | None = None
    verdict: Verdict = Verdict.HOLDS
    discrepancy: Discrepancy | None = None

    @model_validator(mode="after")
    def _discrepancy_matches_verdict(self) -> AxiomReport:
        if self.verdict is Verdict.FAILS and self.discrepancy is None:
            raise ValueError("a failing report must carry a discrepancy")
        if self.verdict is Verdict.HOLDS and self.discrepancy is not None:
            raise ValueError("a passing report cannot carry a discrepancy")
        return self

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    def to_records(self) -> list[tuple[str, str]]:
        records = [
            ("axiom", self.axiom),
            ("states", "; ".join(self.states)),
            ("cutoff", str(self.cutoff)),
        ]
        if self.region:
            records.append(("region", self.region))
        records.append(("verdict", self.verdict.value))
        if self.discrepancy is not None:
            d = self.discrepancy
            records.append(("discrepancy.monomial", d.monomial))
            records.append(("discrepancy.degree", str(d.degree)))
            if d.exponent:
                records.append(("discrepancy.exponent", d.exponent))
            records.append(("discrepancy.expected", d.expected))
            records.append(("discrepancy.actual", d.actual))
        return records

    def render(self) -> str:
        return "\n".join(f"{k}={v}" for k, v in self.to_records())


class SuiteSummary(BaseModel):
    """All reports of one `verify` run, in task order."""

    suite: str
    reports: list[AxiomReport] = Field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.reports)

    @property
    def failed(self) -> list[AxiomReport]:
        return [r for r in self.reports if not r.holds]

    def add(self, report: AxiomReport) -> None:
        self.reports.append(report)

    def to_records(self) -> list[tuple[str, str]]:
        return [
            ("suite", self.suite),
            ("checks", str(len(self.reports))),
            ("failed", str(len(self.failed))),
            ("verdict", (Verdict.HOLDS if self.all_hold else Verdict.FAILS).value),
        ]

    def render(self) -> str:
        blocks = [r.render() for r in self.reports]
        blocks.append("\n".join(f"{k}={v}" for k, v in self.to_records()))
        return "\n\n".join(blocks)
