"""
Inequality verdicts and sweep summaries.

Every check produces an InequalityReport whose verdict is decided from the
margin and the combined error budget of both sides; sweeps aggregate reports
into a SweepSummary and log the outcome.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional

import structlog

from wbm.config import WBMConstants, settings
from wbm.models.results import EvalResult

logger = structlog.get_logger(__name__)


class Verdict(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


class Relation(str, Enum):
    """How lhs and rhs are compared."""

    GE = "ge"  # lhs >= rhs
    LE = "le"  # lhs <= rhs
    EQ = "eq"  # lhs == rhs (identities)


def error_budget(lhs: EvalResult, rhs: EvalResult, tolerance_scale: float = 1.0, rtol: float = 0.0) -> float:
    """sigma * (lhs_err + rhs_err) * scale plus a relative floor of at least ROUNDING_RTOL."""
    stat = settings.VERDICT_SIGMA * (lhs.abs_error + rhs.abs_error) * tolerance_scale
    return stat + max(rtol, settings.ROUNDING_RTOL) * max(abs(lhs.value), abs(rhs.value), 1.0)


def margin_of(lhs: EvalResult, rhs: EvalResult, relation: Relation) -> float:
    if relation == Relation.LE:
        return rhs.value - lhs.value
    return lhs.value - rhs.value


def decide_verdict(margin: float, budget: float, relation: Relation = Relation.GE) -> Verdict:
    """
    Classify a margin against its error budget.

    For inequalities: holds if margin > budget, violated if margin < -budget,
    inconclusive otherwise. For identities: holds if |margin| <= budget,
    violated otherwise.
    """
    if relation == Relation.EQ:
        return Verdict.HOLDS if abs(margin) <= budget else Verdict.VIOLATED
    if margin > budget:
        return Verdict.HOLDS
    if margin < -budget:
        return Verdict.VIOLATED
    return Verdict.INCONCLUSIVE


@dataclass
class InequalityReport:
    """One checked instance of an inequality or identity."""

    name: str
    lhs: EvalResult
    rhs: EvalResult
    relation: Relation = Relation.GE
    measure: str = ""
    body_ids: List[str] = field(default_factory=list)
    claim_id: str = ""
    tolerance_scale: float = 1.0
    rtol: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return margin_of(self.lhs, self.rhs, self.relation)

    @property
    def budget(self) -> float:
        return error_budget(self.lhs, self.rhs, self.tolerance_scale, self.rtol)

    @property
    def verdict(self) -> Verdict:
        return decide_verdict(self.margin, self.budget, self.relation)

    @property
    def near_equality(self) -> bool:
        """Flag margins within the error budget (possible equality cases)."""
        return abs(self.margin) <= self.budget

    def to_row(self) -> Dict[str, Any]:
        """Versioned CSV row."""
        row = {
            "claim_id": self.claim_id,
            "inequality": self.name,
            "measure": self.measure,
            "body_ids": ";".join(self.body_ids),
            "lhs": self.lhs.value,
            "lhs_err": self.lhs.abs_error,
            "rhs": self.rhs.value,
            "rhs_err": self.rhs.abs_error,
            "margin": self.margin,
            "verdict": self.verdict.value,
        }
        return {k: row[k] for k in WBMConstants.REPORT_COLUMNS}

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.to_row(),
            "relation": self.relation.value,
            "lhs_method": self.lhs.method.value,
            "rhs_method": self.rhs.method.value,
            "near_equality": self.near_equality,
            "details": self.details,
        }

    def with_claim(self, claim_id: str) -> "InequalityReport":
        self.claim_id = claim_id
        return self


@dataclass
class SweepSummary:
    """Aggregated verdict counts for a sweep."""

    name: str
    checks_run: int = 0
    checks_passed: int = 0
    checks_failed: int = 0
    inconclusive: int = 0
    failures: List[InequalityReport] = field(default_factory=list)

    @property
    def is_healthy(self) -> bool:
        return self.checks_failed == 0

    @property
    def inconclusive_fraction(self) -> float:
        return self.inconclusive / self.checks_run if self.checks_run else 0.0

    def add(self, report: InequalityReport) -> None:
        self.checks_run += 1
        verdict = report.verdict
        if verdict == Verdict.HOLDS:
            self.checks_passed += 1
        elif verdict == Verdict.VIOLATED:
            self.checks_failed += 1
            self.failures.append(report)
        else:
            self.inconclusive += 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "checks_run": self.checks_run,
            "checks_passed": self.checks_passed,
            "checks_failed": self.checks_failed,
            "inconclusive": self.inconclusive,
            "is_healthy": self.is_healthy,
        }

    def summary_line(self) -> str:
        return f"holds={self.checks_passed} violated={self.checks_failed} inconclusive={self.inconclusive}"


def summarize(name: str, reports: Iterable[InequalityReport], log: Optional[bool] = True) -> SweepSummary:
    """Aggregate reports and log the outcome."""
    summary = SweepSummary(name=name)
    for report in reports:
        summary.add(report)
    if not log:
        return summary
    if summary.is_healthy:
        logger.info(
            "sweep_passed",
            sweep=name,
            passed=summary.checks_passed,
            run=summary.checks_run,
            inconclusive=summary.inconclusive,
        )
    else:
        logger.warning("sweep_failed", sweep=name, failed=summary.checks_failed, run=summary.checks_run)
        for report in summary.failures:
            logger.warning(
                "violation",
                inequality=report.name,
                bodies=report.body_ids,
                margin=report.margin,
                budget=report.budget,
            )
    return summary
