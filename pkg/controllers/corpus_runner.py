from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from config.constants import DEFAULT_RESIDUAL_RADII, ERROR_NO_CANDIDATE, ORDER_TOLERANCE, RESIDUAL_TOLERANCE
from controllers.task_queue import TaskQueue
from core.errors import GrowthLabError, PreconditionError
from corpus.entries import ROLES, CorpusEntry, load_corpus
from odelab.classify import HypothesisClassifier
from odelab.residual import residual_sweep

SUMMARY_HEADER = (
    "label",
    "residual_max",
    "residual_pass",
    "orders_pass",
    "expected_fails",
    "observed_fails",
    "classification_pass",
    "verdict",
    "hyper_order_bound",
    "passed",
)


@dataclass
class EntryResult:
    label: str
    residual_max: float | None = None
    residual_pass: bool = False
    orders: dict[str, float | str | None] = field(default_factory=dict)
    order_diffs: dict[str, float] = field(default_factory=dict)
    orders_pass: bool = False
    expected_fails: str = ""
    observed_fails: str = ""
    classification_pass: bool = False
    verdict: str = ""
    hyper_order_bound: bool | None = None
    matched_statements: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return (
            self.error is None
            and self.residual_pass
            and self.orders_pass
            and self.classification_pass
            and bool(self.hyper_order_bound)
        )

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "residual_max": self.residual_max,
            "residual_pass": self.residual_pass,
            "orders": dict(self.orders),
            "order_diffs": dict(self.order_diffs),
            "orders_pass": self.orders_pass,
            "expected_fails": self.expected_fails,
            "observed_fails": self.observed_fails,
            "classification_pass": self.classification_pass,
            "verdict": self.verdict,
            "hyper_order_bound": self.hyper_order_bound,
            "matched_statements": list(self.matched_statements),
            "error": self.error,
            "passed": self.passed,
        }

    def csv_row(self) -> list:
        return [
            self.label,
            self.residual_max,
            self.residual_pass,
            self.orders_pass,
            self.expected_fails,
            self.observed_fails,
            self.classification_pass,
            self.verdict,
            self.hyper_order_bound,
            self.passed,
        ]


@dataclass
class CorpusSummary:
    tolerance: float
    rows: list[EntryResult]

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def pass_count(self) -> int:
        return sum(row.passed for row in self.rows)

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "passed": self.passed,
            "pass_count": self.pass_count,
            "total": len(self.rows),
            "entries": [row.to_dict() for row in self.rows],
        }

    def csv_rows(self) -> list[list]:
        return [row.csv_row() for row in self.rows]


@dataclass(frozen=True)
class _EntryTask:
    raw: dict
    tolerance: float
    residual_radii: tuple[float, ...]
    r_grid: tuple[float, ...] | None


def _estimate_value(estimate) -> float | str | None:
    if estimate is None:
        return None
    return estimate.to_dict()["value"]


def evaluate_entry(task: _EntryTask) -> EntryResult:
    """Residual check, classification and order-bound verdict for one corpus entry."""
    result = EntryResult(label=str(task.raw.get("label", "?")))
    try:
        entry = CorpusEntry.from_dict(task.raw)
        inst = entry.instance
        result.expected_fails = entry.fails
        if inst.f is None:
            raise PreconditionError(ERROR_NO_CANDIDATE.format(label=inst.label))
        rows = residual_sweep(inst, inst.f, task.residual_radii)
        result.residual_max = max(row.max_rel for row in rows)
        result.residual_pass = result.residual_max <= task.tolerance

        classifier = HypothesisClassifier(list(task.r_grid) if task.r_grid else None)
        report = classifier.classify(inst)
        result.matched_statements = report.matched_statements
        result.hyper_order_bound = report.hyper_order_bound
        for role in ROLES:
            observed = report.order_value(role)
            result.orders[role] = _estimate_value(report.orders.get(role))
            expected = entry.expected_orders[role]
            result.order_diffs[role] = abs(observed - expected) if math.isfinite(observed) else math.inf
        result.orders_pass = all(diff <= ORDER_TOLERANCE for diff in result.order_diffs.values())
        result.observed_fails = "+".join(report.failed_hypotheses()) or "none"
        result.classification_pass = result.observed_fails == entry.fails

        verdict = classifier.prop_ordbig_check(inst, report, residual_tolerance=max(task.tolerance, RESIDUAL_TOLERANCE))
        result.verdict = verdict.tag
    except GrowthLabError as exc:
        result.error = str(exc)
    return result


class CorpusRunner:
    """Runs every corpus entry through the residual, classification and order-bound checks."""

    def __init__(self, jobs: int = 1, logger: logging.Logger | None = None):
        self._queue = TaskQueue(jobs)
        self._logger = logger or logging.getLogger("growth_lab.corpus")

    def run(
        self,
        tolerance: float = RESIDUAL_TOLERANCE,
        path: Path | None = None,
        entries: Sequence[CorpusEntry] | None = None,
        residual_radii: Sequence[float] = DEFAULT_RESIDUAL_RADII,
        r_grid: Sequence[float] | None = None,
    ) -> CorpusSummary:
        corpus = list(entries) if entries is not None else load_corpus(path)
        tasks = [
            _EntryTask(entry.raw, tolerance, tuple(residual_radii), tuple(r_grid) if r_grid else None)
            for entry in corpus
        ]
        rows = self._queue.map(evaluate_entry, tasks)
        for row in rows:
            if row.error:
                self._logger.error("%s: %s", row.label, row.error)
            elif not row.passed:
                self._logger.warning("%s: check failed (%s)", row.label, row.to_dict())
            else:
                self._logger.info("%s: passed, verdict %s", row.label, row.verdict)
        summary = CorpusSummary(tolerance, rows)
        self._logger.info("Corpus: %d/%d entries passed", summary.pass_count, len(rows))
        return summary


def run_corpus(
    tolerance: float = RESIDUAL_TOLERANCE, jobs: int = 1, path: Path | None = None, **kwargs
) -> CorpusSummary:
    return CorpusRunner(jobs).run(tolerance, path, **kwargs)
