"""Which theorem hypotheses an ODE instance satisfies, judged from estimated orders.

Conclusions about infinite order or exact hyper-order cannot be decided from
finitely many radii. Reports therefore carry surrogate conclusions only: a
finite-order candidate must violate some hypothesis, and rho_2 of a candidate
must stay below max(rho(A), rho(B)) + tolerance.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from config.constants import (
    DEFAULT_ANGULAR_SAMPLES,
    DEFAULT_ORDER_POINTS,
    DEFAULT_ORDER_RMAX,
    DEFAULT_ORDER_RMIN,
    DEFAULT_ZERO_POINTS,
    DEFAULT_ZERO_RMAX,
    DEFAULT_ZERO_RMIN,
    ENVELOPE_BAND,
    ERROR_INFINITE_CANDIDATE,
    ERROR_NO_CANDIDATE,
    ERROR_RESIDUAL_PRECONDITION,
    ORDER_THRESHOLD,
    ORDER_TOLERANCE,
    RESIDUAL_TOLERANCE,
)
from core.errors import PreconditionError
from core.expr import Expr
from growth.estimators import (
    ORDER,
    OrderEstimate,
    convergence_exponent,
    hyper_order_from_samples,
    order_from_samples,
    polynomial_growth,
    sample_log_max_modulus,
    validate_grid,
)
from odelab.instance import OdeInstance
from odelab.residual import residual

SURROGATE_CAVEAT = (
    "Infinite order and exact hyper-order are not decidable on a finite radius range; "
    "conclusions are reported in surrogate form."
)
PRECONDITION_RADII = (1.0, 2.0, 5.0)

THM1A = "Thm1a"
THM2 = "Thm2"
THM3 = "Thm3"
PROP_ORDBIG = "Prop-ordbig"
NONE_MATCHED = "none"

CONSISTENT = "consistent"
HYPOTHESIS_VIOLATED = "hypothesis-violated"
COUNTEREXAMPLE = "counterexample-flag"


def default_order_grid() -> list[float]:
    return [float(r) for r in np.geomspace(DEFAULT_ORDER_RMIN, DEFAULT_ORDER_RMAX, DEFAULT_ORDER_POINTS)]


def default_zero_grid() -> list[float]:
    return [float(r) for r in np.geomspace(DEFAULT_ZERO_RMIN, DEFAULT_ZERO_RMAX, DEFAULT_ZERO_POINTS)]


@dataclass(frozen=True)
class StatementCheck:
    name: str
    hypotheses: dict[str, bool]
    conclusion_surrogate: bool | None
    description: str

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypotheses.values())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "hypotheses": dict(self.hypotheses),
            "hypotheses_hold": self.hypotheses_hold,
            "conclusion_surrogate": self.conclusion_surrogate,
            "description": self.description,
        }


@dataclass
class HypothesisReport:
    label: str
    orders: dict[str, OrderEstimate]
    hyper_order_f: OrderEstimate | None
    convergence_f: OrderEstimate | None
    orders_distinct: bool
    h_subordinate: bool
    factorization_given: bool
    b_transcendental: bool
    statements: list[StatementCheck] = field(default_factory=list)
    hyper_order_bound: bool | None = None
    tolerance: float = ORDER_TOLERANCE
    caveat: str = SURROGATE_CAVEAT

    @property
    def matched_statements(self) -> list[str]:
        matched = [statement.name for statement in self.statements if statement.hypotheses_hold]
        return matched or [NONE_MATCHED]

    def order_value(self, role: str) -> float:
        return _numeric(self.orders.get(role))

    @property
    def max_ab(self) -> float:
        return max(self.order_value("A"), self.order_value("B"))

    def failed_hypotheses(self) -> list[str]:
        """Tags of the Prop-ordbig hypotheses that fail: ``orders`` and/or ``H``."""
        tags = []
        if not self.orders_distinct:
            tags.append("orders")
        if not self.h_subordinate:
            tags.append("H")
        return tags

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "orders": {role: estimate.to_dict() for role, estimate in sorted(self.orders.items())},
            "hyper_order_f": self.hyper_order_f.to_dict() if self.hyper_order_f else None,
            "convergence_f": self.convergence_f.to_dict() if self.convergence_f else None,
            "flags": {
                "orders_distinct": self.orders_distinct,
                "H_subordinate": self.h_subordinate,
                "factorization_given": self.factorization_given,
                "B_transcendental": self.b_transcendental,
            },
            "statements": [statement.to_dict() for statement in self.statements],
            "matched_statements": self.matched_statements,
            "hyper_order_bound": self.hyper_order_bound,
            "tolerance": self.tolerance,
            "caveat": self.caveat,
        }


def _numeric(estimate: OrderEstimate | None) -> float:
    if estimate is None:
        return math.nan
    if not estimate.is_finite:
        return math.inf
    return float(estimate.value or 0.0)


@dataclass(frozen=True)
class PropOrdbigVerdict:
    label: str
    verdict: str
    violated: tuple[str, ...]
    rho_f: float
    max_ab: float
    residuals: tuple[float, ...]

    @property
    def tag(self) -> str:
        if self.verdict == HYPOTHESIS_VIOLATED:
            return f"{self.verdict}({'+'.join(self.violated)})"
        return self.verdict

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "verdict": self.tag,
            "violated": list(self.violated),
            "rho_f": self.rho_f,
            "max_AB": self.max_ab,
            "residuals": list(self.residuals),
        }


class HypothesisClassifier:
    """Estimates the orders of an instance and matches them against the theorem statements."""

    def __init__(
        self,
        r_grid: Sequence[float] | None = None,
        zero_grid: Sequence[float] | None = None,
        angular_samples: int = DEFAULT_ANGULAR_SAMPLES,
        tolerance: float = ORDER_TOLERANCE,
        band: float = ENVELOPE_BAND,
        threshold: float = ORDER_THRESHOLD,
        logger: logging.Logger | None = None,
    ):
        self._r_grid = validate_grid(r_grid or default_order_grid())
        self._zero_grid = list(zero_grid or default_zero_grid())
        self._angular_samples = angular_samples
        self._tolerance = tolerance
        self._band = band
        self._threshold = threshold
        self._logger = logger or logging.getLogger("growth_lab.ode")

    def _zero_order(self) -> OrderEstimate:
        return OrderEstimate(ORDER, 0.0, (self._r_grid[0], self._r_grid[-1]), 0.0, len(self._r_grid))

    def classify(self, inst: OdeInstance) -> HypothesisReport:
        tol = self._tolerance
        orders: dict[str, OrderEstimate] = {}
        samples_by_role = {}
        roles: list[tuple[str, Expr | None]] = [("A", inst.A), ("B", inst.B), ("H", inst.H), ("f", inst.f)]
        for role, expr in roles:
            if expr is None:
                continue
            if role == "H" and inst.homogeneous:
                orders[role] = self._zero_order()
                continue
            samples = sample_log_max_modulus(expr, self._r_grid, self._angular_samples)
            samples_by_role[role] = samples
            orders[role] = order_from_samples(samples, self._band, self._threshold)
            self._logger.info("%s: rho(%s) = %s", inst.label, role, orders[role].to_dict()["value"])

        hyper_f = convergence_f = None
        if inst.f is not None:
            hyper_f = hyper_order_from_samples(samples_by_role["f"], self._band)
            convergence_f = convergence_exponent(inst.f, self._zero_grid, self._band)

        rho_a, rho_b = _numeric(orders["A"]), _numeric(orders["B"])
        rho_h = _numeric(orders["H"])
        max_ab = max(rho_a, rho_b)
        orders_distinct = abs(rho_a - rho_b) > tol if math.isfinite(max_ab) else rho_a != rho_b
        h_subordinate = rho_h < max_ab - tol
        b_polynomial, _, _ = polynomial_growth(samples_by_role["B"].radii, samples_by_role["B"].log_m)
        b_transcendental = not b_polynomial
        factorization_given = inst.factorization_A is not None
        a_finite = orders["A"].is_finite
        b_finite = orders["B"].is_finite

        rho_f = _numeric(orders.get("f"))
        rho2_f = _numeric(hyper_f)
        has_candidate = inst.f is not None
        finite_candidate = has_candidate and math.isfinite(rho_f)
        statements = [
            StatementCheck(
                THM1A,
                {
                    "homogeneous": inst.homogeneous,
                    "lambda_A_lt_rho_A": factorization_given,
                    "B_transcendental": b_transcendental,
                    "B_finite_order": b_finite,
                    "orders_distinct": orders_distinct,
                },
                abs(rho2_f - max_ab) <= tol if has_candidate else None,
                "nontrivial solutions of the homogeneous equation have rho_2(f) = max(rho(A), rho(B))",
            ),
            StatementCheck(
                THM2,
                {
                    "lambda_A_lt_rho_A": factorization_given,
                    "B_transcendental": b_transcendental,
                    "orders_distinct": orders_distinct,
                    "H_subordinate": h_subordinate,
                },
                None,
                "all solutions have infinite order; a finite-order candidate must violate a hypothesis",
            ),
            StatementCheck(
                THM3,
                {
                    "lambda_A_lt_rho_A": factorization_given,
                    "B_transcendental": b_transcendental,
                    "orders_distinct": orders_distinct,
                    "H_subordinate": h_subordinate,
                    "A_finite_order": a_finite,
                    "B_finite_order": b_finite,
                },
                None,
                "solutions have rho_2(f) = max(rho(A), rho(B)); a finite-order candidate must violate a hypothesis",
            ),
            StatementCheck(
                PROP_ORDBIG,
                {"orders_distinct": orders_distinct, "H_subordinate": h_subordinate},
                (rho_f >= max_ab - tol) if finite_candidate else None,
                "finite-order solutions satisfy rho(f) >= max(rho(A), rho(B))",
            ),
        ]
        if finite_candidate:
            statements[1] = _with_conclusion(statements[1], not statements[1].hypotheses_hold)
            statements[2] = _with_conclusion(statements[2], not statements[2].hypotheses_hold)

        hyper_bound = None
        if has_candidate:
            hyper_bound = rho2_f <= max_ab + tol
            if not hyper_bound:
                self._logger.warning("%s: rho_2(f)=%s exceeds max(rho(A), rho(B)) + %s", inst.label, rho2_f, tol)

        report = HypothesisReport(
            label=inst.label,
            orders=orders,
            hyper_order_f=hyper_f,
            convergence_f=convergence_f,
            orders_distinct=orders_distinct,
            h_subordinate=h_subordinate,
            factorization_given=factorization_given,
            b_transcendental=b_transcendental,
            statements=statements,
            hyper_order_bound=hyper_bound,
            tolerance=tol,
        )
        self._logger.info("%s: matched %s", inst.label, report.matched_statements)
        return report

    def prop_ordbig_check(
        self,
        inst: OdeInstance,
        report: HypothesisReport | None = None,
        residual_tolerance: float = RESIDUAL_TOLERANCE,
    ) -> PropOrdbigVerdict:
        if inst.f is None:
            raise PreconditionError(ERROR_NO_CANDIDATE.format(label=inst.label))
        residuals = []
        for r in PRECONDITION_RADII:
            value = residual(inst, inst.f, r).max_rel
            if value > residual_tolerance:
                raise PreconditionError(
                    ERROR_RESIDUAL_PRECONDITION.format(value=value, tolerance=residual_tolerance, radius=r)
                )
            residuals.append(value)
        report = report or self.classify(inst)
        rho_f = report.order_value("f")
        if not math.isfinite(rho_f):
            raise PreconditionError(ERROR_INFINITE_CANDIDATE.format(label=inst.label))
        violated = tuple(report.failed_hypotheses())
        if violated:
            verdict = HYPOTHESIS_VIOLATED
        elif rho_f < report.max_ab - report.tolerance:
            verdict = COUNTEREXAMPLE
            self._logger.error("%s: finite-order candidate contradicts the order bound", inst.label)
        else:
            verdict = CONSISTENT
        return PropOrdbigVerdict(inst.label, verdict, violated, rho_f, report.max_ab, tuple(residuals))


def _with_conclusion(statement: StatementCheck, conclusion: bool) -> StatementCheck:
    return StatementCheck(statement.name, statement.hypotheses, conclusion, statement.description)


def classify(inst: OdeInstance, r_grid: Sequence[float] | None = None) -> HypothesisReport:
    return HypothesisClassifier(r_grid).classify(inst)


def prop_ordbig_check(inst: OdeInstance, r_grid: Sequence[float] | None = None) -> PropOrdbigVerdict:
    return HypothesisClassifier(r_grid).prop_ordbig_check(inst)
