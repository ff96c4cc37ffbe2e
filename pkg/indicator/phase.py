"""The indicator delta(P, theta) = Re(a_d e^{i d theta}) and its lemma checks.

delta is taken from the leading term of P only; on every ray where it is
nonzero, ln|v e^P| behaves like delta * r**d for v of smaller order.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from config.constants import (
    DEFAULT_ANGULAR_SAMPLES,
    DEFAULT_ORDER_POINTS,
    DEFAULT_ORDER_RMAX,
    DEFAULT_ORDER_RMIN,
    ERROR_BAD_POLY,
    ERROR_FACTORIZATION_ORDER,
    ERROR_LEMMA_CONFIG,
    ERROR_ZERO_RAY,
    ZERO_RAY_BAND,
)
from core.errors import ConfigError, PreconditionError, ZeroRayError
from core.expr import ZERO_EXPR, Const, Expr, Z, add, exp, mul, power
from core.ext_complex import ExtComplex
from growth.estimators import OrderEstimate, order_estimate

logger = logging.getLogger("growth_lab.indicator")


@dataclass(frozen=True)
class PolyP:
    """Polynomial a_0 + a_1 z + ... + a_d z^d with d >= 1 and a_d != 0."""

    coefficients: tuple[complex, ...]

    def __post_init__(self) -> None:
        coefficients = [complex(c) for c in self.coefficients]
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        if len(coefficients) < 2:
            raise PreconditionError(ERROR_BAD_POLY)
        object.__setattr__(self, "coefficients", tuple(coefficients))

    @classmethod
    def from_coefficients(cls, values: Iterable[complex | float | dict]) -> PolyP:
        parsed = []
        for value in values:
            if isinstance(value, dict):
                parsed.append(complex(float(value.get("re", 0.0)), float(value.get("im", 0.0))))
            else:
                parsed.append(complex(value))
        return cls(tuple(parsed))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> complex:
        return self.coefficients[-1]

    def to_expr(self) -> Expr:
        result: Expr = ZERO_EXPR
        for k, a in enumerate(self.coefficients):
            if a != 0:
                result = add(result, mul(Const(a), power(Z, k)))
        return result

    def to_dict(self) -> list[dict]:
        return [{"re": c.real, "im": c.imag} for c in self.coefficients]


def delta(poly: PolyP, theta: float) -> float:
    return (poly.leading * cmath.exp(1j * poly.degree * theta)).real


def sign_at(poly: PolyP, theta: float) -> int:
    value = delta(poly, theta)
    if abs(value) < ZERO_RAY_BAND:
        return 0
    return 1 if value > 0 else -1


@dataclass(frozen=True)
class SignArc:
    start: float
    end: float
    sign: int

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.start + self.end)

    def contains(self, theta: float) -> bool:
        offset = (theta - self.start) % (2.0 * math.pi)
        return 0.0 < offset < self.end - self.start

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "sign": self.sign}


def sign_rays(poly: PolyP) -> list[SignArc]:
    """The 2d open arcs of constant sign of delta, each of width pi/d.

    Arc starts increase through [0, 2pi), the first one on the smallest zero
    ray. The last arc wraps: its end lies in [2pi, 2pi + pi/d).
    """
    d = poly.degree
    width = math.pi / d
    first = ((math.pi / 2 - cmath.phase(poly.leading)) / d) % width
    if first >= width:
        first = 0.0
    arcs = []
    for k in range(2 * d):
        start = first + k * width
        arc_sign = 1 if delta(poly, start + 0.5 * width) > 0 else -1
        arcs.append(SignArc(start, start + width, arc_sign))
    return arcs


def zero_rays(poly: PolyP) -> list[float]:
    return [arc.start for arc in sign_rays(poly)]


@dataclass(frozen=True)
class ExpPolyFactorization:
    """A(z) = v(z) e^{P(z)} with order(v) < deg P."""

    v: Expr
    poly: PolyP
    v_order: OrderEstimate | None = None

    @classmethod
    def build(
        cls,
        v: Expr,
        poly: PolyP,
        r_grid: Sequence[float] | None = None,
        angular_samples: int = DEFAULT_ANGULAR_SAMPLES,
    ) -> ExpPolyFactorization:
        grid = r_grid or _default_order_grid()
        estimate = order_estimate(v, grid, angular_samples)
        if not estimate.is_finite or (estimate.value or 0.0) >= poly.degree:
            shown = estimate.value if estimate.is_finite else "exceeds-threshold"
            raise ConfigError(ERROR_FACTORIZATION_ORDER.format(order=shown, degree=poly.degree))
        return cls(v, poly, estimate)

    def to_expr(self) -> Expr:
        return mul(self.v, exp(self.poly.to_expr()))

    def to_dict(self) -> dict:
        return {"v": str(self.v), "P": self.poly.to_dict()}


def _default_order_grid() -> list[float]:
    return [float(r) for r in np.geomspace(DEFAULT_ORDER_RMIN, DEFAULT_ORDER_RMAX, DEFAULT_ORDER_POINTS)]


@dataclass(frozen=True)
class Lemma2Failure:
    r: float
    ln_abs_a: float | None
    lower: float
    upper: float

    def to_dict(self) -> dict:
        return {"r": self.r, "ln_abs_A": self.ln_abs_a, "lower": self.lower, "upper": self.upper}


@dataclass
class Lemma2Report:
    theta: float
    epsilon: float
    delta: float
    pass_radius: float | None
    failures: list[Lemma2Failure] = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return self.pass_radius is not None

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "pass_radius": self.pass_radius,
            "failures": [failure.to_dict() for failure in self.failures],
        }


def lemma2_check(
    factorization: ExpPolyFactorization, theta: float, epsilon: float, r_grid: Sequence[float]
) -> Lemma2Report:
    """Check exp((1-eps) delta r^n) <= |A| <= exp((1+eps) delta r^n) along one ray (bounds swap when delta < 0).

    The comparison is made between ln|A| and the exponents, never between magnitudes.
    """
    value = delta(factorization.poly, theta)
    if abs(value) < ZERO_RAY_BAND:
        raise ZeroRayError(ERROR_ZERO_RAY.format(theta=theta))
    if not 0.0 < epsilon < 1.0:
        raise ConfigError(ERROR_LEMMA_CONFIG.format(details=f"epsilon must lie in (0, 1), got {epsilon}"))
    a_expr = factorization.to_expr()
    n = factorization.poly.degree
    failures: list[Lemma2Failure] = []
    last_failure_index = -1
    for index, r in enumerate(r_grid):
        scale = value * r**n
        lower, upper = sorted(((1.0 - epsilon) * scale, (1.0 + epsilon) * scale))
        a_value = a_expr.evaluate(ExtComplex.from_polar(r, theta))
        ln_abs = None if a_value.is_zero else a_value.ln_abs()
        if ln_abs is None or not lower <= ln_abs <= upper:
            failures.append(Lemma2Failure(float(r), ln_abs, lower, upper))
            last_failure_index = index
    radii = list(r_grid)
    pass_radius = radii[last_failure_index + 1] if last_failure_index + 1 < len(radii) else None
    logger.debug("lemma2 theta=%g eps=%g: %d failures, pass radius %s", theta, epsilon, len(failures), pass_radius)
    return Lemma2Report(theta, epsilon, value, pass_radius, failures, len(radii))


def default_directions(poly: PolyP, per_arc: int = 3) -> list[float]:
    """Interior directions spread evenly over every sign arc."""
    directions = []
    for arc in sign_rays(poly):
        for k in range(1, per_arc + 1):
            directions.append((arc.start + (arc.end - arc.start) * k / (per_arc + 1)) % (2.0 * math.pi))
    return directions


def lemma2_sweep(
    factorization: ExpPolyFactorization,
    thetas: Sequence[float],
    epsilons: Sequence[float],
    r_grid: Sequence[float],
) -> list[Lemma2Report]:
    reports = []
    for theta in thetas:
        if sign_at(factorization.poly, theta) == 0:
            logger.info("Skipping theta=%g on a zero ray", theta)
            continue
        for epsilon in epsilons:
            reports.append(lemma2_check(factorization, theta, epsilon, r_grid))
    return reports
