"""Residual of a candidate solution on circles, in extended-range arithmetic."""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

from config.constants import ERROR_CIRCLE_EVALUATION, ERROR_FEW_SAMPLES, MIN_RESIDUAL_SAMPLES, RESIDUAL_ANGULAR_SAMPLES
from core.errors import EvaluationError, PreconditionError
from core.expr import Expr
from core.ext_complex import ExtComplex
from growth.functionals import check_radius, derivative_of
from odelab.instance import OdeInstance


class ResidualResult(NamedTuple):
    max_rel: float
    theta: float


class ResidualRow(NamedTuple):
    r: float
    theta: float
    max_rel: float


def _log2_one_plus(power: float) -> float:
    """log2(1 + 2**power) without overflow."""
    if power > 60:
        return power
    return math.log2(1.0 + 2.0**power)


def _log2_abs(value: ExtComplex) -> float:
    return -math.inf if value.is_zero else value.log2_abs()


def relative_residual_at(inst: OdeInstance, f: Expr, z: ExtComplex) -> float:
    """|f'' + A f' + B f - H| / (1 + max(|f''|, |A f'|, |B f|, |H|)) at one point."""
    df = derivative_of(f)
    d2f = derivative_of(df)
    second = d2f.evaluate(z)
    damping = inst.A.evaluate(z) * df.evaluate(z)
    restoring = inst.B.evaluate(z) * f.evaluate(z)
    forcing = inst.H.evaluate(z)
    total = second + damping + restoring - forcing
    if total.is_zero:
        return 0.0
    scale = max(_log2_abs(term) for term in (second, damping, restoring, forcing))
    return 2.0 ** (total.log2_abs() - _log2_one_plus(scale))


def residual(
    inst: OdeInstance, f: Expr, r: float, angular_samples: int = RESIDUAL_ANGULAR_SAMPLES
) -> ResidualResult:
    """Largest normalised residual over equispaced points of |z| = r."""
    check_radius(r)
    if angular_samples < MIN_RESIDUAL_SAMPLES:
        raise PreconditionError(ERROR_FEW_SAMPLES.format(minimum=MIN_RESIDUAL_SAMPLES, count=angular_samples))
    worst, worst_theta = -1.0, 0.0
    for k in range(angular_samples):
        theta = 2.0 * math.pi * k / angular_samples
        try:
            value = relative_residual_at(inst, f, ExtComplex.from_polar(r, theta))
        except EvaluationError as exc:
            raise EvaluationError(ERROR_CIRCLE_EVALUATION.format(radius=r, theta=theta, details=exc)) from exc
        if value > worst:
            worst, worst_theta = value, theta
    return ResidualResult(worst, worst_theta)


def residual_sweep(
    inst: OdeInstance, f: Expr, radii: Sequence[float], angular_samples: int = RESIDUAL_ANGULAR_SAMPLES
) -> list[ResidualRow]:
    rows = []
    for r in radii:
        result = residual(inst, f, r, angular_samples)
        rows.append(ResidualRow(float(r), result.theta, result.max_rel))
    return rows
