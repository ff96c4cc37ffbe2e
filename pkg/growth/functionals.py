"""Nevanlinna-type functionals evaluated on circles |z| = r.

Every functional evaluates the expression in extended-range arithmetic and
only leaves it through logarithms, so magnitudes like exp(r**2) at large r are
handled without overflow.
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from config.constants import (
    CONTOUR_SEGMENT_CAP,
    CONTOUR_START_SEGMENTS,
    CONTOUR_UNIFORM_CAP,
    COUNTING_INNER_SHIFT,
    COUNTING_JUMP_REL_TOL,
    COUNTING_MIN_GRID,
    DEFAULT_ANGULAR_SAMPLES,
    ERROR_BAD_RADIUS,
    ERROR_CIRCLE_EVALUATION,
    ERROR_CONTOUR_TOO_CLOSE,
    ERROR_COUNTING_ORIGIN,
    ERROR_FEW_SAMPLES,
    ERROR_POLE_INSIDE,
    GOLDEN_SECTION_TOL,
    INTEGRALITY_TOL,
    MIN_ANGULAR_SAMPLES,
    PROXIMITY_INITIAL_PANELS,
    PROXIMITY_MAX_DEPTH,
    PROXIMITY_REL_TOL,
    RADIUS_PERTURBATION,
)
from core.errors import (
    ContourTooCloseError,
    EvaluationError,
    PreconditionError,
    QuadratureError,
    UnsupportedMeromorphicError,
    ZeroCountError,
)
from core.expr import Expr, diff, pole_denominators
from core.ext_complex import ExtComplex
from growth.quadrature import ROUNDOFF_FACTOR, adaptive_simpson, adaptive_trapezoid, bisect_sign_change

logger = logging.getLogger("growth_lab.growth")

TWO_PI = 2.0 * math.pi
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_CONTOUR_MAX_DEPTH = 40


class MaxModulus(NamedTuple):
    log_m: float
    theta: float


class ZeroCount(NamedTuple):
    count: int
    raw: complex
    radius: float
    segments: int


class _ContourHit(Exception):
    """The integrand met an exact zero of f on the contour."""


@lru_cache(maxsize=512)
def derivative_of(f: Expr) -> Expr:
    return diff(f)


def check_radius(r: float) -> None:
    if not (math.isfinite(r) and r > 0):
        raise PreconditionError(ERROR_BAD_RADIUS.format(radius=r))


def value_on_circle(f: Expr, r: float, theta: float) -> ExtComplex:
    try:
        return f.evaluate(ExtComplex.from_polar(r, theta))
    except EvaluationError as exc:
        # Keep the subclass: callers truncate grids on RangeOverflowError.
        raise type(exc)(ERROR_CIRCLE_EVALUATION.format(radius=r, theta=theta, details=exc)) from exc


def log_abs_on_circle(f: Expr, r: float, theta: float) -> float:
    """ln|f(r e^{i theta})|, or -inf at an exact zero."""
    value = value_on_circle(f, r, theta)
    if value.is_zero:
        return -math.inf
    return value.ln_abs()


def golden_section_max(func: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    c = hi - _INV_GOLDEN * (hi - lo)
    d = lo + _INV_GOLDEN * (hi - lo)
    fc, fd = func(c), func(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_GOLDEN * (hi - lo)
            fc = func(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_GOLDEN * (hi - lo)
            fd = func(d)
    return (c, fc) if fc > fd else (d, fd)


def max_modulus(f: Expr, r: float, angular_samples: int = DEFAULT_ANGULAR_SAMPLES) -> MaxModulus:
    """ln M(r, f) and the angle where it is attained.

    A coarse equispaced scan picks the best sample, then golden-section search
    polishes inside the two neighbouring cells.
    """
    check_radius(r)
    if angular_samples < MIN_ANGULAR_SAMPLES:
        raise PreconditionError(ERROR_FEW_SAMPLES.format(minimum=MIN_ANGULAR_SAMPLES, count=angular_samples))
    step = TWO_PI / angular_samples
    values = [log_abs_on_circle(f, r, k * step) for k in range(angular_samples)]
    best = int(np.argmax(values))
    best_theta, best_value = best * step, values[best]
    if best_value == -math.inf:
        raise EvaluationError(ERROR_CIRCLE_EVALUATION.format(radius=r, theta=0.0, details="f vanishes identically"))
    theta, value = golden_section_max(
        lambda t: log_abs_on_circle(f, r, t), best_theta - step, best_theta + step, GOLDEN_SECTION_TOL
    )
    if value > best_value:
        best_theta, best_value = theta, value
    return MaxModulus(best_value, best_theta % TWO_PI)


def proximity(f: Expr, r: float) -> float:
    """m(r, f) = (1/2pi) * integral of ln+|f(r e^{i theta})| over a full turn."""
    check_radius(r)
    return _proximity(f, r, perturbed=False)


def _proximity(f: Expr, r: float, perturbed: bool) -> float:
    def log_abs(theta: float) -> float:
        return log_abs_on_circle(f, r, theta)

    def positive_part(theta: float) -> float:
        return max(0.0, log_abs(theta))

    panels = PROXIMITY_INITIAL_PANELS
    edges = np.linspace(0.0, TWO_PI, panels + 1)
    values = [log_abs(float(t)) for t in edges[:-1]]
    if not perturbed and any(v == -math.inf for v in values):
        logger.warning("Zero of f on |z|=%s; perturbing the radius by %s relative", r, RADIUS_PERTURBATION)
        return _proximity(f, r * (1.0 + RADIUS_PERTURBATION), perturbed=True)
    values.append(values[0])

    coarse = sum(max(0.0, v) for v in values[:-1]) / panels
    tolerance = PROXIMITY_REL_TOL * max(1.0, coarse) * TWO_PI
    total = 0.0
    for index in range(panels):
        lo, hi = float(edges[index]), float(edges[index + 1])
        cuts = [lo]
        if (values[index] > 0.0) != (values[index + 1] > 0.0):
            cuts.append(bisect_sign_change(log_abs, lo, hi, values[index]))
        cuts.append(hi)
        for a, b in zip(cuts, cuts[1:]):
            total += adaptive_trapezoid(positive_part, a, b, tolerance * (b - a) / TWO_PI, PROXIMITY_MAX_DEPTH)
    return total / TWO_PI


def _log_derivative_integrand(f: Expr, df: Expr, r: float) -> Callable[[float], complex]:
    def integrand(theta: float) -> complex:
        z = ExtComplex.from_polar(r, theta)
        value = f.evaluate(z)
        if value.is_zero:
            raise _ContourHit
        return (z * df.evaluate(z) / value).to_complex()

    return integrand


def _integrality_tol(scale: float) -> float:
    """1e-6, widened to the rounding floor of an average of terms of modulus ``scale``."""
    return max(INTEGRALITY_TOL, ROUNDOFF_FACTOR * scale)


def _is_integral(raw: complex, tolerance: float = INTEGRALITY_TOL) -> bool:
    return abs(raw - round(raw.real)) <= tolerance


def _count_on_circle(f: Expr, df: Expr, r: float) -> tuple[complex, int, bool]:
    """Raw (1/2pi i) contour integral of f'/f, evaluations used and the integrality verdict.

    Uniform doubling runs up to CONTOUR_UNIFORM_CAP segments; a zero close to
    the circle then hands over to adaptive Simpson panels. Both stages share
    one budget of CONTOUR_SEGMENT_CAP integrand evaluations.
    """
    integrand = _log_derivative_integrand(f, df, r)
    segments = CONTOUR_START_SEGMENTS
    samples = [integrand(TWO_PI * k / segments) for k in range(segments)]
    accumulated = sum(samples)
    scale = max(abs(v) for v in samples)
    raw = accumulated / segments
    while segments < CONTOUR_UNIFORM_CAP:
        fresh = [integrand(TWO_PI * (2 * k + 1) / (2 * segments)) for k in range(segments)]
        accumulated += sum(fresh)
        scale = max(scale, max(abs(v) for v in fresh))
        segments *= 2
        previous, raw = raw, accumulated / segments
        tolerance = _integrality_tol(scale)
        if abs(raw - previous) <= 0.1 * tolerance and _is_integral(raw, tolerance):
            return raw, segments, True
    logger.debug("Uniform contour rule stalled at %d segments on |z|=%s; switching to adaptive panels", segments, r)

    panels = CONTOUR_START_SEGMENTS
    width = TWO_PI / panels
    tolerance = 0.01 * _integrality_tol(scale) * TWO_PI / panels
    budget = CONTOUR_SEGMENT_CAP - segments
    total = 0j
    for k in range(panels):
        value, used = adaptive_simpson(
            integrand, k * width, (k + 1) * width, tolerance, _CONTOUR_MAX_DEPTH, budget, value_noise=True
        )
        total += value
        budget -= used
        if budget <= 0:
            raise QuadratureError("contour evaluation budget exhausted", (k * width, (k + 1) * width))
    raw = total / TWO_PI
    return raw, CONTOUR_SEGMENT_CAP - budget, _is_integral(raw, _integrality_tol(scale))


def zero_count_detail(f: Expr, r: float) -> ZeroCount:
    check_radius(r)
    df = derivative_of(f)
    raw: complex | None = None
    segments = 0
    radius = r
    for attempt in range(2):
        try:
            raw, segments, integral = _count_on_circle(f, df, radius)
        except (_ContourHit, QuadratureError, EvaluationError) as exc:
            logger.debug("Contour |z|=%s failed: %s", radius, exc)
            integral = False
        if integral and raw is not None:
            return ZeroCount(int(round(raw.real)), raw, radius, segments)
        if attempt == 0:
            logger.warning("Contour |z|=%s too close to a zero; perturbing by %s relative", r, RADIUS_PERTURBATION)
            radius = r * (1.0 + RADIUS_PERTURBATION)
    raise ContourTooCloseError(ERROR_CONTOUR_TOO_CLOSE.format(radius=r, raw=raw), radius=r, raw=raw)


def zero_count(f: Expr, r: float) -> int:
    """n(r, 1/f): zeros of f in |z| <= r by the argument principle."""
    return zero_count_detail(f, r).count


def _jumps(f: Expr, lo: float, n_lo: int, hi: float, n_hi: int) -> list[tuple[float, int]]:
    if n_hi <= n_lo:
        return []
    mid = math.sqrt(lo * hi)
    if hi / lo - 1.0 <= COUNTING_JUMP_REL_TOL:
        return [(mid, n_hi - n_lo)]
    try:
        n_mid = zero_count(f, mid)
    except ZeroCountError:
        return [(mid, n_hi - n_lo)]
    n_mid = min(max(n_mid, n_lo), n_hi)
    return _jumps(f, lo, n_lo, mid, n_mid) + _jumps(f, mid, n_mid, hi, n_hi)


def _count_at_grid_radius(f: Expr, t: float) -> int:
    """n(t), or n just inside t when a zero sits on |z| = t.

    A zero on the circle adds ln(t / t) = 0 to N(t); the next bracket picks
    its jump up at t.
    """
    try:
        return zero_count(f, t)
    except ContourTooCloseError:
        inner = t * (1.0 - COUNTING_INNER_SHIFT)
        logger.warning("Zero on |z|=%s; counting at r=%s instead", t, inner)
        return zero_count(f, inner)


def locate_jumps(
    f: Expr, r0: float, r_max: float, radii: list[float] | None = None
) -> tuple[int, list[tuple[float, int]]]:
    """n(r0) and the located (radius, jump) pairs of n(t) on (r0, r_max]."""
    grid = {float(t) for t in np.geomspace(r0, r_max, COUNTING_MIN_GRID)}
    grid.update(t for t in radii or [] if r0 < t < r_max)
    ordered = sorted(grid)
    counts = [_count_at_grid_radius(f, t) for t in ordered]
    jumps: list[tuple[float, int]] = []
    for (lo, n_lo), (hi, n_hi) in zip(zip(ordered, counts), zip(ordered[1:], counts[1:])):
        if n_hi < n_lo:
            logger.warning("n(r) decreased between r=%s and r=%s (%d -> %d)", lo, hi, n_lo, n_hi)
            continue
        jumps.extend(_jumps(f, lo, n_lo, hi, n_hi))
    return counts[0], jumps


def counting_profile(f: Expr, radii: list[float], r0: float) -> list[float]:
    """N(r) at every radius, sharing one jump search across the whole list."""
    if not radii:
        return []
    r_max = max(radii)
    if not (0.0 < r0 < r_max):
        raise PreconditionError(ERROR_COUNTING_ORIGIN.format(r0=r0, radius=r_max))
    _, jumps = locate_jumps(f, r0, r_max, radii)
    return [sum(jump * math.log(r / rho) for rho, jump in jumps if rho <= r) for r in radii]


def integrated_counting(f: Expr, r: float, r0: float) -> float:
    """N(r) = integral from r0 to r of (n(t) - n(r0)) / t dt.

    Zeros inside |z| <= r0 (the origin included) are excluded. n(t) is piecewise
    constant, so each located jump radius rho contributes jump * ln(r / rho).
    """
    if not (0.0 < r0 < r):
        raise PreconditionError(ERROR_COUNTING_ORIGIN.format(r0=r0, radius=r))
    return counting_profile(f, [r], r0)[0]


def check_no_poles(f: Expr, r: float) -> None:
    """Raise when a denominator of f vanishes somewhere in |z| <= r."""
    for denominator in pole_denominators(f):
        try:
            inside = zero_count(denominator, r)
        except (ZeroCountError, EvaluationError) as exc:
            raise UnsupportedMeromorphicError(ERROR_POLE_INSIDE.format(radius=r)) from exc
        if inside > 0:
            raise UnsupportedMeromorphicError(ERROR_POLE_INSIDE.format(radius=r))


def characteristic(f: Expr, r: float) -> float:
    """T(r, f) for entire f, which equals m(r, f)."""
    check_radius(r)
    check_no_poles(f, r)
    return proximity(f, r)
