"""Order, hyper-order and convergence-exponent estimates from sampled growth.

All three estimators fit the upper envelope of a log-log cloud: points whose
deviation from the current line is within ``band`` of the largest deviation
at the same or larger radii are kept, the line is refitted through them, and
the procedure repeats until the kept set stops changing.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from config.constants import (
    DEFAULT_ANGULAR_SAMPLES,
    ENVELOPE_BAND,
    ERROR_BAD_GRID,
    ERROR_FEW_ENVELOPE,
    LOWER_BOUND_SHARE,
    MIN_ENVELOPE_POINTS,
    MIN_ESTIMATION_GRID,
    ORDER_THRESHOLD,
    ORDER_TOLERANCE,
    POLYNOMIAL_GROWTH_TOL,
    SUPERLINEAR_RATIO,
)
from core.errors import EstimationError, PreconditionError, RangeOverflowError
from core.expr import Expr
from growth.functionals import characteristic, max_modulus, zero_count
from radial.sets import RadialSet, from_grid_mask, intersect, log_measure

logger = logging.getLogger("growth_lab.growth")

ORDER = "order"
HYPER_ORDER = "hyper_order"
CONVERGENCE_EXPONENT = "convergence_exponent"
EXCEEDS_THRESHOLD = "exceeds-threshold"
_MAX_ENVELOPE_ITERATIONS = 50


@dataclass(frozen=True)
class OrderEstimate:
    kind: str
    value: float | None
    window: tuple[float, float]
    fit_residual: float
    points_used: int
    exceeds_threshold: bool = False
    truncated_at: float | None = None

    @property
    def is_finite(self) -> bool:
        return self.value is not None and not self.exceeds_threshold

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": EXCEEDS_THRESHOLD if self.exceeds_threshold else self.value,
            "window": [self.window[0], self.window[1]],
            "fit_residual": self.fit_residual,
            "points_used": self.points_used,
            "exceeds_threshold": self.exceeds_threshold,
            "truncated_at": self.truncated_at,
        }


@dataclass(frozen=True)
class LogMaxModulusSamples:
    radii: tuple[float, ...]
    log_m: tuple[float, ...]
    truncated_at: float | None = None


def validate_grid(r_grid: Sequence[float], min_decades: float = 3.0) -> list[float]:
    radii = [float(r) for r in r_grid]
    if len(radii) < MIN_ESTIMATION_GRID:
        raise PreconditionError(
            ERROR_BAD_GRID.format(details=f"need at least {MIN_ESTIMATION_GRID} radii, got {len(radii)}")
        )
    if any(r <= 0 for r in radii) or any(b <= a for a, b in zip(radii, radii[1:])):
        raise PreconditionError(ERROR_BAD_GRID.format(details="radii must be positive and strictly increasing"))
    if math.log10(radii[-1] / radii[0]) < min_decades - 1e-9:
        raise PreconditionError(ERROR_BAD_GRID.format(details=f"grid must span at least {min_decades:g} decades"))
    return radii


def sample_log_max_modulus(
    f: Expr, r_grid: Sequence[float], angular_samples: int = DEFAULT_ANGULAR_SAMPLES
) -> LogMaxModulusSamples:
    """ln M(r, f) along the grid, stopping at the first radius beyond extended range."""
    radii: list[float] = []
    values: list[float] = []
    for r in r_grid:
        try:
            values.append(max_modulus(f, r, angular_samples).log_m)
        except RangeOverflowError:
            logger.warning("ln M(r) leaves the extended range at r=%s; truncating the grid", r)
            return LogMaxModulusSamples(tuple(radii), tuple(values), truncated_at=float(r))
        radii.append(float(r))
    return LogMaxModulusSamples(tuple(radii), tuple(values))


def envelope_fit(x: np.ndarray, y: np.ndarray, band: float = ENVELOPE_BAND) -> tuple[float, float, int]:
    """(slope, rms residual, points kept) of the upper-envelope line through (x, y)."""
    if len(x) < MIN_ENVELOPE_POINTS:
        raise EstimationError(ERROR_FEW_ENVELOPE.format(count=len(x)))
    keep = np.ones(len(x), dtype=bool)
    slope, intercept = np.polyfit(x, y, 1)
    for _ in range(_MAX_ENVELOPE_ITERATIONS):
        deviation = y - slope * x
        envelope = np.maximum.accumulate(deviation[::-1])[::-1]
        selected = deviation >= envelope - band
        if selected.sum() < MIN_ENVELOPE_POINTS:
            selected = np.zeros(len(x), dtype=bool)
            selected[-MIN_ENVELOPE_POINTS:] = True
        if np.array_equal(selected, keep):
            break
        keep = selected
        slope, intercept = np.polyfit(x[keep], y[keep], 1)
    residual = y[keep] - (slope * x[keep] + intercept)
    return float(slope), float(np.sqrt(np.mean(residual**2))), int(keep.sum())


def _linear_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    return float(slope), float(np.sqrt(np.mean(residual**2)))


def polynomial_growth(radii: Sequence[float], log_m: Sequence[float]) -> tuple[bool, float, int]:
    """Whether ln M is affine in ln r over the upper half of the samples.

    Returns the verdict, the rms residual of the affine fit and the number of points.
    """
    half = len(radii) // 2
    x = np.log(np.asarray(radii[half:], dtype=float))
    y = np.asarray(log_m[half:], dtype=float)
    if len(x) < MIN_ENVELOPE_POINTS:
        return False, math.inf, len(x)
    slope, rms = _linear_fit(x, y)
    spread = float(y.max() - y.min())
    return slope >= -POLYNOMIAL_GROWTH_TOL and rms <= POLYNOMIAL_GROWTH_TOL * max(1.0, spread), rms, len(x)


def order_from_samples(
    samples: LogMaxModulusSamples,
    band: float = ENVELOPE_BAND,
    threshold: float = ORDER_THRESHOLD,
) -> OrderEstimate:
    radii, log_m = samples.radii, samples.log_m
    if not radii:
        raise EstimationError(ERROR_FEW_ENVELOPE.format(count=0))
    window = (radii[0], radii[-1])
    is_polynomial, rms, count = polynomial_growth(radii, log_m)
    if is_polynomial:
        return OrderEstimate(ORDER, 0.0, window, rms, count)

    usable = [(r, v) for r, v in zip(radii, log_m) if v > 1.0]
    x = np.log(np.array([r for r, _ in usable], dtype=float))
    y = np.log(np.array([v for _, v in usable], dtype=float))
    slope, residual, kept = envelope_fit(x, y, band)
    window = (usable[0][0], usable[-1][0])
    truncated = samples.truncated_at
    if slope > threshold or (truncated is not None and (_tail_slope(x, y) > threshold or _convex_tail(x, y))):
        if truncated is not None:
            logger.warning("ln ln M(r) steepens up to the overflow radius %s; flagging the order", truncated)
        return OrderEstimate(ORDER, None, window, residual, kept, exceeds_threshold=True, truncated_at=truncated)
    return OrderEstimate(ORDER, max(slope, 0.0), window, residual, kept, truncated_at=truncated)


def _tail_slope(x: np.ndarray, y: np.ndarray) -> float:
    if len(x) < 2:
        return 0.0
    return float((y[-1] - y[-2]) / (x[-1] - x[-2]))


def _convex_tail(x: np.ndarray, y: np.ndarray) -> bool:
    """Last chord slope well above the first one, as for ln ln M = r."""
    if len(x) < 3:
        return False
    first = float((y[1] - y[0]) / (x[1] - x[0]))
    last = _tail_slope(x, y)
    return last > SUPERLINEAR_RATIO * max(first, 1e-12) and last - first > 0.25


def _is_superlinear(x: np.ndarray, y: np.ndarray) -> bool:
    third = len(x) // 3
    if third < 2:
        return False
    first, _ = _linear_fit(x[:third], y[:third])
    last, _ = _linear_fit(x[-third:], y[-third:])
    return last > SUPERLINEAR_RATIO * max(first, 1e-12) and last - first > 0.25


def hyper_order_from_samples(samples: LogMaxModulusSamples, band: float = ENVELOPE_BAND) -> OrderEstimate:
    """rho_2: zero unless ln ln M grows faster than linearly in ln r."""
    positive = [(r, v) for r, v in zip(samples.radii, samples.log_m) if v > 0.0]
    if len(positive) < MIN_ENVELOPE_POINTS:
        raise EstimationError(ERROR_FEW_ENVELOPE.format(count=len(positive)))
    x = np.log(np.array([r for r, _ in positive], dtype=float))
    lnln = np.log(np.array([v for _, v in positive], dtype=float))
    window = (positive[0][0], positive[-1][0])
    if not _is_superlinear(x, lnln):
        _, rms = _linear_fit(x, lnln)
        return OrderEstimate(HYPER_ORDER, 0.0, window, rms, len(positive))
    mask = lnln > 1.0
    slope, residual, kept = envelope_fit(x[mask], np.log(lnln[mask]), band)
    return OrderEstimate(HYPER_ORDER, max(slope, 0.0), (float(np.exp(x[mask][0])), window[1]), residual, kept)


def convergence_from_counts(
    radii: Sequence[float], counts: Sequence[int], band: float = ENVELOPE_BAND
) -> OrderEstimate:
    """lambda from n(r): envelope slope of ln n over radii with n >= 2, zero when n stays bounded."""
    window = (float(radii[0]), float(radii[-1]))
    upper = counts[len(counts) // 2 :]
    usable = [(r, n) for r, n in zip(radii, counts) if n >= 2]
    if len(usable) < MIN_ENVELOPE_POINTS or min(upper) == max(upper):
        return OrderEstimate(CONVERGENCE_EXPONENT, 0.0, window, 0.0, max(len(usable), MIN_ENVELOPE_POINTS))
    x = np.log(np.array([r for r, _ in usable], dtype=float))
    y = np.log(np.array([n for _, n in usable], dtype=float))
    slope, residual, kept = envelope_fit(x, y, band)
    return OrderEstimate(CONVERGENCE_EXPONENT, max(slope, 0.0), (usable[0][0], usable[-1][0]), residual, kept)


def order_estimate(
    f: Expr,
    r_grid: Sequence[float],
    angular_samples: int = DEFAULT_ANGULAR_SAMPLES,
    band: float = ENVELOPE_BAND,
    threshold: float = ORDER_THRESHOLD,
) -> OrderEstimate:
    radii = validate_grid(r_grid)
    estimate = order_from_samples(sample_log_max_modulus(f, radii, angular_samples), band, threshold)
    logger.info("order of %s over [%g, %g]: %s", f, radii[0], radii[-1], estimate.value)
    return estimate


def hyper_order_estimate(
    f: Expr,
    r_grid: Sequence[float],
    angular_samples: int = DEFAULT_ANGULAR_SAMPLES,
    band: float = ENVELOPE_BAND,
) -> OrderEstimate:
    # Hyper-order needs small radii before ln M leaves the extended range, so one decade suffices.
    radii = validate_grid(r_grid, min_decades=1.0)
    return hyper_order_from_samples(sample_log_max_modulus(f, radii, angular_samples), band)


def convergence_exponent(f: Expr, r_grid: Sequence[float], band: float = ENVELOPE_BAND) -> OrderEstimate:
    radii = validate_grid(r_grid)
    counts = [zero_count(f, r) for r in radii]
    logger.debug("zero counts of %s: %s", f, counts)
    return convergence_from_counts(radii, counts, band)


@dataclass(frozen=True)
class GrowthComparison:
    radii: tuple[float, ...]
    log_ratio: tuple[float, ...]
    decay_exponent: float | None
    confirmed: bool
    order_g: OrderEstimate | None = None
    order_f: OrderEstimate | None = None
    orders_ordered: bool | None = None

    def to_dict(self) -> dict:
        return {
            "radii": list(self.radii),
            "log_ratio": list(self.log_ratio),
            "decay_exponent": self.decay_exponent,
            "confirmed": self.confirmed,
            "order_g": self.order_g.to_dict() if self.order_g else None,
            "order_f": self.order_f.to_dict() if self.order_f else None,
            "orders_ordered": self.orders_ordered,
        }


def _optional_order(samples: LogMaxModulusSamples) -> OrderEstimate | None:
    if len(samples.radii) < MIN_ESTIMATION_GRID:
        return None
    try:
        return order_from_samples(samples)
    except EstimationError:
        return None


def _growth_rank(estimate: OrderEstimate | None) -> float | None:
    if estimate is None:
        return None
    return math.inf if estimate.exceeds_threshold else estimate.value


def growth_compare(
    g: Expr, f: Expr, r_grid: Sequence[float], angular_samples: int = DEFAULT_ANGULAR_SAMPLES
) -> GrowthComparison:
    """Check ln M(r, g) - ln M(r, f) <= -r**delta with delta > 0 over the top decade of the grid.

    Confirmation also needs rho(g) < rho(f) - ORDER_TOLERANCE. ``orders_ordered``
    is None when either order cannot be estimated from the samples.
    """
    samples_g = sample_log_max_modulus(g, r_grid, angular_samples)
    samples_f = sample_log_max_modulus(f, r_grid, angular_samples)
    count = min(len(samples_g.radii), len(samples_f.radii))
    radii = samples_g.radii[:count]
    ratio = [a - b for a, b in zip(samples_g.log_m[:count], samples_f.log_m[:count])]
    order_g, order_f = _optional_order(samples_g), _optional_order(samples_f)
    rank_g, rank_f = _growth_rank(order_g), _growth_rank(order_f)
    ordered = None if rank_g is None or rank_f is None else rank_g < rank_f - ORDER_TOLERANCE
    if ordered is False:
        logger.warning("growth_compare needs rho(g) < rho(f); estimated %s and %s", rank_g, rank_f)
    if count < 2:
        return GrowthComparison(tuple(radii), tuple(ratio), None, False, order_g, order_f, ordered)

    top = [(r, q) for r, q in zip(radii, ratio) if r >= radii[-1] / 10.0]
    if len(top) < 2:
        top = list(zip(radii[-2:], ratio[-2:]))
    decaying = all(q < 0 for _, q in top)
    delta: float | None = None
    if decaying:
        x = np.log(np.array([r for r, _ in top]))
        y = np.log(np.array([-q for _, q in top]))
        delta = float(np.polyfit(x, y, 1)[0])
    confirmed = decaying and delta is not None and delta > 0 and ordered is not False
    return GrowthComparison(tuple(radii), tuple(ratio), delta, confirmed, order_g, order_f, ordered)


@dataclass(frozen=True)
class LowerBoundReport:
    order: OrderEstimate
    epsilon: float
    characteristic_set: RadialSet
    modulus_set: RadialSet
    window: tuple[float, float]
    share: float
    modulus_share: float
    passed: bool
    rows: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "order": self.order.to_dict(),
            "epsilon": self.epsilon,
            "characteristic_set": self.characteristic_set.to_dict(),
            "modulus_set": self.modulus_set.to_dict(),
            "window": list(self.window),
            "share": self.share,
            "modulus_share": self.modulus_share,
            "passed": self.passed,
            "rows": self.rows,
        }


def order_lower_bound_check(
    f: Expr,
    r_grid: Sequence[float],
    epsilon: float = 0.1,
    angular_samples: int = DEFAULT_ANGULAR_SAMPLES,
) -> LowerBoundReport:
    """Share (by log measure) of the top two decades where T(r, f) >= r**(rho - epsilon).

    The same share is reported for the corollary ln M(r, f) >= r**(rho - epsilon).
    """
    radii = validate_grid(r_grid)
    samples = sample_log_max_modulus(f, radii, angular_samples)
    order = order_from_samples(samples)
    if not order.is_finite or not order.value:
        raise PreconditionError(ERROR_BAD_GRID.format(details="lower-bound check needs 0 < rho < threshold"))
    exponent = order.value - epsilon
    used = list(samples.radii)
    char_values = [characteristic(f, r) for r in used]
    bounds = [r**exponent for r in used]
    char_mask = [t >= b for t, b in zip(char_values, bounds)]
    modulus_mask = [m >= b for m, b in zip(samples.log_m, bounds)]
    char_set = from_grid_mask(used, char_mask)
    modulus_set = from_grid_mask(used, modulus_mask)

    window = (max(used[0], used[-1] / 100.0), used[-1])
    window_set = RadialSet((window,))
    width = math.log(window[1] / window[0])
    share = log_measure(intersect(char_set, window_set)) / width if width > 0 else 0.0
    modulus_share = log_measure(intersect(modulus_set, window_set)) / width if width > 0 else 0.0
    rows = [
        {"r": r, "T": t, "logM": m, "bound": b}
        for r, t, m, b in zip(used, char_values, samples.log_m, bounds)
    ]
    return LowerBoundReport(
        order, epsilon, char_set, modulus_set, window, share, modulus_share, share >= LOWER_BOUND_SHARE, rows
    )
