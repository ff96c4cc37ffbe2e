"""Empirical checks of the logarithmic-derivative, Kwon and Wang-Laine inequalities."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

from pydantic import BaseModel, Field, ValidationError, field_validator

from config.constants import (
    CALIBRATION_RADII,
    DEFAULT_ANGULAR_SAMPLES,
    ERROR_BAD_PAIR,
    ERROR_CIRCLE_EVALUATION,
    ERROR_LEMMA_CONFIG,
    KWON_EQUALITY_TOL,
    KWON_MIN_SAMPLES,
    WANG_LAINE_ANGLES,
    WANG_LAINE_FLOOR,
)
from core.errors import ConfigError, EvaluationError, PreconditionError
from core.expr import Expr, div
from growth.functionals import (
    TWO_PI,
    characteristic,
    derivative_of,
    golden_section_max,
    log_abs_on_circle,
    max_modulus,
)
from radial.sets import RadialSet, from_grid_mask, log_density_profile, log_measure, tail_density, union

logger = logging.getLogger("growth_lab.ode")


class LemmaCheckConfig(BaseModel):
    gamma: list[tuple[int, int]] = Field(default_factory=lambda: [(1, 0)])
    alpha: float = Field(2.0, gt=1.0)
    epsilon: float = Field(0.1, gt=0.0)
    c: float = Field(0.5, gt=0.0, lt=1.0)
    l0: float = Field(0.1, gt=0.0, lt=0.5)
    zeta: float = Field(0.1, gt=0.0, lt=1.0)
    r0: float = Field(1.0, gt=0.0)

    @field_validator("gamma")
    @classmethod
    def _ordered_pairs(cls, value: list[tuple[int, int]]) -> list[tuple[int, int]]:
        if not value:
            raise ValueError("gamma needs at least one (k, j) pair")
        for k, j in value:
            if not k > j >= 0:
                raise ValueError(f"pair ({k}, {j}) must satisfy k > j >= 0")
        return value

    @classmethod
    def create(cls, **values) -> LemmaCheckConfig:
        try:
            return cls(**values)
        except ValidationError as exc:
            raise ConfigError(ERROR_LEMMA_CONFIG.format(details=exc)) from exc


def _checked_radii(r_grid: Sequence[float], r0: float) -> list[float]:
    return [float(r) for r in r_grid if r >= r0]


def _nth_derivative(f: Expr, order: int) -> Expr:
    result = f
    for _ in range(order):
        result = derivative_of(result)
    return result


@dataclass
class PairResult:
    k: int
    j: int
    mode: str
    violations: RadialSet
    log_measure: float
    calibration: float | None = None
    skipped: list[float] = field(default_factory=list)
    tail_violated: bool = False

    def to_dict(self) -> dict:
        return {
            "pair": [self.k, self.j],
            "mode": self.mode,
            "violations": self.violations.to_dict(),
            "log_measure": self.log_measure,
            "calibration_ln_c": self.calibration,
            "skipped_radii": list(self.skipped),
            "tail_violated": self.tail_violated,
        }


@dataclass
class GundersenReport:
    expression: str
    order: float | None
    epsilon: float
    pairs: list[PairResult]
    violations: RadialSet
    log_measure: float

    @property
    def passed(self) -> bool:
        """The bound holds at the largest checked radius for every pair."""
        return not any(pair.tail_violated for pair in self.pairs)

    def to_dict(self) -> dict:
        return {
            "expression": self.expression,
            "order": self.order,
            "epsilon": self.epsilon,
            "pairs": [pair.to_dict() for pair in self.pairs],
            "violations": self.violations.to_dict(),
            "log_measure": self.log_measure,
            "passed": self.passed,
        }


def _check_pair(k: int, j: int) -> None:
    if not (k > j >= 0 and k <= 2):
        raise PreconditionError(ERROR_BAD_PAIR.format(k=k, j=j))


def _log_ratio(f: Expr, k: int, j: int, r: float, angular_samples: int) -> float:
    """ln max over |z| = r of |f^(k)(z) / f^(j)(z)|."""
    ratio = div(_nth_derivative(f, k), _nth_derivative(f, j))
    return max_modulus(ratio, r, angular_samples).log_m


def gundersen_check(
    f: Expr,
    cfg: LemmaCheckConfig,
    rho_hat: float | None,
    r_grid: Sequence[float],
    angular_samples: int = DEFAULT_ANGULAR_SAMPLES,
) -> GundersenReport:
    """Radii where |f^(k)/f^(j)| exceeds r**((k-j)(rho-1+eps)) at the worst angle.

    Without a finite order estimate the characteristic-based bound
    c * (T(alpha r)/r * ln^alpha r * ln T(alpha r))**(k-j) is used, with ln c
    calibrated as the largest observed excess at the smallest usable radii.
    """
    for k, j in cfg.gamma:
        _check_pair(k, j)
    radii = _checked_radii(r_grid, cfg.r0)
    results = []
    for k, j in cfg.gamma:
        if rho_hat is not None:
            results.append(_finite_order_pair(f, k, j, rho_hat, cfg.epsilon, radii, angular_samples))
        else:
            results.append(_calibrated_pair(f, k, j, cfg.alpha, radii, angular_samples))
    combined = RadialSet.empty()
    for result in results:
        combined = union(combined, result.violations)
    measure = log_measure(combined)
    logger.info("gundersen %s: violation log measure %.6g", f, measure)
    return GundersenReport(str(f), rho_hat, cfg.epsilon, results, combined, measure)


def _finite_order_pair(
    f: Expr, k: int, j: int, rho_hat: float, epsilon: float, radii: list[float], angular_samples: int
) -> PairResult:
    exponent = (k - j) * (rho_hat - 1.0 + epsilon)
    mask = []
    for r in radii:
        observed = _log_ratio(f, k, j, r, angular_samples)
        mask.append(observed > exponent * math.log(r) + 1e-12)
    violations = from_grid_mask(radii, mask) if radii else RadialSet.empty()
    tail = bool(mask and mask[-1])
    return PairResult(k, j, "finite-order", violations, log_measure(violations), tail_violated=tail)


def _calibrated_pair(f: Expr, k: int, j: int, alpha: float, radii: list[float], angular_samples: int) -> PairResult:
    usable: list[tuple[float, float, float]] = []
    skipped = []
    for r in radii:
        t_alpha = characteristic(f, alpha * r) if r > 1.0 else 0.0
        if r <= 1.0 or t_alpha <= 1.0:
            skipped.append(r)
            continue
        ln_base = (k - j) * (math.log(t_alpha / r) + alpha * math.log(math.log(r)) + math.log(math.log(t_alpha)))
        usable.append((r, _log_ratio(f, k, j, r, angular_samples), ln_base))
    if not usable:
        return PairResult(k, j, "calibrated", RadialSet.empty(), 0.0, None, skipped)
    ln_c = max(observed - ln_base for _, observed, ln_base in usable[:CALIBRATION_RADII])
    logger.warning(
        "gundersen (%d, %d): calibrated ln c = %.6g from the %d smallest radii", k, j, ln_c, CALIBRATION_RADII
    )
    grid = [r for r, _, _ in usable]
    mask = [observed > ln_c + ln_base + 1e-12 for _, observed, ln_base in usable]
    violations = from_grid_mask(grid, mask)
    return PairResult(k, j, "calibrated", violations, log_measure(violations), ln_c, skipped, bool(mask[-1]))


@dataclass
class KwonWitness:
    r: float
    theta: float
    ln_ratio: float

    def to_dict(self) -> dict:
        return {"r": self.r, "theta": self.theta, "ln_ratio": self.ln_ratio}


@dataclass
class KwonReport:
    expression: str
    pass_from: float | None
    witnesses: list[KwonWitness]
    failures: list[float]
    checked: int

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "expression": self.expression,
            "pass_from": self.pass_from,
            "witnesses": [witness.to_dict() for witness in self.witnesses],
            "failures": list(self.failures),
            "checked": self.checked,
        }


def _min_log_ratio(f: Expr, df: Expr, r: float, samples: int) -> tuple[float, float]:
    """(theta, min ln|f/f'|) on |z| = r by scan plus golden-section polish."""

    def excess(theta: float) -> float:
        ln_df = log_abs_on_circle(df, r, theta)
        ln_f = log_abs_on_circle(f, r, theta)
        if ln_f == -math.inf:
            return math.inf
        return ln_df - ln_f

    step = TWO_PI / samples
    values = [excess(k * step) for k in range(samples)]
    if all(value == -math.inf for value in values):
        raise EvaluationError(ERROR_CIRCLE_EVALUATION.format(radius=r, theta=0.0, details="f' vanishes on the circle"))
    best = max(range(samples), key=lambda index: values[index])
    theta, value = best * step, values[best]
    if math.isfinite(value):
        polished_theta, polished = golden_section_max(excess, theta - step, theta + step, 1e-10)
        if polished > value:
            theta, value = polished_theta, polished
    return theta % TWO_PI, -value


def kwon_check(f: Expr, r_grid: Sequence[float], r0: float = 1.0, samples: int = KWON_MIN_SAMPLES) -> KwonReport:
    """Look for z on each circle with |f(z)/f'(z)| <= r."""
    samples = max(samples, KWON_MIN_SAMPLES)
    df = derivative_of(f)
    radii = _checked_radii(r_grid, r0)
    witnesses: list[KwonWitness] = []
    failures: list[float] = []
    last_failure = -1
    slack = math.log1p(KWON_EQUALITY_TOL)
    for index, r in enumerate(radii):
        theta, ln_ratio = _min_log_ratio(f, df, r, samples)
        if ln_ratio <= math.log(r) + slack:
            witnesses.append(KwonWitness(r, theta, ln_ratio))
        else:
            failures.append(r)
            last_failure = index
    pass_from = radii[last_failure + 1] if last_failure + 1 < len(radii) else None
    logger.info("kwon %s: %d/%d witnesses, pass from %s", f, len(witnesses), len(radii), pass_from)
    return KwonReport(str(f), pass_from, witnesses, failures, len(radii))


@dataclass
class WangLaineReport:
    expression: str
    c: float
    l0: float
    pass_set: RadialSet
    density_radii: list[float]
    density_profile: list[float]
    passed_fraction: float
    failures: list[float]
    lower_density: float
    upper_density: float
    zeta: float = 0.1

    @property
    def passed(self) -> bool:
        return self.lower_density >= 1.0 - self.zeta

    def to_dict(self) -> dict:
        return {
            "expression": self.expression,
            "C": self.c,
            "l0": self.l0,
            "pass_set": self.pass_set.to_dict(),
            "density_radii": list(self.density_radii),
            "density_profile": list(self.density_profile),
            "passed_fraction": self.passed_fraction,
            "failures": list(self.failures),
            "lower_density": self.lower_density,
            "upper_density": self.upper_density,
            "zeta": self.zeta,
            "passed": self.passed,
        }


def wang_laine_check(
    f: Expr, cfg: LemmaCheckConfig, r_grid: Sequence[float], angular_samples: int = DEFAULT_ANGULAR_SAMPLES
) -> WangLaineReport:
    """Radii where ln|f| >= -5 pi + (1 - C) ln M(r, f) on the whole arc |theta - theta_r| <= l0."""
    radii = _checked_radii(r_grid, cfg.r0)
    floor = -WANG_LAINE_FLOOR * math.pi
    mask: list[bool] = []
    failures: list[float] = []
    for r in radii:
        peak = max_modulus(f, r, angular_samples)
        bound = floor + (1.0 - cfg.c) * peak.log_m
        ok = True
        for step in range(WANG_LAINE_ANGLES):
            theta = peak.theta + cfg.l0 * (2.0 * step / (WANG_LAINE_ANGLES - 1) - 1.0)
            if log_abs_on_circle(f, r, theta) < bound:
                ok = False
                break
        mask.append(ok)
        if not ok:
            failures.append(r)
    pass_set = from_grid_mask(radii, mask) if radii else RadialSet.empty()
    density_radii = [r for r in radii if r > 1.0]
    profile = log_density_profile(pass_set, density_radii) if density_radii else []
    upper, lower = tail_density(profile)
    fraction = sum(mask) / len(mask) if mask else 0.0
    logger.info("wang-laine %s: %.1f%% of radii pass", f, 100.0 * fraction)
    return WangLaineReport(
        str(f), cfg.c, cfg.l0, pass_set, density_radii, profile, fraction, failures, lower, upper, cfg.zeta
    )
