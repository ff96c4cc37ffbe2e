from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from config.constants import ERROR_B_ZERO, NONZERO_PROBES, PROBE_SEED
from core.errors import EvaluationError, PreconditionError
from core.expr import ZERO_EXPR, Expr
from core.ext_complex import ExtComplex
from indicator.phase import ExpPolyFactorization

logger = logging.getLogger("growth_lab.ode")


def probe_points(count: int = NONZERO_PROBES, seed: int = PROBE_SEED) -> list[ExtComplex]:
    """Seeded points in the annulus 0.5 <= |z| <= 2."""
    rng = np.random.default_rng(seed)
    radii = rng.uniform(0.5, 2.0, count)
    angles = rng.uniform(0.0, 2.0 * math.pi, count)
    return [ExtComplex.from_polar(float(r), float(t)) for r, t in zip(radii, angles)]


def vanishes_at_probes(expr: Expr, points: list[ExtComplex] | None = None) -> bool:
    """True when every probe that evaluates gives an exact zero."""
    evaluated = 0
    for point in points or probe_points():
        try:
            value = expr.evaluate(point)
        except EvaluationError:
            continue
        evaluated += 1
        if not value.is_zero:
            return False
    return evaluated > 0


@dataclass(frozen=True)
class OdeInstance:
    """f'' + A f' + B f = H, optionally with a candidate solution f and A = v e^P."""

    label: str
    A: Expr
    B: Expr
    H: Expr = ZERO_EXPR
    f: Expr | None = None
    factorization_A: ExpPolyFactorization | None = None
    homogeneous: bool = field(init=False)

    def __post_init__(self) -> None:
        points = probe_points()
        if vanishes_at_probes(self.B, points):
            raise PreconditionError(ERROR_B_ZERO)
        object.__setattr__(self, "homogeneous", self.H == ZERO_EXPR or vanishes_at_probes(self.H, points))
        logger.debug("instance %s: homogeneous=%s", self.label, self.homogeneous)

    def with_changes(self, **changes) -> OdeInstance:
        return replace(self, **changes)

    def describe(self) -> str:
        return f"f'' + ({self.A})f' + ({self.B})f = {self.H}"
