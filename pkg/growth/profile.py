from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

from config.constants import DEFAULT_ANGULAR_SAMPLES
from core.expr import Expr
from growth.functionals import check_no_poles, counting_profile, max_modulus, proximity, zero_count

logger = logging.getLogger("growth_lab.growth")

PROFILE_HEADER = ("r", "logM", "theta_r", "m", "n", "N", "T")
MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class ProfileRow:
    r: float
    log_m: float
    theta_r: float
    m: float
    n: int | None
    counting: float | None
    t: float


def _row_values(row: ProfileRow) -> tuple:
    return (row.r, row.log_m, row.theta_r, row.m, row.n, row.counting, row.t)


def _cell(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.17g}"


@dataclass
class GrowthProfile:
    """Per-radius growth functionals of one expression."""

    expression: str
    rows: list[ProfileRow] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def radii(self) -> list[float]:
        return [row.r for row in self.rows]

    def column(self, name: str) -> list:
        attribute = {"logM": "log_m", "N": "counting", "T": "t"}.get(name, name)
        return [getattr(row, attribute) for row in self.rows]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        buffer.write(",".join(PROFILE_HEADER) + "\n")
        for row in self.rows:
            buffer.write(",".join(_cell(value) for value in _row_values(row)) + "\n")
        return buffer.getvalue()

    def plot_rows(self) -> list[tuple[float, float]]:
        """(ln r, ln ln M) for every radius with ln M > 0."""
        return [(math.log(row.r), math.log(row.log_m)) for row in self.rows if row.log_m > 0]

    def to_dict(self) -> dict:
        return {
            "expression": self.expression,
            "rows": [dict(zip(PROFILE_HEADER, _row_values(row))) for row in self.rows],
            "warnings": list(self.warnings),
        }


def check_monotone(profile: GrowthProfile) -> list[str]:
    """Monotonicity violations of ln M, n and T, described by the offending radii."""
    problems = []
    for previous, current in zip(profile.rows, profile.rows[1:]):
        if current.log_m < previous.log_m - MONOTONE_SLACK * max(1.0, abs(previous.log_m)):
            problems.append(f"logM decreases between r={previous.r:g} and r={current.r:g}")
        if previous.n is not None and current.n is not None and current.n < previous.n:
            problems.append(f"n decreases between r={previous.r:g} and r={current.r:g}")
        if current.t < previous.t - MONOTONE_SLACK * max(1.0, abs(previous.t)):
            problems.append(f"T decreases between r={previous.r:g} and r={current.r:g}")
    return problems


def build_profile(
    f: Expr,
    radii: Sequence[float],
    angular_samples: int = DEFAULT_ANGULAR_SAMPLES,
    with_zeros: bool = False,
    r0: float | None = None,
) -> GrowthProfile:
    """Tabulate ln M, theta_r, m, T = m (and n, N when ``with_zeros``) along ``radii``.

    Monotonicity violations are recorded as warnings and never repaired.
    """
    grid = sorted(float(r) for r in radii)
    counts: list[int | None] = [zero_count(f, r) if with_zeros else None for r in grid]
    counting: list[float | None] = [None] * len(grid)
    if with_zeros:
        counting[:] = counting_profile(f, grid, r0 if r0 is not None else grid[0] / 2.0)

    check_no_poles(f, grid[-1])
    rows = []
    for index, r in enumerate(grid):
        log_m, theta = max_modulus(f, r, angular_samples)
        m = proximity(f, r)
        rows.append(ProfileRow(r, log_m, theta, m, counts[index], counting[index], m))
        logger.debug("profile r=%g logM=%.6g m=%.6g", r, log_m, m)

    profile = GrowthProfile(str(f), rows)
    profile.warnings.extend(check_monotone(profile))
    for warning in profile.warnings:
        logger.warning("%s: %s", profile.expression, warning)
    return profile
