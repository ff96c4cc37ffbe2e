from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from config.constants import ERROR_BAD_GRID, ERROR_BAD_INTERVAL
from core.errors import PreconditionError

Interval = tuple[float, float]


def merge_intervals(intervals: Iterable[Interval]) -> tuple[Interval, ...]:
    """Sort and merge overlapping or touching closed intervals."""
    merged: list[Interval] = []
    start = stop = None
    for lo, hi in sorted(intervals):
        if start is None or stop is None:
            start, stop = lo, hi
            continue
        if lo > stop:
            merged.append((start, stop))
            start, stop = lo, hi
        elif hi > stop:
            stop = hi
    if start is not None and stop is not None:
        merged.append((start, stop))
    return tuple(merged)


@dataclass(frozen=True)
class RadialSet:
    """A finite union of disjoint closed intervals inside (0, inf), kept canonical."""

    intervals: tuple[Interval, ...] = field(default=())

    def __post_init__(self) -> None:
        cleaned = []
        for lo, hi in self.intervals:
            lo, hi = float(lo), float(hi)
            if not (0.0 < lo <= hi) or not math.isfinite(hi):
                raise PreconditionError(ERROR_BAD_INTERVAL.format(lo=lo, hi=hi))
            cleaned.append((lo, hi))
        object.__setattr__(self, "intervals", merge_intervals(cleaned))

    @classmethod
    def empty(cls) -> RadialSet:
        return cls(())

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def contains(self, r: float) -> bool:
        return any(lo <= r <= hi for lo, hi in self.intervals)

    def to_dict(self) -> dict:
        return {"intervals": [[lo, hi] for lo, hi in self.intervals]}

    @classmethod
    def from_dict(cls, data: dict) -> RadialSet:
        return cls(tuple((float(lo), float(hi)) for lo, hi in data.get("intervals", [])))


def log_measure(radial_set: RadialSet) -> float:
    """m_l(E), the integral of dt/t over E."""
    return sum(math.log(hi / lo) for lo, hi in radial_set.intervals)


def union(first: RadialSet, second: RadialSet) -> RadialSet:
    return RadialSet(first.intervals + second.intervals)


def intersect(first: RadialSet, second: RadialSet) -> RadialSet:
    result: list[Interval] = []
    i = j = 0
    a, b = first.intervals, second.intervals
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo <= hi:
            result.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return RadialSet(tuple(result))


def complement_within(radial_set: RadialSet, lo: float, hi: float) -> RadialSet:
    """Closure of [lo, hi] minus the set; zero-length gaps are dropped."""
    if not (0.0 < lo <= hi):
        raise PreconditionError(ERROR_BAD_INTERVAL.format(lo=lo, hi=hi))
    gaps: list[Interval] = []
    cursor = lo
    for start, stop in intersect(radial_set, RadialSet(((lo, hi),))).intervals:
        if start > cursor:
            gaps.append((cursor, start))
        cursor = max(cursor, stop)
    if cursor < hi:
        gaps.append((cursor, hi))
    return RadialSet(tuple(gaps))


def _check_grid(r_grid: Sequence[float], minimum: float = 0.0) -> None:
    if any(r <= minimum for r in r_grid):
        raise PreconditionError(ERROR_BAD_GRID.format(details=f"radii must exceed {minimum}"))
    if any(b <= a for a, b in zip(r_grid, r_grid[1:])):
        raise PreconditionError(ERROR_BAD_GRID.format(details="radii must be strictly increasing"))


def log_density_profile(radial_set: RadialSet, r_grid: Sequence[float]) -> list[float]:
    """m_l(E n [1, r]) / ln r at every grid radius (each value lies in [0, 1])."""
    _check_grid(r_grid, minimum=1.0)
    ratios = []
    for r in r_grid:
        window = intersect(radial_set, RadialSet(((1.0, r),)))
        ratios.append(min(1.0, max(0.0, log_measure(window) / math.log(r))))
    return ratios


def tail_density(profile: Sequence[float], tail: int | None = None) -> tuple[float, float]:
    """(upper, lower) density estimates: max and min over the last ``tail`` ratios."""
    if not profile:
        return 0.0, 0.0
    count = max(1, len(profile) // 2) if tail is None else max(1, min(tail, len(profile)))
    window = profile[-count:]
    return max(window), min(window)


def from_grid_mask(r_grid: Sequence[float], mask: Sequence[bool]) -> RadialSet:
    """Each flagged radius contributes its grid cell [r_i, r_{i+1}]; the last radius a point."""
    _check_grid(r_grid)
    if len(mask) != len(r_grid):
        raise PreconditionError(ERROR_BAD_GRID.format(details="mask and grid lengths differ"))
    cells = []
    for index, flagged in enumerate(mask):
        if flagged:
            upper = r_grid[index + 1] if index + 1 < len(r_grid) else r_grid[index]
            cells.append((float(r_grid[index]), float(upper)))
    return RadialSet(tuple(cells))


def squaring_construction(m_max: int, growth: int = 2) -> RadialSet:
    """Union of [r_m, r_m**2] with r_m = 2**(growth**m) for m = 0..m_max.

    With growth 2 consecutive intervals touch; larger growth leaves gaps and
    makes the density profile oscillate.
    """
    intervals = []
    for m in range(m_max + 1):
        try:
            lo = math.ldexp(1.0, growth**m)
            hi = math.ldexp(1.0, 2 * growth**m)
        except OverflowError as exc:
            raise PreconditionError(ERROR_BAD_GRID.format(details=f"r_{m} exceeds double range")) from exc
        if math.isinf(hi):
            raise PreconditionError(ERROR_BAD_GRID.format(details=f"r_{m} exceeds double range"))
        intervals.append((lo, hi))
    return RadialSet(tuple(intervals))
