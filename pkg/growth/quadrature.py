"""Adaptive quadrature on real intervals.

Both integrators refine by interval halving and apply a Richardson correction
to the finer estimate once the local error test passes.
"""

from __future__ import annotations

import math
import sys
from typing import Callable

from config.constants import ERROR_QUADRATURE
from core.errors import QuadratureError

ROUNDOFF_FACTOR = 64.0 * sys.float_info.epsilon


def adaptive_trapezoid(
    func: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    max_depth: int,
) -> float:
    """Integrate ``func`` over [a, b] with trapezoid halving.

    Raises:
        QuadratureError: a panel still fails the error test at ``max_depth``.
            The error carries the panel with the largest remaining error.
    """
    if a == b:
        return 0.0
    fa, fb = func(a), func(b)
    whole = 0.5 * (b - a) * (fa + fb)
    total = 0.0
    worst: tuple[float, float] | None = None
    worst_error = 0.0
    stack = [(a, b, fa, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fhi, coarse, local_tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        fmid = func(mid)
        fine = 0.25 * (hi - lo) * (flo + 2.0 * fmid + fhi)
        error = (fine - coarse) / 3.0
        if abs(error) <= local_tol:
            total += fine + error
            continue
        if depth >= max_depth:
            if abs(error) > worst_error:
                worst, worst_error = (lo, hi), abs(error)
            total += fine + error
            continue
        half_tol = 0.5 * local_tol
        stack.append((mid, hi, fmid, fhi, 0.5 * (hi - mid) * (fmid + fhi), half_tol, depth + 1))
        stack.append((lo, mid, flo, fmid, 0.5 * (mid - lo) * (flo + fmid), half_tol, depth + 1))
    if worst is not None:
        raise QuadratureError(ERROR_QUADRATURE.format(lo=worst[0], hi=worst[1]), worst)
    return total


def adaptive_simpson(
    func: Callable[[float], complex],
    a: float,
    b: float,
    tol: float,
    max_depth: int,
    budget: int,
    value_noise: bool = False,
) -> tuple[complex, int]:
    """Complex-valued adaptive Simpson rule.

    Returns the integral and the number of function evaluations used. Running
    past ``budget`` evaluations or ``max_depth`` halvings raises QuadratureError.

    A panel is accepted once its error estimate is below the halved tolerance
    or below the rounding floor ``64 eps |S|``. With ``value_noise`` the floor
    also scales with the largest integrand modulus on the panel, for integrands
    whose rounding error grows with their size (logarithmic derivatives next to
    a zero).
    """
    fa, fm, fb = func(a), func(0.5 * (a + b)), func(b)
    evaluations = 3
    total = 0j
    stack = [(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, whole, local_tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        f_left, f_right = func(0.5 * (lo + mid)), func(0.5 * (mid + hi))
        evaluations += 2
        left = (mid - lo) / 6.0 * (flo + 4.0 * f_left + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * f_right + fhi)
        error = (left + right - whole) / 15.0
        floor = ROUNDOFF_FACTOR * abs(left + right)
        if value_noise:
            floor *= max(1.0, abs(flo), abs(f_left), abs(fmid), abs(f_right), abs(fhi))
        if abs(error) <= max(local_tol, floor):
            total += left + right + error
            continue
        if depth >= max_depth or evaluations >= budget:
            raise QuadratureError(ERROR_QUADRATURE.format(lo=lo, hi=hi), (lo, hi))
        stack.append((mid, hi, fmid, f_right, fhi, right, 0.5 * local_tol, depth + 1))
        stack.append((lo, mid, flo, f_left, fmid, left, 0.5 * local_tol, depth + 1))
    return total, evaluations


def bisect_sign_change(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    f_lo: float,
    width: float = 1e-14,
) -> float:
    """Locate a sign change of ``func`` in [lo, hi] given ``func(lo) = f_lo``."""
    for _ in range(200):
        if hi - lo <= width * max(1.0, abs(lo)):
            break
        mid = 0.5 * (lo + hi)
        f_mid = func(mid)
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
