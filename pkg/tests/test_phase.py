import math

import numpy as np
import pytest

from core.errors import ConfigError, PreconditionError, ZeroRayError
from core.parser import parse
from indicator.phase import (
    ExpPolyFactorization,
    PolyP,
    default_directions,
    delta,
    lemma2_check,
    lemma2_sweep,
    sign_at,
    sign_rays,
    zero_rays,
)

FINE_GRID = [float(r) for r in np.linspace(1.0, 100.0, 991)]


def _crossing(lo: float = 10.0, hi: float = 100.0) -> float:
    """Root of ln r = 0.1 r above the small-radius crossing."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.log(mid) > 0.1 * mid:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_poly_rejects_constant_and_trims_zeros():
    with pytest.raises(PreconditionError):
        PolyP((3.0,))
    with pytest.raises(PreconditionError):
        PolyP((1.0, 0.0))
    poly = PolyP.from_coefficients([{"re": 0.0, "im": 0.0}, {"re": 0.0, "im": 2.0}, 0.0])
    assert poly.degree == 1
    assert poly.leading == 2j


def test_delta_uses_leading_term():
    poly = PolyP((5.0, 0.0, 1.0))
    assert delta(poly, 0.0) == pytest.approx(1.0)
    assert delta(poly, math.pi / 2) == pytest.approx(-1.0)
    assert sign_at(poly, math.pi / 4) == 0


def test_sign_rays_cover_one_turn():
    poly = PolyP((0.0, 0.0, 1.0))
    arcs = sign_rays(poly)
    assert len(arcs) == 4
    assert arcs[0].start == pytest.approx(math.pi / 4)
    assert [arc.sign for arc in arcs] == [-1, 1, -1, 1]
    assert arcs[-1].end - arcs[0].start == pytest.approx(2 * math.pi)
    for arc in arcs:
        assert arc.end - arc.start == pytest.approx(math.pi / 2)
        assert sign_at(poly, arc.midpoint) == arc.sign
    for theta in zero_rays(poly):
        assert abs(delta(poly, theta)) < 1e-12


def test_sign_rays_start_inside_first_turn():
    rng = np.random.default_rng(5)
    for degree in (1, 2, 3, 4):
        coefficients = tuple(complex(*rng.normal(size=2)) for _ in range(degree + 1))
        poly = PolyP(coefficients)
        arcs = sign_rays(poly)
        assert len(arcs) == 2 * degree
        assert 0.0 <= arcs[0].start < math.pi / degree
        assert all(0.0 <= arc.start < 2 * math.pi for arc in arcs)
        for theta in rng.uniform(0.0, 2 * math.pi, 50):
            if sign_at(poly, theta) == 0:
                continue
            (arc,) = [arc for arc in arcs if arc.contains(theta)]
            assert arc.sign == sign_at(poly, theta)


def test_sign_rays_of_imaginary_linear_term():
    arcs = sign_rays(PolyP((0.0, 1j)))
    assert [(arc.start, arc.sign) for arc in arcs] == [(0.0, -1), (pytest.approx(math.pi), 1)]


def test_default_directions_avoid_zero_rays():
    poly = PolyP((0.0, 1j))
    directions = default_directions(poly)
    assert len(directions) == 6
    assert all(sign_at(poly, theta) != 0 for theta in directions)


@pytest.mark.parametrize("v, expected", [("1", None), ("z", "crossing")])
def test_lemma2_pass_radius_matches_oracle(v, expected):
    factorization = ExpPolyFactorization(parse(v), PolyP((0.0, 1.0)))
    report = lemma2_check(factorization, 0.0, 0.1, FINE_GRID)
    assert report.passed
    if expected is None:
        assert report.pass_radius == FINE_GRID[0]
        assert report.failures == []
    else:
        assert report.pass_radius == pytest.approx(_crossing(), rel=0.1)
        assert all(failure.r < report.pass_radius for failure in report.failures)


def test_lemma2_on_negative_ray_swaps_bounds():
    factorization = ExpPolyFactorization(parse("1"), PolyP((0.0, 1.0)))
    report = lemma2_check(factorization, math.pi, 0.2, FINE_GRID)
    assert report.delta == pytest.approx(-1.0)
    assert report.pass_radius == FINE_GRID[0]


def test_lemma2_rejects_zero_ray_and_bad_epsilon():
    factorization = ExpPolyFactorization(parse("1"), PolyP((0.0, 1.0)))
    with pytest.raises(ZeroRayError):
        lemma2_check(factorization, math.pi / 2, 0.1, FINE_GRID)
    with pytest.raises(ConfigError):
        lemma2_check(factorization, 0.0, 1.5, FINE_GRID)


def test_lemma2_sweep_skips_zero_rays():
    factorization = ExpPolyFactorization(parse("1"), PolyP((0.0, 1.0)))
    reports = lemma2_sweep(factorization, [0.0, math.pi / 2, math.pi], [0.1, 0.3], FINE_GRID)
    assert len(reports) == 4
    assert {report.theta for report in reports} == {0.0, math.pi}


@pytest.mark.slow
def test_factorization_requires_smaller_order_cofactor():
    built = ExpPolyFactorization.build(parse("z^2 + 1"), PolyP((0.0, 0.0, 1.0)))
    assert built.v_order is not None and built.v_order.value == 0.0
    with pytest.raises(ConfigError):
        ExpPolyFactorization.build(parse("exp(z)"), PolyP((0.0, 1.0)))


@pytest.mark.parametrize("degree", [1, 2, 3, 4])
def test_delta_flips_sign_every_sector_and_peaks_at_leading_modulus(degree):
    rng = np.random.default_rng(degree)
    poly = PolyP(tuple(complex(*rng.normal(size=2)) for _ in range(degree + 1)))
    thetas = np.linspace(0.0, 2 * math.pi, 100_001)
    for theta in thetas[::997]:
        assert delta(poly, theta + math.pi / degree) == pytest.approx(-delta(poly, theta), abs=1e-12)
    assert max(delta(poly, theta) for theta in thetas) == pytest.approx(abs(poly.leading), rel=1e-6)


def _polynomial_cofactor_crossing(epsilon: float) -> float:
    """Root of ln(r^2 + 1) = epsilon * r."""
    lo, hi = 1.0 / epsilon, 1e4
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.log(mid * mid + 1.0) > epsilon * mid:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@pytest.mark.parametrize("epsilon", [0.05, 0.1, 0.3])
def test_lemma2_with_polynomial_cofactor(epsilon):
    factorization = ExpPolyFactorization(parse("z^2 + 1"), PolyP((0.0, 1.0)))
    grid = [float(r) for r in np.linspace(1.0, 400.0, 7981)]
    report = lemma2_check(factorization, 0.0, epsilon, grid)
    assert report.passed
    assert report.pass_radius == pytest.approx(_polynomial_cofactor_crossing(epsilon), abs=0.1)
    assert all(failure.r < report.pass_radius for failure in report.failures)
