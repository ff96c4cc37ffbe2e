import math

import pytest

import growth.functionals as functionals
from core.errors import ContourTooCloseError, PreconditionError, RangeOverflowError, UnsupportedMeromorphicError
from core.expr import Const, Z, exp
from core.parser import parse
from growth.functionals import (
    characteristic,
    counting_profile,
    integrated_counting,
    locate_jumps,
    max_modulus,
    proximity,
    zero_count,
    zero_count_detail,
)


def test_max_modulus_of_exponential():
    log_m, theta = max_modulus(parse("exp(z)"), 7.0)
    assert log_m == pytest.approx(7.0, abs=1e-9)
    assert min(theta, 2 * math.pi - theta) < 1e-4


def test_max_modulus_of_gaussian_at_large_radius():
    log_m, theta = max_modulus(parse("exp(z^2)"), 1e6)
    assert log_m == pytest.approx(1e12, rel=1e-9)
    assert min(abs(theta), abs(theta - math.pi), abs(theta - 2 * math.pi)) < 1e-4


def test_max_modulus_rejects_bad_input():
    with pytest.raises(PreconditionError):
        max_modulus(parse("z"), -1.0)
    with pytest.raises(PreconditionError):
        max_modulus(parse("z"), 1.0, angular_samples=8)


@pytest.mark.parametrize("r", [10.0, 100.0, 1000.0])
def test_proximity_of_exponential(r):
    assert proximity(parse("exp(z)"), r) == pytest.approx(r / math.pi, rel=1e-6)


def test_proximity_of_polynomial():
    assert proximity(parse("z^3"), 10.0) == pytest.approx(3 * math.log(10.0), rel=1e-8)
    assert proximity(parse("z^3"), 0.5) == 0.0


@pytest.mark.parametrize("r", [5.0, 10.0, 20.0, 50.0])
def test_zero_count_of_sine(r):
    assert zero_count(parse("sin(z)"), r) == 2 * math.floor(r / math.pi) + 1


def test_zero_count_of_polynomial_and_exponential():
    assert zero_count(parse("(z - 1)*(z + 2)*(z - 3*i)"), 2.5) == 2
    assert zero_count(parse("exp(z^2)"), 1e3) == 0


def test_zero_count_perturbs_once_then_gives_up(monkeypatch):
    calls = []

    def always_hit(f, df, r):
        calls.append(r)
        raise functionals._ContourHit

    monkeypatch.setattr(functionals, "_count_on_circle", always_hit)
    with pytest.raises(ContourTooCloseError) as info:
        zero_count_detail(parse("z - 1"), 1.0)
    assert len(calls) == 2
    assert calls[1] == pytest.approx(1.0 + 1e-9)
    assert info.value.radius == 1.0


def test_integrated_counting_of_sine():
    f = parse("sin(z)")
    expected = sum(2 * math.log(10.0 / (k * math.pi)) for k in (1, 2, 3))
    assert integrated_counting(f, 10.0, 1.0) == pytest.approx(expected, rel=1e-4)


def test_counting_excludes_zeros_inside_r0():
    assert integrated_counting(parse("z^2"), 50.0, 1.0) == 0.0
    base, jumps = locate_jumps(parse("z*(z - 4)"), 1.0, 10.0)
    assert base == 1
    assert len(jumps) == 1
    assert jumps[0][0] == pytest.approx(4.0, rel=1e-4)


def test_counting_profile_is_nondecreasing():
    values = counting_profile(parse("sin(z)"), [2.0, 5.0, 10.0, 20.0], 1.0)
    assert values == sorted(values)
    with pytest.raises(PreconditionError):
        counting_profile(parse("sin(z)"), [2.0], 3.0)


def test_characteristic_rejects_poles_inside():
    f = parse("exp(z)/(z - 2)")
    assert characteristic(f, 1.0) >= 0.0
    with pytest.raises(UnsupportedMeromorphicError):
        characteristic(f, 3.0)


@pytest.mark.parametrize("a", [2.0, 1j, 1 + 1j])
def test_proximity_of_scaled_exponential(a):
    f = exp(Const(complex(a)) * Z)
    assert proximity(f, 10.0) == pytest.approx(abs(a) * 10.0 / math.pi, rel=1e-6)


def test_overflow_keeps_its_type_on_the_circle():
    with pytest.raises(RangeOverflowError):
        max_modulus(parse("exp(exp(z))"), 50.0)


@pytest.mark.parametrize(
    "rel",
    [pytest.param(1e-5, marks=pytest.mark.slow), 1e-6, pytest.param(1e-7, marks=pytest.mark.slow)],
)
def test_zero_count_next_to_a_zero(rel):
    detail = zero_count_detail(parse("sin(z)"), 10 * math.pi * (1 + rel))
    assert detail.count == 21
    assert detail.radius == 10 * math.pi * (1 + rel)
    assert abs(detail.raw - 21) <= 1e-6


def test_zero_count_without_zeros_at_large_radius():
    assert zero_count(parse("exp(z^2)"), 1e5) == 0
    assert zero_count(parse("exp(-z^2)"), 1e5) == 0


def test_single_zero_counting_is_exact():
    assert integrated_counting(parse("z - 1"), math.e, 0.5) == pytest.approx(1.0, abs=1e-7)


@pytest.mark.slow
def test_integrated_counting_with_zero_on_the_outer_circle():
    r = 10 * math.pi
    expected = sum(math.log(r / (k * math.pi)) for k in range(-10, 11) if k != 0)
    assert integrated_counting(parse("sin(z)"), r, 1.0) == pytest.approx(expected, rel=1e-2)
