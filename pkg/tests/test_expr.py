import cmath

import numpy as np
import pytest

from core.errors import DivisionByZeroError
from core.expr import (
    ONE_EXPR,
    ZERO_EXPR,
    Add,
    Const,
    Div,
    Expr,
    Mul,
    Z,
    add,
    cos,
    diff,
    evaluate,
    exp,
    mul,
    pole_denominators,
    power,
    sin,
    sqrt,
    sub,
    to_string,
)
from core.ext_complex import ExtComplex
from core.parser import parse


def _at(f, z):
    return evaluate(f, z).to_complex()


def test_builders_fold_constants_and_neutral_elements():
    assert Z + 0 == Z
    assert Z * 1 == Z
    assert Z * 0 == ZERO_EXPR
    assert Const(2) * Const(3) == Const(6)
    assert Z**0 == ONE_EXPR
    assert exp(ZERO_EXPR) == ONE_EXPR


def test_evaluate_elementary_functions():
    z = 0.4 - 1.3j
    f = exp(Z) * cos(Z) + sin(Z) / (Z**2 + 1) - sqrt(Z)
    expected = cmath.exp(z) * cmath.cos(z) + cmath.sin(z) / (z**2 + 1) - cmath.sqrt(z)
    assert _at(f, z) == pytest.approx(expected)


@pytest.mark.parametrize(
    "text, derivative",
    [
        ("exp(z^2)", lambda z: 2 * z * cmath.exp(z**2)),
        ("cos(sqrt(z))", lambda z: -cmath.sin(cmath.sqrt(z)) / (2 * cmath.sqrt(z))),
        ("z*exp(z)", lambda z: (1 + z) * cmath.exp(z)),
        ("1/(z - 3)", lambda z: -1 / (z - 3) ** 2),
        ("z^-2", lambda z: -2 * z**-3),
        ("sin(z)^3", lambda z: 3 * cmath.sin(z) ** 2 * cmath.cos(z)),
    ],
)
def test_symbolic_derivatives_match_closed_forms(text, derivative):
    z = 0.7 + 0.45j
    assert _at(diff(parse(text)), z) == pytest.approx(derivative(z), rel=1e-12)


def test_second_derivative_of_corpus_solution():
    f = parse("exp(-z^2)")
    z = 1.1 - 0.2j
    assert _at(diff(diff(f)), z) == pytest.approx((-2 + 4 * z**2) * cmath.exp(-(z**2)))


def test_division_by_zero_reports_point():
    with pytest.raises(DivisionByZeroError) as info:
        evaluate(Div(ONE_EXPR, Z - 2), 2.0)
    assert info.value.point == 2


def test_pole_denominators_skip_constants():
    f = parse("exp(z)/(z - 1) + z^-2 + z/2")
    found = [str(node) for node in pole_denominators(f)]
    assert found == ["z - 1", "z"]


def test_is_constant():
    assert parse("exp(2) + pi").is_constant
    assert not parse("exp(z)").is_constant


def test_cosine_of_square_root_is_continuous_across_the_cut():
    f = parse("cos(sqrt(z))")
    assert abs(_at(f, cmath.pi**2 / 4)) <= 1e-12
    above, below = _at(f, -9.0 + 1e-12j), _at(f, -9.0 - 1e-12j)
    assert above == pytest.approx(below, rel=1e-9)
    assert above == pytest.approx(cmath.cosh(3.0), rel=1e-9)


def _random_expr(rng: np.random.Generator, depth: int) -> Expr:
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.6:
            return Z
        return Const(complex(round(rng.uniform(-1.0, 1.0), 2), round(rng.uniform(-1.0, 1.0), 2)))
    kind = int(rng.integers(7))
    if kind == 3:
        return power(_random_expr(rng, depth - 1), int(rng.integers(2, 4)))
    if kind >= 4:
        return (exp, cos, sin)[kind - 4](_random_expr(rng, depth - 1))
    builder = (add, sub, mul)[kind]
    return builder(_random_expr(rng, depth - 1), _random_expr(rng, depth - 1))


def _random_points(rng: np.random.Generator, count: int) -> list[complex]:
    radii = np.sqrt(rng.uniform(0.0, 1.0, count))
    angles = rng.uniform(0.0, 2 * cmath.pi, count)
    return [complex(r * cmath.exp(1j * t)) for r, t in zip(radii, angles)]


def _contour_derivative(f: Expr, z: complex, radius: float = 1e-2, points: int = 64) -> complex:
    total = 0j
    for k in range(points):
        w = cmath.exp(2j * cmath.pi * k / points)
        total += _at(f, z + radius * w) / w
    return total / (points * radius)


RANDOM_EXPRS = [_random_expr(np.random.default_rng(seed), 3) for seed in range(10)]


@pytest.mark.parametrize("index", range(len(RANDOM_EXPRS)))
def test_derivative_agrees_with_contour_derivative(index):
    f = RANDOM_EXPRS[index]
    derivative = diff(f)
    for z in _random_points(np.random.default_rng(100 + index), 5):
        exact = _at(derivative, z)
        if abs(_at(f, z)) > 1e4 * max(1.0, abs(exact)):
            continue
        assert abs(exact - _contour_derivative(f, z)) / max(1.0, abs(exact)) <= 1e-8


def test_evaluation_respects_sum_and_product():
    points = _random_points(np.random.default_rng(7), 10)
    for f, g in zip(RANDOM_EXPRS, RANDOM_EXPRS[1:]):
        for z in points:
            point = ExtComplex.from_complex(z)
            assert Add(f, g).evaluate(point) == f.evaluate(point) + g.evaluate(point)
            assert Mul(f, g).evaluate(point) == f.evaluate(point) * g.evaluate(point)


def test_printed_expression_parses_back_to_same_values():
    points = _random_points(np.random.default_rng(11), 10)
    for f in RANDOM_EXPRS:
        reparsed = parse(to_string(f))
        for z in points:
            assert _at(reparsed, z) == pytest.approx(_at(f, z), rel=1e-12, abs=1e-300)
