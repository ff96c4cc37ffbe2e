import math

import numpy as np
import pytest

from core.errors import EstimationError, PreconditionError
from core.parser import parse
from growth.estimators import (
    EXCEEDS_THRESHOLD,
    LogMaxModulusSamples,
    convergence_exponent,
    envelope_fit,
    growth_compare,
    hyper_order_estimate,
    hyper_order_from_samples,
    order_estimate,
    order_from_samples,
    order_lower_bound_check,
    polynomial_growth,
    sample_log_max_modulus,
    validate_grid,
)

ORDER_GRID = list(np.geomspace(10.0, 1e6, 24))


def test_validate_grid_requirements():
    with pytest.raises(PreconditionError):
        validate_grid([1.0, 10.0, 100.0])
    with pytest.raises(PreconditionError):
        validate_grid(list(np.geomspace(1.0, 50.0, 10)))
    with pytest.raises(PreconditionError):
        validate_grid([1.0, 2.0, 2.0, 5.0, 10.0, 100.0, 500.0, 1000.0])
    assert len(validate_grid(ORDER_GRID)) == 24


def test_envelope_fit_follows_upper_envelope():
    x = np.linspace(0.0, 10.0, 40)
    y = 2.0 * x + np.where(np.arange(40) % 3 == 1, -1.0, 0.0)
    slope, residual, kept = envelope_fit(x, y)
    assert slope == pytest.approx(2.0, abs=1e-9)
    assert residual == pytest.approx(0.0, abs=1e-9)
    assert kept < 40
    with pytest.raises(EstimationError):
        envelope_fit(x[:2], y[:2])


def test_polynomial_growth_detection():
    radii = list(np.geomspace(10.0, 1e6, 24))
    assert polynomial_growth(radii, [5.0 * math.log(r) for r in radii])[0]
    assert not polynomial_growth(radii, [r**0.5 for r in radii])[0]


@pytest.mark.slow
@pytest.mark.parametrize("degree", [1, 2, 3])
def test_order_of_exponential_of_monomial(degree):
    estimate = order_estimate(parse(f"exp(z^{degree})"), ORDER_GRID)
    assert estimate.value == pytest.approx(degree, abs=0.05)
    assert estimate.is_finite


@pytest.mark.slow
def test_order_of_cosine_of_square_root():
    assert order_estimate(parse("cos(sqrt(z))"), ORDER_GRID).value == pytest.approx(0.5, abs=0.05)


def test_order_of_polynomial_is_zero():
    estimate = order_estimate(parse("z^5 + 3*z"), ORDER_GRID)
    assert estimate.value == 0.0


def test_order_exceeding_threshold_is_flagged():
    radii = tuple(np.geomspace(2.0, 40.0, 12))
    samples = LogMaxModulusSamples(radii, tuple(math.exp(r) for r in radii))
    estimate = order_from_samples(samples, threshold=5.0)
    assert estimate.exceeds_threshold
    assert estimate.to_dict()["value"] == EXCEEDS_THRESHOLD
    assert not estimate.is_finite


@pytest.mark.slow
def test_hyper_order_of_iterated_exponential():
    estimate = hyper_order_estimate(parse("exp(exp(z))"), list(np.geomspace(2.0, 40.0, 16)))
    assert estimate.value == pytest.approx(1.0, abs=0.1)


def test_hyper_order_of_finite_order_function_is_zero():
    radii = tuple(np.geomspace(10.0, 1e6, 24))
    samples = LogMaxModulusSamples(radii, tuple(r**2 for r in radii))
    assert hyper_order_from_samples(samples).value == 0.0


@pytest.mark.slow
def test_convergence_exponent_of_sine():
    # 1e4 lies 3e-5 * r from the zero 3183 pi.
    estimate = convergence_exponent(parse("sin(z)"), list(np.geomspace(10.0, 1e4, 12)))
    assert estimate.value == pytest.approx(1.0, abs=0.05)


@pytest.mark.slow
def test_convergence_exponent_of_cosine_of_square_root():
    estimate = convergence_exponent(parse("cos(sqrt(z))"), list(np.geomspace(10.0, 1e5, 13)))
    assert estimate.value == pytest.approx(0.5, abs=0.05)


@pytest.mark.slow
def test_convergence_exponent_without_zeros():
    estimate = convergence_exponent(parse("exp(z)"), list(np.geomspace(10.0, 1e4, 8)))
    assert estimate.value == 0.0


def test_growth_compare_confirms_smaller_growth():
    radii = list(np.geomspace(10.0, 1e4, 12))
    comparison = growth_compare(parse("z*exp(z)"), parse("exp(z^2)"), radii)
    assert comparison.confirmed
    assert comparison.decay_exponent == pytest.approx(2.0, abs=0.1)
    assert comparison.order_f.value == pytest.approx(2.0, abs=0.05)
    same = growth_compare(parse("exp(z)"), parse("exp(z)"), radii)
    assert not same.confirmed
    assert same.orders_ordered is False


@pytest.mark.slow
def test_lower_bound_check_for_exponential():
    report = order_lower_bound_check(parse("exp(z)"), ORDER_GRID, epsilon=0.1)
    assert report.passed
    assert report.modulus_share == pytest.approx(1.0)
    assert report.characteristic_set.contains(5e5)
    assert not report.characteristic_set.contains(1e4)


def test_growth_compare_requires_smaller_order():
    radii = list(np.geomspace(10.0, 1e4, 12))
    ordered = growth_compare(parse("z^2"), parse("exp(z)"), radii)
    assert ordered.orders_ordered
    assert ordered.confirmed
    swapped = growth_compare(parse("exp(z)"), parse("z^2"), radii)
    assert swapped.orders_ordered is False
    assert not swapped.confirmed
    same_order = growth_compare(parse("exp(z/2)"), parse("exp(z)"), radii)
    assert same_order.decay_exponent == pytest.approx(1.0, abs=0.05)
    assert same_order.orders_ordered is False
    assert not same_order.confirmed
    assert same_order.to_dict()["orders_ordered"] is False


def test_order_of_double_exponential_is_truncated_and_flagged():
    samples = sample_log_max_modulus(parse("exp(exp(z))"), ORDER_GRID)
    assert samples.truncated_at == pytest.approx(ORDER_GRID[3])
    estimate = order_estimate(parse("exp(exp(z))"), ORDER_GRID)
    assert estimate.exceeds_threshold
    assert estimate.truncated_at == samples.truncated_at
    assert estimate.to_dict()["value"] == EXCEEDS_THRESHOLD


def test_truncated_samples_of_finite_order_stay_finite():
    radii = tuple(np.geomspace(10.0, 60.0, 5))
    samples = LogMaxModulusSamples(radii, tuple(r**10 for r in radii), truncated_at=80.0)
    estimate = order_from_samples(samples)
    assert estimate.value == pytest.approx(10.0, abs=0.05)
    assert estimate.truncated_at == 80.0
