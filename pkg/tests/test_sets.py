import math

import numpy as np
import pytest

from core.errors import PreconditionError
from radial.sets import (
    RadialSet,
    complement_within,
    from_grid_mask,
    intersect,
    log_density_profile,
    log_measure,
    squaring_construction,
    tail_density,
    union,
)


def _random_family(rng: np.random.Generator) -> RadialSet:
    intervals = []
    for _ in range(int(rng.integers(0, 7))):
        lo = math.exp(rng.uniform(0.0, 12.0))
        intervals.append((lo, lo * math.exp(rng.uniform(0.0, 3.0))))
    return RadialSet(tuple(intervals))


def test_intervals_are_merged_and_sorted():
    radial_set = RadialSet(((10.0, 20.0), (1.0, 2.0), (15.0, 30.0), (2.0, 3.0)))
    assert radial_set.intervals == ((1.0, 3.0), (10.0, 30.0))
    assert radial_set.contains(25.0)
    assert not radial_set.contains(5.0)
    assert RadialSet.from_dict(radial_set.to_dict()) == radial_set


def test_invalid_intervals_raise():
    with pytest.raises(PreconditionError):
        RadialSet(((5.0, 1.0),))
    with pytest.raises(PreconditionError):
        RadialSet(((0.0, 1.0),))


def test_log_measure_of_single_interval():
    assert log_measure(RadialSet(((2.0, 2.0 * math.e**3),))) == pytest.approx(3.0, abs=1e-12)
    assert log_measure(RadialSet.empty()) == 0.0


def test_measure_is_additive_over_random_families():
    rng = np.random.default_rng(20240611)
    for _ in range(1000):
        first, second = _random_family(rng), _random_family(rng)
        lhs = log_measure(union(first, second)) + log_measure(intersect(first, second))
        rhs = log_measure(first) + log_measure(second)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_density_profiles_satisfy_inclusion_exclusion():
    rng = np.random.default_rng(7)
    grid = [math.exp(k / 2.0) for k in range(1, 31)]
    for _ in range(1000):
        first, second = _random_family(rng), _random_family(rng)
        joined = log_density_profile(union(first, second), grid)
        common = log_density_profile(intersect(first, second), grid)
        a, b = log_density_profile(first, grid), log_density_profile(second, grid)
        for index in range(len(grid)):
            assert joined[index] + common[index] == pytest.approx(a[index] + b[index], abs=1e-12)
            assert joined[index] <= a[index] + b[index] + 1e-12
            assert common[index] >= a[index] + b[index] - 1.0 - 1e-12


def test_complement_within_partitions_the_window():
    rng = np.random.default_rng(3)
    for _ in range(200):
        radial_set = _random_family(rng)
        inside = log_measure(intersect(radial_set, RadialSet(((5.0, 5000.0),))))
        outside = log_measure(complement_within(radial_set, 5.0, 5000.0))
        assert inside + outside == pytest.approx(math.log(1000.0), abs=1e-12)


def test_from_grid_mask_uses_grid_cells():
    radial_set = from_grid_mask([1.0, 2.0, 4.0, 8.0], [True, True, False, True])
    assert radial_set.intervals == ((1.0, 4.0), (8.0, 8.0))
    with pytest.raises(PreconditionError):
        from_grid_mask([1.0, 2.0], [True])


def test_density_profile_requires_radii_above_one():
    with pytest.raises(PreconditionError):
        log_density_profile(RadialSet.empty(), [0.5, 2.0])


def test_squaring_construction_has_full_density():
    radial_set = squaring_construction(5)
    assert radial_set.intervals == ((2.0, 2.0**64),)
    grid = [2.0**k for k in range(2, 64)]
    profile = log_density_profile(radial_set, grid)
    assert profile == sorted(profile)
    upper, lower = tail_density(profile)
    assert lower >= 0.95
    assert upper <= 1.0


def test_faster_construction_oscillates():
    radial_set = squaring_construction(3, growth=3)
    assert len(radial_set) == 4
    profile = log_density_profile(radial_set, [2.0**k for k in range(2, 55)])
    upper, lower = tail_density(profile)
    assert upper - lower > 0.1


def test_squaring_construction_overflow():
    with pytest.raises(PreconditionError):
        squaring_construction(10)
