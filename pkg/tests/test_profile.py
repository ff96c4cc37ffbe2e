import math

import pytest

from core.errors import UnsupportedMeromorphicError
from core.parser import parse
from growth.profile import PROFILE_HEADER, GrowthProfile, ProfileRow, build_profile, check_monotone


def test_profile_of_exponential_columns():
    radii = [1.0, 2.0, 5.0, 10.0, 50.0]
    profile = build_profile(parse("exp(z)"), radii)
    assert profile.column("logM") == pytest.approx(radii, abs=1e-9)
    assert profile.column("T") == pytest.approx([r / math.pi for r in radii], rel=1e-6)
    assert profile.warnings == []
    assert profile.column("n") == [None] * len(radii)


def test_profile_csv_header_and_rows():
    profile = build_profile(parse("exp(z)"), [3.0, 1.0, 2.0])
    lines = profile.to_csv().splitlines()
    assert lines[0] == ",".join(PROFILE_HEADER)
    assert len(lines) == 4
    first = lines[1].split(",")
    assert float(first[0]) == 1.0
    assert abs(float(first[1]) - 1.0) <= 1e-9
    assert first[4] == "" and first[5] == ""


def test_profile_with_zeros_tracks_counting_function():
    profile = build_profile(parse("sin(z)"), [2.0, 5.0, 10.0], with_zeros=True, r0=1.0)
    assert profile.column("n") == [1, 3, 7]
    counting = profile.column("N")
    assert counting[0] == 0.0
    assert counting == sorted(counting)


def test_plot_rows_are_log_log_pairs():
    profile = build_profile(parse("exp(z)"), [0.5, 1.0, 2.0, 4.0])
    rows = profile.plot_rows()
    assert len(rows) == 4
    for x, y in rows:
        assert y == pytest.approx(x, abs=1e-9)
    flat = build_profile(parse("z/4"), [1.0, 2.0, 8.0, 16.0])
    assert [round(math.exp(x)) for x, _ in flat.plot_rows()] == [8, 16]


def test_monotonicity_warnings_are_reported_not_repaired():
    rows = [
        ProfileRow(1.0, 2.0, 0.0, 1.0, None, None, 1.0),
        ProfileRow(2.0, 1.0, 0.0, 0.5, None, None, 0.5),
    ]
    problems = check_monotone(GrowthProfile("f", rows))
    assert any("logM decreases" in problem for problem in problems)
    assert any("T decreases" in problem for problem in problems)


def test_profile_rejects_meromorphic_input():
    with pytest.raises(UnsupportedMeromorphicError):
        build_profile(parse("1/(z - 1)"), [0.5, 2.0])
