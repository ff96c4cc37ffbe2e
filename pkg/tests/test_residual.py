import pytest

from core.errors import PreconditionError
from core.parser import parse
from odelab.instance import OdeInstance
from odelab.residual import residual, residual_sweep


def _eg1(forcing: str = "2") -> OdeInstance:
    return OdeInstance("eg1", parse("-exp(z)"), parse("exp(z) - 1"), parse(forcing), parse("exp(-z)"))


def test_exact_solution_has_tiny_residual():
    inst = _eg1()
    assert residual(inst, inst.f, 5.0).max_rel <= 1e-9


def test_wrong_forcing_is_detected():
    inst = _eg1("3")
    result = residual(inst, inst.f, 5.0)
    assert result.max_rel > 1e-3
    assert 0.0 <= result.theta < 6.3


def test_super_exponential_solution_in_extended_range():
    inst = OdeInstance(
        "necex",
        parse("exp(z^2)"),
        parse("exp(z)"),
        parse("(-2 + 4*z^2 + exp(z))*exp(-z^2) - 2*z"),
        parse("exp(-z^2)"),
    )
    rows = residual_sweep(inst, inst.f, [1.0, 2.0, 5.0])
    assert [row.r for row in rows] == [1.0, 2.0, 5.0]
    assert all(row.max_rel <= 1e-9 for row in rows)


def test_homogeneous_flag():
    inst = OdeInstance("h", parse("z"), parse("1"))
    assert inst.homogeneous
    assert not _eg1().homogeneous
    assert "f''" in inst.describe()


def test_too_few_samples_rejected():
    inst = _eg1()
    with pytest.raises(PreconditionError) as excinfo:
        residual(inst, inst.f, 2.0, angular_samples=16)
    assert "E202" in str(excinfo.value)


def test_vanishing_coefficient_rejected():
    with pytest.raises(PreconditionError) as excinfo:
        OdeInstance("zero", parse("exp(z)"), parse("z - z"))
    assert "E401" in str(excinfo.value)
