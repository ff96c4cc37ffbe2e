"""Extended-range complex numbers.

A value is stored as ``mantissa * 2**exponent`` with a complex double mantissa
of modulus in [0.5, 1) and an integer exponent bounded by ``EXPONENT_LIMIT``.
This keeps magnitudes such as exp(r**2) at r = 1e6 representable while every
arithmetic step stays in double precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from config.constants import (
    ERROR_DIVISION_BY_ZERO,
    ERROR_RANGE_OVERFLOW,
    ERROR_ZERO_LOG,
    EXP_ABSORPTION_GAP,
    EXPONENT_LIMIT,
)
from core.errors import DivisionByZeroError, EvaluationError, RangeOverflowError

LN2 = math.log(2.0)
INV_LN2 = 1.0 / LN2
# Cody-Waite split of ln 2; the high part has trailing zero bits so k * _LN2_HI is exact for moderate k.
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10
_CMATH_TRIG_LIMIT = 700.0


def _scale(value: complex, power: int) -> complex:
    return complex(math.ldexp(value.real, power), math.ldexp(value.imag, power))


@dataclass(frozen=True, slots=True)
class ExtComplex:
    mantissa: complex = 0j
    exponent: int = 0

    @staticmethod
    def normalized(mantissa: complex, exponent: int) -> ExtComplex:
        re, im = mantissa.real, mantissa.imag
        if not (math.isfinite(re) and math.isfinite(im)):
            raise RangeOverflowError(ERROR_RANGE_OVERFLOW.format(details="non-finite mantissa"))
        biggest = max(abs(re), abs(im))
        if biggest == 0.0:
            return ZERO
        _, shift = math.frexp(biggest)
        re, im = math.ldexp(re, -shift), math.ldexp(im, -shift)
        exponent += shift
        _, extra = math.frexp(math.hypot(re, im))
        if extra:
            re, im = math.ldexp(re, -extra), math.ldexp(im, -extra)
            exponent += extra
        if math.hypot(re, im) >= 1.0:
            re, im = re * 0.5, im * 0.5
            exponent += 1
        if abs(exponent) > EXPONENT_LIMIT:
            raise RangeOverflowError(ERROR_RANGE_OVERFLOW.format(details=f"exponent {exponent}"))
        return ExtComplex(complex(re, im), exponent)

    @classmethod
    def from_complex(cls, value: complex | float | int) -> ExtComplex:
        return cls.normalized(complex(value), 0)

    @classmethod
    def from_polar(cls, radius: float, theta: float) -> ExtComplex:
        return cls.normalized(cmath.rect(radius, theta), 0)

    @classmethod
    def power_of_two(cls, power: int) -> ExtComplex:
        return cls.normalized(0.5 + 0j, power + 1)

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0

    # -- conversions -------------------------------------------------------

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        if self.exponent > 1024:
            raise RangeOverflowError(ERROR_RANGE_OVERFLOW.format(details=f"2^{self.exponent} exceeds a double"))
        if self.exponent < -1100:
            return 0j
        try:
            return _scale(self.mantissa, self.exponent)
        except OverflowError as exc:
            raise RangeOverflowError(ERROR_RANGE_OVERFLOW.format(details=str(exc))) from exc

    def log2_abs(self) -> float:
        if self.is_zero:
            raise EvaluationError(ERROR_ZERO_LOG)
        return math.log2(abs(self.mantissa)) + self.exponent

    def ln_abs(self) -> float:
        if self.is_zero:
            raise EvaluationError(ERROR_ZERO_LOG)
        return math.log(abs(self.mantissa)) + self.exponent * LN2

    def arg(self) -> float:
        return cmath.phase(self.mantissa)

    # -- arithmetic --------------------------------------------------------

    def __neg__(self) -> ExtComplex:
        if self.is_zero:
            return ZERO
        return ExtComplex(-self.mantissa, self.exponent)

    def __add__(self, other: object) -> ExtComplex:
        rhs = _coerce(other)
        if rhs is None:
            return NotImplemented
        if self.is_zero:
            return rhs
        if rhs.is_zero:
            return self
        gap = self.exponent - rhs.exponent
        if gap > EXP_ABSORPTION_GAP:
            return self
        if gap < -EXP_ABSORPTION_GAP:
            return rhs
        if gap >= 0:
            return ExtComplex.normalized(self.mantissa + _scale(rhs.mantissa, -gap), self.exponent)
        return ExtComplex.normalized(_scale(self.mantissa, gap) + rhs.mantissa, rhs.exponent)

    __radd__ = __add__

    def __sub__(self, other: object) -> ExtComplex:
        rhs = _coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: object) -> ExtComplex:
        lhs = _coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs + (-self)

    def __mul__(self, other: object) -> ExtComplex:
        rhs = _coerce(other)
        if rhs is None:
            return NotImplemented
        if self.is_zero or rhs.is_zero:
            return ZERO
        return ExtComplex.normalized(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> ExtComplex:
        rhs = _coerce(other)
        if rhs is None:
            return NotImplemented
        if rhs.is_zero:
            raise DivisionByZeroError(ERROR_DIVISION_BY_ZERO.format(point="?"))
        if self.is_zero:
            return ZERO
        return ExtComplex.normalized(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)

    def __rtruediv__(self, other: object) -> ExtComplex:
        lhs = _coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs / self

    def pow_int(self, power: int) -> ExtComplex:
        if power == 0:
            return ONE
        if power < 0:
            return ONE / self.pow_int(-power)
        result = ONE
        base = self
        while power:
            if power & 1:
                result = result * base
            power >>= 1
            if power:
                base = base * base
        return result

    # -- elementary functions ----------------------------------------------

    def exp(self) -> ExtComplex:
        if self.is_zero:
            return ONE
        w = self.to_complex()
        x, y = w.real, w.imag
        if abs(x) * INV_LN2 > EXPONENT_LIMIT:
            raise RangeOverflowError(ERROR_RANGE_OVERFLOW.format(details=f"exp of real part {x:.6g}"))
        k = int(math.floor(x * INV_LN2 + 0.5))
        rem = (x - k * _LN2_HI) - k * _LN2_LO
        return ExtComplex.normalized(cmath.rect(math.exp(rem), y), k)

    def sqrt(self) -> ExtComplex:
        """Principal square root, argument in (-pi/2, pi/2]."""
        if self.is_zero:
            return ZERO
        mantissa, exponent = self.mantissa, self.exponent
        if exponent % 2:
            mantissa *= 2
            exponent -= 1
        # +0.0 turns a negative zero imaginary part positive so the cut maps to +i.
        mantissa = complex(mantissa.real, mantissa.imag + 0.0)
        return ExtComplex.normalized(cmath.sqrt(mantissa), exponent // 2)

    def cos(self) -> ExtComplex:
        small = self._moderate()
        if small is not None:
            return ExtComplex.from_complex(cmath.cos(small))
        iw = self * I
        return (iw.exp() + (-iw).exp()) * HALF

    def sin(self) -> ExtComplex:
        small = self._moderate()
        if small is not None:
            return ExtComplex.from_complex(cmath.sin(small))
        iw = self * I
        return (iw.exp() - (-iw).exp()) * NEG_HALF_I

    def _moderate(self) -> complex | None:
        if self.exponent > 60:
            return None
        w = self.to_complex()
        if abs(w.imag) >= _CMATH_TRIG_LIMIT:
            return None
        return w

    def __repr__(self) -> str:
        return f"ExtComplex({self.mantissa!r}, {self.exponent})"


def _coerce(value: object) -> ExtComplex | None:
    if isinstance(value, ExtComplex):
        return value
    if isinstance(value, (int, float, complex)):
        return ExtComplex.from_complex(value)
    return None


def log2_abs(value: ExtComplex) -> float:
    return value.log2_abs()


ZERO = ExtComplex(0j, 0)
ONE = ExtComplex(0.5 + 0j, 1)
HALF = ExtComplex(0.5 + 0j, 0)
I = ExtComplex(0.5j, 1)
NEG_HALF_I = ExtComplex(-0.5j, 0)
