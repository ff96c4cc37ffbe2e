"""Expression trees for entire (and simple meromorphic) functions of z.

Nodes are immutable dataclasses. Builders such as :func:`add` and :func:`mul`
fold constants and drop neutral elements; nothing else is simplified.
"""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from config.constants import ERROR_DIVISION_BY_ZERO
from core.errors import DivisionByZeroError, RangeOverflowError
from core.ext_complex import ExtComplex

logger = logging.getLogger("growth_lab.expr")

_PREC_SUM = 1
_PREC_PRODUCT = 2
_PREC_UNARY = 3
_PREC_ATOM = 4


@lru_cache(maxsize=4096)
def _ext_constant(value: complex) -> ExtComplex:
    return ExtComplex.from_complex(value)


def _describe_point(z: ExtComplex) -> str:
    try:
        return repr(z.to_complex())
    except RangeOverflowError:
        return repr(z)


class Expr:
    """Base node. Subclasses implement ``_eval``, ``derivative`` and ``_render``."""

    __slots__ = ()

    def evaluate(self, z: ExtComplex) -> ExtComplex:
        return self._eval(z)

    def _eval(self, z: ExtComplex) -> ExtComplex:
        raise NotImplementedError

    def derivative(self) -> Expr:
        raise NotImplementedError

    def children(self) -> tuple[Expr, ...]:
        return ()

    def _render(self) -> tuple[str, int]:
        raise NotImplementedError

    def walk(self) -> Iterator[Expr]:
        yield self
        for child in self.children():
            yield from child.walk()

    @property
    def is_constant(self) -> bool:
        return not any(isinstance(node, Variable) for node in self.walk())

    def __str__(self) -> str:
        return self._render()[0]

    def __add__(self, other: object) -> Expr:
        return add(self, as_expr(other))

    def __radd__(self, other: object) -> Expr:
        return add(as_expr(other), self)

    def __sub__(self, other: object) -> Expr:
        return sub(self, as_expr(other))

    def __rsub__(self, other: object) -> Expr:
        return sub(as_expr(other), self)

    def __mul__(self, other: object) -> Expr:
        return mul(self, as_expr(other))

    def __rmul__(self, other: object) -> Expr:
        return mul(as_expr(other), self)

    def __truediv__(self, other: object) -> Expr:
        return div(self, as_expr(other))

    def __rtruediv__(self, other: object) -> Expr:
        return div(as_expr(other), self)

    def __pow__(self, exponent: int) -> Expr:
        return power(self, exponent)

    def __neg__(self) -> Expr:
        return neg(self)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: complex

    def _eval(self, z: ExtComplex) -> ExtComplex:
        return _ext_constant(complex(self.value))

    def derivative(self) -> Expr:
        return ZERO_EXPR

    def _render(self) -> tuple[str, int]:
        return _render_constant(complex(self.value))


@dataclass(frozen=True, slots=True)
class Variable(Expr):
    def _eval(self, z: ExtComplex) -> ExtComplex:
        return z

    def derivative(self) -> Expr:
        return ONE_EXPR

    def _render(self) -> tuple[str, int]:
        return "z", _PREC_ATOM


@dataclass(frozen=True, slots=True)
class Add(Expr):
    left: Expr
    right: Expr

    def _eval(self, z: ExtComplex) -> ExtComplex:
        return self.left._eval(z) + self.right._eval(z)

    def derivative(self) -> Expr:
        return add(self.left.derivative(), self.right.derivative())

    def children(self) -> tuple[Expr, ...]:
        return (self.left, self.right)

    def _render(self) -> tuple[str, int]:
        return f"{_wrap(self.left, _PREC_SUM)} + {_wrap(self.right, _PREC_SUM + 1)}", _PREC_SUM


@dataclass(frozen=True, slots=True)
class Sub(Expr):
    left: Expr
    right: Expr

    def _eval(self, z: ExtComplex) -> ExtComplex:
        return self.left._eval(z) - self.right._eval(z)

    def derivative(self) -> Expr:
        return sub(self.left.derivative(), self.right.derivative())

    def children(self) -> tuple[Expr, ...]:
        return (self.left, self.right)

    def _render(self) -> tuple[str, int]:
        if self.left == ZERO_EXPR:
            return f"-{_wrap(self.right, _PREC_UNARY)}", _PREC_UNARY
        return f"{_wrap(self.left, _PREC_SUM)} - {_wrap(self.right, _PREC_SUM + 1)}", _PREC_SUM


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    left: Expr
    right: Expr

    def _eval(self, z: ExtComplex) -> ExtComplex:
        return self.left._eval(z) * self.right._eval(z)

    def derivative(self) -> Expr:
        return add(mul(self.left.derivative(), self.right), mul(self.left, self.right.derivative()))

    def children(self) -> tuple[Expr, ...]:
        return (self.left, self.right)

    def _render(self) -> tuple[str, int]:
        return f"{_wrap(self.left, _PREC_PRODUCT)}*{_wrap(self.right, _PREC_PRODUCT + 1)}", _PREC_PRODUCT


@dataclass(frozen=True, slots=True)
class Div(Expr):
    left: Expr
    right: Expr

    def _eval(self, z: ExtComplex) -> ExtComplex:
        denominator = self.right._eval(z)
        if denominator.is_zero:
            raise DivisionByZeroError(ERROR_DIVISION_BY_ZERO.format(point=_describe_point(z)), point=_safe_point(z))
        return self.left._eval(z) / denominator

    def derivative(self) -> Expr:
        numerator = sub(mul(self.left.derivative(), self.right), mul(self.left, self.right.derivative()))
        return div(numerator, power(self.right, 2))

    def children(self) -> tuple[Expr, ...]:
        return (self.left, self.right)

    def _render(self) -> tuple[str, int]:
        return f"{_wrap(self.left, _PREC_PRODUCT)}/{_wrap(self.right, _PREC_PRODUCT + 1)}", _PREC_PRODUCT


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def _eval(self, z: ExtComplex) -> ExtComplex:
        value = self.base._eval(z)
        if self.exponent < 0 and value.is_zero:
            raise DivisionByZeroError(ERROR_DIVISION_BY_ZERO.format(point=_describe_point(z)), point=_safe_point(z))
        return value.pow_int(self.exponent)

    def derivative(self) -> Expr:
        outer = mul(Const(complex(self.exponent)), power(self.base, self.exponent - 1))
        return mul(outer, self.base.derivative())

    def children(self) -> tuple[Expr, ...]:
        return (self.base,)

    def _render(self) -> tuple[str, int]:
        return f"{_wrap(self.base, _PREC_ATOM)}^{self.exponent}", _PREC_UNARY


@dataclass(frozen=True, slots=True)
class Exp(Expr):
    arg: Expr

    def _eval(self, z: ExtComplex) -> ExtComplex:
        return self.arg._eval(z).exp()

    def derivative(self) -> Expr:
        return mul(self, self.arg.derivative())

    def children(self) -> tuple[Expr, ...]:
        return (self.arg,)

    def _render(self) -> tuple[str, int]:
        return f"exp({self.arg})", _PREC_ATOM


@dataclass(frozen=True, slots=True)
class Cos(Expr):
    arg: Expr

    def _eval(self, z: ExtComplex) -> ExtComplex:
        return self.arg._eval(z).cos()

    def derivative(self) -> Expr:
        return mul(neg(Sin(self.arg)), self.arg.derivative())

    def children(self) -> tuple[Expr, ...]:
        return (self.arg,)

    def _render(self) -> tuple[str, int]:
        return f"cos({self.arg})", _PREC_ATOM


@dataclass(frozen=True, slots=True)
class Sin(Expr):
    arg: Expr

    def _eval(self, z: ExtComplex) -> ExtComplex:
        return self.arg._eval(z).sin()

    def derivative(self) -> Expr:
        return mul(Cos(self.arg), self.arg.derivative())

    def children(self) -> tuple[Expr, ...]:
        return (self.arg,)

    def _render(self) -> tuple[str, int]:
        return f"sin({self.arg})", _PREC_ATOM


@dataclass(frozen=True, slots=True)
class Sqrt(Expr):
    """Principal square root; the branch cut lies on the negative real axis."""

    arg: Expr

    def _eval(self, z: ExtComplex) -> ExtComplex:
        return self.arg._eval(z).sqrt()

    def derivative(self) -> Expr:
        return div(self.arg.derivative(), mul(Const(2 + 0j), self))

    def children(self) -> tuple[Expr, ...]:
        return (self.arg,)

    def _render(self) -> tuple[str, int]:
        return f"sqrt({self.arg})", _PREC_ATOM


Z = Variable()
ZERO_EXPR = Const(0j)
ONE_EXPR = Const(1 + 0j)


def _safe_point(z: ExtComplex) -> complex | None:
    try:
        return z.to_complex()
    except RangeOverflowError:
        return None


def _wrap(node: Expr, minimum: int) -> str:
    text, precedence = node._render()
    return text if precedence >= minimum else f"({text})"


def _format_real(value: float) -> str:
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def _render_constant(value: complex) -> tuple[str, int]:
    re, im = value.real, value.imag
    if im == 0:
        text = _format_real(re)
        return text, _PREC_UNARY if text.startswith("-") else _PREC_ATOM
    if im == 1 and re == 0:
        return "i", _PREC_ATOM
    imaginary = "i" if im == 1 else f"{_format_real(im)}*i"
    if re == 0:
        return imaginary, _PREC_PRODUCT if "*" in imaginary else _PREC_ATOM
    if im < 0:
        return f"{_format_real(re)} - {_format_real(-im)}*i", _PREC_SUM
    return f"{_format_real(re)} + {imaginary}", _PREC_SUM


def as_expr(value: object) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float, complex)):
        return Const(complex(value))
    raise TypeError(f"cannot build an expression from {type(value).__name__}")


def _const_value(node: Expr) -> complex | None:
    return complex(node.value) if isinstance(node, Const) else None


def _folded(value: complex) -> Expr | None:
    if cmath.isfinite(value):
        return Const(value)
    return None


def add(left: Expr, right: Expr) -> Expr:
    a, b = _const_value(left), _const_value(right)
    if a is not None and b is not None:
        return Const(a + b)
    if a == 0:
        return right
    if b == 0:
        return left
    return Add(left, right)


def sub(left: Expr, right: Expr) -> Expr:
    a, b = _const_value(left), _const_value(right)
    if a is not None and b is not None:
        return Const(a - b)
    if b == 0:
        return left
    return Sub(left, right)


def neg(operand: Expr) -> Expr:
    return sub(ZERO_EXPR, operand)


def mul(left: Expr, right: Expr) -> Expr:
    a, b = _const_value(left), _const_value(right)
    if a is not None and b is not None:
        return Const(a * b)
    if a == 0 or b == 0:
        return ZERO_EXPR
    if a == 1:
        return right
    if b == 1:
        return left
    return Mul(left, right)


def div(left: Expr, right: Expr) -> Expr:
    a, b = _const_value(left), _const_value(right)
    if a is not None and b is not None and b != 0:
        return Const(a / b)
    if a == 0 and b != 0:
        return ZERO_EXPR
    if b == 1:
        return left
    return Div(left, right)


def power(base: Expr, exponent: int) -> Expr:
    if exponent == 0:
        return ONE_EXPR
    if exponent == 1:
        return base
    value = _const_value(base)
    if value is not None and (value != 0 or exponent > 0):
        folded = _folded(value**exponent)
        if folded is not None:
            return folded
    return Pow(base, exponent)


def exp(arg: Expr) -> Expr:
    value = _const_value(arg)
    if value is not None and value.real < 700:
        return Const(cmath.exp(value))
    return Exp(arg)


def cos(arg: Expr) -> Expr:
    value = _const_value(arg)
    if value is not None and abs(value.imag) < 700:
        return Const(cmath.cos(value))
    return Cos(arg)


def sin(arg: Expr) -> Expr:
    value = _const_value(arg)
    if value is not None and abs(value.imag) < 700:
        return Const(cmath.sin(value))
    return Sin(arg)


def sqrt(arg: Expr) -> Expr:
    value = _const_value(arg)
    if value is not None:
        return Const(ExtComplex.from_complex(value).sqrt().to_complex())
    return Sqrt(arg)


def evaluate(f: Expr, z: ExtComplex | complex | float) -> ExtComplex:
    point = z if isinstance(z, ExtComplex) else ExtComplex.from_complex(z)
    return f.evaluate(point)


def diff(f: Expr) -> Expr:
    derivative = f.derivative()
    logger.debug("d/dz %s = %s", f, derivative)
    return derivative


def to_string(f: Expr) -> str:
    return str(f)


def pole_denominators(f: Expr) -> list[Expr]:
    """Denominators of every division and bases of negative powers, outermost first."""
    found: list[Expr] = []
    for node in f.walk():
        if isinstance(node, Div) and not node.right.is_constant:
            found.append(node.right)
        elif isinstance(node, Pow) and node.exponent < 0 and not node.base.is_constant:
            found.append(node.base)
    return found


def contains_div(f: Expr) -> bool:
    return bool(pole_denominators(f))
