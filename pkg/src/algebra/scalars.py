"""Exact arithmetic over Q and the cyclotomic fields Q(zeta_n).

Elements of Q(zeta_n) are sympy ``ANP`` values: dense polynomials in z over
QQ kept reduced modulo the n-th cyclotomic polynomial. Orders 1 and 2 give
Q itself and hold a plain ``Fraction``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from tokenize import TokenError
from typing import Any, Iterable, List, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import parse_expr
from sympy.polys.densearith import dup_rem
from sympy.polys.densebasic import dup_strip
from sympy.polys.polyclasses import ANP
from sympy.polys.polyerrors import CoercionFailed, NotInvertible, PolynomialError

from src.common.errors import FieldMismatchError, ParseError

Rational = Fraction
Number = Union[int, Fraction]

QQ = sympy.QQ
_Z = sympy.Symbol("z")
_LITERAL = re.compile(r"^[0-9z+\-*/^() ]+$")


@lru_cache(maxsize=None)
def _cyclotomic_coefficients(n: int) -> Tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    poly = sympy.cyclotomic_poly(n, _Z, polys=True)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def _to_fraction(value: Any) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _to_qq(value: Fraction) -> Any:
    return QQ(value.numerator, value.denominator)


@dataclass(frozen=True)
class FieldContext:
    """The field Q(zeta_n); n = 1 (and n = 2) give Q itself."""

    order: int
    minimal_polynomial: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.minimal_polynomial) - 1

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def modulus(self) -> List[Any]:
        """Phi_n as a dense QQ list, leading coefficient first."""
        return [QQ(c) for c in reversed(self.minimal_polynomial)]

    def scalar(self, value: Number) -> "Scalar":
        value = Fraction(value)
        if self.is_rational:
            return Scalar(self, value)
        return Scalar(self, ANP([_to_qq(value)], self.modulus, QQ))

    @property
    def zero(self) -> "Scalar":
        return self.scalar(0)

    @property
    def one(self) -> "Scalar":
        return self.scalar(1)

    def zeta_power(self, k: int) -> "Scalar":
        """zeta_n ** k for any integer k."""
        k %= self.order
        return self.from_coefficients([0] * k + [1])

    @property
    def zeta(self) -> "Scalar":
        return self.zeta_power(1)

    def from_coefficients(self, coefficients: Iterable[Number]) -> "Scalar":
        """Build an element from power-basis coordinates of any length (reduced mod Phi_n)."""
        values = [Fraction(c) for c in coefficients]
        if self.is_rational:
            # Q(zeta_1) = Q(zeta_2) = Q with z the root of the linear Phi_n
            root = Fraction(-self.minimal_polynomial[0])
            return Scalar(self, sum((c * root**i for i, c in enumerate(values)), Fraction(0)))
        dense = dup_strip([_to_qq(c) for c in reversed(values)])
        modulus = self.modulus
        return Scalar(self, ANP(dup_rem(dense, modulus, QQ), modulus, QQ))

    def parse(self, literal: str) -> "Scalar":
        return parse_scalar(literal, self)


@lru_cache(maxsize=None)
def cyclotomic_context(n: int) -> FieldContext:
    if n < 1:
        raise ValueError(f"cyclotomic order must be positive, got {n}")
    return FieldContext(order=n, minimal_polynomial=_cyclotomic_coefficients(n))


@dataclass(frozen=True, eq=False)
class Scalar:
    """An element of Q(zeta_n): a Fraction when n <= 2, an ANP otherwise."""

    context: FieldContext
    value: Union[Fraction, ANP]

    @cached_property
    def coefficients(self) -> Tuple[Fraction, ...]:
        """Power-basis coordinates, constant term first, length phi(n)."""
        if isinstance(self.value, Fraction):
            return (self.value,)
        dense = [_to_fraction(c) for c in reversed(self.value.to_list())]
        return tuple(dense + [Fraction(0)] * (self.context.degree - len(dense)))

    def _coerce(self, other: Union["Scalar", Number]) -> "Scalar":
        if isinstance(other, Scalar):
            if other.context.order != self.context.order:
                raise FieldMismatchError(
                    "scalars from different cyclotomic fields",
                    left=self.context.order,
                    right=other.context.order,
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.context.scalar(other)
        return NotImplemented  # type: ignore[return-value]

    def _wrap(self, value: Union[Fraction, ANP]) -> "Scalar":
        return Scalar(self.context, value)

    def is_zero(self) -> bool:
        return not self.value

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        if isinstance(other, Scalar) and other.context.order != self.context.order:
            return False
        o = self._coerce(other)
        return self.coefficients == o.coefficients

    def __hash__(self) -> int:
        return hash((self.context.order, self.coefficients))

    def __add__(self, other: Union["Scalar", Number]) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.value + o.value)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return self._wrap(-self.value)

    def __sub__(self, other: Union["Scalar", Number]) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.value - o.value)

    def __rsub__(self, other: Number) -> "Scalar":
        return self._coerce(other) - self

    def __mul__(self, other: Union["Scalar", Number]) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.value * o.value)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_n)")
        if isinstance(self.value, Fraction):
            return self._wrap(1 / self.value)
        try:
            return self._wrap(self.value**-1)
        except NotInvertible as e:
            raise ZeroDivisionError(str(e)) from e

    def __truediv__(self, other: Union["Scalar", Number]) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Number) -> "Scalar":
        return self._coerce(other) / self

    def __pow__(self, exponent: int) -> "Scalar":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return self._wrap(self.value**exponent)

    def as_rational(self) -> Fraction:
        """The value as a Fraction; only valid when the element lies in Q."""
        if any(self.coefficients[1:]):
            raise ValueError(f"{self} is not rational")
        return self.coefficients[0]

    def residue(self, prime: int, root: int) -> int:
        """Image in F_p under zeta_n -> root (root of order n mod p)."""
        total = 0
        power = 1
        for c in self.coefficients:
            if c:
                if c.denominator % prime == 0:
                    raise ZeroDivisionError(f"denominator divisible by {prime}")
                total += c.numerator * pow(c.denominator, -1, prime) * power
            power = power * root % prime
        return total % prime

    def __str__(self) -> str:
        coefficients = self.coefficients
        if not any(coefficients[1:]):
            return str(coefficients[0])
        parts = []
        for i, c in enumerate(coefficients):
            if not c:
                continue
            coefficient = f"({c})" if (c < 0 or c.denominator != 1) else str(c)
            if i == 0:
                parts.append(coefficient)
            elif i == 1:
                parts.append(f"{coefficient}*z")
            else:
                parts.append(f"{coefficient}*z^{i}")
        return " + ".join(parts)


def parse_scalar(literal: str, context: FieldContext) -> Scalar:
    """Parse "2/3", "-1" or a polynomial in z such as "1 - z^2/3"."""
    text = str(literal).strip()
    if not text or not _LITERAL.match(text):
        raise ParseError(f"malformed scalar literal {literal!r}")
    try:
        expr = parse_expr(text.replace("^", "**"), local_dict={"z": _Z})
        poly = sympy.Poly(expr, _Z, domain=sympy.QQ)
    except (
        SyntaxError,
        TokenError,
        NameError,
        TypeError,
        ValueError,
        ZeroDivisionError,
        PolynomialError,
        CoercionFailed,
        sympy.SympifyError,
    ) as e:
        raise ParseError(f"malformed scalar literal {literal!r}: {e}") from e
    coefficients = [_to_fraction(c) for c in reversed(poly.all_coeffs())]
    return context.from_coefficients(coefficients)
