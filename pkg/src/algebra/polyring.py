"""Homogeneous polynomials in x, y, z over Q(zeta_n)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from src.algebra.scalars import FieldContext, Number, Scalar


class Monomial(NamedTuple):
    """x^a y^b z^c."""

    a: int
    b: int
    c: int

    @property
    def degree(self) -> int:
        return self.a + self.b + self.c

    def __mul__(self, other: "Monomial") -> "Monomial":  # type: ignore[override]
        return Monomial(self.a + other.a, self.b + other.b, self.c + other.c)


@lru_cache(maxsize=None)
def monomials(k: int) -> Tuple[Monomial, ...]:
    """Degree-k monomials in graded lex order (x > y > z)."""
    if k < 0:
        return ()
    return tuple(Monomial(a, b, k - a - b) for a in range(k, -1, -1) for b in range(k - a, -1, -1))


@lru_cache(maxsize=None)
def monomial_index(k: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials(k))}


def dim_graded_piece(k: int) -> int:
    """dim S_k = C(k+2, 2), zero for negative k."""
    return (k + 1) * (k + 2) // 2 if k >= 0 else 0


@dataclass(frozen=True)
class GradedPoly:
    """A homogeneous polynomial; the zero polynomial keeps its nominal degree."""

    context: FieldContext
    degree: int
    terms: Tuple[Tuple[Monomial, Scalar], ...]

    @classmethod
    def from_terms(cls, context: FieldContext, terms: Mapping[Monomial, Scalar], degree: Optional[int] = None) -> "GradedPoly":
        cleaned = {m: c for m, c in terms.items() if not c.is_zero()}
        degrees = {m.degree for m in cleaned}
        if len(degrees) > 1:
            raise ValueError(f"polynomial is not homogeneous: degrees {sorted(degrees)}")
        if degrees:
            (found,) = degrees
            if degree is not None and degree != found:
                raise ValueError(f"expected degree {degree}, found {found}")
            degree = found
        if degree is None:
            raise ValueError("zero polynomial needs an explicit degree")
        index = monomial_index(degree) if degree >= 0 else {}
        ordered = sorted(cleaned.items(), key=lambda item: index.get(item[0], 0))
        return cls(context, degree, tuple(ordered))

    @property
    def as_dict(self) -> Dict[Monomial, Scalar]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "GradedPoly") -> "GradedPoly":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.degree != self.degree:
            raise ValueError("cannot add polynomials of different degree")
        total = self.as_dict
        for m, c in other.terms:
            total[m] = total[m] + c if m in total else c
        return GradedPoly.from_terms(self.context, total, self.degree)

    def __neg__(self) -> "GradedPoly":
        return GradedPoly(self.context, self.degree, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "GradedPoly") -> "GradedPoly":
        return self + (-other)

    def scale(self, factor: Scalar | Number) -> "GradedPoly":
        return GradedPoly.from_terms(self.context, {m: c * factor for m, c in self.terms}, self.degree)

    def __mul__(self, other: "GradedPoly") -> "GradedPoly":
        product: Dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = m1 * m2
                value = c1 * c2
                product[m] = product[m] + value if m in product else value
        return GradedPoly.from_terms(self.context, product, self.degree + other.degree)

    def times_monomial(self, monomial: Monomial) -> Dict[Monomial, Scalar]:
        return {m * monomial: c for m, c in self.terms}

    def partial(self, variable: int) -> "GradedPoly":
        """Derivative in x (0), y (1) or z (2)."""
        result: Dict[Monomial, Scalar] = {}
        for m, c in self.terms:
            exponent = m[variable]
            if exponent == 0:
                continue
            lowered = list(m)
            lowered[variable] -= 1
            result[Monomial(*lowered)] = c * exponent
        return GradedPoly.from_terms(self.context, result, self.degree - 1)

    def partials(self) -> Tuple["GradedPoly", "GradedPoly", "GradedPoly"]:
        return self.partial(0), self.partial(1), self.partial(2)

    def euler_holds(self) -> bool:
        """x f_x + y f_y + z f_z = deg(f) f."""
        fx, fy, fz = self.partials()
        total: Dict[Monomial, Scalar] = {}
        for var, part in ((Monomial(1, 0, 0), fx), (Monomial(0, 1, 0), fy), (Monomial(0, 0, 1), fz)):
            for m, c in part.times_monomial(var).items():
                total[m] = total[m] + c if m in total else c
        lhs = GradedPoly.from_terms(self.context, total, self.degree)
        return (lhs - self.scale(self.degree)).is_zero()

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for m, c in self.terms:
            factors = [f"{v}^{e}" if e > 1 else v for v, e in zip("xyz", m) if e]
            coefficient = str(c)
            if " " in coefficient or coefficient.startswith("-"):
                coefficient = f"({coefficient})"
            pieces.append("*".join([coefficient] + factors) if factors else coefficient)
        return " + ".join(pieces)


def fermat(d: int, context: FieldContext) -> GradedPoly:
    """x^d + y^d + z^d."""
    one = context.one
    return GradedPoly.from_terms(context, {Monomial(d, 0, 0): one, Monomial(0, d, 0): one, Monomial(0, 0, d): one})


@dataclass(frozen=True)
class LinearForm:
    """The line a x + b y + c z = 0."""

    a: Scalar
    b: Scalar
    c: Scalar

    @property
    def coefficients(self) -> Tuple[Scalar, Scalar, Scalar]:
        return (self.a, self.b, self.c)

    @property
    def context(self) -> FieldContext:
        return self.a.context

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.coefficients)

    def as_poly(self) -> GradedPoly:
        return GradedPoly.from_terms(
            self.context,
            {Monomial(1, 0, 0): self.a, Monomial(0, 1, 0): self.b, Monomial(0, 0, 1): self.c},
            1,
        )

    def normalized(self) -> "LinearForm":
        return LinearForm(*normalize_projective(self.coefficients))

    def transform(self, matrix: Sequence[Sequence[Scalar]]) -> "LinearForm":
        """Pull back along the coordinate change v -> M v; coefficients become M^T (a, b, c)."""
        coefficients = self.coefficients
        new = tuple(
            sum((matrix[i][j] * coefficients[i] for i in range(3)), self.context.zero) for j in range(3)
        )
        return LinearForm(*new)

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


def normalize_projective(vector: Sequence[Scalar]) -> Tuple[Scalar, ...]:
    """Scale so the first nonzero coordinate is 1."""
    for value in vector:
        if not value.is_zero():
            inverse = value.inverse()
            return tuple(v * inverse for v in vector)
    raise ValueError("zero vector has no projective class")


def cross(u: Sequence[Scalar], v: Sequence[Scalar]) -> Tuple[Scalar, Scalar, Scalar]:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def product_of_forms(forms: Iterable[LinearForm], context: FieldContext) -> GradedPoly:
    result = GradedPoly.from_terms(context, {Monomial(0, 0, 0): context.one}, 0)
    for form in forms:
        result = result * form.as_poly()
    return result


def polynomial_from_terms(context: FieldContext, terms: Iterable[Tuple[Monomial, Scalar]]) -> GradedPoly:
    """Sum terms that may repeat a monomial."""
    total: Dict[Monomial, Scalar] = {}
    for m, c in terms:
        total[m] = total[m] + c if m in total else c
    if not total:
        raise ValueError("polynomial has no terms")
    degrees = {m.degree for m in total}
    if len(degrees) > 1:
        raise ValueError(f"polynomial is not homogeneous: degrees {sorted(degrees)}")
    return GradedPoly.from_terms(context, total, degrees.pop())


def monomial_columns(poly: GradedPoly, shift: int) -> List[Dict[int, Scalar]]:
    """Columns mono * poly for every monomial of degree `shift`, in the basis of S_{deg+shift}."""
    index = monomial_index(poly.degree + shift)
    return [{index[m]: c for m, c in poly.times_monomial(mono).items()} for mono in monomials(shift)]
