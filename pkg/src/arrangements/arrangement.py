"""Line arrangements: input parsing, intersection lattice and combinatorial invariants."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import structlog

from src.algebra.polyring import (
    GradedPoly,
    LinearForm,
    Monomial,
    cross,
    normalize_projective,
    polynomial_from_terms,
    product_of_forms,
)
from src.algebra.scalars import FieldContext, Scalar, cyclotomic_context, parse_scalar
from src.common.errors import InternalError, NonReducedError, ParseError, UnsupportedInputError

logger = structlog.get_logger()

_TOP_LEVEL_KEYS = {"cyclotomic_order", "lines", "polynomial", "lattice", "assume", "name"}


class LatticeKind(str, Enum):
    GENERIC = "GENERIC"
    L = "L"
    LHAT = "LHAT"
    DOUBLE_TRIPLE_ONLY = "DOUBLE_TRIPLE_ONLY"
    PENCIL = "PENCIL"
    OTHER = "OTHER"


@dataclass(frozen=True)
class LatticeType:
    kind: LatticeKind
    params: Tuple[int, ...] = ()

    def __str__(self) -> str:
        if self.params:
            return f"{self.kind.value}({','.join(str(p) for p in self.params)})"
        return self.kind.value


@dataclass(frozen=True)
class Assumptions:
    h1_minus: Optional[int] = None
    rational_components: bool = False


@dataclass(frozen=True)
class IntersectionPoint:
    point: Tuple[Scalar, Scalar, Scalar]
    incident_lines: Tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.incident_lines)


@dataclass(frozen=True)
class LatticeSummary:
    """The combinatorial side of an arrangement: nu_j counts for j = 2..d and derived invariants."""

    d: int
    nu: Dict[int, int]
    tau_comb: int
    m_max: int
    essential: bool
    chi_curve: int
    chi_complement: int
    type_tag: LatticeType = field(default_factory=lambda: LatticeType(LatticeKind.OTHER))

    def nu_j(self, j: int) -> int:
        return self.nu.get(j, 0)

    def high_points(self) -> List[int]:
        """Multiplicities of the points of multiplicity >= 3, largest first."""
        return sorted((j for j, count in self.nu.items() if j >= 3 for _ in range(count)), reverse=True)


@dataclass(frozen=True)
class HirzebruchResult:
    applicable: bool
    holds: Optional[bool]
    slack: Optional[Fraction]


@dataclass(frozen=True)
class LatticeRelations:
    sigma: int
    nu2_identity_holds: bool
    tau_identity_holds: bool


@dataclass(frozen=True)
class Arrangement:
    """d lines (or a squarefree degree-d form) together with provenance flags."""

    context: FieldContext
    lines: Tuple[LinearForm, ...]
    polynomial: GradedPoly
    declared_lattice: Optional[LatticeSummary] = None
    assumptions: Assumptions = Assumptions()
    source: str = "<input>"

    @property
    def d(self) -> int:
        return self.polynomial.degree

    @property
    def has_lines(self) -> bool:
        return bool(self.lines)

    @classmethod
    def from_lines(
        cls,
        lines: Sequence[LinearForm],
        context: FieldContext,
        source: str = "<input>",
        assumptions: Optional[Assumptions] = None,
    ) -> "Arrangement":
        lines = tuple(lines)
        if not lines:
            raise ParseError("an arrangement needs at least one line")
        seen: Dict[Tuple[Tuple[Fraction, ...], ...], int] = {}
        for index, line in enumerate(lines):
            if line.is_zero():
                raise ParseError(f"line {index} has all coefficients zero")
            key = _projective_key(line.coefficients)
            if key in seen:
                raise NonReducedError(f"lines {seen[key]} and {index} coincide", first=seen[key], second=index)
            seen[key] = index
        base = assumptions or Assumptions()
        # lines are rational curves
        flags = Assumptions(h1_minus=base.h1_minus, rational_components=True)
        return cls(context, lines, product_of_forms(lines, context), None, flags, source)

    def transformed(self, matrix: Sequence[Sequence[Union[Scalar, int]]]) -> "Arrangement":
        """The arrangement after the projective change of coordinates v -> M v."""
        if not self.has_lines:
            raise UnsupportedInputError("only line arrangements can be transformed")
        rows = [[_as_scalar(v, self.context) for v in row] for row in matrix]
        det = _determinant(rows)
        if det.is_zero():
            raise ValueError("coordinate change must be invertible")
        lines = [line.transform(rows).normalized() for line in self.lines]
        return Arrangement.from_lines(lines, self.context, source=f"{self.source}#transformed", assumptions=self.assumptions)

    def with_assumptions(self, h1_minus: Optional[int] = None, rational_components: Optional[bool] = None) -> "Arrangement":
        flags = Assumptions(
            h1_minus=self.assumptions.h1_minus if h1_minus is None else h1_minus,
            rational_components=self.assumptions.rational_components or bool(rational_components),
        )
        return Arrangement(self.context, self.lines, self.polynomial, self.declared_lattice, flags, self.source)


def _as_scalar(value: Union[Scalar, int, Fraction], context: FieldContext) -> Scalar:
    return value if isinstance(value, Scalar) else context.scalar(value)


def _determinant(m: Sequence[Sequence[Scalar]]) -> Scalar:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _projective_key(vector: Sequence[Scalar]) -> Tuple[Tuple[Fraction, ...], ...]:
    return tuple(v.coefficients for v in normalize_projective(vector))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def parse_arrangement(document: Union[str, bytes, Mapping[str, Any]], source: str = "<input>") -> Arrangement:
    """Build an Arrangement from the JSON input schema."""
    if isinstance(document, (str, bytes)):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e}", source=source) from e
    else:
        data = dict(document)
    if not isinstance(data, dict):
        raise ParseError("input must be a JSON object", source=source)
    unknown = set(data) - _TOP_LEVEL_KEYS
    if unknown:
        raise ParseError(f"unknown keys: {sorted(unknown)}", source=source)

    order = data.get("cyclotomic_order", 1)
    if not isinstance(order, int) or isinstance(order, bool) or order < 1:
        raise ParseError(f"cyclotomic_order must be a positive integer, got {order!r}", source=source)
    context = cyclotomic_context(order)
    assumptions = _parse_assumptions(data.get("assume", {}))

    has_lines = "lines" in data
    has_poly = "polynomial" in data
    if has_lines == has_poly:
        raise ParseError('exactly one of "lines" and "polynomial" is required', source=source)

    if has_lines:
        lines = [_parse_line(entry, index, context) for index, entry in enumerate(data["lines"] or [])]
        arrangement = Arrangement.from_lines(lines, context, source=source, assumptions=assumptions)
    else:
        polynomial = _parse_polynomial(data["polynomial"], context)
        arrangement = Arrangement(context, (), polynomial, None, assumptions, source)

    if "lattice" in data:
        declared = _parse_declared_lattice(data["lattice"], arrangement.d)
        if arrangement.has_lines:
            _check_declared_lattice(arrangement, declared)
        arrangement = Arrangement(
            arrangement.context,
            arrangement.lines,
            arrangement.polynomial,
            declared,
            arrangement.assumptions,
            arrangement.source,
        )
    logger.debug("parsed_arrangement", source=source, d=arrangement.d, field=order, lines=arrangement.has_lines)
    return arrangement


def _parse_line(entry: Any, index: int, context: FieldContext) -> LinearForm:
    if not isinstance(entry, list) or len(entry) != 3:
        raise ParseError(f"line {index} must be a list of three scalar literals")
    return LinearForm(*(parse_scalar(str(value), context) for value in entry))


def _parse_polynomial(data: Any, context: FieldContext) -> GradedPoly:
    if not isinstance(data, dict) or "terms" not in data:
        raise ParseError('polynomial needs a "terms" list')
    terms: List[Tuple[Monomial, Scalar]] = []
    for entry in data["terms"]:
        try:
            exponents = entry["m"]
            coefficient = entry["c"]
        except (KeyError, TypeError) as e:
            raise ParseError(f"malformed polynomial term {entry!r}") from e
        if (
            not isinstance(exponents, list)
            or len(exponents) != 3
            or not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exponents)
        ):
            raise ParseError(f"monomial exponents must be three nonnegative integers, got {exponents!r}")
        terms.append((Monomial(*exponents), parse_scalar(str(coefficient), context)))
    try:
        polynomial = polynomial_from_terms(context, terms)
    except ValueError as e:
        raise ParseError(str(e)) from e
    if polynomial.is_zero():
        raise ParseError("polynomial is zero")
    declared = data.get("degree")
    if declared is not None and declared != polynomial.degree:
        raise ParseError(f"declared degree {declared} does not match terms of degree {polynomial.degree}")
    return polynomial


def _parse_assumptions(data: Any) -> Assumptions:
    if not isinstance(data, dict):
        raise ParseError('"assume" must be an object')
    h1 = data.get("h1_minus")
    if h1 is not None and (not isinstance(h1, int) or isinstance(h1, bool) or h1 < 0):
        raise ParseError(f"h1_minus must be a nonnegative integer, got {h1!r}")
    rational = data.get("rational_components", False)
    if not isinstance(rational, bool):
        raise ParseError("rational_components must be a boolean")
    return Assumptions(h1_minus=h1, rational_components=rational)


def _parse_declared_lattice(data: Any, d: int) -> LatticeSummary:
    if not isinstance(data, dict) or not isinstance(data.get("nu"), dict):
        raise ParseError('lattice needs a "nu" object')
    nu: Dict[int, int] = {}
    for key, value in data["nu"].items():
        if not str(key).isdigit() or not isinstance(value, int) or isinstance(value, bool):
            raise ParseError(f"malformed lattice entry {key!r}: {value!r}")
        nu[int(key)] = value
    return summary_from_nu(nu, d)


def _check_declared_lattice(arrangement: Arrangement, declared: LatticeSummary) -> None:
    computed = summarize(compute_lattice(arrangement), arrangement.d)
    if {j: n for j, n in computed.nu.items() if n} != {j: n for j, n in declared.nu.items() if n}:
        raise ParseError(
            "declared lattice does not match the lines",
            declared={str(j): n for j, n in sorted(declared.nu.items()) if n},
            computed={str(j): n for j, n in sorted(computed.nu.items()) if n},
        )


# ---------------------------------------------------------------------------
# Lattice
# ---------------------------------------------------------------------------


def compute_lattice(arrangement: Arrangement) -> List[IntersectionPoint]:
    """All intersection points with their incident lines, high multiplicity first."""
    if not arrangement.has_lines:
        raise UnsupportedInputError("lattice computation needs explicit lines", source=arrangement.source)
    if arrangement.d < 2:
        raise UnsupportedInputError("lattice computation needs at least two lines", source=arrangement.source)
    lines = arrangement.lines
    incidences: Dict[Tuple[Tuple[Fraction, ...], ...], set] = {}
    points: Dict[Tuple[Tuple[Fraction, ...], ...], Tuple[Scalar, ...]] = {}
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            point = normalize_projective(cross(lines[i].coefficients, lines[j].coefficients))
            key = tuple(v.coefficients for v in point)
            points.setdefault(key, point)
            incidences.setdefault(key, set()).update((i, j))
    result = [
        IntersectionPoint(point=points[key], incident_lines=tuple(sorted(members)))  # type: ignore[arg-type]
        for key, members in incidences.items()
    ]
    result.sort(key=lambda p: (-p.multiplicity, p.incident_lines))
    return result


def _pairing_holds(nu: Mapping[int, int], d: int) -> bool:
    return sum(count * j * (j - 1) // 2 for j, count in nu.items()) == d * (d - 1) // 2


def _build_summary(nu: Mapping[int, int], d: int, type_tag: LatticeType) -> LatticeSummary:
    full = {j: int(nu.get(j, 0)) for j in range(2, d + 1)}
    present = [j for j, count in full.items() if count > 0]
    m_max = max(present) if present else 1
    tau = sum(count * (j - 1) ** 2 for j, count in full.items())
    chi_curve = 2 * d - sum(count * (j - 1) for j, count in full.items())
    return LatticeSummary(
        d=d,
        nu=full,
        tau_comb=tau,
        m_max=m_max,
        essential=m_max < d,
        chi_curve=chi_curve,
        chi_complement=3 - chi_curve,
        type_tag=type_tag,
    )


def summarize(points: Sequence[IntersectionPoint], d: int) -> LatticeSummary:
    counts = Counter(p.multiplicity for p in points)
    if not _pairing_holds(counts, d):
        raise InternalError("intersection lattice does not account for every pair of lines", d=d)
    provisional = _build_summary(counts, d, LatticeType(LatticeKind.OTHER))
    tag = detect_type(points, provisional)
    return _build_summary(counts, d, tag)


def summary_from_nu(nu: Mapping[int, int], d: int) -> LatticeSummary:
    """Summary of a declared lattice; the type is read off nu alone."""
    for j, count in nu.items():
        if j < 2 or j > d:
            raise ParseError(f"nu_{j} is outside 2..{d}")
        if count < 0:
            raise ParseError(f"nu_{j} must be nonnegative")
    if not _pairing_holds(nu, d):
        raise ParseError(f"declared lattice does not account for C({d},2) pairs of lines")
    provisional = _build_summary(nu, d, LatticeType(LatticeKind.OTHER))
    return _build_summary(nu, d, detect_type(None, provisional))


def detect_type(points: Optional[Sequence[IntersectionPoint]], summary: LatticeSummary) -> LatticeType:
    d = summary.d
    if summary.m_max == d:
        return LatticeType(LatticeKind.PENCIL, (d,))
    if summary.m_max == 2:
        return LatticeType(LatticeKind.GENERIC, (d,))
    high = summary.high_points()
    if len(high) == 1 and d >= 4:
        return LatticeType(LatticeKind.L, (d, high[0]))
    if len(high) == 2:
        m2, m1 = high
        if points is None:
            if m1 + m2 - 1 == d:
                return LatticeType(LatticeKind.LHAT, (m1, m2))
        else:
            p, q = (pt for pt in points if pt.multiplicity >= 3)
            shared = set(p.incident_lines) & set(q.incident_lines)
            covered = set(p.incident_lines) | set(q.incident_lines)
            if shared and len(covered) == d:
                return LatticeType(LatticeKind.LHAT, (m1, m2))
    if summary.m_max <= 3:
        return LatticeType(LatticeKind.DOUBLE_TRIPLE_ONLY)
    return LatticeType(LatticeKind.OTHER)


# ---------------------------------------------------------------------------
# Combinatorial checks
# ---------------------------------------------------------------------------


def hirzebruch_check(summary: LatticeSummary) -> HirzebruchResult:
    d = summary.d
    if summary.nu_j(d) or summary.nu_j(d - 1):
        return HirzebruchResult(applicable=False, holds=None, slack=None)
    slack = (
        Fraction(summary.nu_j(2))
        + Fraction(3, 4) * summary.nu_j(3)
        - d
        - sum((k - 4) * summary.nu_j(k) for k in range(5, d + 1))
    )
    return HirzebruchResult(applicable=True, holds=slack >= 0, slack=slack)


def lattice_relations(summary: LatticeSummary) -> LatticeRelations:
    """Check the two counting relations and the nu_2 formula obtained by eliminating nu_3."""
    d = summary.d
    sigma = sum(count * (k * k - 4 * k + 3) for k, count in summary.nu.items() if k >= 4)
    nu2 = 2 * d * (d - 1) - 3 * summary.tau_comb + sigma
    tau = sum(count * (k - 1) ** 2 for k, count in summary.nu.items())
    return LatticeRelations(sigma=sigma, nu2_identity_holds=nu2 == summary.nu_j(2), tau_identity_holds=tau == summary.tau_comb)


def to_document(arrangement: Arrangement) -> Dict[str, Any]:
    """The input-schema representation of an arrangement."""
    document: Dict[str, Any] = {"cyclotomic_order": arrangement.context.order}
    if arrangement.has_lines:
        document["lines"] = [[str(v) for v in line.coefficients] for line in arrangement.lines]
    else:
        document["polynomial"] = {
            "degree": arrangement.d,
            "terms": [{"m": list(m), "c": str(c)} for m, c in arrangement.polynomial.terms],
        }
    if arrangement.declared_lattice is not None:
        document["lattice"] = {"nu": {str(j): n for j, n in arrangement.declared_lattice.nu.items() if n}}
    flags = arrangement.assumptions
    assume: Dict[str, Any] = {}
    if flags.h1_minus is not None:
        assume["h1_minus"] = flags.h1_minus
    if flags.rational_components and not arrangement.has_lines:
        assume["rational_components"] = True
    if assume:
        document["assume"] = assume
    return document
