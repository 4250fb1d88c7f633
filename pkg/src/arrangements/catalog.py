"""Deterministic constructors for the named arrangement families.

Each constructor returns a `CatalogEntry` whose lattice has already been
computed and compared against the family's expected summary.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional, Sequence, Tuple

import structlog
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from src.algebra.polyring import LinearForm
from src.algebra.scalars import FieldContext, cyclotomic_context
from src.arrangements.arrangement import (
    Arrangement,
    LatticeSummary,
    compute_lattice,
    summarize,
    summary_from_nu,
)
from src.common.errors import ConstructionFailedError, ParseError
from src.common.settings import get_settings

logger = structlog.get_logger()

CATALOG_PREFIX = "catalog:"


class Family(str, Enum):
    GENERIC = "GENERIC"
    L = "L"
    LHAT = "LHAT"
    MONOMIAL = "MONOMIAL"
    PENCIL = "PENCIL"


_ARITY = {Family.GENERIC: 1, Family.L: 2, Family.LHAT: 2, Family.MONOMIAL: 1, Family.PENCIL: 1}


class LatticeMismatch(Exception):
    """Raised when a construction lands on an unexpected lattice."""


@dataclass(frozen=True)
class CatalogSpec:
    family: Family
    parameters: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.parameters) != _ARITY[self.family]:
            raise ParseError(f"{self.family.value} takes {_ARITY[self.family]} parameter(s), got {len(self.parameters)}")
        p = self.parameters
        if self.family is Family.GENERIC and p[0] < 3:
            raise ParseError("generic arrangements need d >= 3")
        if self.family is Family.L and not (p[0] >= 4 and 3 <= p[1] <= p[0] - 1):
            raise ParseError("L(d,m) needs d >= 4 and 3 <= m <= d-1")
        if self.family is Family.LHAT and not (3 <= p[0] <= p[1]):
            raise ParseError("LHAT(m1,m2) needs 3 <= m1 <= m2")
        if self.family is Family.MONOMIAL and p[0] < 2:
            raise ParseError("monomial arrangements need m >= 2")
        if self.family is Family.PENCIL and p[0] < 2:
            raise ParseError("a pencil needs at least two lines")

    def __str__(self) -> str:
        return CATALOG_PREFIX + ":".join([self.family.value.lower()] + [str(v) for v in self.parameters])


@dataclass(frozen=True)
class CatalogEntry:
    spec: CatalogSpec
    arrangement: Arrangement
    expected: LatticeSummary
    expected_mdr: Optional[int]


def is_catalog_spec(source: str) -> bool:
    return source.lower().startswith(CATALOG_PREFIX)


def parse_spec(text: str) -> CatalogSpec:
    """Parse "catalog:generic:5", "catalog:L:7:5", "catalog:lhat:3:3", ..."""
    if not is_catalog_spec(text):
        raise ParseError(f"not a catalog spec: {text!r}")
    parts = text[len(CATALOG_PREFIX) :].split(":")
    try:
        family = Family(parts[0].upper())
    except ValueError as e:
        raise ParseError(f"unknown catalog family {parts[0]!r}") from e
    try:
        parameters = tuple(int(v) for v in parts[1:])
    except ValueError as e:
        raise ParseError(f"catalog parameters must be integers: {text!r}") from e
    return CatalogSpec(family, parameters)


def _line(context: FieldContext, a: int, b: int, c: int) -> LinearForm:
    return LinearForm(context.scalar(a), context.scalar(b), context.scalar(c))


def _verify(arrangement: Arrangement, expected: LatticeSummary) -> None:
    computed = summarize(compute_lattice(arrangement), arrangement.d)
    if computed != expected:
        logger.warning(
            "catalog_lattice_mismatch",
            source=arrangement.source,
            expected=expected.nu,
            computed=computed.nu,
            expected_type=str(expected.type_tag),
            computed_type=str(computed.type_tag),
        )
        raise LatticeMismatch(arrangement.source)


def _construct(
    spec: CatalogSpec,
    build: Callable[[int], Arrangement],
    expected: LatticeSummary,
    attempts: int = 1,
) -> Arrangement:
    """Build and verify, shifting the free parameters on each retry."""
    arrangement: Optional[Arrangement] = None
    try:
        for attempt in Retrying(
            stop=stop_after_attempt(attempts),
            retry=retry_if_exception_type(LatticeMismatch),
            reraise=True,
        ):
            with attempt:
                arrangement = build(attempt.retry_state.attempt_number - 1)
                _verify(arrangement, expected)
    except LatticeMismatch as e:
        raise ConstructionFailedError(f"{spec} did not reach its lattice after {attempts} attempt(s)", spec=str(spec)) from e
    assert arrangement is not None
    return arrangement


def generic(d: int, parameters: Optional[Sequence[int]] = None) -> CatalogEntry:
    """Lines x + t y + t^2 z on the moment curve; no three are concurrent."""
    spec = CatalogSpec(Family.GENERIC, (d,))
    context = cyclotomic_context(1)
    if parameters is not None and (len(parameters) != d or len(set(parameters)) != d):
        raise ParseError("generic parameters must be d distinct integers")

    def build(shift: int) -> Arrangement:
        ts = list(parameters) if parameters is not None else [i + 1 + shift for i in range(d)]
        lines = [_line(context, 1, t, t * t) for t in ts]
        return Arrangement.from_lines(lines, context, source=str(spec))

    expected = summary_from_nu({2: d * (d - 1) // 2}, d)
    arrangement = _construct(spec, build, expected, attempts=get_settings().catalog.max_attempts)
    return CatalogEntry(spec, arrangement, expected, d - 2)


def pencil_plus(d: int, m: int) -> CatalogEntry:
    """L(d,m): m lines y = i z through (1:0:0) plus d - m lines in general position."""
    spec = CatalogSpec(Family.L, (d, m))
    context = cyclotomic_context(1)

    def build(shift: int) -> Arrangement:
        lines = [_line(context, 0, 1, -i) for i in range(1, m + 1)]
        lines += [_line(context, 1, t, t * t) for t in range(m + 1 + shift, d + 1 + shift)]
        return Arrangement.from_lines(lines, context, source=str(spec))

    expected = summary_from_nu({2: d * (d - 1) // 2 - m * (m - 1) // 2, m: 1}, d)
    expected_mdr = {d - 1: 1, d - 2: 2}.get(m)
    arrangement = _construct(spec, build, expected, attempts=get_settings().catalog.max_attempts)
    return CatalogEntry(spec, arrangement, expected, expected_mdr)


def lhat(m1: int, m2: int) -> CatalogEntry:
    """Two high points (1:0:0) and (0:1:0) joined by z = 0."""
    spec = CatalogSpec(Family.LHAT, (m1, m2))
    context = cyclotomic_context(1)
    d = m1 + m2 - 1

    def build(_shift: int) -> Arrangement:
        lines = [_line(context, 0, 1, -i) for i in range(1, m1)]
        lines += [_line(context, 1, 0, -j) for j in range(1, m2)]
        lines.append(_line(context, 0, 0, 1))
        return Arrangement.from_lines(lines, context, source=str(spec))

    nu: Dict[int, int] = {2: (m1 - 1) * (m2 - 1)}
    nu[m1] = nu.get(m1, 0) + 1
    nu[m2] = nu.get(m2, 0) + 1
    expected = summary_from_nu(nu, d)
    return CatalogEntry(spec, _construct(spec, build, expected), expected, m1 - 1)


def monomial(m: int) -> CatalogEntry:
    """The 3m lines of (x^m - y^m)(x^m - z^m)(y^m - z^m) over Q(zeta_m)."""
    spec = CatalogSpec(Family.MONOMIAL, (m,))
    context = cyclotomic_context(m)
    zero, one = context.zero, context.one

    def build(_shift: int) -> Arrangement:
        lines = []
        for k in range(m):
            root = -context.zeta_power(k)
            lines.append(LinearForm(one, root, zero))
            lines.append(LinearForm(one, zero, root))
            lines.append(LinearForm(zero, one, root))
        return Arrangement.from_lines(lines, context, source=str(spec))

    if m == 2:
        nu = {2: 3, 3: 4}
    elif m == 3:
        nu = {3: 12}
    else:
        nu = {3: m * m, m: 3}
    expected = summary_from_nu(nu, 3 * m)
    if m == 2:
        # the closed form m + 1 would give 3 here; A(2,2,3) has exponents (2,3)
        logger.info("monomial_mdr_discrepancy", m=m, closed_form=m + 1, expected=2)
        expected_mdr = 2
    else:
        expected_mdr = m + 1
    return CatalogEntry(spec, _construct(spec, build, expected), expected, expected_mdr)


def pencil(d: int) -> CatalogEntry:
    """d concurrent lines through (1:0:0); not essential."""
    spec = CatalogSpec(Family.PENCIL, (d,))
    context = cyclotomic_context(1)

    def build(_shift: int) -> Arrangement:
        return Arrangement.from_lines([_line(context, 0, 1, -i) for i in range(d)], context, source=str(spec))

    expected = summary_from_nu({d: 1}, d)
    return CatalogEntry(spec, _construct(spec, build, expected), expected, 0)


_BUILDERS: Dict[Family, Callable[..., CatalogEntry]] = {
    Family.GENERIC: generic,
    Family.L: pencil_plus,
    Family.LHAT: lhat,
    Family.MONOMIAL: monomial,
    Family.PENCIL: pencil,
}


def build(spec: CatalogSpec | str) -> CatalogEntry:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    entry = _BUILDERS[spec.family](*spec.parameters)
    logger.debug("catalog_built", spec=str(spec), d=entry.arrangement.d)
    return entry


def sweep(max_d: int = 10) -> Tuple[CatalogEntry, ...]:
    """Every essential catalog arrangement with 3 <= d <= max_d."""
    entries = [generic(d) for d in range(3, max_d + 1)]
    entries += [pencil_plus(d, m) for d in range(4, max_d + 1) for m in range(3, d)]
    entries += [lhat(m1, m2) for m1 in range(3, max_d + 1) for m2 in range(m1, max_d + 2 - m1)]
    entries += [monomial(m) for m in range(2, max_d // 3 + 1)]
    return tuple(entries)
