"""Combinatorial spectrum of a line arrangement and the upper bound nu' for nu."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

import structlog

from src.arrangements.arrangement import LatticeSummary
from src.common.errors import InternalError, NotEssentialError, UnsupportedInputError

logger = structlog.get_logger()


class Exactness(str, Enum):
    EXACT = "EXACT"
    LOWER_BOUND = "LOWER_BOUND"
    USER_SUPPLIED = "USER_SUPPLIED"


@dataclass(frozen=True)
class SpectrumTable:
    d: int
    entries: Dict[Fraction, int]

    @property
    def total(self) -> int:
        return sum(self.entries.values())


@dataclass(frozen=True)
class NuPrimeResult:
    value: int
    exactness: Exactness
    h1_used: int
    base: int
    sigma: int
    correction: int


def binom2(n: int) -> int:
    """n(n-1)/2 for every integer n, negative ones included."""
    return n * (n - 1) // 2


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def multiplicity_triple(e: int, d: int, nu: Mapping[int, int]) -> Tuple[int, int, int]:
    """(m_alpha, m_{alpha+1}, m_{alpha+2}) for alpha = e/d."""
    if not 1 <= e <= d:
        raise ValueError(f"e must lie in [1, {d}], got {e}")
    first = binom2(e - 1)
    second = (e - 1) * (d - e - 1)
    third = binom2(d - e - 1) - (1 if e == d else 0)
    for j, count in nu.items():
        if not count:
            continue
        c = _ceil_div(e * j, d)
        first -= count * binom2(c - 1)
        second -= count * (c - 1) * (j - c)
        third -= count * binom2(j - c)
    return first, second, third


def full_spectrum(summary: LatticeSummary) -> SpectrumTable:
    if not summary.essential:
        raise NotEssentialError("the spectrum formula needs an essential arrangement", d=summary.d)
    d = summary.d
    entries: Dict[Fraction, int] = {}
    for e in range(1, d + 1):
        alpha = Fraction(e, d)
        m0, m1, m2 = multiplicity_triple(e, d, summary.nu)
        entries[alpha] = m0
        entries[alpha + 1] = m1
        entries[alpha + 2] = m2
    table = SpectrumTable(d=d, entries=dict(sorted(entries.items())))
    expected = d * summary.chi_complement - 1
    if table.total != expected:
        raise InternalError("spectrum does not sum to d * chi(U) - 1", d=d, total=table.total, expected=expected)
    return table


def nu_prime(summary: LatticeSummary, h1_override: Optional[int] = None) -> NuPrimeResult:
    """Walther's bound nu' at the middle degree, with its exactness status."""
    if not summary.essential:
        raise NotEssentialError("nu' needs an essential arrangement", d=summary.d)
    d = summary.d
    tau = summary.tau_comb
    even_sum = sum(count for j, count in summary.nu.items() if j % 2 == 0)
    sigma = sum(count * (k * k - 4 * k + 3) for k, count in summary.nu.items() if k >= 4)
    correction = sigma + sum(count for j, count in summary.nu.items() if j >= 4 and j % 2 == 0)
    half, odd = divmod(d, 2)
    if odd:
        numerator = (d - 1) * (d - 3) - tau + even_sum
        h1 = 0
        exactness = Exactness.EXACT
        base = 3 * half * half - tau
    else:
        numerator = (d - 2) ** 2 - tau + even_sum
        base = 3 * half * half - 3 * half + 1 - tau
        if h1_override is not None:
            if h1_override < 0 or h1_override % 2:
                raise UnsupportedInputError("h1 must be a nonnegative even integer", h1=h1_override)
            h1, exactness = h1_override, Exactness.USER_SUPPLIED
        else:
            h1 = 0
            # H^1(F)_{-1} vanishes for double/triple-point arrangements and for near-pencils
            vanishing = summary.m_max <= 3 or summary.m_max == d - 1
            exactness = Exactness.EXACT if vanishing else Exactness.LOWER_BOUND
    if numerator % 4:
        raise InternalError("nu' is not an integer", d=d, numerator=numerator, h1=h1)
    value = h1 // 2 + numerator // 4
    if value < 0:
        raise InternalError("nu' is negative", d=d, value=value)
    if 4 * (value - h1 // 2) != 4 * base + correction:
        raise InternalError("nu' decomposition does not add up", d=d, base=base, correction=correction)
    logger.debug("nu_prime", d=d, value=value, exactness=exactness.value)
    return NuPrimeResult(
        value=value, exactness=exactness, h1_used=h1, base=base, sigma=sigma, correction=correction
    )


def middle_multiplicity(summary: LatticeSummary) -> int:
    """m_{alpha+1} at e = floor(d/2), the spectrum route to nu' - h1/2."""
    return multiplicity_triple(summary.d // 2, summary.d, summary.nu)[1]
