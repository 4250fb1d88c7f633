"""The algebraic side of a reduced plane curve f = 0.

Everything here is driven by ranks of the multiplication maps
S_{k-d+1}^3 -> S_k, (a, b, c) -> a f_x + b f_y + c f_z, which give both
the Hilbert function of the Milnor algebra M(f) = S/J_f and the minimal
degree of a Jacobian relation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from src.algebra.linalg import rank_of_columns
from src.algebra.polyring import GradedPoly, dim_graded_piece, monomial_columns
from src.common.errors import InternalError, NotEssentialError, NotStabilizedError, UnsupportedInputError
from src.common.settings import RankSettings

logger = structlog.get_logger()


class FreenessStatus(str, Enum):
    FREE = "FREE"
    NEARLY_FREE = "NEARLY_FREE"
    OTHER = "OTHER"


@dataclass(frozen=True)
class FreenessClassification:
    status: FreenessStatus
    exponents: Optional[Tuple[int, int]]
    splitting_type: Tuple[int, int]
    nu_formula: int
    branch: str
    branch2_closed_form: int


@dataclass(frozen=True)
class JacobianProfile:
    d: int
    T: int
    milnor_dims: Tuple[int, ...]
    fermat_dims: Tuple[int, ...]
    r: int
    defect_table: Tuple[int, ...]
    nu: int
    st: int
    tau_alg: int
    reg: int


@dataclass(frozen=True)
class HSVanishingReport:
    applicable: bool
    vanishing_holds: bool
    nonzero_outside: Tuple[int, ...]
    bounded: str
    bound: int
    bound_holds: bool
    nodal_equality: bool


class JacobianSystem:
    """Ranks of the Jacobian multiplication maps of one polynomial, cached per degree."""

    def __init__(self, f: GradedPoly, rank_settings: Optional[RankSettings] = None) -> None:
        self.f = f
        self.d = f.degree
        self.context = f.context
        self.partials = f.partials()
        self.rank_settings = rank_settings
        self._ranks: Dict[int, int] = {}

    def rank_in_degree(self, k: int) -> int:
        """dim of the degree-k part of the Jacobian ideal."""
        if k in self._ranks:
            return self._ranks[k]
        shift = k - (self.d - 1)
        if shift < 0:
            value = 0
        else:
            columns: List[Dict] = []
            for partial in self.partials:
                if not partial.is_zero():
                    columns.extend(monomial_columns(partial, shift))
            value = rank_of_columns(columns, dim_graded_piece(k), self.context, self.rank_settings)
        self._ranks[k] = value
        return value

    def milnor_dim(self, k: int) -> int:
        return dim_graded_piece(k) - self.rank_in_degree(k)

    def relation_kernel(self, m: int) -> int:
        """dim of the relations (a, b, c) in S_m^3 with a f_x + b f_y + c f_z = 0."""
        return 3 * dim_graded_piece(m) - self.rank_in_degree(m + self.d - 1)


def hilbert_milnor(f: GradedPoly, k_max: Optional[int] = None, system: Optional[JacobianSystem] = None) -> Tuple[int, ...]:
    system = system or JacobianSystem(f)
    k_max = 3 * f.degree - 5 if k_max is None else k_max
    dims = tuple(system.milnor_dim(k) for k in range(k_max + 1))
    logger.debug("hilbert_function", d=f.degree, dims=dims)
    return dims


def koszul_count(m: int, d: int) -> int:
    return max(0, 3 * dim_graded_piece(m - d + 1) - dim_graded_piece(m - 2 * d + 2))


def mdr(f: GradedPoly, system: Optional[JacobianSystem] = None) -> int:
    """Minimal degree of a non-Koszul Jacobian relation."""
    system = system or JacobianSystem(f)
    d = f.degree
    for m in range(0, d - 1):
        if system.relation_kernel(m) > koszul_count(m, d):
            return m
    return d - 1


def stability(milnor_dims: Sequence[int], d: int) -> Tuple[int, int]:
    """(st, tau_alg) from dims computed through degree 3d - 5."""
    last = 3 * d - 5
    if len(milnor_dims) <= last:
        raise ValueError(f"need Milnor dimensions through degree {last}")
    if milnor_dims[last - 1] != milnor_dims[last]:
        raise NotStabilizedError(
            "Milnor algebra dimensions did not settle by degree 3d - 5: non-reduced input, "
            "or a smooth curve whose top degree is 3d - 6",
            d=d,
            tail=tuple(milnor_dims[last - 1 :]),
        )
    tau = milnor_dims[last]
    st = last
    while st > 0 and milnor_dims[st - 1] == tau:
        st -= 1
    return st, tau


def fermat_dims(d: int) -> Tuple[int, ...]:
    """Coefficients of ((1 - t^(d-1)) / (1 - t))^3, degrees 0..3d - 6."""
    ones = np.ones(d - 1, dtype=np.int64)
    series = np.convolve(np.convolve(ones, ones), ones)
    return tuple(int(v) for v in series)


def defect_table(milnor_dims: Sequence[int], d: int, tau_alg: int) -> Tuple[Tuple[int, ...], int]:
    """n(f)_k for k = 0..T and the freeness defect nu = n(f)_{ceil(T/2)}."""
    T = 3 * d - 6
    fermat = fermat_dims(d)
    table = tuple(milnor_dims[k] + milnor_dims[T - k] - fermat[k] - tau_alg for k in range(T + 1))
    if any(v < 0 for v in table):
        raise InternalError("negative entry in the defect table", d=d, table=table)
    middle = (T + 1) // 2
    rising = all(table[k] <= table[k + 1] for k in range(middle))
    falling = all(table[k] >= table[k + 1] for k in range(middle, T))
    if not (rising and falling):
        raise InternalError("defect table is not unimodal", d=d, table=table)
    if d % 2 == 1 and table != table[::-1]:
        raise InternalError("defect table is not self-dual", d=d, table=table)
    return table, table[middle]


def classify(d: int, r: int, tau: int, nu: int) -> FreenessClassification:
    if r < 1:
        raise NotEssentialError("classification needs mdr >= 1", d=d, r=r)
    square = (d - 1) ** 2
    first = square - r * (d - 1 - r) - tau if 2 * r < d else None
    second = (3 * square + 3) // 4 - tau if 2 * r >= d - 2 else None
    if first is not None and second is not None and first != second:
        raise InternalError("freeness defect branches disagree", d=d, r=r, tau=tau, first=first, second=second)
    nu_formula = first if first is not None else second
    assert nu_formula is not None
    branch = "r<d/2" if first is not None else "r>=(d-2)/2"
    if nu_formula != nu:
        raise InternalError("defect table and mdr formula disagree", d=d, r=r, tau=tau, table_nu=nu, formula_nu=nu_formula)

    half, odd = divmod(d, 2)
    closed = (3 * half * half - tau) if odd else (3 * half * half - 3 * half + 1 - tau)

    product = square - tau - nu
    discriminant = (d - 1) ** 2 - 4 * product
    root = math.isqrt(discriminant) if discriminant >= 0 else -1
    if root < 0 or root * root != discriminant or (d - 1 - root) % 2:
        raise InternalError("splitting type is not integral", d=d, tau=tau, nu=nu)
    low = (d - 1 - root) // 2
    splitting = (low, d - 1 - low)

    if nu == 0:
        status = FreenessStatus.FREE
        if tau != square - r * (d - 1 - r):
            raise InternalError("free curve fails the exponent identity", d=d, r=r, tau=tau)
        exponents: Optional[Tuple[int, int]] = (r, d - 1 - r)
    elif nu == 1:
        status, exponents = FreenessStatus.NEARLY_FREE, None
    else:
        status, exponents = FreenessStatus.OTHER, None
    return FreenessClassification(status, exponents, splitting, nu_formula, branch, closed)


def build_profile(f: GradedPoly, rank_settings: Optional[RankSettings] = None) -> JacobianProfile:
    """Hilbert function, mdr, stability, defect table and nu for a reduced curve."""
    d = f.degree
    if d < 3:
        raise UnsupportedInputError("curves of degree < 3 are not supported", d=d)
    system = JacobianSystem(f, rank_settings)
    # a pencil has a degree-0 relation and never stabilizes
    r = mdr(f, system)
    if r == 0:
        raise NotEssentialError("all lines pass through one point", d=d)
    dims = hilbert_milnor(f, 3 * d - 5, system)
    st, tau = stability(dims, d)
    table, nu = defect_table(dims, d, tau)
    reg = st if nu == 0 else st - 1
    logger.info("jacobian_profile", d=d, r=r, tau=tau, nu=nu, st=st)
    return JacobianProfile(
        d=d,
        T=3 * d - 6,
        milnor_dims=dims,
        fermat_dims=fermat_dims(d),
        r=r,
        defect_table=table,
        nu=nu,
        st=st,
        tau_alg=tau,
        reg=reg,
    )


def hs_vanishing_check(profile: JacobianProfile, rational_components: bool, has_lines: bool = True) -> HSVanishingReport:
    """Vanishing of n(f)_k outside [d-2, 2d-4] and the stability bound for rational-component curves."""
    d = profile.d
    nonzero = tuple(
        k for k, v in enumerate(profile.defect_table) if v and (k <= d - 3 or k >= 2 * d - 3)
    )
    bounded = "st" if has_lines else "reg"
    value = profile.st if has_lines else profile.reg
    return HSVanishingReport(
        applicable=rational_components,
        vanishing_holds=not nonzero,
        nonzero_outside=nonzero,
        bounded=bounded,
        bound=value,
        bound_holds=value <= 2 * d - 4,
        nodal_equality=profile.st == 2 * d - 4,
    )
