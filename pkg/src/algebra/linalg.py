"""Exact rank over Q(zeta_n).

Two strategies: fraction-free elimination (Bareiss) over the field, and
a multi-modular rank that reduces the matrix modulo primes p = 1 mod n
and eliminates in numpy int64. Modular ranks are a lower bound for the
true rank and agree with it for all but finitely many primes; two
independent primes must agree or the exact path is taken.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import structlog
import sympy

from src.algebra.scalars import FieldContext, Scalar
from src.common.errors import FieldMismatchError
from src.common.settings import RankSettings, get_settings

logger = structlog.get_logger()

SparseColumn = Mapping[int, Scalar]

_PRIME_CEILING = 2**31


def _primes_one_mod(n: int) -> Iterator[int]:
    """Primes p = 1 (mod n) below 2^31, largest first."""
    step = max(n, 2)
    start = ((_PRIME_CEILING - 2) // step) * step + 1
    candidate = start
    while candidate > step:
        if sympy.isprime(candidate):
            yield candidate
        candidate -= step


@lru_cache(maxsize=None)
def good_primes(n: int, count: int = 8) -> Tuple[Tuple[int, int], ...]:
    """`count` pairs (p, omega) with omega a primitive n-th root of unity mod p."""
    pairs: List[Tuple[int, int]] = []
    for p in _primes_one_mod(n):
        g = sympy.primitive_root(p)
        omega = pow(int(g), (p - 1) // n, p)
        pairs.append((p, omega))
        if len(pairs) == count:
            break
    return tuple(pairs)


def rank_fraction_free(columns: Sequence[SparseColumn], nrows: int, context: FieldContext) -> int:
    """Bareiss elimination on the dense matrix whose columns are given sparsely."""
    if not columns or nrows == 0:
        return 0
    zero = context.zero
    # rows of the transposed matrix; rank is invariant
    rows: List[List[Scalar]] = []
    for column in columns:
        row = [zero] * nrows
        for index, value in column.items():
            row[index] = value
        rows.append(row)
    ncols = nrows
    rank = 0
    previous = context.one
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if not rows[r][col].is_zero()), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pivot_row = rows[rank]
        p = pivot_row[col]
        for r in range(rank + 1, len(rows)):
            row = rows[r]
            factor = row[col]
            if factor.is_zero():
                if not (p - previous).is_zero():
                    rows[r] = [(value * p) / previous for value in row]
                continue
            rows[r] = [(p * row[c] - factor * pivot_row[c]) / previous for c in range(ncols)]
        previous = p
        rank += 1
        if rank == len(rows):
            break
    return rank


def _rank_mod_p(matrix: np.ndarray, p: int) -> int:
    work = matrix.copy()
    nrows, ncols = work.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nonzero = np.nonzero(work[rank:, col])[0]
        if nonzero.size == 0:
            continue
        pivot = rank + int(nonzero[0])
        if pivot != rank:
            work[[rank, pivot]] = work[[pivot, rank]]
        inv = pow(int(work[rank, col]), -1, p)
        work[rank] = (work[rank] * inv) % p
        below = rank + 1 + np.nonzero(work[rank + 1 :, col])[0]
        if below.size:
            factors = work[below, col].reshape(-1, 1)
            # products stay below 2^62 because entries are reduced below p < 2^31
            work[below] = (work[below] - (factors * work[rank]) % p) % p
        rank += 1
    return rank


def _reduce_mod_p(columns: Sequence[SparseColumn], nrows: int, p: int, omega: int) -> Optional[np.ndarray]:
    matrix = np.zeros((len(columns), nrows), dtype=np.int64)
    try:
        for j, column in enumerate(columns):
            for index, value in column.items():
                matrix[j, index] = value.residue(p, omega)
    except ZeroDivisionError:
        return None
    return matrix


def rank_multimodular(
    columns: Sequence[SparseColumn],
    nrows: int,
    context: FieldContext,
    primes: int = 2,
) -> int:
    """Rank from `primes` independent primes; falls back to Bareiss when they disagree."""
    if not columns or nrows == 0:
        return 0
    candidates = good_primes(context.order, count=primes + 6)
    matrices: List[Tuple[int, np.ndarray]] = []
    for p, omega in candidates:
        reduced = _reduce_mod_p(columns, nrows, p, omega)
        if reduced is None:
            logger.debug("prime_skipped", prime=p)
            continue
        matrices.append((p, reduced))
        if len(matrices) == primes:
            break
    if len(matrices) < primes:
        logger.warning("exact_rank_fallback", field=context.order)
        return rank_fraction_free(columns, nrows, context)

    with ThreadPoolExecutor(max_workers=len(matrices)) as executor:
        ranks = list(executor.map(lambda item: _rank_mod_p(item[1], item[0]), matrices))

    if len(set(ranks)) != 1:
        logger.warning(
            "modular_rank_disagreement",
            primes=[p for p, _ in matrices],
            ranks=ranks,
        )
        return rank_fraction_free(columns, nrows, context)
    return ranks[0]


def rank_of_columns(
    columns: Sequence[SparseColumn],
    nrows: int,
    context: FieldContext,
    settings: Optional[RankSettings] = None,
) -> int:
    """Rank of the nrows x len(columns) matrix given by sparse columns."""
    settings = settings or get_settings().rank
    if settings.strategy == "exact":
        return rank_fraction_free(columns, nrows, context)
    if settings.strategy == "auto" and min(len(columns), nrows) <= settings.exact_cutoff and context.is_rational:
        return rank_fraction_free(columns, nrows, context)
    return rank_multimodular(columns, nrows, context, primes=settings.primes)


def rank(matrix: Sequence[Sequence[Scalar]], context: FieldContext, settings: Optional[RankSettings] = None) -> int:
    """Rank of a dense matrix of scalars."""
    if not matrix:
        return 0
    nrows = len(matrix)
    if any(entry.context.order != context.order for row in matrix for entry in row):
        raise FieldMismatchError("matrix entries from different cyclotomic fields", field=context.order)
    columns: List[Dict[int, Scalar]] = []
    for c in range(len(matrix[0])):
        columns.append({r: matrix[r][c] for r in range(nrows) if not matrix[r][c].is_zero()})
    return rank_of_columns(columns, nrows, context, settings)
