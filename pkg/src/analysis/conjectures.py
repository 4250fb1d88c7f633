"""Verdict engines: Walther's inequality, the nu = nu' criterion, lattice certificates and group checks."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import structlog

from src.analysis.jacobian import FreenessClassification, FreenessStatus, HSVanishingReport
from src.analysis.spectrum import Exactness, NuPrimeResult
from src.arrangements.arrangement import HirzebruchResult, IntersectionPoint, LatticeKind, LatticeSummary

logger = structlog.get_logger()


class VerdictStatus(str, Enum):
    CONSISTENT = "CONSISTENT"
    VIOLATION = "VIOLATION"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Verdict:
    check_name: str
    status: VerdictStatus
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"check": self.check_name, "status": self.status.value, "details": self.details}


def walther_check(nu: int, nu_prime: NuPrimeResult) -> Verdict:
    """nu <= nu' in the middle degree."""
    details: Dict[str, Any] = {"nu": nu, "nu_prime": nu_prime.value, "exactness": nu_prime.exactness.value}
    if nu <= nu_prime.value:
        details["equality"] = nu == nu_prime.value and nu_prime.exactness is Exactness.EXACT
        details["strict"] = nu < nu_prime.value
        return Verdict("walther", VerdictStatus.CONSISTENT, details)
    if nu_prime.exactness is Exactness.EXACT:
        logger.error("walther_violation", nu=nu, nu_prime=nu_prime.value)
        return Verdict("walther", VerdictStatus.VIOLATION, details)
    if nu_prime.exactness is Exactness.USER_SUPPLIED:
        details["reason"] = "supplied_h1_contradicts_bound"
    else:
        details["reason"] = "lower_bound_below_nu"
    return Verdict("walther", VerdictStatus.INCONCLUSIVE, details)


def mdr_case(r: int, m_max: int, d: int) -> str:
    """A when r = d - m(C), A_PRIME when m(C) <= r <= d - m(C) - 1."""
    if r == d - m_max:
        return "A"
    if m_max <= r <= d - m_max - 1:
        return "A_PRIME"
    return "NEITHER"


def conjecture3_check(nu: int, nu_prime: NuPrimeResult, m_max: int, d: int, r: Optional[int] = None) -> Verdict:
    """nu = nu' exactly when m(C) = d - 1 or m(C) <= 3."""
    predicted = m_max == d - 1 or m_max <= 3
    details: Dict[str, Any] = {
        "d": d,
        "m_max": m_max,
        "nu": nu,
        "nu_prime": nu_prime.value,
        "exactness": nu_prime.exactness.value,
        "predicted_equal": predicted,
    }
    if r is not None:
        details["mdr"] = r
        details["mdr_case"] = mdr_case(r, m_max, d)

    if nu_prime.exactness is Exactness.LOWER_BOUND:
        # the true nu' is at least the bound, so nu < bound already decides inequality
        if nu >= nu_prime.value:
            details["reason"] = "bound_cannot_decide"
            return Verdict("nu_equality", VerdictStatus.INCONCLUSIVE, details)
        observed = False
    else:
        observed = nu == nu_prime.value
    details["observed_equal"] = observed
    if observed == predicted:
        return Verdict("nu_equality", VerdictStatus.CONSISTENT, details)
    if nu_prime.exactness is Exactness.EXACT or (nu_prime.exactness is Exactness.LOWER_BOUND and not observed):
        logger.error("nu_equality_violation", **details)
        return Verdict("nu_equality", VerdictStatus.VIOLATION, details)
    details["reason"] = "depends_on_supplied_h1"
    return Verdict("nu_equality", VerdictStatus.INCONCLUSIVE, details)


def hirzebruch_verdict(result: HirzebruchResult) -> Verdict:
    if not result.applicable:
        return Verdict("hirzebruch", VerdictStatus.INCONCLUSIVE, {"applicable": False})
    details = {"applicable": True, "slack": str(result.slack)}
    status = VerdictStatus.CONSISTENT if result.holds else VerdictStatus.VIOLATION
    return Verdict("hirzebruch", status, details)


def hs_vanishing_verdict(report: HSVanishingReport) -> Verdict:
    details: Dict[str, Any] = {
        "applicable": report.applicable,
        "vanishing_holds": report.vanishing_holds,
        "bounded": report.bounded,
        "bound_value": report.bound,
        "bound_holds": report.bound_holds,
        "nodal_equality": report.nodal_equality,
    }
    if report.nonzero_outside:
        details["nonzero_outside"] = list(report.nonzero_outside)
    if not report.applicable:
        return Verdict("hs_vanishing", VerdictStatus.INCONCLUSIVE, details)
    ok = report.vanishing_holds and report.bound_holds
    return Verdict("hs_vanishing", VerdictStatus.CONSISTENT if ok else VerdictStatus.VIOLATION, details)


def _free_zero_case(d1: int, summary: LatticeSummary) -> bool:
    d = summary.d
    high = {j: n for j, n in summary.nu.items() if n and j >= 3}
    if d1 == 1:
        return True
    if d1 == 2 and d == 6 and summary.nu_j(2) == 3 and high == {3: 4}:
        return True
    if d1 == 2 and d == 5 and summary.type_tag.kind is LatticeKind.LHAT and summary.type_tag.params == (3, 3):
        return True
    if d1 == 3 and d == 7 and summary.nu_j(2) == 3 and high == {3: 6}:
        return True
    return d1 == 4 and d == 9 and summary.nu_j(2) == 0 and high == {3: 12}


def free_equality_check(
    classification: FreenessClassification, summary: LatticeSummary, nu_prime: NuPrimeResult
) -> Verdict:
    """For free arrangements, nu' = 0 exactly in the listed exponent/lattice cases."""
    details: Dict[str, Any] = {"status": classification.status.value, "nu_prime": nu_prime.value}
    if classification.status is not FreenessStatus.FREE or classification.exponents is None:
        details["reason"] = "not_free"
        return Verdict("free_equality", VerdictStatus.INCONCLUSIVE, details)
    if nu_prime.exactness is not Exactness.EXACT:
        details["reason"] = "nu_prime_not_exact"
        return Verdict("free_equality", VerdictStatus.INCONCLUSIVE, details)
    d1 = classification.exponents[0]
    predicted = _free_zero_case(d1, summary)
    observed = nu_prime.value == 0
    details.update({"d1": d1, "predicted_zero": predicted, "observed_zero": observed})
    status = VerdictStatus.CONSISTENT if predicted == observed else VerdictStatus.VIOLATION
    return Verdict("free_equality", status, details)


# ---------------------------------------------------------------------------
# Lattice certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeCertificate:
    """Canonical incidence of lines and points of multiplicity >= 3, up to relabeling."""

    d: int
    encoding: Tuple[Tuple[int, ...], ...]

    def __str__(self) -> str:
        lines = ";".join(",".join(str(p) for p in incidence) or "-" for incidence in self.encoding)
        return f"d={self.d}|{lines}"


def _reindex(signatures: Sequence[Any]) -> List[int]:
    order = {sig: i for i, sig in enumerate(sorted(set(signatures)))}
    return [order[sig] for sig in signatures]


def _refine(
    point_colors: List[int],
    classes: Sequence[Tuple[FrozenSet[int], int]],
    class_colors: List[int],
    point_classes: Sequence[Sequence[int]],
) -> Tuple[List[int], List[int]]:
    """Color refinement on the bipartite graph between points and twin-line classes."""
    while True:
        point_sigs = [
            (point_colors[p], tuple(sorted(class_colors[c] for c in point_classes[p]))) for p in range(len(point_colors))
        ]
        class_sigs = [
            (class_colors[c], tuple(sorted(point_colors[p] for p in members))) for c, (members, _) in enumerate(classes)
        ]
        new_points = _reindex(point_sigs)
        new_classes = _reindex(class_sigs)
        if len(set(new_points)) == len(set(point_colors)) and len(set(new_classes)) == len(set(class_colors)):
            return new_points, new_classes
        point_colors, class_colors = new_points, new_classes


def _encode(d: int, point_colors: Sequence[int], classes: Sequence[Tuple[FrozenSet[int], int]]) -> Tuple[Tuple[int, ...], ...]:
    rows: List[Tuple[int, ...]] = []
    for members, size in classes:
        incidence = tuple(sorted(point_colors[p] for p in members))
        rows.extend([incidence] * size)
    return tuple(sorted(rows))


def canonical_certificate(points: Sequence[IntersectionPoint], d: int) -> LatticeCertificate:
    high = [p for p in points if p.multiplicity >= 3]
    incidence: Dict[int, set] = defaultdict(set)
    for index, point in enumerate(high):
        for line in point.incident_lines:
            incidence[line].add(index)
    twins: Dict[FrozenSet[int], int] = defaultdict(int)
    for line in range(d):
        twins[frozenset(incidence.get(line, ()))] += 1
    classes = sorted(twins.items(), key=lambda item: (len(item[0]), item[1], sorted(item[0])))
    point_classes: List[List[int]] = [[] for _ in high]
    for c, (members, _) in enumerate(classes):
        for p in members:
            point_classes[p].append(c)

    start_points = [p.multiplicity for p in high]
    start_classes = _reindex([(size, len(members)) for members, size in classes])
    best: List[Optional[Tuple[Tuple[int, ...], ...]]] = [None]

    def search(point_colors: List[int], class_colors: List[int]) -> None:
        point_colors, class_colors = _refine(point_colors, classes, class_colors, point_classes)
        cells: Dict[int, List[int]] = defaultdict(list)
        for p, color in enumerate(point_colors):
            cells[color].append(p)
        target = next((cells[c] for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            code = _encode(d, point_colors, classes)
            if best[0] is None or code < best[0]:
                best[0] = code
            return
        for v in target:
            split = _reindex([(color, 0 if p == v else 1) for p, color in enumerate(point_colors)])
            search(split, class_colors)

    search(_reindex(start_points), start_classes)
    assert best[0] is not None
    return LatticeCertificate(d=d, encoding=best[0])


# ---------------------------------------------------------------------------
# Group checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupMember:
    source: str
    certificate: LatticeCertificate
    nu: int
    splitting_type: Tuple[int, int]


def conjecture12_check(group: Sequence[GroupMember]) -> Verdict:
    """Within each certificate class, nu and the generic splitting type must agree."""
    classes: Dict[LatticeCertificate, List[GroupMember]] = defaultdict(list)
    for member in sorted(group, key=lambda m: m.source):
        classes[member.certificate].append(member)
    mismatches: List[Dict[str, Any]] = []
    summary: List[Dict[str, Any]] = []
    for certificate in sorted(classes, key=str):
        members = classes[certificate]
        first = members[0]
        for other in members[1:]:
            if other.nu != first.nu or other.splitting_type != first.splitting_type:
                mismatches.append(
                    {
                        "certificate": str(certificate),
                        "first": first.source,
                        "second": other.source,
                        "nu": [first.nu, other.nu],
                        "splitting_type": [list(first.splitting_type), list(other.splitting_type)],
                    }
                )
        summary.append({"certificate": str(certificate), "members": [m.source for m in members]})
    details: Dict[str, Any] = {"classes": summary}
    if mismatches:
        details["mismatches"] = mismatches
        logger.error("combinatorial_invariance_violation", mismatches=len(mismatches))
        return Verdict("combinatorial_invariance", VerdictStatus.VIOLATION, details)
    return Verdict("combinatorial_invariance", VerdictStatus.CONSISTENT, details)
