"""Single-input pipeline: parse -> lattice -> jacobian -> spectrum -> verdicts."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import structlog

from src.analysis.conjectures import (
    LatticeCertificate,
    Verdict,
    VerdictStatus,
    canonical_certificate,
    conjecture3_check,
    free_equality_check,
    hirzebruch_verdict,
    hs_vanishing_verdict,
    walther_check,
)
from src.analysis.jacobian import build_profile, classify, hs_vanishing_check
from src.analysis.spectrum import NuPrimeResult, full_spectrum, middle_multiplicity, nu_prime
from src.arrangements import catalog
from src.arrangements.arrangement import (
    Arrangement,
    LatticeSummary,
    compute_lattice,
    hirzebruch_check,
    lattice_relations,
    parse_arrangement,
    summarize,
)
from src.common.errors import InternalError, NotEssentialError, ParseError
from src.common.settings import RankSettings

logger = structlog.get_logger()


def load_source(source: str) -> Arrangement:
    """Read an input file, or build a catalog arrangement from a "catalog:..." spec."""
    if catalog.is_catalog_spec(source):
        return catalog.build(source).arrangement
    path = Path(source)
    if not path.is_file():
        raise ParseError(f"input file not found: {source}", source=source)
    return parse_arrangement(path.read_text(encoding="utf-8"), source=source)


def render(value: Any) -> Any:
    """Exact values as strings; containers rendered recursively."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    return str(value)


@dataclass
class AnalysisResult:
    source: str
    report: Dict[str, Any]
    verdicts: List[Verdict] = field(default_factory=list)
    certificate: Optional[LatticeCertificate] = None
    nu: Optional[int] = None
    splitting_type: Optional[Tuple[int, int]] = None

    @property
    def violated(self) -> bool:
        return any(v.status is VerdictStatus.VIOLATION for v in self.verdicts)

    @property
    def exit_code(self) -> int:
        return 1 if self.violated else 0


class ArrangementAnalyzer:
    """Runs the full pipeline on one arrangement."""

    def __init__(
        self,
        h1: Optional[int] = None,
        rational: bool = False,
        skip_spectrum: bool = False,
        timings: bool = False,
        rank_settings: Optional[RankSettings] = None,
    ) -> None:
        self.h1 = h1
        self.rational = rational
        self.skip_spectrum = skip_spectrum
        self.timings = timings
        self.rank_settings = rank_settings

    def analyze_source(self, source: str) -> AnalysisResult:
        return self.analyze(load_source(source))

    def analyze(self, arrangement: Arrangement) -> AnalysisResult:
        clock: Dict[str, float] = {}
        started = time.perf_counter()

        def lap(stage: str) -> None:
            nonlocal started
            now = time.perf_counter()
            clock[stage] = now - started
            started = now

        arrangement = arrangement.with_assumptions(h1_minus=self.h1, rational_components=self.rational)
        h1 = arrangement.assumptions.h1_minus
        d = arrangement.d
        report: Dict[str, Any] = {"source": arrangement.source, "d": d, "cyclotomic_order": arrangement.context.order}
        log = logger.bind(source=arrangement.source, d=d)

        summary: Optional[LatticeSummary] = None
        certificate: Optional[LatticeCertificate] = None
        if arrangement.has_lines:
            points = compute_lattice(arrangement)
            summary = summarize(points, d)
            certificate = canonical_certificate(points, d)
        elif arrangement.declared_lattice is not None:
            summary = arrangement.declared_lattice
        if summary is not None and not summary.essential:
            raise NotEssentialError("all lines pass through one point", source=arrangement.source, d=d)
        report["lattice"] = self._lattice_section(summary, certificate)
        lap("lattice")

        profile = build_profile(arrangement.polynomial, self.rank_settings)
        if arrangement.has_lines and summary is not None and summary.tau_comb != profile.tau_alg:
            raise InternalError("combinatorial and algebraic Tjurina numbers differ", tau_comb=summary.tau_comb, tau_alg=profile.tau_alg)
        freeness = classify(d, profile.r, profile.tau_alg, profile.nu)
        report["jacobian"] = {
            "milnor_dims": profile.milnor_dims,
            "r": profile.r,
            "defect_table": profile.defect_table,
            "nu": profile.nu,
            "st": profile.st,
            "tau_alg": profile.tau_alg,
            "reg": profile.reg,
        }
        report["freeness"] = {
            "status": freeness.status.value,
            "exponents": freeness.exponents,
            "splitting_type": freeness.splitting_type,
        }
        lap("jacobian")

        verdicts: List[Verdict] = []
        bound: Optional[NuPrimeResult] = None
        report["spectrum"] = None
        report["nu_prime"] = None
        if summary is not None:
            if not self.skip_spectrum:
                spectrum = full_spectrum(summary)
                report["spectrum"] = {
                    "entries": spectrum.entries,
                    "sum_check": {
                        "total": spectrum.total,
                        "expected": d * summary.chi_complement - 1,
                        "holds": True,
                    },
                }
            bound = nu_prime(summary, h1 if d % 2 == 0 else None)
            if bound.value != bound.h1_used // 2 + middle_multiplicity(summary):
                raise InternalError("nu' closed form and spectrum multiplicity disagree", d=d)
            report["nu_prime"] = {
                "value": bound.value,
                "exactness": bound.exactness.value,
                "h1_used": bound.h1_used,
                "base": bound.base,
                "correction": bound.correction,
            }
            verdicts.append(walther_check(profile.nu, bound))
            verdicts.append(conjecture3_check(profile.nu, bound, summary.m_max, d, r=profile.r))
            verdicts.append(hirzebruch_verdict(hirzebruch_check(summary)))
        hs = hs_vanishing_check(profile, arrangement.assumptions.rational_components, arrangement.has_lines)
        verdicts.append(hs_vanishing_verdict(hs))
        if summary is not None and bound is not None:
            verdicts.append(free_equality_check(freeness, summary, bound))
        report["verdicts"] = [v.to_dict() for v in verdicts]
        lap("verdicts")

        if self.timings:
            report["timings"] = {stage: f"{seconds:.6f}" for stage, seconds in clock.items()}
        log.info("analyzed", nu=profile.nu, status=freeness.status.value, verdicts=[v.status.value for v in verdicts])
        return AnalysisResult(
            source=arrangement.source,
            report=render(report),
            verdicts=verdicts,
            certificate=certificate,
            nu=profile.nu,
            splitting_type=freeness.splitting_type,
        )

    @staticmethod
    def _lattice_section(summary: Optional[LatticeSummary], certificate: Optional[LatticeCertificate]) -> Optional[Dict[str, Any]]:
        if summary is None:
            return None
        relations = lattice_relations(summary)
        if not (relations.nu2_identity_holds and relations.tau_identity_holds):
            raise InternalError("lattice relations fail", d=summary.d)
        section: Dict[str, Any] = {
            "nu": summary.nu,
            "tau_comb": summary.tau_comb,
            "m_max": summary.m_max,
            "type_tag": str(summary.type_tag),
            "chi_complement": summary.chi_complement,
            "sigma": relations.sigma,
        }
        if certificate is not None:
            section["certificate"] = str(certificate)
        return section


def analyze(source: str, **options: Any) -> AnalysisResult:
    return ArrangementAnalyzer(**options).analyze_source(source)
