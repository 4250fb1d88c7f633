"""Batch analysis of a directory of arrangement files."""

from __future__ import annotations

import concurrent.futures
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
import structlog

from src.analysis.conjectures import GroupMember, LatticeCertificate, Verdict, VerdictStatus, conjecture12_check
from src.collector.analyzer import AnalysisResult, ArrangementAnalyzer
from src.common.errors import ArrlabError, InternalError

logger = structlog.get_logger()


@dataclass
class BatchEntry:
    source: str
    result: Optional[AnalysisResult] = None
    error: Optional[ArrlabError] = None

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return self.error.exit_code
        assert self.result is not None
        return self.result.exit_code

    def to_dict(self) -> Dict[str, Any]:
        if self.error is not None:
            return {"source": self.source, "error": self.error.to_dict()}
        assert self.result is not None
        return self.result.report


@dataclass
class BatchSummary:
    entries: List[BatchEntry] = field(default_factory=list)
    groups: List[Verdict] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        codes = [e.exit_code for e in self.entries]
        codes += [1 for g in self.groups if g.status is VerdictStatus.VIOLATION]
        return max(codes, default=0)

    def counts(self) -> Dict[str, int]:
        tally: Counter = Counter()
        for entry in self.entries:
            if entry.result is None:
                tally["ERROR"] += 1
                continue
            for verdict in entry.result.verdicts:
                tally[verdict.status.value] += 1
        for verdict in self.groups:
            tally[verdict.status.value] += 1
        return {key: tally.get(key, 0) for key in ("CONSISTENT", "INCONCLUSIVE", "VIOLATION", "ERROR")}

    def aggregate(self) -> Dict[str, Any]:
        return {
            "aggregate": {
                "files": str(len(self.entries)),
                "counts": {k: str(v) for k, v in self.counts().items()},
                "groups": [g.to_dict() for g in self.groups],
                "exit_code": str(self.exit_code),
            }
        }

    def rows(self) -> List[Dict[str, Any]]:
        """Flattened per-file rows for tabular export."""
        rows = []
        for entry in self.entries:
            row: Dict[str, Any] = {"source": entry.source}
            if entry.error is not None:
                row["error"] = entry.error.code
            else:
                report = entry.to_dict()
                lattice = report.get("lattice") or {}
                nu_prime = report.get("nu_prime") or {}
                row.update(
                    {
                        "d": report["d"],
                        "type": lattice.get("type_tag"),
                        "tau": report["jacobian"]["tau_alg"],
                        "mdr": report["jacobian"]["r"],
                        "nu": report["jacobian"]["nu"],
                        "nu_prime": nu_prime.get("value"),
                        "exactness": nu_prime.get("exactness"),
                        "freeness": report["freeness"]["status"],
                    }
                )
                for verdict in report["verdicts"]:
                    row[verdict["check"]] = verdict["status"]
            rows.append(row)
        return rows

    def export_to_csv(self, filename: str) -> None:
        df = pd.DataFrame(self.rows())
        df.to_csv(filename, index=False)
        logger.info("exported_csv", path=filename, rows=len(df))


class BatchCollector:
    """Analyze every *.json file in a directory and run the group checks."""

    def __init__(self, directory: str, jobs: int = 1, analyzer: Optional[ArrangementAnalyzer] = None) -> None:
        self.directory = Path(directory)
        self.jobs = max(1, jobs)
        self.analyzer = analyzer or ArrangementAnalyzer()

    def sources(self) -> List[str]:
        return [str(p) for p in sorted(self.directory.glob("*.json"))]

    def _analyze_one(self, source: str) -> BatchEntry:
        try:
            return BatchEntry(source, result=self.analyzer.analyze_source(source))
        except ArrlabError as e:
            logger.warning("batch_input_failed", source=source, code=e.code, error=e.message)
            return BatchEntry(source, error=e)
        except Exception as e:  # noqa: BLE001
            logger.error("batch_input_crashed", source=source, error=str(e))
            return BatchEntry(source, error=InternalError(str(e)))

    def collect(self) -> BatchSummary:
        sources = self.sources()
        entries: Dict[str, BatchEntry] = {}
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.jobs) as executor:
            futures = {executor.submit(self._analyze_one, source): source for source in sources}
            for future in concurrent.futures.as_completed(futures):
                source = futures[future]
                entries[source] = future.result()
        ordered = [entries[s] for s in sources]
        summary = BatchSummary(entries=ordered, groups=group_checks([e.result for e in ordered if e.result]))
        logger.info("batch_complete", files=len(ordered), exit_code=summary.exit_code)
        return summary


def group_checks(results: Sequence[AnalysisResult]) -> List[Verdict]:
    """One combinatorial-invariance verdict per certificate class."""
    classes: Dict[LatticeCertificate, List[GroupMember]] = defaultdict(list)
    for result in results:
        if result.certificate is None or result.nu is None or result.splitting_type is None:
            continue
        classes[result.certificate].append(
            GroupMember(result.source, result.certificate, result.nu, result.splitting_type)
        )
    return [conjecture12_check(classes[c]) for c in sorted(classes, key=str)]
