"""arrlab command-line front end."""

from __future__ import annotations

import json
import sys
from typing import Any, Dict, Optional

import click
import structlog
from tabulate import tabulate

from src.arrangements import catalog
from src.arrangements.arrangement import to_document
from src.collector.analyzer import ArrangementAnalyzer
from src.collector.batch import BatchCollector
from src.common.errors import ArrlabError, InternalError
from src.common.logging import configure_logging
from src.common.settings import get_settings

logger = structlog.get_logger()


def _dump(payload: Dict[str, Any], indent: Optional[int] = 2) -> str:
    return json.dumps(payload, sort_keys=True, indent=indent)


def _error_payload(source: str, error: ArrlabError) -> Dict[str, Any]:
    return {"source": source, "error": error.to_dict()}


def _report_table(report: Dict[str, Any]) -> str:
    lattice = report.get("lattice") or {}
    nu_prime = report.get("nu_prime") or {}
    rows = [
        ["source", report["source"]],
        ["d", report["d"]],
        ["type", lattice.get("type_tag", "-")],
        ["tau", report["jacobian"]["tau_alg"]],
        ["mdr", report["jacobian"]["r"]],
        ["nu", report["jacobian"]["nu"]],
        ["nu'", f"{nu_prime['value']} ({nu_prime['exactness']})" if nu_prime else "-"],
        ["freeness", report["freeness"]["status"]],
        ["splitting type", ",".join(report["freeness"]["splitting_type"])],
    ]
    rows += [[f"verdict: {v['check']}", v["status"]] for v in report["verdicts"]]
    return tabulate(rows, headers=["Field", "Value"], tablefmt="grid")


@click.group()
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default from LOG_LEVEL or config)")
def main(log_level: Optional[str]) -> None:
    """Exact freeness, spectrum and conjecture checks for plane line arrangements."""
    # loading settings logs, so route logs to stderr before the first read
    configure_logging(log_level)
    configure_logging(log_level, default=get_settings().log_level)


@main.command()
@click.argument("source")
@click.option("--h1", type=int, default=None, help="dim H^1(F)_{-1}, used for even d")
@click.option("--rational", is_flag=True, help="Assert rational components for a bare polynomial")
@click.option("--skip-spectrum", is_flag=True, help="Do not compute the full spectrum table")
@click.option("--json/--table", "as_json", default=True, help="JSON report (default) or a human-readable table")
@click.option("--timings", is_flag=True, help="Include per-stage timings in the report")
def analyze(
    source: str, h1: Optional[int], rational: bool, skip_spectrum: bool, as_json: bool, timings: bool
) -> None:
    """Analyze one arrangement file or catalog spec (e.g. catalog:generic:5)."""
    analyzer = ArrangementAnalyzer(h1=h1, rational=rational, skip_spectrum=skip_spectrum, timings=timings)
    try:
        result = analyzer.analyze_source(source)
    except ArrlabError as e:
        logger.error("analysis_failed", source=source, code=e.code, error=e.message)
        click.echo(_dump(_error_payload(source, e)))
        sys.exit(e.exit_code)
    except Exception as e:  # noqa: BLE001
        error = InternalError(str(e))
        logger.exception("analysis_crashed", source=source)
        click.echo(_dump(_error_payload(source, error)))
        sys.exit(error.exit_code)
    if as_json:
        click.echo(_dump(result.report))
    else:
        click.echo(_report_table(result.report))
    sys.exit(result.exit_code)


@main.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--jobs", type=int, default=None, help="Files analyzed concurrently")
@click.option("--h1", type=int, default=None, help="dim H^1(F)_{-1}, used for even d")
@click.option("--csv", "csv_path", default=None, help="Also export per-file rows to this CSV file")
@click.option("--json/--table", "as_json", default=True, help="JSON lines (default) or human-readable tables")
def batch(directory: str, jobs: Optional[int], h1: Optional[int], csv_path: Optional[str], as_json: bool) -> None:
    """Analyze every *.json file in DIRECTORY and run the group checks."""
    jobs = jobs or get_settings().batch.jobs
    collector = BatchCollector(directory, jobs=jobs, analyzer=ArrangementAnalyzer(h1=h1))
    summary = collector.collect()
    if csv_path:
        summary.export_to_csv(csv_path)
    if not as_json:
        rows = summary.rows()
        if rows:
            click.echo(tabulate(rows, headers="keys", tablefmt="grid"))
        counts = summary.counts()
        click.echo(tabulate([[k, v] for k, v in counts.items()], headers=["Status", "Count"], tablefmt="grid"))
    else:
        for entry in summary.entries:
            click.echo(_dump(entry.to_dict(), indent=None))
        click.echo(_dump(summary.aggregate(), indent=None))
    sys.exit(summary.exit_code)


@main.command(name="catalog")
@click.argument("spec")
def catalog_command(spec: str) -> None:
    """Emit the input JSON for a catalog spec such as catalog:L:7:5."""
    try:
        entry = catalog.build(spec if catalog.is_catalog_spec(spec) else catalog.CATALOG_PREFIX + spec)
    except ArrlabError as e:
        click.echo(_dump(_error_payload(spec, e)))
        sys.exit(e.exit_code)
    click.echo(_dump(to_document(entry.arrangement)))


if __name__ == "__main__":
    main()
