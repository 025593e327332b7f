"""
Command-line front end

Exit codes: 0 when every checked property holds, 1 when any is
falsified, 2 on a usage error or a disallowed exhaustion.
"""

import logging
from typing import List, Optional

import typer
from pydantic import TypeAdapter

from ismcheck.config import get_settings
from ismcheck.errors import IsmCheckError
from ismcheck.ism import render_trace
from ismcheck.log import setup_logging
from ismcheck.reports import OracleReport, ReportStore, RunReport
from ismcheck.runner import Verdict, check_bool
from ismcheck.suites import (
    ALL,
    SUITES,
    get_suite,
    oracle_reports,
    replay_property,
    run_suite,
    suggest_property_bound,
)

logger = logging.getLogger(__name__)

app = typer.Typer(help="Property-based testing for indexed state machines", no_args_is_help=True)

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_USAGE = 2

RUN_REPORTS = TypeAdapter(List[RunReport])
ORACLE_REPORTS = TypeAdapter(List[OracleReport])


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level (default from ISMPBT_LOG_LEVEL)"),
):
    setup_logging(log_level or get_settings().log_level)


def _fail(e: Exception) -> typer.Exit:
    typer.echo(f"Error: {e}", err=True)
    return typer.Exit(EXIT_USAGE)


@app.command()
def run(
    suite: str = typer.Option(..., "--suite", "-s", help="Suite name"),
    prop: str = typer.Option(ALL, "--prop", "-p", help="Property name, or 'all'"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Root seed (default from ISMPBT_SEED)"),
    tests: Optional[int] = typer.Option(None, "--tests", "-n", min=1, help="Tests per property"),
    depth: Optional[int] = typer.Option(None, "--depth", min=0, help="Override the trace bound"),
    json_output: bool = typer.Option(False, "--json", help="Print JSON reports"),
    allow_exhaust: bool = typer.Option(False, "--allow-exhaust", help="Treat exhausted runs as passing"),
    save: bool = typer.Option(False, "--save", help="Persist reports to the report database"),
):
    """Run a suite's properties and print QuickCheck-style logs"""
    try:
        runs = run_suite(suite, prop, seed=seed, tests=tests, depth=depth)
    except IsmCheckError as e:
        raise _fail(e)

    reports = [r.report for r in runs]
    if json_output:
        typer.echo(RUN_REPORTS.dump_json(reports, indent=2).decode())
    else:
        for r in runs:
            typer.echo(f"{r.report.suite}/{r.spec.name} (bound {r.bound}, seed {r.report.seed}):")
            typer.echo(r.result.log)

    if save:
        store = ReportStore()
        for report in reports:
            store.save(report)

    verdicts = [r.result.verdict for r in runs]
    if Verdict.FALSIFIED in verdicts:
        raise typer.Exit(EXIT_FALSIFIED)
    if not all(check_bool(allow_exhaust, r.result) for r in runs):
        raise typer.Exit(EXIT_USAGE)


@app.command()
def oracle(
    suite: str = typer.Option(..., "--suite", "-s"),
    prop: str = typer.Option(ALL, "--prop", "-p"),
    depth: Optional[int] = typer.Option(None, "--depth", min=0, help="Override the trace bound"),
    tests: int = typer.Option(100, "--tests", "-n", min=0, help="Test count for the falsification chance"),
    json_output: bool = typer.Option(False, "--json"),
):
    """Exact probability that a trace visits the property's target"""
    try:
        reports = oracle_reports(suite, prop, depth=depth, tests=tests)
    except IsmCheckError as e:
        raise _fail(e)

    if json_output:
        typer.echo(ORACLE_REPORTS.dump_json(reports, indent=2).decode())
        return
    for r in reports:
        typer.echo(
            f"{r.suite}/{r.property} depth {r.depth} [{r.variant}]: "
            f"visit {r.visit_probability} (~{r.visit_approx:.6f}); "
            f"counterexample {r.counterexample_probability} (~{r.counterexample_approx:.6f}); "
            f"falsified within {r.tests} tests ~{r.falsification_chance:.6f}"
        )


@app.command()
def replay(
    suite: str = typer.Option(..., "--suite", "-s"),
    prop: str = typer.Option(..., "--prop", "-p"),
    index: int = typer.Option(..., "--index", "-i", min=0, help="Test index from a falsified report"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    depth: Optional[int] = typer.Option(None, "--depth", min=0),
):
    """Regenerate the trace a given test drew"""
    try:
        spec = get_suite(suite).property(prop)
        trace, holds = replay_property(suite, prop, get_settings().seed if seed is None else seed, index, depth)
    except IsmCheckError as e:
        raise _fail(e)

    typer.echo(render_trace(spec.model, trace))
    typer.echo(f"holds: {holds}")


@app.command()
def bound(
    suite: str = typer.Option(..., "--suite", "-s"),
    prop: str = typer.Option(..., "--prop", "-p"),
    threshold: float = typer.Option(0.99, "--threshold", "-t", help="Required visit probability"),
    max_depth: int = typer.Option(64, "--max-depth", min=1),
    variant: Optional[str] = typer.Option(None, "--variant", help="Oracle variant (default: the suite's first)"),
):
    """Smallest trace bound whose visit probability reaches the threshold"""
    try:
        found = suggest_property_bound(suite, prop, threshold, max_depth, variant)
    except IsmCheckError as e:
        raise _fail(e)

    if found is None:
        typer.echo(f"No bound up to {max_depth} reaches {threshold}")
        raise typer.Exit(EXIT_FALSIFIED)
    typer.echo(f"suggested bound: {found}")


@app.command("suites")
def list_suites():
    """List registered suites and their properties"""
    for name, suite in SUITES.items():
        typer.echo(name)
        for spec in suite.properties:
            typer.echo(f"  {spec.name} (bound {spec.bound}): {spec.description}")


@app.command()
def history(
    limit: int = typer.Option(20, "--limit", min=1),
    suite: Optional[str] = typer.Option(None, "--suite", "-s"),
):
    """Show saved run reports, newest first"""
    try:
        reports = ReportStore().recent(limit, suite)
    except IsmCheckError as e:
        raise _fail(e)

    if not reports:
        typer.echo("No saved reports")
        return
    for r in reports:
        index = "" if r.test_index is None else f" @ test {r.test_index}"
        typer.echo(f"{r.suite}/{r.property} seed {r.seed}: {r.verdict} after {r.tests} tests{index}")
