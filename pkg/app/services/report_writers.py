"""
CSV, JSON and text renderings of the result models

Every writer returns a string with LF line endings. The CSV and JSON forms of a
result carry the same numbers, and nothing in them depends on wall-clock time
unless timing output was requested.
"""
import csv
import io
import json
from typing import Iterable, List, Optional, Sequence

from rich.console import Console
from rich.table import Table

from app.models.family_models import ConjectureReport, TableCheck
from app.models.matthews_models import TrajectoryOutcome
from app.models.search_models import ChainCensus, PolyBoundReport, SearchRecord, TargetedChainCheck

SEARCH_COLUMNS = ["n", "value", "witness_hex", "convention", "seeds_examined", "wall_ms", "published_value"]
VERDICT_COLUMNS = ["family", "n", "predicted", "observed", "verdict"]
MATTHEWS_COLUMNS = ["seed_hex", "kind", "steps", "max_degree", "cycle_len"]
POLYBOUND_COLUMNS = ["n", "mode", "seeds_checked", "max_r_A", "witness_hex", "bound", "violation", "violating_cores"]


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if value is None else value for value in row])
    return buffer.getvalue()


def _optional(value) -> str:
    return "" if value is None else str(value)


def search_csv(records: Iterable[SearchRecord], timing: bool = False) -> str:
    return _csv(SEARCH_COLUMNS, (
        [
            r.n,
            r.value,
            r.witness.to_hex(),
            r.convention,
            r.seeds_examined,
            f"{r.wall_time * 1000:.0f}" if timing else None,
            r.published_value,
        ]
        for r in records
    ))


def search_json(records: Iterable[SearchRecord], timing: bool = False) -> str:
    exclude = None if timing else {"wall_time"}
    payload = [r.model_dump(mode="json", exclude=exclude) for r in records]
    return json.dumps(payload, sort_keys=True) + "\n"


def census_json(census: ChainCensus) -> str:
    payload = {
        "n": census.n,
        "chain_count": census.chain_count,
        "max_chain_len": census.max_chain_len,
        "histogram": {str(length): count for length, count in sorted(census.length_histogram.items())},
        "witness_chain": [p.to_hex() for p in census.witness_chain],
        "self_conjugate_chains": census.self_conjugate_chains,
        "conjugation_classes": census.conjugation_classes,
    }
    return json.dumps(payload, sort_keys=True) + "\n"


def verdict_csv(report: ConjectureReport) -> str:
    return _csv(VERDICT_COLUMNS, (
        [v.family, v.n, v.predicted, v.observed, "holds" if v.holds else "fails"]
        for v in report.verdicts
    ))


def table_check_csv(checks: Iterable[TableCheck]) -> str:
    return _csv(VERDICT_COLUMNS, (
        [
            c.family,
            c.n,
            " ".join(map(str, c.expected)),
            " ".join(map(str, c.observed)),
            "match" if c.match else "mismatch",
        ]
        for c in checks
    ))


def matthews_census_csv(outcomes: Iterable[TrajectoryOutcome]) -> str:
    return _csv(MATTHEWS_COLUMNS, (
        [o.seed.to_hex(), o.kind.value, o.steps, _optional(o.max_degree), _optional(o.cycle_length)]
        for o in outcomes
    ))


def matthews_json(outcome: TrajectoryOutcome) -> str:
    return json.dumps(outcome.model_dump(mode="json"), sort_keys=True) + "\n"


def polybound_csv(report: PolyBoundReport) -> str:
    return _csv(POLYBOUND_COLUMNS, (
        [
            row.n,
            row.mode,
            row.seeds_checked,
            row.max_r_A,
            row.witness.to_hex(),
            row.bound,
            "yes" if row.violation else "no",
            row.violating_cores,
        ]
        for row in report.rows
    ))


def targeted_json(check: TargetedChainCheck) -> str:
    return json.dumps(check.model_dump(mode="json"), sort_keys=True) + "\n"


# -- text tables ---------------------------------------------------------

def render_table(title: str, header: Sequence[str], rows: List[Sequence], width: Optional[int] = 120) -> str:
    """A rich table rendered to plain text, no colour codes"""
    table = Table(title=title)
    for column in header:
        table.add_column(column)
    for row in rows:
        table.add_row(*("" if value is None else str(value) for value in row))
    console = Console(file=io.StringIO(), width=width, color_system=None, force_terminal=False)
    console.print(table)
    return console.file.getvalue()


def verdict_text(report: ConjectureReport) -> str:
    rows = [[v.family, v.n, v.parameter, v.predicted, v.observed, "holds" if v.holds else "fails"]
            for v in report.verdicts]
    title = f"{report.conjecture} over {report.parameter_range}: {len(report.failures)} failing"
    return render_table(title, ["family", "n", "parameter", "predicted", "observed", "verdict"], rows)


def table_check_text(checks: List[TableCheck]) -> str:
    rows = [[c.family, c.n, str(c.polynomial), c.expected, c.observed, "match" if c.match else "mismatch"]
            for c in checks]
    return render_table("published degree sequences", ["family", "n", "polynomial", "expected", "observed", "verdict"], rows)


def polybound_text(report: PolyBoundReport) -> str:
    rows = [[r.n, r.mode, r.seeds_checked, r.max_r_A, r.bound, "yes" if r.violation else "no"] for r in report.rows]
    title = f"r_A against n(n+1)/2, {report.violations} violation(s)"
    return render_table(title, ["n", "mode", "seeds", "max r_A", "bound", "violation"], rows)
