"""Rendering of solver, oracle and census results."""

from __future__ import annotations

import json
from typing import TYPE_CHECKING, Any

from rich.table import Table

if TYPE_CHECKING:
    from rich.console import Console

    from .cycles import CycleCensus
    from .program import AnswerSet
    from .solver import SolveResult, SolverStats

UNSATISFIABLE = "UNSATISFIABLE"


def format_answer_sets(answer_sets: list[AnswerSet]) -> str:
    """One ``{a, b}`` line per answer set, or ``UNSATISFIABLE``."""
    if not answer_sets:
        return UNSATISFIABLE + "\n"
    return "".join(f"{answer}\n" for answer in answer_sets)


def solve_report(result: SolveResult) -> dict[str, Any]:
    """JSON-ready answer sets and statistics."""
    return {
        "answer_sets": [list(answer.atoms) for answer in result.answer_sets],
        "stats": result.stats.model_dump(),
    }


def format_json(data: dict[str, Any]) -> str:
    """Indented JSON with a trailing newline."""
    return json.dumps(data, indent=2) + "\n"


def print_stats(console: Console, stats: SolverStats) -> None:
    """Solver counters as a two-column table."""
    table = Table(title="Solver statistics", show_header=False)
    table.add_column("counter", style="bold blue")
    table.add_column("value", justify="right")
    table.add_row("worlds explored", str(stats.worlds))
    table.add_row("cycle breaks", str(stats.cycle_breaks))
    table.add_row("NEC seen", str(stats.nec_seen))
    table.add_row("NOC seen", str(stats.noc_seen))
    table.add_row("recursion depth", str(stats.max_depth))
    table.add_row("unsupported worlds", str(stats.rejected_unsupported))
    table.add_row("unstable candidates", str(stats.rejected_unstable))
    console.print(table)


def format_census(census: CycleCensus) -> str:
    """Plain per-SCC cycle counts, then totals."""
    lines = ["scc\tpositive\tnec\tnoc\tmembers"]
    lines.extend(
        f"{i}\t{c.positive}\t{c.nec}\t{c.noc}\t{' '.join(c.members)}" for i, c in enumerate(census.components)
    )
    lines.append(f"total\t{census.positive}\t{census.nec}\t{census.noc}\t")
    return "\n".join(lines) + "\n"


def print_mismatch(console: Console, solver_only: list[AnswerSet], oracle_only: list[AnswerSet]) -> None:
    """Show the answer sets on which the two engines disagree."""
    console.print("[bold red]Solver and oracle disagree[/bold red]")
    for answer in solver_only:
        console.print(f"  [red]solver only[/]\t{answer}")
    for answer in oracle_only:
        console.print(f"  [red]oracle only[/]\t{answer}")
