"""Benchmark rounds over generated programs."""

from __future__ import annotations

import csv
import io
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from typing import TYPE_CHECKING

from pydantic import BaseModel, ConfigDict, Field
from rich.table import Table

from .config import GraspConfig
from .exceptions import CycleBudgetExceeded
from .generator import GenConfig, generate, stats
from .oracle import enumerate_answer_sets_bruteforce
from .solver import solve

if TYPE_CHECKING:
    from rich.console import Console

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "round",
    "program",
    "seed",
    "atoms",
    "rules",
    "neg_prob",
    "nec",
    "noc",
    "models",
    "solve_seconds",
    "oracle_seconds",
)


class BenchConfig(BaseModel):
    """Shape of a benchmark run."""

    model_config = ConfigDict(populate_by_name=True)

    rounds: int = Field(default=5, ge=1)
    programs: int = Field(default=100, ge=1)
    atoms: int = Field(default=12, ge=1)
    rules: int = Field(default=20, ge=1)
    neg: float = Field(default=0.5, ge=0.0, le=1.0)
    max_body: int = Field(default=3, alias="max-body", ge=1)
    seed: int = Field(default=0, ge=0)
    cycle_cap: int = Field(default=1_000_000, alias="cycle-cap", ge=1)
    oracle_atom_cap: int = Field(default=16, alias="oracle-atom-cap", ge=0)
    jobs: int = Field(default=1, ge=1)

    def tasks(self) -> list[BenchTask]:
        """One task per generated program, seeds consecutive from ``seed``."""
        return [
            BenchTask(
                round=r,
                program=p,
                gen=GenConfig(
                    num_atoms=self.atoms,
                    num_rules=self.rules,
                    max_body_len=min(self.max_body, self.atoms),
                    negation_prob=self.neg,
                    seed=self.seed + r * self.programs + p,
                ),
                cycle_cap=self.cycle_cap,
                oracle_atom_cap=self.oracle_atom_cap,
            )
            for r in range(self.rounds)
            for p in range(self.programs)
        ]


class BenchTask(BaseModel):
    """One program to generate and time."""

    round: int
    program: int
    gen: GenConfig
    cycle_cap: int
    oracle_atom_cap: int


class BenchRow(BaseModel):
    """One CSV line; None fields are written empty."""

    round: int
    program: int
    seed: int
    atoms: int
    rules: int
    neg_prob: float
    nec: int | None = None
    noc: int | None = None
    models: int | None = None
    solve_seconds: float | None = None
    oracle_seconds: float | None = None


def run_task(task: BenchTask) -> BenchRow:
    """Generate, census, solve and (when small enough) brute-force one program."""
    program = generate(task.gen)
    row = BenchRow(
        round=task.round,
        program=task.program,
        seed=task.gen.seed,
        atoms=len(program.atoms),
        rules=len(program.rules),
        neg_prob=task.gen.negation_prob,
    )
    try:
        report = stats(program, task.cycle_cap)
        row.nec, row.noc = report.nec, report.noc
    except CycleBudgetExceeded as e:
        logger.warning(f"> Seed {task.gen.seed}: census skipped, {e}")

    try:
        start = time.perf_counter()
        result = solve(program, GraspConfig(cycle_cap=task.cycle_cap))
        row.solve_seconds = time.perf_counter() - start
        row.models = len(result.models)
    except CycleBudgetExceeded as e:
        logger.warning(f"> Seed {task.gen.seed}: solve skipped, {e}")

    if row.atoms <= task.oracle_atom_cap:
        start = time.perf_counter()
        enumerate_answer_sets_bruteforce(program, task.oracle_atom_cap)
        row.oracle_seconds = time.perf_counter() - start
    return row


def run_bench(config: BenchConfig) -> list[BenchRow]:
    """Run every task, on a process pool when ``jobs`` > 1, rows in task order."""
    tasks = config.tasks()
    logger.info(f"> Running {len(tasks)} programs in {config.rounds} rounds on {config.jobs} workers")
    if config.jobs == 1:
        rows = [run_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            rows = list(pool.map(run_task, tasks))
    return sorted(rows, key=lambda row: (row.round, row.program))


def _cell(value: float | None) -> str:
    if value is None:
        return ""
    return f"{value:.6f}" if isinstance(value, float) else str(value)


def to_csv(config: BenchConfig, rows: list[BenchRow]) -> str:
    """CSV text: a ``#`` comment line with the config, a header, then one line per program."""
    buffer = io.StringIO()
    buffer.write(f"# {config.model_dump_json()}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        data = row.model_dump()
        writer.writerow(
            [_cell(data[c]) if c in ("solve_seconds", "oracle_seconds") else _plain(data[c]) for c in CSV_COLUMNS]
        )
    return buffer.getvalue()


def _plain(value: object) -> str:
    return "" if value is None else str(value)


def _mean(values: list[float | int | None]) -> str:
    present = [v for v in values if v is not None]
    return f"{statistics.fmean(present):.3f}" if present else "-"


def print_summary(console: Console, rows: list[BenchRow]) -> None:
    """Per-round means of rules, cycle counts and times."""
    table = Table(title="Benchmark rounds")
    for column in ("round", "programs", "rules", "NEC", "NOC", "models", "solve s", "oracle s"):
        table.add_column(column, justify="right")
    for r in sorted({row.round for row in rows}):
        batch = [row for row in rows if row.round == r]
        table.add_row(
            str(r),
            str(len(batch)),
            _mean([row.rules for row in batch]),
            _mean([row.nec for row in batch]),
            _mean([row.noc for row in batch]),
            _mean([row.models for row in batch]),
            _mean([row.solve_seconds for row in batch]),
            _mean([row.oracle_seconds for row in batch]),
        )
    console.print(table)
