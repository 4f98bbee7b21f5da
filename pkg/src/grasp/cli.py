"""Command line entry point."""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import TYPE_CHECKING, NoReturn

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from . import __version__
from .bench import BenchConfig, print_summary, run_bench, to_csv
from .config import GraspConfig, OutputFormat, get_grasp_config
from .cycles import cycle_census
from .enums import TruthValue
from .exceptions import CycleBudgetExceeded, GraspError, JustificationError, SourceError, TooManyAtoms
from .generator import GenConfig, generate
from .graph import build_cnr_graph, build_dependency_graph, to_dot
from .justification import justify, justify_absence
from .oracle import enumerate_answer_sets_bruteforce
from .parser import parse_program
from .program import format_program
from .report import format_answer_sets, format_census, format_json, print_mismatch, print_stats, solve_report
from .solver import solve

if TYPE_CHECKING:
    from collections.abc import Sequence

    from .program import AnswerSet, Program

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Failure(Exception):
    """A diagnosed failure with its exit status."""

    def __init__(self, message: str, status: int) -> None:
        super().__init__(message)
        self.status = status


def _configure_logging(verbosity: int, console: Console) -> None:
    if verbosity >= 2:
        log_level = logging.DEBUG
    elif verbosity >= 1:
        log_level = logging.INFO
    else:
        log_level = logging.WARNING

    package_logger = logging.getLogger("grasp")
    for handler in list(package_logger.handlers):
        if isinstance(handler, RichHandler):
            package_logger.removeHandler(handler)
    package_logger.addHandler(RichHandler(console=console, show_time=False, show_path=False))
    package_logger.setLevel(log_level)


def _read_source(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise _Failure(f"{path}: not valid UTF-8 (byte {e.start})", EXIT_USAGE) from None
    except OSError as e:
        raise _Failure(f"{path}: {e.strerror or e}", EXIT_USAGE) from None


def _load(path: str) -> Program:
    text = _read_source(path)
    try:
        return parse_program(text)
    except SourceError as e:
        raise _Failure(f"{path}:{e}", EXIT_USAGE) from None


def _write(text: str, out: str | None) -> None:
    if not out:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as e:
        raise _Failure(f"{out}: {e.strerror or e}", EXIT_USAGE) from None


def _cmd_solve(args: argparse.Namespace, config: GraspConfig, console: Console) -> int:
    result = solve(_load(args.file), config)
    if config.output_format is OutputFormat.JSON:
        sys.stdout.write(format_json(solve_report(result)))
    else:
        sys.stdout.write(format_answer_sets(result.answer_sets))
    if args.stats:
        print_stats(console, result.stats)
    return EXIT_OK


def _cmd_justify(args: argparse.Namespace, config: GraspConfig, _console: Console) -> int:
    result = solve(_load(args.file), config)
    if not 1 <= args.model <= len(result.models):
        raise _Failure(f"model {args.model} out of range, found {len(result.models)}", EXIT_USAGE)
    world = result.models[args.model - 1].world
    node = result.graph.node_for(args.atom)
    if node is not None and world.value(node) is TruthValue.TRUE:
        graph = justify(result.graph, world, args.atom)
    else:
        graph = justify_absence(result.graph, world, args.atom)

    if config.output_format is OutputFormat.JSON:
        sys.stdout.write(graph.to_json() + "\n")
    elif config.output_format is OutputFormat.DOT:
        sys.stdout.write(graph.to_dot())
    else:
        sys.stdout.write(graph.to_text())
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace, config: GraspConfig, _console: Console) -> int:
    answer_sets = enumerate_answer_sets_bruteforce(_load(args.file), config.oracle_atom_cap)
    sys.stdout.write(format_answer_sets(answer_sets))
    return EXIT_OK


def check_program(
    path: str, program: Program, config: GraspConfig
) -> tuple[str, list[AnswerSet], list[AnswerSet], int]:
    """Solve and brute-force one program; return both one-sided differences and the model count."""
    solved = set(solve(program, config).answer_sets)
    expected = set(enumerate_answer_sets_bruteforce(program, config.oracle_atom_cap))
    return path, sorted(solved - expected), sorted(expected - solved), len(expected)


def _cmd_check(args: argparse.Namespace, config: GraspConfig, console: Console) -> int:
    paths = list(args.files)
    programs = [_load(path) for path in paths]
    if config.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(check_program, paths, programs, [config] * len(paths)))
    else:
        outcomes = [check_program(path, program, config) for path, program in zip(paths, programs, strict=True)]

    status = EXIT_OK
    for path, solver_only, oracle_only, count in outcomes:
        if solver_only or oracle_only:
            status = EXIT_CHECK
            sys.stdout.write(f"{path}: MISMATCH\n")
            print_mismatch(console, solver_only, oracle_only)
        else:
            sys.stdout.write(f"{path}: OK ({count} answer sets)\n")
    return status


def _cmd_cycles(args: argparse.Namespace, config: GraspConfig, _console: Console) -> int:
    graph = build_dependency_graph(_load(args.file))
    census = cycle_census(graph, config.cycle_cap)
    if config.output_format is OutputFormat.JSON:
        sys.stdout.write(format_json({**census.model_dump(), "nec": census.nec, "noc": census.noc}))
    else:
        sys.stdout.write(format_census(census))
    return EXIT_OK


def _cmd_graph(args: argparse.Namespace, _config: GraspConfig, _console: Console) -> int:
    program = _load(args.file)
    graph = build_cnr_graph(program) if args.cnr else build_dependency_graph(program)
    _write(to_dot(graph, "cnr" if args.cnr else "dependency"), args.out)
    return EXIT_OK


def _cmd_gen(args: argparse.Namespace, _config: GraspConfig, _console: Console) -> int:
    gen = GenConfig(
        num_atoms=args.atoms,
        num_rules=args.rules,
        max_body_len=args.max_body,
        negation_prob=args.neg,
        constraint_prob=args.constraint_prob,
        fact_fraction=args.fact_fraction,
        seed=args.seed,
    )
    _write(format_program(generate(gen)), args.out)
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace, config: GraspConfig, console: Console) -> int:
    bench = BenchConfig(
        rounds=args.rounds,
        programs=args.programs,
        atoms=args.atoms,
        rules=args.rules,
        neg=args.neg,
        max_body=args.max_body,
        seed=args.seed,
        cycle_cap=config.cycle_cap,
        oracle_atom_cap=args.oracle_atom_cap,
        jobs=config.jobs,
    )
    rows = run_bench(bench)
    _write(to_csv(bench, rows), args.out)
    print_summary(console, rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    parser = _ArgumentParser(prog="grasp", description="Dependency-graph answer set solver")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = _ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="More log output (repeatable)")
    common.add_argument("--cycle-cap", dest="cycle_cap", type=int, default=None, help="Max elementary cycles")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    solve_cmd = subparsers.add_parser("solve", parents=[common], help="Print all answer sets")
    solve_cmd.add_argument("file", help="Program file, '-' for stdin")
    solve_cmd.add_argument("--max-models", dest="max_models", type=int, default=None)
    solve_cmd.add_argument("--stats", action="store_true", help="Print solver statistics to stderr")
    solve_cmd.add_argument("--no-verify", dest="no_verify", action="store_true", help="Skip the stability check")
    solve_cmd.add_argument("--constraint-prune", dest="constraint_prune", action="store_true")
    solve_cmd.add_argument("--format", choices=["text", "json"], default=None)
    solve_cmd.set_defaults(handler=_cmd_solve)

    justify_cmd = subparsers.add_parser("justify", parents=[common], help="Explain an atom of one answer set")
    justify_cmd.add_argument("file")
    justify_cmd.add_argument("--model", type=int, required=True, help="1-based index into the solve output")
    justify_cmd.add_argument("--atom", required=True)
    justify_cmd.add_argument("--format", choices=["text", "json", "dot"], default=None)
    justify_cmd.set_defaults(handler=_cmd_justify)

    oracle_cmd = subparsers.add_parser("oracle", parents=[common], help="Brute-force answer sets")
    oracle_cmd.add_argument("file")
    oracle_cmd.add_argument("--atom-cap", dest="oracle_atom_cap", type=int, default=None)
    oracle_cmd.set_defaults(handler=_cmd_oracle)

    check_cmd = subparsers.add_parser("check", parents=[common], help="Compare solver and oracle")
    check_cmd.add_argument("files", nargs="+")
    check_cmd.add_argument("--atom-cap", dest="oracle_atom_cap", type=int, default=None)
    check_cmd.add_argument("--jobs", type=int, default=None)
    check_cmd.set_defaults(handler=_cmd_check)

    cycles_cmd = subparsers.add_parser("cycles", parents=[common], help="Count cycles per SCC")
    cycles_cmd.add_argument("file")
    cycles_cmd.add_argument("--format", choices=["text", "json"], default=None)
    cycles_cmd.set_defaults(handler=_cmd_cycles)

    graph_cmd = subparsers.add_parser("graph", parents=[common], help="Export the dependency graph as DOT")
    graph_cmd.add_argument("file")
    graph_cmd.add_argument("--cnr", action="store_true", help="Export the graph before the sign flip")
    graph_cmd.add_argument("--out", default=None)
    graph_cmd.set_defaults(handler=_cmd_graph)

    gen_defaults = GenConfig()
    gen_cmd = subparsers.add_parser("gen", parents=[common], help="Generate a random program")
    gen_cmd.add_argument("--atoms", type=int, default=gen_defaults.num_atoms)
    gen_cmd.add_argument("--rules", type=int, default=gen_defaults.num_rules)
    gen_cmd.add_argument("--neg", type=float, default=gen_defaults.negation_prob)
    gen_cmd.add_argument("--max-body", dest="max_body", type=int, default=gen_defaults.max_body_len)
    gen_cmd.add_argument("--constraint-prob", dest="constraint_prob", type=float, default=gen_defaults.constraint_prob)
    gen_cmd.add_argument("--fact-fraction", dest="fact_fraction", type=float, default=gen_defaults.fact_fraction)
    gen_cmd.add_argument("--seed", type=int, default=gen_defaults.seed)
    gen_cmd.add_argument("--out", default=None)
    gen_cmd.set_defaults(handler=_cmd_gen)

    bench_defaults = BenchConfig()
    bench_cmd = subparsers.add_parser("bench", parents=[common], help="Time solver and oracle on generated programs")
    bench_cmd.add_argument("--rounds", type=int, default=bench_defaults.rounds)
    bench_cmd.add_argument("--programs", type=int, default=bench_defaults.programs)
    bench_cmd.add_argument("--atoms", type=int, default=bench_defaults.atoms)
    bench_cmd.add_argument("--rules", type=int, default=bench_defaults.rules)
    bench_cmd.add_argument("--neg", type=float, default=bench_defaults.neg)
    bench_cmd.add_argument("--max-body", dest="max_body", type=int, default=bench_defaults.max_body)
    bench_cmd.add_argument("--seed", type=int, default=bench_defaults.seed)
    bench_cmd.add_argument("--atom-cap", dest="oracle_atom_cap", type=int, default=bench_defaults.oracle_atom_cap)
    bench_cmd.add_argument("--jobs", type=int, default=None)
    bench_cmd.add_argument("--out", default=None)
    bench_cmd.set_defaults(handler=_cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_USAGE

    console = Console(stderr=True)
    _configure_logging(args.verbose, console)
    try:
        config = get_grasp_config(args)
        return int(args.handler(args, config, console))
    except _Failure as e:
        console.print(f"grasp: error: {e}", markup=False, highlight=False)
        return e.status
    except (CycleBudgetExceeded, TooManyAtoms) as e:
        console.print(f"grasp: error: {e}", markup=False, highlight=False)
        return EXIT_CHECK
    except (JustificationError, ValidationError) as e:
        console.print(f"grasp: error: {e}", markup=False, highlight=False)
        return EXIT_USAGE
    except GraspError as e:
        console.print(f"grasp: error: {e}", markup=False, highlight=False)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
