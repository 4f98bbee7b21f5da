"""Unit tests for the grasp command line."""

import io
import json
from unittest.mock import Mock, patch

import pytest

from grasp.cli import EXIT_CHECK, EXIT_OK, EXIT_USAGE, build_parser, check_program, main
from grasp.config import GraspConfig
from grasp.parser import parse_program

EVEN = "p :- not q. q :- not p.\n"
ODD = "p :- not q. q :- not r. r :- not p.\n"
NEGATIVE_TRIANGLE = "a :- not b. b :- not a. b :- not c. c :- not b. a :- not c. c :- not a.\n"


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    """Temporary directory holding a few programs, used as CWD."""
    monkeypatch.chdir(tmp_path)
    (tmp_path / "even.lp").write_text(EVEN)
    (tmp_path / "odd.lp").write_text(ODD)
    (tmp_path / "bad.lp").write_text("p :- q")
    return tmp_path


class TestSolveCommand:
    """Tests for 'grasp solve'."""

    def test_even_loop(self, workdir, capsys):
        """Two answer sets, one per line."""
        assert main(["solve", "even.lp"]) == EXIT_OK
        assert capsys.readouterr().out == "{p}\n{q}\n"

    def test_unsatisfiable_is_success(self, workdir, capsys):
        """No answer set is a valid answer."""
        assert main(["solve", "odd.lp"]) == EXIT_OK
        assert capsys.readouterr().out == "UNSATISFIABLE\n"

    def test_parse_error(self, workdir, capsys):
        """Malformed input exits 1 with file:line:col."""
        assert main(["solve", "bad.lp"]) == EXIT_USAGE
        err = capsys.readouterr().err
        assert "bad.lp:1:" in err
        assert "unterminated" in err

    def test_missing_file(self, workdir, capsys):
        """An unreadable file is a usage error."""
        assert main(["solve", "nope.lp"]) == EXIT_USAGE
        assert "nope.lp" in capsys.readouterr().err

    def test_invalid_utf8(self, workdir, capsys):
        """Undecodable bytes are a usage error, not a traceback."""
        (workdir / "bin.lp").write_bytes(b"p :- \xff.\n")
        assert main(["solve", "bin.lp"]) == EXIT_USAGE
        assert "bin.lp: not valid UTF-8" in capsys.readouterr().err

    def test_stdin(self, workdir, capsys, monkeypatch):
        """'-' reads the program from standard input."""
        monkeypatch.setattr("sys.stdin", io.StringIO("p. q :- p.\n"))
        assert main(["solve", "-"]) == EXIT_OK
        assert capsys.readouterr().out == "{p, q}\n"

    def test_json(self, workdir, capsys):
        """JSON output carries answer sets and statistics."""
        assert main(["solve", "even.lp", "--format", "json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["answer_sets"] == [["p"], ["q"]]
        assert "worlds" in data["stats"]

    def test_max_models_and_stats(self, workdir, capsys):
        """--max-models trims output; --stats goes to stderr."""
        assert main(["solve", "even.lp", "--max-models", "1", "--stats"]) == EXIT_OK
        captured = capsys.readouterr()
        assert captured.out == "{p}\n"
        assert "Solver statistics" in captured.err

    def test_cycle_budget(self, workdir, capsys):
        """Running out of cycle budget exits 2."""
        (workdir / "tri.lp").write_text(NEGATIVE_TRIANGLE)
        assert main(["solve", "tri.lp", "--cycle-cap", "1"]) == EXIT_CHECK
        assert "cycle budget" in capsys.readouterr().err

    def test_flags_agree(self, workdir, capsys):
        """--no-verify and --constraint-prune leave the output unchanged."""
        main(["solve", "even.lp"])
        plain = capsys.readouterr().out
        main(["solve", "even.lp", "--no-verify", "--constraint-prune", "-vv"])
        assert capsys.readouterr().out == plain


class TestJustifyCommand:
    """Tests for 'grasp justify'."""

    def test_json(self, workdir, capsys):
        """The first model's p is a cycle assumption."""
        assert main(["justify", "even.lp", "--model", "1", "--atom", "p", "--format", "json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["root"] == "p"
        assert data["leaves"][0]["kind"] == "cycle-assumption"

    def test_false_atom_explained(self, workdir, capsys):
        """A False atom gets an absence explanation."""
        assert main(["justify", "even.lp", "--model", "1", "--atom", "q", "--format", "json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["root"] == "q"
        assert data["edges"][0]["reason"] == "source-true-blocks-negative"

    def test_dot(self, workdir, capsys):
        """DOT output is a digraph."""
        assert main(["justify", "even.lp", "--model", "2", "--atom", "q", "--format", "dot"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("digraph justification {")

    def test_text(self, workdir, capsys):
        """Text output starts at the root."""
        assert main(["justify", "even.lp", "--model", "2", "--atom", "q"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("q [true]")

    def test_model_out_of_range(self, workdir, capsys):
        """Model indexes are 1-based and bounded."""
        assert main(["justify", "even.lp", "--model", "3", "--atom", "p"]) == EXIT_USAGE
        assert "out of range" in capsys.readouterr().err

    def test_unknown_atom(self, workdir, capsys):
        """An atom outside the program is a usage error."""
        assert main(["justify", "even.lp", "--model", "1", "--atom", "zzz"]) == EXIT_USAGE


class TestOracleAndCheckCommands:
    """Tests for 'grasp oracle' and 'grasp check'."""

    def test_oracle(self, workdir, capsys):
        """The oracle prints in the solve format."""
        assert main(["oracle", "even.lp"]) == EXIT_OK
        assert capsys.readouterr().out == "{p}\n{q}\n"

    def test_oracle_atom_cap(self, workdir, capsys):
        """Exceeding the atom cap exits 2."""
        assert main(["oracle", "even.lp", "--atom-cap", "1"]) == EXIT_CHECK
        assert "capped at 1" in capsys.readouterr().err

    def test_check_agreement(self, workdir, capsys):
        """Agreement on every file exits 0."""
        assert main(["check", "even.lp", "odd.lp"]) == EXIT_OK
        assert capsys.readouterr().out == "even.lp: OK (2 answer sets)\nodd.lp: OK (0 answer sets)\n"

    def test_check_mismatch(self, workdir, capsys):
        """A disagreement exits 2 and lists the differing sets."""
        with patch("grasp.cli.solve", return_value=Mock(answer_sets=[])):
            assert main(["check", "even.lp"]) == EXIT_CHECK
        captured = capsys.readouterr()
        assert captured.out == "even.lp: MISMATCH\n"
        assert "oracle only" in captured.err

    def test_check_program(self):
        """check_program reports both one-sided differences."""
        path, solver_only, oracle_only, count = check_program("x.lp", parse_program(EVEN), GraspConfig())
        assert (path, solver_only, oracle_only, count) == ("x.lp", [], [], 2)


class TestGraphCommands:
    """Tests for 'grasp cycles', 'grasp graph', 'grasp gen' and 'grasp bench'."""

    def test_cycles(self, workdir, capsys):
        """Census rows for the even loop."""
        assert main(["cycles", "even.lp"]) == EXIT_OK
        assert capsys.readouterr().out.splitlines()[1] == "0\t0\t1\t0\tp q"

    def test_cycles_json(self, workdir, capsys):
        """JSON census totals."""
        assert main(["cycles", "odd.lp", "--format", "json"]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert (data["nec"], data["noc"]) == (0, 1)

    def test_graph_to_file(self, workdir):
        """--out writes DOT to a file; --cnr exports the unflipped graph."""
        assert main(["graph", "even.lp", "--cnr", "--out", "g.dot"]) == EXIT_OK
        assert (workdir / "g.dot").read_text().startswith("digraph cnr {")

    def test_unwritable_out(self, workdir, capsys):
        """An --out path that cannot be written is a usage error."""
        assert main(["graph", "even.lp", "--out", "missing/g.dot"]) == EXIT_USAGE
        assert "missing/g.dot" in capsys.readouterr().err
        assert not (workdir / "missing").exists()

    def test_gen_then_check(self, workdir, capsys):
        """A generated program passes the differential check."""
        assert main(["gen", "--seed", "7", "--atoms", "8", "--rules", "12", "--out", "gen.lp"]) == EXIT_OK
        assert main(["check", "gen.lp"]) == EXIT_OK
        assert "OK" in capsys.readouterr().out

    def test_gen_deterministic(self, capsys):
        """Two runs with one seed print the same program."""
        main(["gen", "--seed", "3"])
        first = capsys.readouterr().out
        main(["gen", "--seed", "3"])
        assert capsys.readouterr().out == first

    def test_bench(self, workdir, capsys):
        """A tiny benchmark writes a CSV and a summary."""
        args = ["bench", "--rounds", "1", "--programs", "2", "--atoms", "5", "--rules", "6", "--out", "b.csv"]
        assert main(args) == EXIT_OK
        lines = (workdir / "b.csv").read_text().splitlines()
        assert lines[0].startswith("# ")
        assert lines[1].startswith("round,program,seed")
        assert len(lines) == 4
        assert "Benchmark rounds" in capsys.readouterr().err


class TestParser:
    """Tests for argument handling."""

    def test_version(self, capsys):
        """--version prints the program name and exits 0."""
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.startswith("grasp ")

    def test_missing_argument(self, capsys):
        """A usage error exits 1."""
        with pytest.raises(SystemExit) as exc:
            main(["solve"])
        assert exc.value.code == EXIT_USAGE

    def test_no_command(self, capsys):
        """No subcommand prints help and exits 1."""
        assert main([]) == EXIT_USAGE
        assert "usage" in capsys.readouterr().out

    @pytest.mark.parametrize(
        "argv",
        [
            ["solve", "x"],
            ["justify", "x", "--model", "1", "--atom", "p"],
            ["oracle", "x"],
            ["check", "x", "y"],
            ["cycles", "x"],
            ["graph", "x"],
            ["gen"],
            ["bench"],
        ],
    )
    def test_subcommands(self, argv):
        """Every operation has a subcommand."""
        assert build_parser().parse_args(argv).command == argv[0]
