"""Shared fixtures and command-line options for the test suite."""

import pytest

from grasp.config import GraspConfig
from grasp.parser import parse_program
from grasp.solver import solve


def pytest_addoption(parser: pytest.Parser) -> None:
    """Add grasp test-suite flags to the parser."""
    parser.addoption(
        "--differential-programs",
        action="store",
        type=int,
        default=500,
        help="Number of generated programs compared against the oracle.",
    )


@pytest.fixture
def differential_programs(request):
    """How many generated programs the differential suite checks."""
    return request.config.getoption("--differential-programs")


@pytest.fixture
def models():
    """Solve rule text and return the answer sets as strings."""

    def run(text, **options):
        return [str(a) for a in solve(parse_program(text), GraspConfig(**options)).answer_sets]

    return run
