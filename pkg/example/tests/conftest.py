"""example/tests/conftest.py"""

from pathlib import Path

import pytest

from grasp.parser import parse_program

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


@pytest.fixture
def load_program():
    """Parse a program from the shipped corpus by file name.

    The corpus lives next to the tests so the CLI examples in the README can
    point at the same files.
    """

    def load(name):
        return parse_program((PROGRAMS / name).read_text(encoding="utf-8"))

    return load
