"""Exception hierarchy for grasp."""

from __future__ import annotations


class GraspError(Exception):
    """Base class for every error raised by grasp."""


class SourceError(GraspError):
    """An error tied to a position in program text."""

    def __init__(self, message: str, line: int, column: int) -> None:
        """Store the message together with its 1-based source position."""
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        """Render as ``LINE:COL: message``."""
        return f"{self.line}:{self.column}: {self.message}"


class LexError(SourceError):
    """Illegal character in program text."""


class ParseError(SourceError):
    """Malformed rule."""


class RangeSyntaxError(ParseError):
    """Interval term such as ``ball(1..3)``; intervals must be expanded by hand."""


class VariableError(ParseError):
    """Uppercase-led token, i.e. a non-ground program."""


class CycleBudgetExceeded(GraspError):
    """More elementary cycles than the configured cap."""

    def __init__(self, cap: int) -> None:
        """Record the cap that was hit."""
        super().__init__(f"cycle budget of {cap} elementary cycles exceeded")
        self.cap = cap


class TooManyAtoms(GraspError):
    """Program too large for brute-force enumeration."""

    def __init__(self, count: int, cap: int) -> None:
        """Record the atom count and the cap."""
        super().__init__(f"program has {count} atoms, brute force is capped at {cap}")
        self.count = count
        self.cap = cap


class JustificationError(GraspError):
    """Base class for justification precondition failures."""


class IncompleteWorld(JustificationError):
    """A world still holds Unknown nodes."""


class AtomNotTrue(JustificationError):
    """Justification requested for an atom that is not in the answer set."""


class AtomNotFalse(JustificationError):
    """Absence justification requested for an atom that is in the answer set."""


class UnknownAtom(JustificationError):
    """Atom does not occur in the program."""
