"""Shared enumerations."""

from __future__ import annotations

import sys

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:
    from backports.strenum import StrEnum

__all__ = ["CycleClass", "NodeKind", "Sign", "StrEnum", "TruthValue"]


class Sign(StrEnum):
    """Polarity of a body literal or a dependency edge."""

    POSITIVE = "+"
    NEGATIVE = "-"

    def flip(self) -> Sign:
        """Return the opposite sign."""
        return Sign.NEGATIVE if self is Sign.POSITIVE else Sign.POSITIVE


class TruthValue(StrEnum):
    """Three-valued node assignment."""

    UNKNOWN = "unknown"
    TRUE = "true"
    FALSE = "false"


class NodeKind(StrEnum):
    """Kinds of dependency-graph nodes."""

    LITERAL = "literal"
    CONJUNCTION = "conjunction"
    CONSTRAINT = "constraint"
    VIRTUAL = "virtual"


class CycleClass(StrEnum):
    """Sign parity class of an elementary cycle."""

    POSITIVE = "positive"
    NEG_EVEN = "nec"
    NEG_ODD = "noc"
