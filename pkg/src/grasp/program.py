"""Data models for grounded propositional programs."""

from __future__ import annotations

from collections.abc import Iterable

from pydantic import BaseModel, ConfigDict, model_validator

from .enums import Sign

Atom = str


class BodyLiteral(BaseModel):
    """A body literal: an atom with a sign, ``not`` giving the negative one."""

    model_config = ConfigDict(frozen=True)

    atom: Atom
    sign: Sign = Sign.POSITIVE

    def __str__(self) -> str:
        """Render the literal as written in source."""
        return self.atom if self.sign is Sign.POSITIVE else f"not {self.atom}"


class Rule(BaseModel):
    """``head :- body.``, ``:- body.`` or ``head.``."""

    model_config = ConfigDict(frozen=True)

    head: Atom | None = None
    body: tuple[BodyLiteral, ...] = ()

    @model_validator(mode="after")
    def _check_shape(self) -> Rule:
        if self.head is None and not self.body:
            raise ValueError("a rule needs a head or a non-empty body")
        return self

    @property
    def is_fact(self) -> bool:
        """True for a bodiless rule."""
        return self.head is not None and not self.body

    @property
    def is_constraint(self) -> bool:
        """True for a headless rule."""
        return self.head is None

    def atoms(self) -> list[Atom]:
        """Atoms of the rule, head first, in source order."""
        found = [] if self.head is None else [self.head]
        found.extend(lit.atom for lit in self.body)
        return found

    def __str__(self) -> str:
        """Canonical text form."""
        return format_rule(self)


class Program(BaseModel):
    """An ordered list of rules."""

    model_config = ConfigDict(frozen=True)

    rules: tuple[Rule, ...] = ()

    @property
    def atoms(self) -> tuple[Atom, ...]:
        """Herbrand base in first-occurrence order."""
        seen: dict[Atom, None] = {}
        for rule in self.rules:
            for atom in rule.atoms():
                seen.setdefault(atom, None)
        return tuple(seen)

    def without(self, index: int) -> Program:
        """Return a copy with the rule at ``index`` removed."""
        return Program(rules=self.rules[:index] + self.rules[index + 1 :])

    def __str__(self) -> str:
        """Canonical text form, one rule per line."""
        return format_program(self)


def format_rule(rule: Rule) -> str:
    """Print a rule in canonical form."""
    body = ", ".join(str(lit) for lit in rule.body)
    if rule.head is None:
        return f":- {body}."
    if not body:
        return f"{rule.head}."
    return f"{rule.head} :- {body}."


def format_program(program: Program) -> str:
    """Print a program, one rule per line with a trailing newline."""
    return "".join(f"{format_rule(rule)}\n" for rule in program.rules)


class AnswerSet(BaseModel):
    """A stable model: the atoms that are true, sorted."""

    model_config = ConfigDict(frozen=True)

    atoms: tuple[Atom, ...] = ()

    @classmethod
    def of(cls, atoms: Iterable[Atom]) -> AnswerSet:
        """Build from any collection of atoms."""
        return cls(atoms=tuple(sorted(set(atoms))))

    def __contains__(self, atom: object) -> bool:
        """Membership test on atoms."""
        return atom in self.atoms

    def __len__(self) -> int:
        """Number of true atoms."""
        return len(self.atoms)

    def __lt__(self, other: AnswerSet) -> bool:
        """Lexicographic order on the sorted atom lists."""
        return self.atoms < other.atoms

    def __str__(self) -> str:
        """Render as ``{a, b, c}``."""
        return "{" + ", ".join(self.atoms) + "}"
