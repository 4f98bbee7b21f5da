"""Brute-force stable model enumeration through the Gelfond-Lifschitz reduct.

Kept deliberately naive: every other engine is tested against it.
"""

from __future__ import annotations

import logging
from collections.abc import Collection, Iterable

from pydantic import BaseModel, ConfigDict, model_validator

from .enums import Sign
from .exceptions import TooManyAtoms
from .program import AnswerSet, Atom, Program, Rule

logger = logging.getLogger(__name__)

# Not a legal atom name, so it cannot collide with program atoms.
FALSE_MARKER: Atom = "_false"

DEFAULT_ATOM_CAP = 20


class ReductProgram(BaseModel):
    """A negation-free program."""

    model_config = ConfigDict(frozen=True)

    rules: tuple[Rule, ...] = ()

    @model_validator(mode="after")
    def _check_positive(self) -> ReductProgram:
        for rule in self.rules:
            if any(lit.sign is Sign.NEGATIVE for lit in rule.body):
                raise ValueError(f"negative literal in reduct rule {rule}")
        return self


def gl_reduct(program: Program, candidate: Collection[Atom]) -> ReductProgram:
    """Reduct of ``program`` with respect to ``candidate``.

    Rules blocked by a negative literal over the candidate are dropped, the
    remaining negative literals are deleted, and headless rules get the false
    marker as head.
    """
    rules: list[Rule] = []
    for rule in program.rules:
        if any(lit.sign is Sign.NEGATIVE and lit.atom in candidate for lit in rule.body):
            continue
        body = tuple(lit for lit in rule.body if lit.sign is Sign.POSITIVE)
        rules.append(Rule(head=FALSE_MARKER if rule.head is None else rule.head, body=body))
    return ReductProgram(rules=tuple(rules))


def _fixpoint(rules: Iterable[tuple[Atom, frozenset[Atom]]]) -> frozenset[Atom]:
    pending = list(rules)
    model: set[Atom] = set()
    changed = True
    while changed:
        changed = False
        waiting: list[tuple[Atom, frozenset[Atom]]] = []
        for head, body in pending:
            if body <= model:
                if head not in model:
                    model.add(head)
                    changed = True
            else:
                waiting.append((head, body))
        pending = waiting
    return frozenset(model)


def least_model(reduct: ReductProgram) -> frozenset[Atom]:
    """Least fixpoint of the immediate-consequence operator."""
    return _fixpoint((str(rule.head), frozenset(lit.atom for lit in rule.body)) for rule in reduct.rules)


_CompiledRule = tuple[Atom, frozenset[Atom], frozenset[Atom]]


def _compile(program: Program) -> list[_CompiledRule]:
    """Rules as (head, positive body, negative body) with the false marker for constraints."""
    return [
        (
            FALSE_MARKER if rule.head is None else rule.head,
            frozenset(lit.atom for lit in rule.body if lit.sign is Sign.POSITIVE),
            frozenset(lit.atom for lit in rule.body if lit.sign is Sign.NEGATIVE),
        )
        for rule in program.rules
    ]


def _stable(rules: list[_CompiledRule], candidate: frozenset[Atom]) -> bool:
    model = _fixpoint((head, pos) for head, pos, neg in rules if neg.isdisjoint(candidate))
    return FALSE_MARKER not in model and model == candidate


def is_stable(program: Program, candidate: Collection[Atom]) -> bool:
    """Whether ``candidate`` is the least model of its own reduct and violates no constraint."""
    model = least_model(gl_reduct(program, candidate))
    return FALSE_MARKER not in model and model == frozenset(candidate)


def enumerate_answer_sets_bruteforce(program: Program, cap: int = DEFAULT_ATOM_CAP) -> list[AnswerSet]:
    """Check every subset of the Herbrand base, counting in binary over the sorted atoms."""
    atoms = sorted(program.atoms)
    if len(atoms) > cap:
        raise TooManyAtoms(len(atoms), cap)

    rules = _compile(program)
    found: list[AnswerSet] = []
    for mask in range(1 << len(atoms)):
        candidate = frozenset(atom for i, atom in enumerate(atoms) if mask >> i & 1)
        if _stable(rules, candidate):
            found.append(AnswerSet.of(candidate))

    logger.debug(f"> Oracle checked {1 << len(atoms)} subsets, {len(found)} stable")
    return sorted(found)
