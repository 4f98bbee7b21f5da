"""Seeded random program generator."""

from __future__ import annotations

import logging
import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .cycles import DEFAULT_CYCLE_CAP, cycle_census
from .enums import Sign
from .graph import build_dependency_graph
from .program import BodyLiteral, Program, Rule

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """The SplitMix64 generator, bit-exact with its published reference."""

    def __init__(self, seed: int) -> None:
        """Start from a 64-bit seed."""
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        """Next 64-bit output."""
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Integer in [0, n)."""
        return self.next_u64() % n


class GenConfig(BaseModel):
    """Random program shape."""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    num_atoms: int = Field(default=10, alias="atoms", ge=1)
    num_rules: int = Field(default=15, alias="rules", ge=1)
    max_body_len: int = Field(default=3, alias="max-body", ge=1)
    negation_prob: float = Field(default=0.5, alias="neg", ge=0.0, le=1.0)
    constraint_prob: float = Field(default=0.1, alias="constraint-prob", ge=0.0, le=1.0)
    fact_fraction: float = Field(default=0.1, alias="fact-fraction", ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0, lt=1 << 64)

    @model_validator(mode="after")
    def _check_body_len(self) -> GenConfig:
        if self.max_body_len > self.num_atoms:
            raise ValueError(f"max_body_len {self.max_body_len} exceeds num_atoms {self.num_atoms}")
        return self


def generate(config: GenConfig) -> Program:
    """Draw a program from ``config``; the same config always yields the same program.

    The first ``floor(fact_fraction * num_rules)`` rules are facts. Every other
    rule is headless with probability ``constraint_prob``, has a body of 1 to
    ``max_body_len`` distinct atoms drawn without replacement, and negates each
    body literal with probability ``negation_prob``.
    """
    rng = SplitMix64(config.seed)
    atoms = [f"a{i}" for i in range(config.num_atoms)]
    num_facts = math.floor(config.fact_fraction * config.num_rules)

    rules: list[Rule] = []
    for index in range(config.num_rules):
        if index < num_facts:
            rules.append(Rule(head=atoms[rng.below(config.num_atoms)]))
            continue

        head = None if rng.random() < config.constraint_prob else atoms[rng.below(config.num_atoms)]
        length = 1 + rng.below(config.max_body_len)
        pool = list(range(config.num_atoms))
        body: list[BodyLiteral] = []
        for j in range(length):
            k = j + rng.below(config.num_atoms - j)
            pool[j], pool[k] = pool[k], pool[j]
            sign = Sign.NEGATIVE if rng.random() < config.negation_prob else Sign.POSITIVE
            body.append(BodyLiteral(atom=atoms[pool[j]], sign=sign))
        rules.append(Rule(head=head, body=tuple(body)))

    logger.debug(f"> Generated {len(rules)} rules with seed {config.seed}")
    return Program(rules=tuple(rules))


class GenerationReport(BaseModel):
    """Size and cycle counts of a program."""

    rules: int
    atoms: int
    nec: int
    noc: int
    positive: int


def stats(program: Program, cap: int = DEFAULT_CYCLE_CAP) -> GenerationReport:
    """Rule, atom and per-class cycle counts of a program."""
    census = cycle_census(build_dependency_graph(program), cap)
    return GenerationReport(
        rules=len(program.rules),
        atoms=len(program.atoms),
        nec=census.nec,
        noc=census.noc,
        positive=census.positive,
    )
