"""Strongly connected components, virtual-node condensation and signed cycle analysis."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Iterator
from typing import NamedTuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from .enums import CycleClass, Sign
from .exceptions import CycleBudgetExceeded
from .graph import DepGraph, Edge, NodeId, View, full_view

logger = logging.getLogger(__name__)

DEFAULT_CYCLE_CAP = 1_000_000


class Cycle(NamedTuple):
    """An elementary cycle, rotated to start at its smallest node.

    ``signs[i]`` is the sign of the edge from ``nodes[i]`` to ``nodes[i + 1]``
    (wrapping around).
    """

    nodes: tuple[NodeId, ...]
    signs: tuple[Sign, ...]

    @property
    def edges(self) -> list[Edge]:
        """Edges traversed, in order."""
        n = len(self.nodes)
        return [Edge(self.nodes[i], self.nodes[(i + 1) % n], self.signs[i]) for i in range(n)]

    @property
    def neg_edge_count(self) -> int:
        """Number of negative edges on the cycle."""
        return sum(1 for s in self.signs if s is Sign.NEGATIVE)

    def rotate(self, k: int) -> Cycle:
        """Same cycle listed from position ``k``."""
        return Cycle(self.nodes[k:] + self.nodes[:k], self.signs[k:] + self.signs[:k])


class Unit(NamedTuple):
    """A node of the condensed graph: a plain node or a virtual node wrapping an SCC."""

    index: int
    members: frozenset[NodeId]
    internal: frozenset[Edge]
    virtual: bool

    @property
    def view(self) -> View:
        """Internal subgraph of the unit."""
        return View(self.members, self.internal)


class CondensedGraph:
    """Acyclic graph whose nodes are units; virtual units hide their SCC."""

    def __init__(self, view: View, units: list[Unit], unit_of: dict[NodeId, int], dag: nx.DiGraph) -> None:
        """Bind the condensation parts."""
        self.view = view
        self.units = units
        self.unit_of = unit_of
        self.dag = dag

    def in_edges(self, unit: int) -> list[Edge]:
        """External edges entering a unit."""
        members = self.units[unit].members
        return sorted(e for e in self.view.edges if e.target in members and e.source not in members)

    def out_edges(self, unit: int) -> list[Edge]:
        """External edges leaving a unit."""
        members = self.units[unit].members
        return sorted(e for e in self.view.edges if e.source in members and e.target not in members)

    def is_acyclic(self) -> bool:
        """Whether the unit graph admits a topological order."""
        return bool(nx.is_directed_acyclic_graph(self.dag))

    def __len__(self) -> int:
        """Number of units."""
        return len(self.units)


def _digraph(view: View) -> nx.DiGraph:
    """Unsigned DiGraph with deterministic insertion order."""
    g = nx.DiGraph()
    g.add_nodes_from(sorted(view.nodes))
    g.add_edges_from(sorted({(e.source, e.target) for e in view.edges}))
    return g


def _as_view(graph: DepGraph | View) -> View:
    return full_view(graph) if isinstance(graph, DepGraph) else graph


def find_sccs(graph: DepGraph | View) -> list[frozenset[NodeId]]:
    """Strongly connected components ordered by smallest member."""
    view = _as_view(graph)
    return sorted((frozenset(c) for c in nx.strongly_connected_components(_digraph(view))), key=min)


def condense(graph: DepGraph | View) -> CondensedGraph:
    """Wrap every cyclic SCC into a virtual unit that inherits its members' external edges."""
    view = _as_view(graph)
    units: list[Unit] = []
    unit_of: dict[NodeId, int] = {}
    for index, members in enumerate(find_sccs(view)):
        internal = frozenset(e for e in view.edges if e.source in members and e.target in members)
        units.append(Unit(index, members, internal, virtual=bool(internal)))
        for n in members:
            unit_of[n] = index

    dag = nx.DiGraph()
    dag.add_nodes_from(range(len(units)))
    dag.add_edges_from(
        sorted(
            {(unit_of[e.source], unit_of[e.target]) for e in view.edges if unit_of[e.source] != unit_of[e.target]}
        )
    )
    return CondensedGraph(view, units, unit_of, dag)


def find_roots(condensed: CondensedGraph, removed: frozenset[int] = frozenset()) -> list[int]:
    """Units with no incoming edge from a unit still present, in index order."""
    roots = [
        u.index
        for u in condensed.units
        if u.index not in removed and all(p in removed for p in condensed.dag.predecessors(u.index))
    ]
    if not roots and len(removed) < len(condensed.units):
        raise RuntimeError("non-empty acyclic graph without roots")
    return roots


def classify_cycle(cycle: Cycle) -> CycleClass:
    """Positive, negative-even or negative-odd by negative-edge parity."""
    negatives = cycle.neg_edge_count
    if negatives == 0:
        return CycleClass.POSITIVE
    return CycleClass.NEG_EVEN if negatives % 2 == 0 else CycleClass.NEG_ODD


def canonical_rotation(nodes: list[NodeId]) -> tuple[NodeId, ...]:
    """Rotate a node cycle so it starts at its smallest node."""
    k = nodes.index(min(nodes))
    return tuple(nodes[k:] + nodes[:k])


def _expand_signs(nodes: tuple[NodeId, ...], signs_between: dict[tuple[NodeId, NodeId], list[Sign]]) -> Iterator[Cycle]:
    """One signed cycle per choice of parallel edge at every step."""
    n = len(nodes)
    options = [signs_between[(nodes[i], nodes[(i + 1) % n])] for i in range(n)]
    for signs in itertools.product(*options):
        yield Cycle(nodes, tuple(signs))


def _node_cycles_by_length(g: nx.DiGraph) -> Iterator[tuple[NodeId, ...]]:
    """Elementary node cycles in (length, canonical node list) order, one length layer at a time."""
    for length in range(1, g.number_of_nodes() + 1):
        layer = sorted(
            canonical_rotation(list(c)) for c in nx.simple_cycles(g, length_bound=length) if len(c) == length
        )
        yield from layer


def enumerate_cycles(graph: DepGraph | View, cap: int = DEFAULT_CYCLE_CAP, *, ordered: bool = True) -> Iterator[Cycle]:
    """Stream every elementary signed cycle once, rotated to its smallest node.

    Parallel edges of opposite sign give distinct signed cycles over the same
    nodes. ``ordered`` streams by (length, node list) so a consumer that stops
    early has seen the shortest cycles; unordered streaming is a single Johnson
    pass. Raises CycleBudgetExceeded once more than ``cap`` cycles are produced.
    """
    view = _as_view(graph)
    signs_between: dict[tuple[NodeId, NodeId], list[Sign]] = {}
    for e in sorted(view.edges):
        signs_between.setdefault((e.source, e.target), []).append(e.sign)

    g = _digraph(view)
    node_cycles: Iterable[tuple[NodeId, ...]] = (
        _node_cycles_by_length(g) if ordered else (canonical_rotation(list(c)) for c in nx.simple_cycles(g))
    )
    produced = 0
    for nodes in node_cycles:
        for cycle in _expand_signs(nodes, signs_between):
            produced += 1
            if produced > cap:
                raise CycleBudgetExceeded(cap)
            yield cycle


class CycleProfile(BaseModel):
    """What the cycle breaker needs to know about one SCC."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    necs: list[Cycle] = Field(default_factory=list)
    nocs: list[Cycle] = Field(default_factory=list)
    positive: int = 0
    exhausted: bool = False

    @property
    def has_nec(self) -> bool:
        """An NEC was seen."""
        return bool(self.necs)

    @property
    def has_noc(self) -> bool:
        """An NOC was seen."""
        return bool(self.nocs)

    @property
    def overlap(self) -> list[NodeId]:
        """Nodes lying on both a seen NEC and a seen NOC, ascending."""
        on_nec = {n for c in self.necs for n in c.nodes}
        on_noc = {n for c in self.nocs for n in c.nodes}
        return sorted(on_nec & on_noc)

    def first_nec(self, containing: NodeId | None = None) -> Cycle | None:
        """Smallest NEC by (length, node list, signs), optionally through a node."""
        candidates = [c for c in self.necs if containing is None or containing in c.nodes]
        return min(candidates, key=lambda c: (len(c.nodes), c.nodes, c.signs), default=None)


def cycle_profile(graph: DepGraph | View, cap: int = DEFAULT_CYCLE_CAP) -> CycleProfile:
    """Classify cycles shortest first, stopping once some node lies on both an NEC and an NOC.

    Without such a node the enumeration runs to the end, so ``has_nec`` and
    ``has_noc`` are exact whenever ``overlap`` is empty.
    """
    profile = CycleProfile()
    on_nec: set[NodeId] = set()
    on_noc: set[NodeId] = set()
    for cycle in enumerate_cycles(graph, cap):
        kind = classify_cycle(cycle)
        if kind is CycleClass.NEG_EVEN:
            profile.necs.append(cycle)
            on_nec.update(cycle.nodes)
        elif kind is CycleClass.NEG_ODD:
            profile.nocs.append(cycle)
            on_noc.update(cycle.nodes)
        else:
            profile.positive += 1
        if kind is not CycleClass.POSITIVE and not on_nec.isdisjoint(on_noc):
            return profile
    profile.exhausted = True
    return profile


class SccCensus(BaseModel):
    """Cycle counts of one cyclic SCC."""

    members: list[str]
    positive: int = 0
    nec: int = 0
    noc: int = 0


class CycleCensus(BaseModel):
    """Per-SCC and total cycle counts of a graph."""

    components: list[SccCensus] = Field(default_factory=list)

    @property
    def nec(self) -> int:
        """Total NECs."""
        return sum(c.nec for c in self.components)

    @property
    def noc(self) -> int:
        """Total NOCs."""
        return sum(c.noc for c in self.components)

    @property
    def positive(self) -> int:
        """Total positive cycles."""
        return sum(c.positive for c in self.components)


def cycle_census(graph: DepGraph, cap: int = DEFAULT_CYCLE_CAP) -> CycleCensus:
    """Count cycles by class in every cyclic SCC, with one budget for the whole graph."""
    census = CycleCensus()
    remaining = cap
    for unit in condense(graph).units:
        if not unit.virtual:
            continue
        entry = SccCensus(members=[graph.label(n) for n in sorted(unit.members)])
        try:
            for cycle in enumerate_cycles(unit.view, remaining, ordered=False):
                kind = classify_cycle(cycle)
                if kind is CycleClass.NEG_EVEN:
                    entry.nec += 1
                elif kind is CycleClass.NEG_ODD:
                    entry.noc += 1
                else:
                    entry.positive += 1
        except CycleBudgetExceeded:
            raise CycleBudgetExceeded(cap) from None
        remaining -= entry.nec + entry.noc + entry.positive
        census.components.append(entry)
    logger.debug(f"> Census: {census.nec} NEC, {census.noc} NOC, {census.positive} positive cycles")
    return census


def out_adjacency(view: View) -> dict[NodeId, list[Edge]]:
    """Out-edges of every node of a view, each list sorted."""
    adjacency: dict[NodeId, list[Edge]] = {}
    for e in sorted(view.edges):
        adjacency.setdefault(e.source, []).append(e)
    return adjacency
