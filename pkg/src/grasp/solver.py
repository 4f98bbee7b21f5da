"""Answer set search over the condensed dependency graph.

Roots are decided layer by layer: an undecided regular root is False, a virtual
root (a wrapped SCC) is broken into alternative worlds, and the decided values
are propagated to the next layer. Every complete world is then checked for
support and, unless disabled, for Gelfond-Lifschitz stability.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from collections.abc import Iterable, Iterator, Mapping

from pydantic import BaseModel, ConfigDict, Field

from .config import GraspConfig
from .cycles import CondensedGraph, Cycle, Unit, condense, cycle_profile, find_roots, out_adjacency
from .enums import NodeKind, Sign, TruthValue
from .graph import DepGraph, Edge, NodeId, View, build_dependency_graph, full_view
from .oracle import is_stable
from .program import AnswerSet, Atom, Program

logger = logging.getLogger(__name__)


class World(BaseModel):
    """One branch of the search: a value overlay on the immutable graph.

    Nodes absent from ``values`` are Unknown. ``assumptions`` maps nodes whose
    value was chosen by a cycle break to the cycle that was broken.
    """

    values: dict[NodeId, TruthValue] = Field(default_factory=dict)
    consistent: bool = True
    assumptions: dict[NodeId, str] = Field(default_factory=dict)
    forbidden: dict[NodeId, TruthValue] = Field(default_factory=dict, exclude=True)

    def value(self, node: NodeId) -> TruthValue:
        """Current value of a node."""
        return self.values.get(node, TruthValue.UNKNOWN)

    def assign(self, node: NodeId, value: TruthValue) -> bool:
        """Set an Unknown node; return True when the value is new.

        Overwriting True with False (or the reverse), or taking a value listed
        in ``forbidden``, marks the world inconsistent instead.
        """
        current = self.value(node)
        if current is value:
            return False
        if current is not TruthValue.UNKNOWN or self.forbidden.get(node) is value:
            self.consistent = False
            return False
        self.values[node] = value
        return True

    def assume(self, node: NodeId, value: TruthValue, cycle: str) -> None:
        """Assign a cycle-break choice and remember where it came from."""
        if self.assign(node, value):
            self.assumptions[node] = cycle

    def absorb(self, other: World) -> None:
        """Merge another world's values and assumptions into this one."""
        for node, value in other.values.items():
            self.assign(node, value)
        self.assumptions.update(other.assumptions)
        self.consistent = self.consistent and other.consistent

    def fork(self) -> World:
        """Independent copy sharing only the forbidden map."""
        return World.model_construct(
            values=dict(self.values),
            consistent=self.consistent,
            assumptions=dict(self.assumptions),
            forbidden=self.forbidden,
        )

    def true_nodes(self) -> list[NodeId]:
        """Nodes valued True, ascending."""
        return sorted(n for n, v in self.values.items() if v is TruthValue.TRUE)


class SolverStats(BaseModel):
    """Counters collected during one solve."""

    worlds: int = 0  # search leaves: worlds completed or discarded
    cycle_breaks: int = 0
    nec_seen: int = 0
    noc_seen: int = 0
    max_depth: int = 0
    rejected_unsupported: int = 0
    rejected_unstable: int = 0


class SolvedModel(BaseModel):
    """An answer set together with the world it was read from."""

    answer_set: AnswerSet
    world: World


class SolveResult(BaseModel):
    """Outcome of a solve: verified models in sorted order plus statistics."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    graph: DepGraph
    models: list[SolvedModel] = Field(default_factory=list)
    stats: SolverStats = Field(default_factory=SolverStats)

    @property
    def answer_sets(self) -> list[AnswerSet]:
        """The answer sets alone."""
        return [m.answer_set for m in self.models]

    @property
    def satisfiable(self) -> bool:
        """At least one answer set was found."""
        return bool(self.models)


def constraint_guards(graph: DepGraph) -> dict[NodeId, TruthValue]:
    """Values that would make some constraint node True at once.

    A False source of a negative edge, or a True source of a positive edge, into a
    constraint node violates that constraint.
    """
    guards: dict[NodeId, TruthValue] = {}
    for node in sorted(graph.constraint_nodes):
        for e in graph.in_edges(node):
            guards[e.source] = TruthValue.FALSE if e.sign is Sign.NEGATIVE else TruthValue.TRUE
    return guards


def initial_world(graph: DepGraph, *, prune: bool = False) -> World:
    """World holding the fixed values: facts True, constraint nodes False."""
    world = World(forbidden=constraint_guards(graph) if prune else {})
    for node in graph:
        if node.fixed is not TruthValue.UNKNOWN:
            world.assign(node.id, node.fixed)
    return world


def propagate(
    view: View,
    world: World,
    sources: Iterable[NodeId],
    adjacency: Mapping[NodeId, list[Edge]] | None = None,
) -> World:
    """Push values from decided sources along the view's edges, in place.

    A True node makes positive successors True, a False node makes negative
    successors True. Newly True nodes keep propagating. Writing True over a
    False node leaves the world inconsistent.
    """
    adjacency = out_adjacency(view) if adjacency is None else adjacency
    queue = deque(sources)
    while queue and world.consistent:
        node = queue.popleft()
        value = world.value(node)
        if value is TruthValue.UNKNOWN:
            continue
        wanted = Sign.POSITIVE if value is TruthValue.TRUE else Sign.NEGATIVE
        for e in adjacency.get(node, ()):
            if e.sign is wanted and e.target in view.nodes and world.assign(e.target, TruthValue.TRUE):
                queue.append(e.target)
    return world


def merge_roots(regular: World, virtual_worlds: list[list[World]]) -> Iterator[World]:
    """Cartesian product of per-root worlds, streamed in list order."""
    for combination in itertools.product(*virtual_worlds):
        merged = regular.fork()
        for part in combination:
            merged.absorb(part)
        yield merged


def _drops(edge: Edge, node: NodeId, value: TruthValue) -> bool:
    if value is TruthValue.TRUE:
        return edge.target == node or (edge.source == node and edge.sign is Sign.NEGATIVE)
    return edge.source == node and edge.sign is Sign.POSITIVE


def remove_edges_for_value(view: View, node: NodeId, value: TruthValue) -> View:
    """Drop the edges a decided node no longer needs.

    A True node loses its in-edges and negative out-edges. A False node loses its
    positive out-edges only; its in-edges stay so a late True can still be caught.
    """
    if value is TruthValue.UNKNOWN:
        raise ValueError(f"node {node} has no value yet")
    return View(view.nodes, frozenset(e for e in view.edges if not _drops(e, node, value)))


def _settled(view: View, world: World) -> View:
    """Apply edge removal for every decided node of the view at once."""

    def dropped(e: Edge) -> bool:
        return any(
            world.value(n) is not TruthValue.UNKNOWN and _drops(e, n, world.value(n)) for n in (e.source, e.target)
        )

    return View(view.nodes, frozenset(e for e in view.edges if not dropped(e)))


def _cycle_label(graph: DepGraph, cycle: Cycle) -> str:
    labels = [graph.label(n) for n in cycle.nodes]
    return " -> ".join([*labels, labels[0]])


class Search:
    """Recursive root propagation and cycle breaking over one dependency graph."""

    def __init__(self, graph: DepGraph, config: GraspConfig | None = None, stats: SolverStats | None = None) -> None:
        """Bind the graph, the settings and the statistics sink."""
        self.graph = graph
        self.config = config or GraspConfig()
        self.stats = stats or SolverStats()

    def reasoning_rec(self, view: View, world: World, depth: int = 0) -> list[World]:
        """Decide every node of ``view``, returning one world per consistent outcome."""
        self.stats.max_depth = max(self.stats.max_depth, depth)
        return self._layers(condense(view), world, depth)

    def _layers(self, condensed: CondensedGraph, world: World, depth: int) -> list[World]:
        adjacency = out_adjacency(condensed.view)
        frontier = [world]
        removed: frozenset[int] = frozenset()
        while frontier and len(removed) < len(condensed):
            roots = find_roots(condensed, removed)
            members = [n for r in roots for n in sorted(condensed.units[r].members)]
            next_frontier: list[World] = []
            for current in frontier:
                leaves = self.stats.worlds
                survivors = len(next_frontier)
                regular = current.fork()
                virtual_worlds: list[list[World]] = []
                for r in roots:
                    unit = condensed.units[r]
                    if unit.virtual:
                        virtual_worlds.append(self.break_cycle(unit, current, depth + 1))
                    else:
                        (node,) = unit.members
                        if regular.value(node) is TruthValue.UNKNOWN:
                            regular.assign(node, TruthValue.FALSE)
                for merged in merge_roots(regular, virtual_worlds):
                    if merged.consistent and propagate(condensed.view, merged, members, adjacency).consistent:
                        next_frontier.append(merged)
                    else:
                        self.stats.worlds += 1
                if len(next_frontier) == survivors and self.stats.worlds == leaves:
                    self.stats.worlds += 1
            removed |= frozenset(roots)
            frontier = next_frontier
        return frontier

    def break_cycle(self, unit: Unit, world: World, depth: int = 1) -> list[World]:
        """Worlds deciding every member of a virtual root, each complete over the unit."""
        view = unit.view
        fixed = [n for n in sorted(unit.members) if world.value(n) is not TruthValue.UNKNOWN]
        if fixed:
            settled = propagate(view, world.fork(), fixed)
            return self._solve_residue(view, settled, depth) if settled.consistent else []

        if all(e.sign is Sign.POSITIVE for e in view.edges):
            unsupported = world.fork()
            for n in sorted(unit.members):
                unsupported.assign(n, TruthValue.FALSE)
            logger.debug(f"> Positive SCC of {len(unit.members)} nodes set False")
            return [unsupported]

        profile = cycle_profile(view, self.config.cycle_cap)
        self.stats.nec_seen += len(profile.necs)
        self.stats.noc_seen += len(profile.nocs)
        first = profile.first_nec()
        if first is None:
            logger.debug(f"> SCC of {len(unit.members)} nodes has no even negative cycle, no worlds")
            return []

        overlap = profile.overlap
        pivot = overlap[0] if overlap else first.nodes[0]
        label = _cycle_label(self.graph, profile.first_nec(pivot) or first)
        self.stats.cycle_breaks += 1
        logger.debug(f"> Breaking {label} at {self.graph.label(pivot)}")

        worlds: list[World] = []
        for value in (TruthValue.TRUE, TruthValue.FALSE):
            branch = world.fork()
            branch.assume(pivot, value, label)
            if propagate(view, branch, [pivot]).consistent:
                worlds.extend(self._solve_residue(view, branch, depth))
            else:
                self.stats.worlds += 1
        return worlds

    def _solve_residue(self, view: View, world: World, depth: int) -> list[World]:
        """Drop edges of decided members, then solve what is left of the SCC."""
        return self.reasoning_rec(_settled(view, world), world, depth)


def is_supported(graph: DepGraph, world: World) -> bool:
    """Whether the world reads back as a stable model.

    No node short of True may have an effective in-edge, and every True node must
    be founded: a fact, or the target of an effective edge whose source is founded.
    A False literal is founded as it stands; a False conjunction node only once the
    positive body atoms behind its negative in-edges are founded, so a rule body
    cannot hold on the strength of its own head.
    """
    for node in graph.node_ids():
        if world.value(node) is not TruthValue.TRUE and any(_is_effective(world, e) for e in graph.in_edges(node)):
            return False

    founded = set(graph.facts)
    pending = [n for n in world.true_nodes() if n not in founded]
    progress = True
    while pending and progress:
        progress = False
        for node in list(pending):
            if any(_founded_edge(graph, world, e, founded) for e in graph.in_edges(node)):
                founded.add(node)
                pending.remove(node)
                progress = True
    return not pending


def _founded_edge(graph: DepGraph, world: World, edge: Edge, founded: set[NodeId]) -> bool:
    if not _is_effective(world, edge):
        return False
    if edge.sign is Sign.POSITIVE:
        return edge.source in founded
    if graph.nodes[edge.source].kind is not NodeKind.CONJUNCTION:
        return True
    return all(e.source in founded for e in graph.in_edges(edge.source) if e.sign is Sign.NEGATIVE)


def _is_effective(world: World, edge: Edge) -> bool:
    source = world.value(edge.source)
    return (source is TruthValue.TRUE and edge.sign is Sign.POSITIVE) or (
        source is TruthValue.FALSE and edge.sign is Sign.NEGATIVE
    )


def project(graph: DepGraph, world: World) -> AnswerSet:
    """True literal nodes of a world as an answer set."""
    return AnswerSet.of(
        str(graph.nodes[n].atom) for n in world.true_nodes() if graph.nodes[n].kind is NodeKind.LITERAL
    )


def verify_stable(program: Program, candidate: Iterable[Atom]) -> bool:
    """Gelfond-Lifschitz check of a candidate answer set."""
    return is_stable(program, frozenset(candidate))


def solve(program: Program, config: GraspConfig | None = None) -> SolveResult:
    """All answer sets of ``program``, sorted, each paired with its world."""
    config = config or GraspConfig()
    graph = build_dependency_graph(program)
    result = SolveResult(graph=graph)
    stats = result.stats

    world = initial_world(graph, prune=config.constraint_prune)
    worlds = Search(graph, config, stats).reasoning_rec(full_view(graph), world) if world.consistent else []
    stats.worlds += len(worlds) if world.consistent else 1

    candidates: dict[AnswerSet, World] = {}
    for w in worlds:
        if not is_supported(graph, w):
            stats.rejected_unsupported += 1
            continue
        candidates.setdefault(project(graph, w), w)

    for answer in sorted(candidates):
        if config.verify and not verify_stable(program, answer.atoms):
            stats.rejected_unstable += 1
            continue
        result.models.append(SolvedModel(answer_set=answer, world=candidates[answer]))
        if config.max_models is not None and len(result.models) >= config.max_models:
            break

    logger.info(
        f"> Solved {len(program.rules)} rules: {len(result.models)} answer sets from {stats.worlds} worlds, "
        f"{stats.cycle_breaks} cycle breaks"
    )
    return result
