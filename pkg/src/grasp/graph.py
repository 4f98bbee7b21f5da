"""Dependency graph construction: CNR graphs and their conversion to signed dependency graphs."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator
from typing import NamedTuple

import networkx as nx
from pydantic import BaseModel, ConfigDict

from .enums import NodeKind, Sign, TruthValue
from .program import Atom, BodyLiteral, Program, Rule, format_rule

logger = logging.getLogger(__name__)

NodeId = int


class Edge(NamedTuple):
    """A signed dependency edge."""

    source: NodeId
    target: NodeId
    sign: Sign


class Node(BaseModel):
    """A dependency-graph node.

    Literal nodes carry their atom, conjunction nodes the index and text of the
    rule whose body they stand for, constraint nodes the headless rule they close.
    ``fixed`` is True for facts and False for constraint nodes.
    """

    model_config = ConfigDict(frozen=True)

    id: NodeId
    kind: NodeKind
    atom: Atom | None = None
    rule_index: int | None = None
    rule_text: str | None = None
    fixed: TruthValue = TruthValue.UNKNOWN

    @property
    def label(self) -> str:
        """Human-readable name."""
        if self.kind is NodeKind.LITERAL:
            return str(self.atom)
        if self.kind is NodeKind.CONJUNCTION:
            return f"c{self.rule_index}"
        return f"false{self.rule_index}"


class DepGraph:
    """Signed directed graph over literal, conjunction and constraint nodes.

    Backed by a ``networkx.MultiDiGraph`` keyed by sign, so there is at most one
    edge per (source, target, sign).
    """

    def __init__(self) -> None:
        """Create an empty graph."""
        self._g: nx.MultiDiGraph = nx.MultiDiGraph()
        self.nodes: dict[NodeId, Node] = {}
        self.atom_index: dict[Atom, NodeId] = {}

    def add_node(self, node: Node) -> NodeId:
        """Insert a node under its own id."""
        self.nodes[node.id] = node
        self._g.add_node(node.id)
        if node.kind is NodeKind.LITERAL and node.atom is not None:
            self.atom_index[node.atom] = node.id
        return node.id

    def replace_node(self, node: Node) -> None:
        """Swap the stored model of an existing node."""
        self.nodes[node.id] = node

    def add_edge(self, source: NodeId, target: NodeId, sign: Sign) -> None:
        """Insert an edge; a duplicate (source, target, sign) is merged."""
        self._g.add_edge(source, target, key=sign)

    def edges(self) -> list[Edge]:
        """All edges in (source, target, sign) order."""
        return sorted(Edge(u, v, Sign(k)) for u, v, k in self._g.edges(keys=True))

    def in_edges(self, node: NodeId) -> list[Edge]:
        """Edges ending at ``node``."""
        return sorted(Edge(u, v, Sign(k)) for u, v, k in self._g.in_edges(node, keys=True))

    def out_edges(self, node: NodeId) -> list[Edge]:
        """Edges leaving ``node``."""
        return sorted(Edge(u, v, Sign(k)) for u, v, k in self._g.out_edges(node, keys=True))

    def node_ids(self) -> list[NodeId]:
        """Node ids in ascending order."""
        return sorted(self.nodes)

    def __iter__(self) -> Iterator[Node]:
        """Iterate nodes in id order."""
        return (self.nodes[n] for n in self.node_ids())

    def __len__(self) -> int:
        """Number of nodes."""
        return len(self.nodes)

    def label(self, node: NodeId) -> str:
        """Display label of a node."""
        return self.nodes[node].label

    def node_for(self, atom: Atom) -> NodeId | None:
        """Literal node of an atom, if present."""
        return self.atom_index.get(atom)

    @property
    def facts(self) -> frozenset[NodeId]:
        """Literal nodes fixed True."""
        return frozenset(n for n, node in self.nodes.items() if node.fixed is TruthValue.TRUE)

    @property
    def constraint_nodes(self) -> frozenset[NodeId]:
        """Constraint nodes, fixed False."""
        return frozenset(n for n, node in self.nodes.items() if node.kind is NodeKind.CONSTRAINT)

    def signature(self) -> tuple[tuple[tuple[NodeId, str, str | None], ...], tuple[Edge, ...]]:
        """Comparable structural summary: nodes with kinds and labels, plus edges."""
        nodes = tuple((n, str(self.nodes[n].kind), self.nodes[n].atom) for n in self.node_ids())
        return nodes, tuple(self.edges())


def _dedupe(literals: Iterable[BodyLiteral]) -> tuple[BodyLiteral, ...]:
    return tuple(dict.fromkeys(literals))


def _distinct_rules(program: Program) -> list[tuple[int, Rule]]:
    """First occurrence of each syntactically distinct rule, keyed by its source index."""
    seen: set[Rule] = set()
    kept: list[tuple[int, Rule]] = []
    for index, rule in enumerate(program.rules):
        normal = Rule(head=rule.head, body=_dedupe(rule.body))
        if normal in seen:
            continue
        seen.add(normal)
        kept.append((index, normal))
    return kept


def build_cnr_graph(program: Program) -> DepGraph:
    """Build the conjunction-node representation of a program.

    Literal nodes take ids in first-occurrence order of their atoms; conjunction
    and constraint nodes follow in rule order.
    """
    graph = DepGraph()
    for atom in program.atoms:
        graph.add_node(Node(id=len(graph), kind=NodeKind.LITERAL, atom=atom))

    for index, rule in _distinct_rules(program):
        if rule.is_fact:
            head = graph.atom_index[str(rule.head)]
            graph.replace_node(graph.nodes[head].model_copy(update={"fixed": TruthValue.TRUE}))
            continue

        if rule.head is None:
            head = graph.add_node(
                Node(
                    id=len(graph),
                    kind=NodeKind.CONSTRAINT,
                    rule_index=index,
                    rule_text=format_rule(rule),
                    fixed=TruthValue.FALSE,
                )
            )
        else:
            head = graph.atom_index[rule.head]

        if len(rule.body) == 1:
            literal = rule.body[0]
            graph.add_edge(graph.atom_index[literal.atom], head, literal.sign)
            continue

        conj = graph.add_node(
            Node(id=len(graph), kind=NodeKind.CONJUNCTION, rule_index=index, rule_text=format_rule(rule))
        )
        for literal in rule.body:
            graph.add_edge(graph.atom_index[literal.atom], conj, literal.sign)
        graph.add_edge(conj, head, Sign.POSITIVE)

    logger.debug(f"> Built CNR graph with {len(graph)} nodes and {len(graph.edges())} edges")
    return graph


def cnr_to_dependency_graph(cnr: DepGraph) -> DepGraph:
    """Negate every edge incident to a conjunction node.

    The conjunction node then reads as the disjunctive helper of De Morgan's law:
    ``p :- q, not r`` becomes ``p :- not c.  c :- not q.  c :- r.``
    """
    graph = DepGraph()
    for node in cnr:
        graph.add_node(node)
    for edge in cnr.edges():
        touches_conj = (
            cnr.nodes[edge.source].kind is NodeKind.CONJUNCTION or cnr.nodes[edge.target].kind is NodeKind.CONJUNCTION
        )
        graph.add_edge(edge.source, edge.target, edge.sign.flip() if touches_conj else edge.sign)
    return graph


def build_dependency_graph(program: Program) -> DepGraph:
    """Program to dependency graph: CNR construction followed by the sign flip."""
    return cnr_to_dependency_graph(build_cnr_graph(program))


def _dot_node(node: Node) -> str:
    if node.kind is NodeKind.CONJUNCTION:
        tooltip = (node.rule_text or "").replace('"', r"\"")
        return f'  n{node.id} [label="", shape=circle, style=filled, fillcolor=black, width=0.2, tooltip="{tooltip}"];'
    if node.kind is NodeKind.CONSTRAINT:
        return f'  n{node.id} [label="{node.label}", shape=doubleoctagon];'
    return f'  n{node.id} [label="{node.label}", shape=ellipse];'


def to_dot(graph: DepGraph, name: str = "dependency") -> str:
    """Render the graph in DOT, deterministically ordered."""
    lines = [f"digraph {name} {{"]
    lines.extend(_dot_node(node) for node in graph)
    lines.extend(f'  n{e.source} -> n{e.target} [label="{e.sign}"];' for e in graph.edges())
    lines.append("}")
    return "\n".join(lines) + "\n"


class View(NamedTuple):
    """A node subset of a DepGraph together with the edges still in play."""

    nodes: frozenset[NodeId]
    edges: frozenset[Edge]


def full_view(graph: DepGraph) -> View:
    """View covering the whole graph."""
    return View(frozenset(graph.nodes), frozenset(graph.edges()))
