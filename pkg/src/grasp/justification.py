"""Causal justification graphs read off the effective edges of a solved world."""

from __future__ import annotations

import json
import logging
from collections import deque
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from .enums import NodeKind, Sign, StrEnum, TruthValue
from .exceptions import AtomNotFalse, AtomNotTrue, IncompleteWorld, UnknownAtom
from .graph import DepGraph, Edge, NodeId
from .program import Atom
from .solver import World

logger = logging.getLogger(__name__)


class Reason(StrEnum):
    """Why an edge appears in a justification graph."""

    TRUE_THROUGH_POSITIVE = "true-through-positive"
    FALSE_THROUGH_NEGATIVE = "false-through-negative"
    BODY_HOLDS = "body-holds"
    SOURCE_TRUE_BLOCKS_NEGATIVE = "source-true-blocks-negative"
    SOURCE_FALSE_BLOCKS_POSITIVE = "source-false-blocks-positive"
    CONJUNCTION_BLOCKED = "conjunction-blocked"


class LeafKind(StrEnum):
    """Where a backward walk stops."""

    FACT = "fact"
    DEFAULT_FALSE = "default-false"
    CYCLE_ASSUMPTION = "cycle-assumption"
    DERIVED = "derived"


class EffectiveEdge(BaseModel):
    """An edge that carried True to its target."""

    model_config = ConfigDict(frozen=True)

    edge: Edge
    reason: Reason


class JustificationNode(BaseModel):
    """A node of a justification graph with its value."""

    id: NodeId
    label: str
    value: TruthValue
    kind: NodeKind


class JustificationEdge(BaseModel):
    """A labelled edge of a justification graph."""

    model_config = ConfigDict(populate_by_name=True)

    source: NodeId = Field(alias="from")
    target: NodeId = Field(alias="to")
    sign: Sign
    reason: Reason


class Leaf(BaseModel):
    """A terminal node of a justification graph."""

    id: NodeId
    kind: LeafKind
    cycle: str | None = None


class JustificationGraph(BaseModel):
    """Backward closure explaining the value of one atom."""

    root: Atom
    root_id: NodeId
    nodes: list[JustificationNode] = Field(default_factory=list)
    edges: list[JustificationEdge] = Field(default_factory=list)
    leaves: list[Leaf] = Field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready form."""
        leaves: list[dict[str, Any]] = []
        for leaf in self.leaves:
            entry: dict[str, Any] = {"id": leaf.id, "kind": str(leaf.kind)}
            if leaf.cycle is not None:
                entry["cycle"] = leaf.cycle
            leaves.append(entry)
        return {
            "root": self.root,
            "nodes": [{"id": n.id, "label": n.label, "value": str(n.value), "kind": str(n.kind)} for n in self.nodes],
            "edges": [
                {"from": e.source, "to": e.target, "sign": str(e.sign), "reason": str(e.reason)} for e in self.edges
            ],
            "leaves": leaves,
        }

    def to_json(self) -> str:
        """Serialise with stable key order."""
        return json.dumps(self.to_dict(), indent=2)

    def to_dot(self) -> str:
        """DOT rendering: True nodes outlined in red, False nodes plain."""
        lines = ["digraph justification {"]
        for n in self.nodes:
            label = n.label.replace('"', r"\"")
            shape = "box" if n.kind is NodeKind.CONJUNCTION else "ellipse"
            style = ", penwidth=2.5, color=red" if n.value is TruthValue.TRUE else ""
            lines.append(f'  n{n.id} [label="{label}", shape={shape}{style}];')
        lines.extend(f'  n{e.source} -> n{e.target} [label="{e.sign}", tooltip="{e.reason}"];' for e in self.edges)
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        """Indented tree from the root down to the leaves."""
        nodes = {n.id: n for n in self.nodes}
        leaves = {leaf.id: leaf for leaf in self.leaves}
        incoming: dict[NodeId, list[JustificationEdge]] = {}
        for e in self.edges:
            incoming.setdefault(e.target, []).append(e)

        lines: list[str] = []
        shown: set[NodeId] = set()

        def walk(node: NodeId, depth: int, via: JustificationEdge | None) -> None:
            n = nodes[node]
            text = f"{'  ' * depth}{n.label} [{n.value}]"
            if via is not None:
                text += f" ({via.sign}, {via.reason})"
            if node in leaves:
                leaf = leaves[node]
                text += f" <{leaf.kind}{': ' + leaf.cycle if leaf.cycle else ''}>"
            if node in shown:
                lines.append(text + " ...")
                return
            lines.append(text)
            shown.add(node)
            for e in incoming.get(node, []):
                walk(e.source, depth + 1, e)

        walk(self.root_id, 0, None)
        return "\n".join(lines) + "\n"


def _require_complete(graph: DepGraph, world: World) -> None:
    missing = [graph.label(n) for n in graph.node_ids() if world.value(n) is TruthValue.UNKNOWN]
    if missing:
        raise IncompleteWorld(f"no value for {', '.join(missing)}")


def _reason(world: World, edge: Edge) -> Reason | None:
    source = world.value(edge.source)
    if source is TruthValue.TRUE and edge.sign is Sign.POSITIVE:
        return Reason.TRUE_THROUGH_POSITIVE
    if source is TruthValue.FALSE and edge.sign is Sign.NEGATIVE:
        return Reason.FALSE_THROUGH_NEGATIVE
    return None


def effective_edges(graph: DepGraph, world: World) -> list[EffectiveEdge]:
    """Edges of the full graph that propagate True under ``world``."""
    _require_complete(graph, world)
    found: list[EffectiveEdge] = []
    for edge in graph.edges():
        reason = _reason(world, edge)
        if reason is not None:
            found.append(EffectiveEdge(edge=edge, reason=reason))
    return found


def _node_for(graph: DepGraph, atom: Atom) -> NodeId:
    node = graph.node_for(atom)
    if node is None:
        raise UnknownAtom(f"atom {atom!r} does not occur in the program")
    return node


def _label(graph: DepGraph, node: NodeId) -> str:
    model = graph.nodes[node]
    if model.kind is NodeKind.CONJUNCTION and model.rule_text:
        return model.rule_text
    return model.label


class _Builder:
    """Accumulates nodes, edges and leaves in deterministic order."""

    def __init__(self, graph: DepGraph, world: World, atom: Atom, root: NodeId) -> None:
        self.graph = graph
        self.world = world
        self.result = JustificationGraph(root=atom, root_id=root)
        self.seen: set[NodeId] = set()

    def node(self, node: NodeId) -> None:
        if node in self.seen:
            return
        self.seen.add(node)
        self.result.nodes.append(
            JustificationNode(
                id=node,
                label=_label(self.graph, node),
                value=self.world.value(node),
                kind=self.graph.nodes[node].kind,
            )
        )

    def edge(self, edge: Edge, reason: Reason) -> None:
        self.result.edges.append(
            JustificationEdge(source=edge.source, target=edge.target, sign=edge.sign, reason=reason)
        )

    def leaf(self, node: NodeId, kind: LeafKind) -> None:
        cycle = self.world.assumptions.get(node) if kind is LeafKind.CYCLE_ASSUMPTION else None
        self.result.leaves.append(Leaf(id=node, kind=kind, cycle=cycle))

    def leaf_kind(self, node: NodeId) -> LeafKind:
        if self.graph.nodes[node].fixed is TruthValue.TRUE:
            return LeafKind.FACT
        if node in self.world.assumptions:
            return LeafKind.CYCLE_ASSUMPTION
        return LeafKind.DERIVED if self.world.value(node) is TruthValue.TRUE else LeafKind.DEFAULT_FALSE

    def finish(self) -> JustificationGraph:
        self.result.nodes.sort(key=lambda n: n.id)
        self.result.edges.sort(key=lambda e: (e.target, e.source, e.sign))
        self.result.leaves.sort(key=lambda leaf: leaf.id)
        return self.result


def justify(graph: DepGraph, world: World, atom: Atom) -> JustificationGraph:
    """Why ``atom`` is true: the backward closure over effective edges.

    True nodes are explained by their effective in-edges, False conjunction
    nodes by their whole body. The walk stops at facts, at nodes that are False
    by default and at values chosen by a cycle break.
    """
    root = _node_for(graph, atom)
    _require_complete(graph, world)
    if world.value(root) is not TruthValue.TRUE:
        raise AtomNotTrue(f"{atom} is not in the answer set")

    builder = _Builder(graph, world, atom, root)
    queue = deque([root])
    builder.node(root)
    while queue:
        node = queue.popleft()
        kind = builder.leaf_kind(node)
        if kind in (LeafKind.FACT, LeafKind.CYCLE_ASSUMPTION):
            builder.leaf(node, kind)
            continue

        expand: list[tuple[Edge, Reason]]
        if world.value(node) is TruthValue.TRUE:
            expand = [(e, r) for e in graph.in_edges(node) if (r := _reason(world, e)) is not None]
        elif graph.nodes[node].kind is NodeKind.CONJUNCTION:
            expand = [(e, Reason.BODY_HOLDS) for e in graph.in_edges(node)]
        else:
            builder.leaf(node, LeafKind.DEFAULT_FALSE)
            continue

        for edge, reason in expand:
            builder.edge(edge, reason)
            if edge.source not in builder.seen:
                builder.node(edge.source)
                queue.append(edge.source)

    return builder.finish()


def _blocking_reason(graph: DepGraph, world: World, edge: Edge) -> Reason:
    if graph.nodes[edge.source].kind is NodeKind.CONJUNCTION:
        return Reason.CONJUNCTION_BLOCKED
    if world.value(edge.source) is TruthValue.TRUE:
        return Reason.SOURCE_TRUE_BLOCKS_NEGATIVE
    return Reason.SOURCE_FALSE_BLOCKS_POSITIVE


def justify_absence(graph: DepGraph, world: World, atom: Atom) -> JustificationGraph:
    """Why ``atom`` is false: every in-edge with the reason it carried nothing.

    A blocked rule body (a True conjunction node) is opened one level further to
    show the literals that fail it.
    """
    root = _node_for(graph, atom)
    _require_complete(graph, world)
    if world.value(root) is not TruthValue.FALSE:
        raise AtomNotFalse(f"{atom} is in the answer set")

    builder = _Builder(graph, world, atom, root)
    builder.node(root)
    if root in world.assumptions:
        builder.leaf(root, LeafKind.CYCLE_ASSUMPTION)

    for edge in graph.in_edges(root):
        builder.edge(edge, _blocking_reason(graph, world, edge))
        source = edge.source
        if source in builder.seen:
            continue
        builder.node(source)
        if graph.nodes[source].kind is not NodeKind.CONJUNCTION:
            builder.leaf(source, builder.leaf_kind(source))
            continue
        for inner in graph.in_edges(source):
            reason = _reason(world, inner)
            if reason is None:
                continue
            builder.edge(inner, reason)
            if inner.source not in builder.seen:
                builder.node(inner.source)
                builder.leaf(inner.source, builder.leaf_kind(inner.source))

    logger.debug(f"> Absence of {atom} explained by {len(builder.result.edges)} edges")
    return builder.finish()
