"""Tests for justification graphs."""

import json

import pytest

from grasp.enums import Sign, TruthValue
from grasp.exceptions import AtomNotFalse, AtomNotTrue, IncompleteWorld, UnknownAtom
from grasp.graph import Edge
from grasp.justification import LeafKind, Reason, effective_edges, justify, justify_absence
from grasp.parser import parse_program
from grasp.solver import World, solve


def solved(text, index=0):
    result = solve(parse_program(text))
    return result.graph, result.models[index].world


class TestEffectiveEdges:
    """Tests for effective_edges."""

    def test_false_through_negative(self):
        """A False source on a negative edge carries True."""
        graph, world = solved("p :- not q.")
        (effective,) = effective_edges(graph, world)
        assert effective.edge == Edge(1, 0, Sign.NEGATIVE)
        assert effective.reason is Reason.FALSE_THROUGH_NEGATIVE

    def test_true_through_positive(self):
        """A True source on a positive edge carries True."""
        graph, world = solved("q. p :- q.")
        (effective,) = effective_edges(graph, world)
        assert effective.reason is Reason.TRUE_THROUGH_POSITIVE

    def test_true_on_negative_not_effective(self):
        """A True source on a negative edge carries nothing."""
        graph, world = solved("q. p :- not q.")
        assert effective_edges(graph, world) == []

    def test_targets_are_true(self):
        """Every effective edge ends at a True node."""
        graph, world = solved("a :- not b. b :- not a. c :- a, not d. d :- not c. e :- c.")
        for effective in effective_edges(graph, world):
            assert world.value(effective.edge.target) is TruthValue.TRUE

    def test_incomplete_world(self):
        """Unknown nodes are refused."""
        graph, _ = solved("p :- not q.")
        with pytest.raises(IncompleteWorld, match="q"):
            effective_edges(graph, World(values={0: TruthValue.TRUE}))


class TestJustify:
    """Tests for justify."""

    def test_fact_chain(self):
        """p is explained by the fact q."""
        graph, world = solved("q. p :- q.")
        result = justify(graph, world, "p")
        assert [(n.label, n.value) for n in result.nodes] == [("q", TruthValue.TRUE), ("p", TruthValue.TRUE)]
        assert [(e.source, e.target, e.reason) for e in result.edges] == [(0, 1, Reason.TRUE_THROUGH_POSITIVE)]
        assert [(leaf.id, leaf.kind) for leaf in result.leaves] == [(0, LeafKind.FACT)]

    def test_default_false_leaf(self):
        """A root left False ends the walk."""
        graph, world = solved("p :- not q.")
        result = justify(graph, world, "p")
        assert [(leaf.id, leaf.kind) for leaf in result.leaves] == [(1, LeafKind.DEFAULT_FALSE)]
        assert result.edges[0].reason is Reason.FALSE_THROUGH_NEGATIVE

    def test_cycle_assumption_leaf(self):
        """The atom chosen by a cycle break is its own leaf."""
        graph, world = solved("p :- not q. q :- not p.")
        result = justify(graph, world, "p")
        assert result.edges == []
        (leaf,) = result.leaves
        assert leaf.kind is LeafKind.CYCLE_ASSUMPTION
        assert leaf.cycle == "p -> q -> p"

    def test_through_assumed_false_partner(self):
        """q in the second model is derived from the assumption that p is False."""
        graph, world = solved("p :- not q. q :- not p.", index=1)
        result = justify(graph, world, "q")
        assert [(e.source, e.target) for e in result.edges] == [(0, 1)]
        assert [leaf.kind for leaf in result.leaves] == [LeafKind.CYCLE_ASSUMPTION]

    def test_conjunction_body_holds(self):
        """A False conjunction node opens into its body."""
        graph, world = solved("a. p :- a, not b.")
        result = justify(graph, world, "p")
        conjunction = next(n for n in result.nodes if n.label == "p :- a, not b.")
        assert conjunction.value is TruthValue.FALSE
        body = sorted(graph.label(e.source) for e in result.edges if e.target == conjunction.id)
        assert body == ["a", "b"]
        assert all(e.reason is Reason.BODY_HOLDS for e in result.edges if e.target == conjunction.id)
        assert {(graph.label(leaf.id), leaf.kind) for leaf in result.leaves} == {
            ("a", LeafKind.FACT),
            ("b", LeafKind.DEFAULT_FALSE),
        }

    def test_atom_not_true(self):
        """False atoms go through justify_absence."""
        graph, world = solved("p :- not q.")
        with pytest.raises(AtomNotTrue):
            justify(graph, world, "q")

    def test_unknown_atom(self):
        """Atoms outside the program are refused."""
        graph, world = solved("p :- not q.")
        with pytest.raises(UnknownAtom):
            justify(graph, world, "zzz")


class TestJustifyAbsence:
    """Tests for justify_absence."""

    def test_source_false_blocks_positive(self):
        """p is false because q is."""
        graph, world = solved("p :- q.")
        result = justify_absence(graph, world, "p")
        assert [e.reason for e in result.edges] == [Reason.SOURCE_FALSE_BLOCKS_POSITIVE]
        assert [(leaf.id, leaf.kind) for leaf in result.leaves] == [(1, LeafKind.DEFAULT_FALSE)]

    def test_source_true_blocks_negative(self):
        """A True source blocks its negative edge."""
        graph, world = solved("q. p :- not q.")
        result = justify_absence(graph, world, "p")
        assert [e.reason for e in result.edges] == [Reason.SOURCE_TRUE_BLOCKS_NEGATIVE]
        assert [leaf.kind for leaf in result.leaves] == [LeafKind.FACT]

    def test_conjunction_blocked(self):
        """A failing body is opened to the literals that fail it."""
        graph, world = solved("p :- q, not r. r.")
        result = justify_absence(graph, world, "p")
        assert [(e.source, e.target, e.reason) for e in result.edges] == [
            (3, 0, Reason.CONJUNCTION_BLOCKED),
            (1, 3, Reason.FALSE_THROUGH_NEGATIVE),
            (2, 3, Reason.TRUE_THROUGH_POSITIVE),
        ]
        assert [(leaf.id, leaf.kind) for leaf in result.leaves] == [(1, LeafKind.DEFAULT_FALSE), (2, LeafKind.FACT)]

    def test_odd_loop_member_satisfied_outside(self):
        """p in the odd loop under fact q is blocked by q."""
        graph, world = solved("p :- not q. q :- not r. r :- not p. q.")
        result = justify_absence(graph, world, "p")
        assert [graph.label(e.source) for e in result.edges] == ["q"]
        assert [leaf.kind for leaf in result.leaves] == [LeafKind.FACT]

    def test_fact_refused(self):
        """A fact is never absent."""
        graph, world = solved("q. p :- not q.")
        with pytest.raises(AtomNotFalse):
            justify_absence(graph, world, "q")


class TestRendering:
    """Tests for JSON, DOT and text output."""

    def test_json_schema(self):
        """JSON carries root, nodes, edges and leaves."""
        graph, world = solved("p :- not q. q :- not p.")
        data = json.loads(justify(graph, world, "p").to_json())
        assert data == {
            "root": "p",
            "nodes": [{"id": 0, "label": "p", "value": "true", "kind": "literal"}],
            "edges": [],
            "leaves": [{"id": 0, "kind": "cycle-assumption", "cycle": "p -> q -> p"}],
        }

    def test_edge_keys(self):
        """Edges are written with from and to."""
        graph, world = solved("q. p :- q.")
        (edge,) = justify(graph, world, "p").to_dict()["edges"]
        assert edge == {"from": 0, "to": 1, "sign": "+", "reason": "true-through-positive"}

    def test_dot_marks_true_nodes(self):
        """True nodes are outlined, False nodes plain."""
        graph, world = solved("p :- not q.")
        text = justify(graph, world, "p").to_dot()
        assert 'n0 [label="p", shape=ellipse, penwidth=2.5, color=red];' in text
        assert 'n1 [label="q", shape=ellipse];' in text

    def test_dot_stable(self):
        """Rendering is byte-identical across solves."""
        text = "a :- not b. b :- not a. c :- a, not d. d :- not c."
        first = justify(*solved(text), "a").to_dot()
        second = justify(*solved(text), "a").to_dot()
        assert first == second

    def test_text_tree(self):
        """The text form indents each step."""
        graph, world = solved("q. p :- q.")
        assert justify(graph, world, "p").to_text() == "p [true]\n  q [true] (+, true-through-positive) <fact>\n"
