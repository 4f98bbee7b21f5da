"""Tests for the rule-text lexer and parser."""

import pytest

from grasp.enums import Sign
from grasp.exceptions import LexError, ParseError, RangeSyntaxError, VariableError
from grasp.parser import TokenKind, parse_program, tokenize
from grasp.program import BodyLiteral, Program, Rule, format_program


class TestTokenize:
    """Tests for tokenize."""

    def test_rule_tokens(self):
        """A normal rule splits into identifiers, keywords and punctuation."""
        tokens = tokenize("p :- not q.")
        assert [t.kind for t in tokens] == [
            TokenKind.IDENT,
            TokenKind.IF,
            TokenKind.NOT,
            TokenKind.IDENT,
            TokenKind.DOT,
        ]
        assert [t.text for t in tokens] == ["p", ":-", "not", "q", "."]

    def test_comments_and_whitespace_dropped(self):
        """Percent comments run to the end of the line."""
        tokens = tokenize("% comment\nq.")
        assert [(t.kind, t.text) for t in tokens] == [(TokenKind.IDENT, "q"), (TokenKind.DOT, ".")]
        assert tokens[0].line == 2

    def test_illegal_character(self):
        """An unknown character is a LexError with its position."""
        with pytest.raises(LexError) as exc:
            tokenize("p :- q@r.")
        assert exc.value.line == 1
        assert exc.value.column == 7
        assert "'@'" in str(exc.value)

    def test_keyword_prefix_is_identifier(self):
        """An identifier starting with 'not' stays an identifier."""
        tokens = tokenize("nothing :- not note.")
        assert [t.kind for t in tokens] == [
            TokenKind.IDENT,
            TokenKind.IF,
            TokenKind.NOT,
            TokenKind.IDENT,
            TokenKind.DOT,
        ]
        assert tokens[0].text == "nothing"
        assert tokens[3].text == "note"


class TestParseProgram:
    """Tests for parse_program."""

    def test_normal_rule(self):
        """Head plus positive and negative body literals."""
        program = parse_program("p :- q, not r.")
        assert program.rules == (
            Rule(head="p", body=(BodyLiteral(atom="q"), BodyLiteral(atom="r", sign=Sign.NEGATIVE))),
        )
        assert program.atoms == ("p", "q", "r")

    def test_constraint(self):
        """A headless rule has no head."""
        program = parse_program(":- not q, not r.")
        (rule,) = program.rules
        assert rule.head is None
        assert rule.is_constraint
        assert [str(lit) for lit in rule.body] == ["not q", "not r"]

    def test_fact(self):
        """A bodiless rule is a fact."""
        (rule,) = parse_program("p.").rules
        assert rule.is_fact
        assert rule.body == ()

    def test_empty_program(self):
        """Only comments and whitespace give no rules."""
        assert parse_program("% nothing here\n\n") == Program()

    def test_ground_arguments(self):
        """Arguments are normalised to one canonical spelling."""
        program = parse_program("color(1, red) :- node(1), not edge(f(a), 2).")
        assert program.atoms == ("color(1,red)", "node(1)", "edge(f(a),2)")

    def test_duplicate_rules_kept(self):
        """Repeated rules stay in the rule list."""
        assert len(parse_program("p :- q. p :- q.").rules) == 2

    def test_interval_rejected(self):
        """Intervals must be spelled out."""
        with pytest.raises(RangeSyntaxError, match="expand"):
            parse_program("ball(1..3).")

    def test_variable_rejected(self):
        """Uppercase-led tokens mean a non-ground program."""
        with pytest.raises(VariableError) as exc:
            parse_program("p(X) :- q(X).")
        assert exc.value.column == 3

    def test_unterminated_rule(self):
        """A missing final dot is an error, not a dropped rule."""
        with pytest.raises(ParseError, match="unterminated"):
            parse_program("p :- q")

    def test_double_negation(self):
        """'not not q' is malformed."""
        with pytest.raises(ParseError):
            parse_program("p :- not not q.")

    def test_bare_dot(self):
        """A lone dot is not a rule."""
        with pytest.raises(ParseError):
            parse_program(".")

    def test_range_error_is_parse_error(self):
        """Range errors are caught as parse errors."""
        with pytest.raises(ParseError):
            parse_program("p(1..2) :- q.")


class TestRoundTrip:
    """Printing a parsed program and parsing it again."""

    @pytest.mark.parametrize(
        "text",
        [
            "p :- q, not r.",
            ":- not q, not r.\np.\n",
            "a :- not b. b :- not a. c :- a, b, not c.",
            "in(1,2) :- not out(1,2).",
        ],
    )
    def test_round_trip(self, text):
        """format_program output parses back to an equal program."""
        program = parse_program(text)
        assert parse_program(format_program(program)) == program

    def test_canonical_text(self):
        """Printed form has one rule per line."""
        program = parse_program("p:-q,not r.   :- p.  q.")
        assert format_program(program) == "p :- q, not r.\n:- p.\nq.\n"
