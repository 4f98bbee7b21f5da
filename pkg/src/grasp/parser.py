"""Lexer and parser for grounded propositional rule text."""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Any

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, UnexpectedToken
from pydantic import BaseModel, ConfigDict

from .enums import Sign, StrEnum
from .exceptions import LexError, ParseError, RangeSyntaxError, VariableError
from .program import Atom, BodyLiteral, Program, Rule

logger = logging.getLogger(__name__)

GRAMMAR = r"""
program: statement*

statement: atom _IF body _DOT  -> normal_rule
         | _IF body _DOT       -> constraint
         | atom _DOT           -> fact

body: literal (_COMMA literal)*

literal: atom        -> positive
       | _NOT atom   -> negative

atom: NAME (_LPAR term (_COMMA term)* _RPAR)?

?term: atom
     | INT
     | VARIABLE
     | INT _RANGE INT -> interval

_IF: ":-"
_RANGE: ".."
_DOT: "."
_COMMA: ","
_LPAR: "("
_RPAR: ")"
_NOT: "not"
NAME: /[a-z][A-Za-z0-9_]*/
INT: /[0-9]+/
VARIABLE: /[A-Z_][A-Za-z0-9_]*/
COMMENT: /%[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""


class TokenKind(StrEnum):
    """Lexical categories of rule text."""

    IDENT = "ident"
    INT = "int"
    VARIABLE = "variable"
    IF = ":-"
    COMMA = ","
    DOT = "."
    RANGE = ".."
    NOT = "not"
    LPAR = "("
    RPAR = ")"


_KIND_BY_TERMINAL = {
    "NAME": TokenKind.IDENT,
    "INT": TokenKind.INT,
    "VARIABLE": TokenKind.VARIABLE,
    "_IF": TokenKind.IF,
    "_COMMA": TokenKind.COMMA,
    "_DOT": TokenKind.DOT,
    "_RANGE": TokenKind.RANGE,
    "_NOT": TokenKind.NOT,
    "_LPAR": TokenKind.LPAR,
    "_RPAR": TokenKind.RPAR,
}


class SourceToken(BaseModel):
    """One lexeme with its 1-based position."""

    model_config = ConfigDict(frozen=True)

    kind: TokenKind
    text: str
    line: int
    column: int


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(GRAMMAR, start="program", parser="lalr", lexer="basic", maybe_placeholders=False)


class _ProgramBuilder(Transformer[Token, Program]):
    """Turn the parse tree into program models."""

    def program(self, rules: list[Rule]) -> Program:
        return Program(rules=tuple(rules))

    def normal_rule(self, items: list[Any]) -> Rule:
        head, body = items
        return Rule(head=head, body=body)

    def constraint(self, items: list[Any]) -> Rule:
        return Rule(head=None, body=items[0])

    def fact(self, items: list[Any]) -> Rule:
        return Rule(head=items[0])

    def body(self, literals: list[BodyLiteral]) -> tuple[BodyLiteral, ...]:
        return tuple(literals)

    def positive(self, items: list[Atom]) -> BodyLiteral:
        return BodyLiteral(atom=items[0], sign=Sign.POSITIVE)

    def negative(self, items: list[Atom]) -> BodyLiteral:
        return BodyLiteral(atom=items[0], sign=Sign.NEGATIVE)

    def atom(self, items: list[Any]) -> Atom:
        name, *args = (str(item) for item in items)
        return f"{name}({','.join(args)})" if args else name


def tokenize(text: str) -> list[SourceToken]:
    """Split rule text into tokens, dropping whitespace and ``%`` comments."""
    try:
        return [
            SourceToken(kind=_KIND_BY_TERMINAL[tok.type], text=str(tok), line=tok.line or 0, column=tok.column or 0)
            for tok in _parser().lex(text)
        ]
    except UnexpectedCharacters as e:
        raise LexError(f"illegal character {text[e.pos_in_stream]!r}", e.line, e.column) from None


def _check_ground(tokens: list[SourceToken]) -> None:
    for tok in tokens:
        if tok.kind is TokenKind.RANGE:
            raise RangeSyntaxError(
                "interval terms are not supported; expand them into separate facts, e.g. ball(1). ball(2).",
                tok.line,
                tok.column,
            )
        if tok.kind is TokenKind.VARIABLE:
            raise VariableError(f"variable {tok.text!r} in a ground program", tok.line, tok.column)


def parse_program(text: str) -> Program:
    """Parse grounded rule text into a Program."""
    _check_ground(tokenize(text))
    try:
        tree = _parser().parse(text)
    except UnexpectedToken as e:
        if e.token.type == "$END":
            raise ParseError("unterminated rule at end of input", e.line, e.column) from None
        raise ParseError(f"unexpected {str(e.token)!r}", e.line, e.column) from None
    except UnexpectedInput as e:
        raise ParseError("malformed rule", getattr(e, "line", 0), getattr(e, "column", 0)) from None

    program = _ProgramBuilder().transform(tree)
    logger.debug(f"> Parsed {len(program.rules)} rules over {len(program.atoms)} atoms")
    return program
