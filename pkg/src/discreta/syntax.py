"""Text <-> formula conversion: infix with precedence, Polish prefix
notation, and fully parenthesized printing.

Grammar (EBNF, infix):

    iff     = implies , [ ("<->" | "↔") , iff ] ;          (* right assoc *)
    implies = or , [ ("->" | "→") , implies ] ;            (* right assoc *)
    or      = and , { ("|" | "∨") , and } ;                (* left assoc  *)
    and     = unary , { ("&" | "∧") , unary } ;            (* left assoc  *)
    unary   = { "~" | "!" | "¬" } , primary ;
    primary = "(" , iff , ")" | const | atom ;
    const   = "T" | "V" | "F" ;
    atom    = letter , { letter | digit | "_" } ;

Precedence, tightest first: ¬, ∧, ∨, →, ↔.  "T"/"V" and "F" are constant
tokens, so an atom named T, V or F is not representable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .formula import (
    And,
    Atom,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
)


class ParseError(Exception):
    def __init__(self, position: int, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"at {position}: expected {expected}, found {found}")


class SyntaxStyle(enum.Enum):
    INFIX_MINIMAL = "minimal"
    INFIX_FULL = "full"
    POLISH = "polish"


_UNICODE = {"not": "¬", "and": "∧", "or": "∨", "implies": "→", "iff": "↔"}
_ASCII = {"not": "~", "and": "&", "or": "|", "implies": "->", "iff": "<->"}

# token kind -> operator key
_SYMBOLS = {
    "¬": "not",
    "~": "not",
    "!": "not",
    "∧": "and",
    "&": "and",
    "∨": "or",
    "|": "or",
    "→": "implies",
    "->": "implies",
    "↔": "iff",
    "<->": "iff",
}

_CONSTS = {"T": True, "V": True, "F": False}


@dataclass(frozen=True)
class _Token:
    kind: str  # "op:<key>", "atom", "const", "(", ")", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "()":
            tokens.append(_Token(c, c, i))
            i += 1
            continue
        if text.startswith("<->", i):
            tokens.append(_Token("op:iff", "<->", i))
            i += 3
            continue
        if text.startswith("->", i):
            tokens.append(_Token("op:implies", "->", i))
            i += 2
            continue
        if c in _SYMBOLS:
            tokens.append(_Token("op:" + _SYMBOLS[c], c, i))
            i += 1
            continue
        if c.isalpha():
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in _CONSTS:
                tokens.append(_Token("const", word, i))
            else:
                tokens.append(_Token("atom", word, i))
            i = j
            continue
        raise ParseError(i, "a formula token", c)
    tokens.append(_Token("end", "", n))
    return tokens


class _InfixParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.cur
        self.i += 1
        return tok

    def error(self, expected: str) -> ParseError:
        found = self.cur.text if self.cur.kind != "end" else "end of input"
        return ParseError(self.cur.pos, expected, found)

    def parse(self) -> Formula:
        f = self.parse_iff()
        if self.cur.kind != "end":
            raise self.error("end of input or a connective")
        return f

    def parse_iff(self) -> Formula:
        left = self.parse_implies()
        if self.cur.kind == "op:iff":
            self.advance()
            return Iff(left, self.parse_iff())
        return left

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.cur.kind == "op:implies":
            self.advance()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self.cur.kind == "op:or":
            self.advance()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_unary()
        while self.cur.kind == "op:and":
            self.advance()
            left = And(left, self.parse_unary())
        return left

    def parse_unary(self) -> Formula:
        if self.cur.kind == "op:not":
            self.advance()
            return Not(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Formula:
        tok = self.cur
        if tok.kind == "(":
            self.advance()
            inner = self.parse_iff()
            if self.cur.kind != ")":
                raise self.error("')'")
            self.advance()
            return inner
        if tok.kind == "atom":
            self.advance()
            return Atom(tok.text)
        if tok.kind == "const":
            self.advance()
            return Const(_CONSTS[tok.text])
        raise self.error("a formula")


def parse_infix(text: str) -> Formula:
    return _InfixParser(text).parse()


def parse_polish(text: str) -> Formula:
    tokens = _tokenize(text)
    pos = 0

    def parse_one() -> Formula:
        nonlocal pos
        tok = tokens[pos]
        if tok.kind == "end":
            raise ParseError(tok.pos, "an operator or operand", "end of input")
        pos += 1
        if tok.kind == "op:not":
            return Not(parse_one())
        if tok.kind.startswith("op:"):
            ctor = {"op:and": And, "op:or": Or, "op:implies": Implies, "op:iff": Iff}[tok.kind]
            return ctor(parse_one(), parse_one())
        if tok.kind == "atom":
            return Atom(tok.text)
        if tok.kind == "const":
            return Const(_CONSTS[tok.text])
        raise ParseError(tok.pos, "an operator or operand", tok.text)

    f = parse_one()
    if tokens[pos].kind != "end":
        raise ParseError(tokens[pos].pos, "end of input", tokens[pos].text)
    return f


def parse(text: str, notation: str = "infix") -> Formula:
    if notation == "polish":
        return parse_polish(text)
    return parse_infix(text)


# Numeric precedence — larger binds tighter.  Leaves and ¬ never need parens
# below a binary connective.
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6, Const: 6}
_RIGHT_ASSOC = (Implies, Iff)
_OP_KEY = {And: "and", Or: "or", Implies: "implies", Iff: "iff"}


def _render(f: Formula, symbols: dict[str, str]) -> str:
    if isinstance(f, Const):
        return "T" if f.value else "F"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        inner = _render(f.child, symbols)
        if _PREC[type(f.child)] < _PREC[Not]:
            inner = f"({inner})"
        return symbols["not"] + inner
    prec = _PREC[type(f)]
    sides = []
    for child, is_right in ((f.left, False), (f.right, True)):
        text = _render(child, symbols)
        cprec = _PREC[type(child)]
        needs = cprec < prec
        if cprec == prec:
            # same connective: parenthesize the non-associative side
            needs = is_right if not isinstance(f, _RIGHT_ASSOC) else not is_right
        sides.append(f"({text})" if needs else text)
    op = symbols[_OP_KEY[type(f)]]
    return f"{sides[0]} {op} {sides[1]}"


def _render_full(f: Formula, symbols: dict[str, str]) -> str:
    if isinstance(f, Const):
        return "T" if f.value else "F"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return symbols["not"] + _render_full(f.child, symbols)
    op = symbols[_OP_KEY[type(f)]]
    return f"({_render_full(f.left, symbols)} {op} {_render_full(f.right, symbols)})"


def _render_polish(f: Formula, symbols: dict[str, str]) -> str:
    if isinstance(f, Const):
        return "T" if f.value else "F"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return f"{symbols['not']} {_render_polish(f.child, symbols)}"
    op = symbols[_OP_KEY[type(f)]]
    return f"{op} {_render_polish(f.left, symbols)} {_render_polish(f.right, symbols)}"


def print_formula(f: Formula, style: SyntaxStyle = SyntaxStyle.INFIX_MINIMAL, ascii_only: bool = False) -> str:
    symbols = _ASCII if ascii_only else _UNICODE
    if style is SyntaxStyle.POLISH:
        return _render_polish(f, symbols)
    if style is SyntaxStyle.INFIX_FULL:
        return _render_full(f, symbols)
    return _render(f, symbols)
