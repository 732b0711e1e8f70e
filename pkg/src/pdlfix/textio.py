"""Concrete syntax: parser and canonical printer for formulas and programs.

Grammar (right-associative binary operators throughout)::

    formula  ::= disj
    disj     ::= conj ('|' disj)?
    conj     ::= unary ('&' conj)?
    unary    ::= '[' program ']' unary | '<' program '>' unary | primary
    primary  ::= 'true' | 'false' | lower-ident | '~' lower-ident
               | UPPER-ident | '(' formula ')'

    program  ::= choice
    choice   ::= seq ('u' choice)?
    seq      ::= starred (';' seq)?
    starred  ::= prim '*'*
    prim     ::= test | lower-ident | '(' program ')'
    test     ::= lower-ident '?' | '~' lower-ident '?' | 'true?' | 'false?'
               | '(' formula ')?'

Lowercase identifiers are atoms or atomic programs depending on position,
uppercase identifiers are variables.  ``u``, ``true`` and ``false`` are
reserved.  Unicode aliases (``∪`` ``⊤`` ``⊥`` ``¬``) are accepted on input and
never emitted.  Printing produces canonical ASCII with minimal parentheses;
``parse(print(t)) == t`` holds for every term.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    And,
    Atom,
    AtomicProg,
    Bot,
    Box,
    Choice,
    Diamond,
    Formula,
    NegAtom,
    Or,
    Program,
    Seq,
    Star,
    Test,
    Top,
    Var,
)

__all__ = ["ParseError", "parse_formula", "parse_program", "print_formula", "print_program"]

_ALIASES = {"∪": "u", "⊤": "true", "⊥": "false", "¬": "~"}
_PUNCT = "&|~;*?()[]<>"


class ParseError(ValueError):
    """Syntax error with a 1-based source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    kind: str  # 'lower' | 'upper' | punctuation character | 'end'
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in _ALIASES:
            alias = _ALIASES[ch]
            if alias == "~":
                tokens.append(_Token("~", "~", line, col))
            else:
                tokens.append(_Token("lower", alias, line, col))
            i += 1
            col += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "lower" if word[0].islower() else "upper"
            tokens.append(_Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unknown token {text[i]!r}", line, col)
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, expected: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(expected, tok)
        return self.advance()

    def fail(self, expected: str, tok: _Token | None = None):
        tok = tok or self.peek()
        found = tok.text if tok.kind != "end" else "end of input"
        raise ParseError(f"expected {expected}, found {found!r}", tok.line, tok.column)

    # formulas

    def formula(self) -> Formula:
        left = self.conj()
        if self.peek().kind == "|":
            self.advance()
            return Or(left, self.formula())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        if self.peek().kind == "&":
            self.advance()
            return And(left, self.conj())
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "[":
            self.advance()
            prog = self.program()
            self.expect("]", "']'")
            return Box(prog, self.unary())
        if tok.kind == "<":
            self.advance()
            prog = self.program()
            self.expect(">", "'>'")
            return Diamond(prog, self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "(":
            self.advance()
            inner = self.formula()
            self.expect(")", "')'")
            return inner
        if tok.kind == "~":
            self.advance()
            name = self.expect("lower", "an atom after '~'")
            if name.text in ("true", "false", "u"):
                self.fail("an atom after '~'", name)
            return NegAtom(name.text)
        if tok.kind == "lower":
            self.advance()
            if tok.text == "true":
                return Top()
            if tok.text == "false":
                return Bot()
            if tok.text == "u":
                self.fail("a formula ('u' is reserved)", tok)
            return Atom(tok.text)
        if tok.kind == "upper":
            self.advance()
            return Var(tok.text)
        self.fail("a formula")

    # programs

    def program(self) -> Program:
        left = self.seq()
        tok = self.peek()
        if tok.kind == "lower" and tok.text == "u":
            self.advance()
            return Choice(left, self.program())
        return left

    def seq(self) -> Program:
        left = self.starred()
        if self.peek().kind == ";":
            self.advance()
            return Seq(left, self.seq())
        return left

    def starred(self) -> Program:
        prog = self.prog_primary()
        while self.peek().kind == "*":
            self.advance()
            prog = Star(prog)
        return prog

    def _paren_is_test(self) -> bool:
        # Scan from the current '(' to its match; a trailing '?' marks a test.
        depth = 0
        for idx in range(self.pos, len(self.tokens)):
            kind = self.tokens[idx].kind
            if kind == "(":
                depth += 1
            elif kind == ")":
                depth -= 1
                if depth == 0:
                    return self.tokens[idx + 1].kind == "?"
        self.fail("a matching ')'")

    def prog_primary(self) -> Program:
        tok = self.peek()
        if tok.kind == "(":
            if self._paren_is_test():
                self.advance()
                cond = self.formula()
                self.expect(")", "')'")
                self.expect("?", "'?'")
                return Test(cond)
            self.advance()
            inner = self.program()
            self.expect(")", "')'")
            return inner
        if tok.kind == "~":
            self.advance()
            name = self.expect("lower", "an atom after '~'")
            self.expect("?", "'?' after a test shorthand")
            return Test(NegAtom(name.text))
        if tok.kind == "lower":
            self.advance()
            if self.peek().kind == "?":
                self.advance()
                if tok.text == "true":
                    return Test(Top())
                if tok.text == "false":
                    return Test(Bot())
                if tok.text == "u":
                    self.fail("a program ('u' is reserved)", tok)
                return Test(Atom(tok.text))
            if tok.text in ("true", "false", "u"):
                self.fail("a program", tok)
            return AtomicProg(tok.text)
        if tok.kind == "upper":
            self.advance()
            self.expect("?", "'?' after a variable test")
            return Test(Var(tok.text))
        self.fail("a program")


def parse_formula(text: str) -> Formula:
    parser = _Parser(text)
    result = parser.formula()
    end = parser.peek()
    if end.kind != "end":
        raise ParseError(f"unexpected trailing input {end.text!r}", end.line, end.column)
    return result


def parse_program(text: str) -> Program:
    parser = _Parser(text)
    result = parser.program()
    end = parser.peek()
    if end.kind != "end":
        raise ParseError(f"unexpected trailing input {end.text!r}", end.line, end.column)
    return result


# Precedence levels used by the printer.  Higher binds tighter.
_F_OR, _F_AND, _F_UNARY = 1, 2, 3
_P_CHOICE, _P_SEQ, _P_STAR, _P_PRIM = 1, 2, 3, 4


def _fmt_formula(phi: Formula, level: int) -> str:
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, NegAtom):
        return f"~{phi.name}"
    if isinstance(phi, Var):
        return phi.name
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bot):
        return "false"
    if isinstance(phi, Or):
        text = f"{_fmt_formula(phi.left, _F_OR + 1)} | {_fmt_formula(phi.right, _F_OR)}"
        return f"({text})" if level > _F_OR else text
    if isinstance(phi, And):
        text = f"{_fmt_formula(phi.left, _F_AND + 1)} & {_fmt_formula(phi.right, _F_AND)}"
        return f"({text})" if level > _F_AND else text
    if isinstance(phi, Box):
        return f"[{_fmt_program(phi.prog, _P_CHOICE)}]{_fmt_formula(phi.body, _F_UNARY)}"
    if isinstance(phi, Diamond):
        return f"<{_fmt_program(phi.prog, _P_CHOICE)}>{_fmt_formula(phi.body, _F_UNARY)}"
    raise TypeError(f"not a formula: {phi!r}")


def _fmt_test(cond: Formula) -> str:
    if isinstance(cond, (Atom, Var)):
        return f"{cond.name}?"
    if isinstance(cond, NegAtom):
        return f"(~{cond.name})?"
    if isinstance(cond, Top):
        return "true?"
    if isinstance(cond, Bot):
        return "false?"
    return f"({_fmt_formula(cond, _F_OR)})?"


def _fmt_program(alpha: Program, level: int) -> str:
    if isinstance(alpha, AtomicProg):
        return alpha.name
    if isinstance(alpha, Test):
        return _fmt_test(alpha.cond)
    if isinstance(alpha, Seq):
        text = f"{_fmt_program(alpha.first, _P_SEQ + 1)} ; {_fmt_program(alpha.second, _P_SEQ)}"
        return f"({text})" if level > _P_SEQ else text
    if isinstance(alpha, Choice):
        text = f"{_fmt_program(alpha.left, _P_CHOICE + 1)} u {_fmt_program(alpha.right, _P_CHOICE)}"
        return f"({text})" if level > _P_CHOICE else text
    if isinstance(alpha, Star):
        return f"{_fmt_program(alpha.body, _P_STAR)}*"
    raise TypeError(f"not a program: {alpha!r}")


def print_formula(phi: Formula) -> str:
    """Canonical text; minimal parentheses under the published precedence."""
    return _fmt_formula(phi, _F_OR)


def print_program(alpha: Program) -> str:
    return _fmt_program(alpha, _P_CHOICE)
