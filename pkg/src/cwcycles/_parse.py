"""Recursive-descent parser for the ASCII polynomial grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | NAME | '(' expr ')'

Division is only allowed by constants.  The parser is generic: the caller
supplies an ``Algebra`` that builds values, so one grammar serves field
elements and multivariate polynomials alike.
"""

import re
from fractions import Fraction

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class Algebra:
    """Callbacks used by :func:`parse_expression`."""

    def const(self, q: Fraction):
        raise NotImplementedError

    def var(self, name: str):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def pow(self, a, e: int):
        return a ** e

    def as_constant(self, a):
        """Return a Fraction if ``a`` is a rational constant, else None."""
        raise NotImplementedError

    def div_const(self, a, q: Fraction):
        return self.mul(a, self.const(1 / q))


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError("unexpected character", text, col + 1)
        start = m.start(m.lastindex)
        num, name, op = m.groups()
        if op == "**":
            op = "^"
        tokens.append((num, name, op, start + 1))
        pos = m.end()
    tokens.append((None, None, None, len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text, algebra):
        self.text = text
        self.alg = algebra
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.text, tok[3])

    def parse(self):
        if len(self.tokens) == 1:
            raise ParseError("empty expression", self.text, 1)
        value = self.expr()
        tok = self.peek()
        if tok[0] is not None or tok[1] is not None or tok[2] is not None:
            raise self.error("unexpected token")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[2] in ("+", "-"):
            op = self.take()[2]
            rhs = self.term()
            value = self.alg.add(value, rhs) if op == "+" else self.alg.sub(value, rhs)
        return value

    def term(self):
        value = self.unary()
        while self.peek()[2] in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            if tok[2] == "*":
                value = self.alg.mul(value, rhs)
            else:
                q = self.alg.as_constant(rhs)
                if q is None:
                    raise self.error("division by a non-constant", tok)
                if q == 0:
                    raise self.error("division by zero", tok)
                value = self.alg.div_const(value, q)
        return value

    def unary(self):
        op = self.peek()[2]
        if op == "-":
            self.take()
            return self.alg.neg(self.unary())
        if op == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[2] == "^":
            self.take()
            tok = self.take()
            if tok[0] is None:
                raise self.error("exponent must be a nonnegative integer", tok)
            base = self.alg.pow(base, int(tok[0]))
        return base

    def atom(self):
        tok = self.take()
        num, name, op, col = tok
        if num is not None:
            return self.alg.const(Fraction(int(num)))
        if name is not None:
            try:
                return self.alg.var(name)
            except KeyError:
                raise ParseError(f"unknown variable {name!r}", self.text, col) from None
        if op == "(":
            value = self.expr()
            if self.take()[2] != ")":
                raise self.error("expected ')'", self.tokens[self.i - 1])
            return value
        raise self.error("unexpected token", tok)


def parse_expression(text, algebra):
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    return _Parser(text, algebra).parse()
