"""Tokenizer, expression AST and evaluation into the free algebra.

Expressions are sums of products of generators and scalars, optionally
joined by the tensor separator ``(*)``::

    sum     := tterm (("+" | "-") tterm)*
    tterm   := product ("(*)" product)*
    product := factor (("*" | "/") factor)*
    factor  := "-" factor | power
    power   := atom ("^" ["-"] INT)?
    atom    := INT | IDENT | "(" sum ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Union

from src.algebra.errors import InvalidPresentation, PresentationSyntaxError, UnknownSymbol
from src.algebra.scalars import ONE, Q, RatFunc, as_ratfunc
from src.algebra.tensors import axpy

if TYPE_CHECKING:
    from src.algebra.hopf import Element, HopfAlgebraData

Word = tuple[str, ...]


class TokenKind(str, Enum):
    NUMBER = "number"
    IDENT = "identifier"
    OP = "operator"
    END = "end of line"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\(\*\)|->|[-+*/^(),=;]))")


def tokenize(text: str, line: int = 1, col: int = 1) -> list[Token]:
    tokens: list[Token] = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN.match(text, position)
        if match is None:
            offset = position + len(text[position:]) - len(text[position:].lstrip())
            raise PresentationSyntaxError(line, col + offset, "a token", text[offset])
        number, ident, op = match.groups()
        start = match.start(match.lastindex)
        if number is not None:
            tokens.append(Token(TokenKind.NUMBER, number, line, col + start))
        elif ident is not None:
            tokens.append(Token(TokenKind.IDENT, ident, line, col + start))
        else:
            tokens.append(Token(TokenKind.OP, op, line, col + start))
        position = match.end()
    tokens.append(Token(TokenKind.END, "", line, col + len(text.rstrip())))
    return tokens


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Number:
    value: int
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Symbol:
    name: str
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Unary:
    operand: "Expr"
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Power:
    base: "Expr"
    exponent: int
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


Expr = Union[Number, Symbol, Unary, Binary, Power]


class TokenStream:
    def __init__(self, tokens: list[Token]) -> None:
        self._tokens = tokens
        self._index = 0

    def peek(self) -> Token:
        return self._tokens[self._index]

    def next(self) -> Token:
        token = self._tokens[self._index]
        if token.kind is not TokenKind.END:
            self._index += 1
        return token

    def accept(self, text: str) -> Token | None:
        token = self.peek()
        if token.kind is TokenKind.OP and token.text == text:
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        token = self.accept(text)
        if token is None:
            found = self.peek()
            raise PresentationSyntaxError(found.line, found.col, repr(text), found.text or found.kind.value)
        return token

    def expect_ident(self, what: str = "an identifier") -> Token:
        token = self.peek()
        if token.kind is not TokenKind.IDENT:
            raise PresentationSyntaxError(token.line, token.col, what, token.text or token.kind.value)
        return self.next()

    def at_end(self) -> bool:
        return self.peek().kind is TokenKind.END

    def expect_end(self) -> None:
        token = self.peek()
        if token.kind is not TokenKind.END:
            raise PresentationSyntaxError(token.line, token.col, "end of entry", token.text)


def parse_expression(stream: TokenStream) -> Expr:
    return _sum(stream)


def _sum(stream: TokenStream) -> Expr:
    node = _tterm(stream)
    while True:
        token = stream.peek()
        if token.kind is TokenKind.OP and token.text in ("+", "-"):
            stream.next()
            node = Binary(token.text, node, _tterm(stream), pos=(token.line, token.col))
        else:
            return node


def _tterm(stream: TokenStream) -> Expr:
    node = _product(stream)
    while (token := stream.accept("(*)")) is not None:
        node = Binary("(*)", node, _product(stream), pos=(token.line, token.col))
    return node


def _product(stream: TokenStream) -> Expr:
    node = _factor(stream)
    while True:
        token = stream.peek()
        if token.kind is TokenKind.OP and token.text in ("*", "/"):
            stream.next()
            node = Binary(token.text, node, _factor(stream), pos=(token.line, token.col))
        else:
            return node


def _factor(stream: TokenStream) -> Expr:
    token = stream.accept("-")
    if token is not None:
        return Unary(_factor(stream), pos=(token.line, token.col))
    return _power(stream)


def _power(stream: TokenStream) -> Expr:
    node = _atom(stream)
    caret = stream.accept("^")
    if caret is None:
        return node
    negative = stream.accept("-") is not None
    token = stream.peek()
    if token.kind is not TokenKind.NUMBER:
        raise PresentationSyntaxError(token.line, token.col, "an integer exponent", token.text or token.kind.value)
    stream.next()
    exponent = int(token.text)
    return Power(node, -exponent if negative else exponent, pos=(caret.line, caret.col))


def _atom(stream: TokenStream) -> Expr:
    token = stream.peek()
    if token.kind is TokenKind.NUMBER:
        stream.next()
        return Number(int(token.text), pos=(token.line, token.col))
    if token.kind is TokenKind.IDENT:
        stream.next()
        return Symbol(token.text, pos=(token.line, token.col))
    if stream.accept("(") is not None:
        node = _sum(stream)
        stream.expect(")")
        return node
    raise PresentationSyntaxError(token.line, token.col, "a number, generator or '('", token.text or token.kind.value)


def symbols(node: Expr) -> Iterable[Symbol]:
    if isinstance(node, Symbol):
        yield node
    elif isinstance(node, Unary):
        yield from symbols(node.operand)
    elif isinstance(node, Binary):
        yield from symbols(node.left)
        yield from symbols(node.right)
    elif isinstance(node, Power):
        yield from symbols(node.base)


def as_word(node: Expr) -> Word:
    """A product of generators (with positive powers) as a word."""
    if isinstance(node, Symbol):
        return (node.name,)
    if isinstance(node, Binary) and node.op == "*":
        return as_word(node.left) + as_word(node.right)
    if isinstance(node, Power) and node.exponent > 0:
        return as_word(node.base) * node.exponent
    line, col = node.pos
    raise PresentationSyntaxError(line, col, "a monomial word")


# -- evaluation --------------------------------------------------------------

Legs = tuple[Word, ...]
Poly = dict[Legs, RatFunc]

_SCALAR_KEY: Legs = ((),)


class FreeRing:
    """Noncommutative polynomials over Q(q), optionally tensored.

    A value maps a tuple of words (one per tensor leg) to its coefficient;
    plain polynomials have one leg.
    """

    def __init__(self, alphabet: Iterable[str], uses_q: bool = True) -> None:
        self.alphabet = frozenset(alphabet)
        self.uses_q = uses_q

    @staticmethod
    def scalar(value) -> Poly:
        value = as_ratfunc(value)
        return {_SCALAR_KEY: value} if value else {}

    @staticmethod
    def is_scalar(poly: Poly) -> bool:
        return all(key == _SCALAR_KEY for key in poly)

    @staticmethod
    def scalar_value(poly: Poly) -> RatFunc:
        return poly.get(_SCALAR_KEY, as_ratfunc(0))

    def symbol(self, node: Symbol) -> Poly:
        if node.name in self.alphabet:
            return {((node.name,),): ONE}
        if node.name == "q" and self.uses_q:
            return {_SCALAR_KEY: Q}
        raise UnknownSymbol(f"unknown symbol '{node.name}' at line {node.pos[0]}, column {node.pos[1]}", witness=node.pos)

    @staticmethod
    def _legs(poly: Poly) -> int | None:
        counts = {len(key) for key in poly if key != _SCALAR_KEY}
        if len(counts) > 1:
            raise InvalidPresentation("mixed tensor ranks in one expression")
        return counts.pop() if counts else None

    def add(self, left: Poly, right: Poly) -> Poly:
        out = dict(left)
        for key, value in right.items():
            updated = out.get(key, as_ratfunc(0)) + value
            if updated:
                out[key] = updated
            else:
                out.pop(key, None)
        self._legs(out)
        return out

    def neg(self, poly: Poly) -> Poly:
        return {key: -value for key, value in poly.items()}

    def mul(self, left: Poly, right: Poly) -> Poly:
        if self.is_scalar(left) or self.is_scalar(right):
            factor, other = (left, right) if self.is_scalar(left) else (right, left)
            c = self.scalar_value(factor)
            return {key: c * value for key, value in other.items()} if c else {}
        if self._legs(left) != self._legs(right):
            raise InvalidPresentation("cannot multiply tensors of different rank")
        out: Poly = {}
        for lkey, lvalue in left.items():
            for rkey, rvalue in right.items():
                key = tuple(a + b for a, b in zip(lkey, rkey))
                updated = out.get(key, as_ratfunc(0)) + lvalue * rvalue
                if updated:
                    out[key] = updated
                else:
                    out.pop(key, None)
        return out

    def div(self, left: Poly, right: Poly) -> Poly:
        if not self.is_scalar(right) or not self.scalar_value(right):
            raise InvalidPresentation("only division by a nonzero scalar is allowed")
        return self.mul(left, self.scalar(ONE / self.scalar_value(right)))

    def power(self, base: Poly, exponent: int) -> Poly:
        if exponent < 0:
            if not self.is_scalar(base):
                raise InvalidPresentation("negative powers are only allowed for scalars")
            return self.scalar(self.scalar_value(base) ** exponent)
        out = self.scalar(ONE)
        for _ in range(exponent):
            out = self.mul(out, base)
        return out

    def tensor(self, left: Poly, right: Poly) -> Poly:
        if self._legs(left) not in (None, 1) or self._legs(right) not in (None, 1):
            raise InvalidPresentation("the tensor separator joins two plain polynomials")
        out: Poly = {}
        for lkey, lvalue in left.items():
            for rkey, rvalue in right.items():
                key = lkey + rkey
                out[key] = out.get(key, as_ratfunc(0)) + lvalue * rvalue
        return {key: value for key, value in out.items() if value}

    def evaluate(self, node: Expr) -> Poly:
        if isinstance(node, Number):
            return self.scalar(node.value)
        if isinstance(node, Symbol):
            return self.symbol(node)
        if isinstance(node, Unary):
            return self.neg(self.evaluate(node.operand))
        if isinstance(node, Power):
            return self.power(self.evaluate(node.base), node.exponent)
        left, right = self.evaluate(node.left), self.evaluate(node.right)
        if node.op == "+":
            return self.add(left, right)
        if node.op == "-":
            return self.add(left, self.neg(right))
        if node.op == "*":
            return self.mul(left, right)
        if node.op == "/":
            return self.div(left, right)
        return self.tensor(left, right)


def parse_scalar(text: str) -> RatFunc:
    """Parse a scalar such as ``(1 - q^2)/(1 + q^2)``."""
    stream = TokenStream(tokenize(text))
    node = parse_expression(stream)
    stream.expect_end()
    ring = FreeRing(())
    poly = ring.evaluate(node)
    if not ring.is_scalar(poly):
        raise InvalidPresentation(f"'{text}' is not a scalar")
    return ring.scalar_value(poly)


def parse_element(algebra: HopfAlgebraData, text: str) -> Element:
    """An element such as ``a*b - 2*b`` over the single-letter labels of ``algebra``."""
    stream = TokenStream(tokenize(text))
    node = parse_expression(stream)
    stream.expect_end()
    letters = {label: n for n, label in enumerate(algebra.labels) if label != "1" and "*" not in label}
    ring = FreeRing(letters, uses_q=True)
    vector: dict[int, RatFunc] = {}
    for legs, value in ring.evaluate(node).items():
        if len(legs) != 1:
            raise InvalidPresentation(f"element '{text}' cannot contain the tensor separator")
        term = dict(algebra.unit_vec)
        for letter in legs[0]:
            term = algebra.product(term, {letters[letter]: ONE})
        axpy(vector, value, term)
    return algebra.element(vector)
