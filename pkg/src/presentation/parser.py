"""Parser for the line-oriented ``.hopf`` presentation format.

A header line starts in column 1 with a section keyword. Entry sections
(relations, coproduct, counit, antipode, braiding, pairing, smash) take
``;``-separated entries on the header line or on indented continuation
lines. ``dual <name>`` opens the companion algebra; the sections after it
describe that algebra until ``pairing`` or ``smash``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from src.algebra.errors import DuplicateGenerator, InvalidPresentation, PresentationSyntaxError, UnknownSymbol
from src.presentation.expressions import (
    Expr,
    Token,
    TokenKind,
    TokenStream,
    Word,
    as_word,
    parse_expression,
    symbols,
    tokenize,
)

logger = logging.getLogger(__name__)

BLOCK_KEYWORDS = ("algebra", "dual")
LIST_SECTIONS = ("generators", "basis")
ENTRY_SECTIONS = ("relations", "coproduct", "counit", "antipode", "braiding")
PAIR_SECTIONS = ("pairing", "smash")
KEYWORDS = BLOCK_KEYWORDS + LIST_SECTIONS + ENTRY_SECTIONS + PAIR_SECTIONS


@dataclass(frozen=True)
class AlgebraBlock:
    name: str
    uses_q: bool = False
    generators: tuple[str, ...] = ()
    relations: tuple[tuple[Word, Expr], ...] = ()
    basis: tuple[Word, ...] = ()
    coproduct: tuple[tuple[str, Expr], ...] = ()
    counit: tuple[tuple[str, Expr], ...] = ()
    antipode: tuple[tuple[str, Expr], ...] = ()
    braiding: tuple[tuple[tuple[str, str], Expr], ...] = ()


@dataclass(frozen=True)
class PresentationAST:
    main: AlgebraBlock
    dual: AlgebraBlock | None = None
    pairing: tuple[tuple[tuple[str, str], Expr], ...] = ()
    smash: tuple[tuple[tuple[str, str], Expr], ...] = ()

    @property
    def name(self) -> str:
        return self.main.name

    @property
    def uses_q(self) -> bool:
        return self.main.uses_q or (self.dual is not None and self.dual.uses_q)

    @property
    def generators(self) -> tuple[str, ...]:
        return self.main.generators

    @property
    def basis(self) -> tuple[Word, ...]:
        return self.main.basis

    @property
    def relations(self) -> tuple[tuple[Word, Expr], ...]:
        return self.main.relations


@dataclass
class _BlockBuilder:
    name: str
    uses_q: bool
    generators: list[str] = field(default_factory=list)
    relations: list = field(default_factory=list)
    basis: list[Word] = field(default_factory=list)
    coproduct: list = field(default_factory=list)
    counit: list = field(default_factory=list)
    antipode: list = field(default_factory=list)
    braiding: list = field(default_factory=list)
    seen: set[str] = field(default_factory=set)

    def freeze(self) -> AlgebraBlock:
        return AlgebraBlock(
            name=self.name,
            uses_q=self.uses_q,
            generators=tuple(self.generators),
            relations=tuple(self.relations),
            basis=tuple(self.basis),
            coproduct=tuple(self.coproduct),
            counit=tuple(self.counit),
            antipode=tuple(self.antipode),
            braiding=tuple(self.braiding),
        )


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _split_entries(tokens: list[Token]) -> list[list[Token]]:
    entries: list[list[Token]] = [[]]
    for token in tokens:
        if token.kind is TokenKind.END:
            continue
        if token.kind is TokenKind.OP and token.text == ";":
            entries.append([])
        else:
            entries[-1].append(token)
    return [entry for entry in entries if entry]


def _stream(entry: list[Token]) -> TokenStream:
    last = entry[-1]
    return TokenStream(entry + [Token(TokenKind.END, "", last.line, last.col + len(last.text))])


class PresentationParser:
    """Parses one ``.hopf`` source into a :class:`PresentationAST`."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.main: _BlockBuilder | None = None
        self.dual: _BlockBuilder | None = None
        self.current: _BlockBuilder | None = None
        self.section: str | None = None
        self.pairing: list = []
        self.smash: list = []

    def parse(self) -> PresentationAST:
        for number, raw in enumerate(self.text.splitlines(), start=1):
            line = _strip_comment(raw)
            if not line.strip():
                continue
            indented = line[0] in " \t"
            body = line.lstrip()
            col = len(line) - len(body) + 1
            tokens = tokenize(body, number, col)
            if indented:
                self._continuation(tokens)
            else:
                self._header(tokens)
        if self.main is None:
            raise InvalidPresentation("presentation is empty: expected an 'algebra' line")
        ast = PresentationAST(
            main=self._finish(self.main),
            dual=self._finish(self.dual) if self.dual is not None else None,
            pairing=tuple(self.pairing),
            smash=tuple(self.smash),
        )
        self._check_companion_entries(ast)
        logger.debug("Parsed presentation %s", ast.name)
        return ast

    # -- lines --------------------------------------------------------------

    def _header(self, tokens: list[Token]) -> None:
        keyword = tokens[0]
        if keyword.kind is not TokenKind.IDENT or keyword.text not in KEYWORDS:
            raise PresentationSyntaxError(keyword.line, keyword.col, "a section keyword", keyword.text)
        rest = tokens[1:]
        if keyword.text in BLOCK_KEYWORDS:
            self._open_block(keyword, rest)
            return
        if self.main is None:
            raise PresentationSyntaxError(keyword.line, keyword.col, "'algebra'", keyword.text)
        if keyword.text in PAIR_SECTIONS and self.dual is None:
            raise InvalidPresentation(f"line {keyword.line}: '{keyword.text}' needs a preceding 'dual' block")
        self.section = keyword.text
        self._consume(rest)

    def _continuation(self, tokens: list[Token]) -> None:
        if self.section is None:
            token = tokens[0]
            raise PresentationSyntaxError(token.line, token.col, "a section keyword in column 1", token.text)
        self._consume(tokens)

    def _open_block(self, keyword: Token, rest: list[Token]) -> None:
        stream = TokenStream(rest) if rest else TokenStream([Token(TokenKind.END, "", keyword.line, keyword.col)])
        if keyword.text == "algebra" and self.main is not None:
            raise PresentationSyntaxError(keyword.line, keyword.col, "a single 'algebra' line", keyword.text)
        if keyword.text == "dual" and (self.main is None or self.dual is not None):
            raise PresentationSyntaxError(keyword.line, keyword.col, "'dual' after one 'algebra' block", keyword.text)
        name = self._name(stream)
        uses_q = False
        if stream.peek().kind is TokenKind.IDENT and stream.peek().text == "over":
            stream.next()
            field_token = stream.expect_ident("'Q'")
            if field_token.text != "Q":
                raise PresentationSyntaxError(field_token.line, field_token.col, "'Q'", field_token.text)
            stream.expect("(")
            parameter = stream.expect_ident("'q'")
            if parameter.text != "q":
                raise PresentationSyntaxError(parameter.line, parameter.col, "'q'", parameter.text)
            stream.expect(")")
            uses_q = True
        stream.expect_end()
        block = _BlockBuilder(name=name, uses_q=uses_q)
        if keyword.text == "algebra":
            self.main = block
        else:
            self.dual = block
        self.current = block
        self.section = None

    @staticmethod
    def _name(stream: TokenStream) -> str:
        first = stream.expect_ident("an algebra name")
        parts = [first.text]
        end = first.col + len(first.text)
        while True:
            token = stream.peek()
            adjacent = token.col == end and token.kind in (TokenKind.IDENT, TokenKind.NUMBER)
            joined = token.kind is TokenKind.OP and token.text == "-" and token.col == end
            if not (adjacent or joined):
                return "".join(parts)
            stream.next()
            parts.append(token.text)
            end = token.col + len(token.text)

    def _consume(self, tokens: list[Token]) -> None:
        assert self.section is not None and self.current is not None
        if self.section in LIST_SECTIONS:
            self._words(tokens)
            return
        for entry in _split_entries(tokens):
            self._entry(entry)

    # -- sections -----------------------------------------------------------

    def _words(self, tokens: list[Token]) -> None:
        if self.section == "basis":
            self._basis(tokens)
            return
        block = self.current
        assert block is not None
        for token in tokens:
            if token.kind is TokenKind.END:
                continue
            if token.kind is not TokenKind.IDENT:
                raise PresentationSyntaxError(token.line, token.col, "a generator name", token.text)
            if token.text in block.seen or (token.text == "q" and block.uses_q):
                raise DuplicateGenerator(f"generator '{token.text}' declared twice", witness=(token.text,))
            block.generators.append(token.text)
            block.seen.add(token.text)

    def _basis(self, tokens: list[Token]) -> None:
        block = self.current
        assert block is not None
        groups: list[list[Token]] = [[]]
        previous: Token | None = None
        for token in tokens:
            if token.kind is TokenKind.END:
                continue
            starts_new = previous is not None and not (
                (previous.kind is TokenKind.OP and previous.text in "*^")
                or (token.kind is TokenKind.OP and token.text in "*^")
            )
            if starts_new:
                groups.append([])
            groups[-1].append(token)
            previous = token
        for group in groups:
            if not group:
                continue
            if len(group) == 1 and group[0].kind is TokenKind.NUMBER and group[0].text == "1":
                block.basis.append(())
                continue
            node = parse_expression(_stream(group))
            word = as_word(node)
            self._require_symbols(node, block.generators, allow_q=False)
            block.basis.append(word)

    def _entry(self, entry: list[Token]) -> None:
        section = self.section
        stream = _stream(entry)
        block = self.current
        assert block is not None and section is not None
        if section == "relations":
            lhs = parse_expression(stream)
            stream.expect("=")
            rhs = parse_expression(stream)
            stream.expect_end()
            self._require_symbols(lhs, block.generators, allow_q=False)
            self._require_symbols(rhs, block.generators, allow_q=block.uses_q)
            block.relations.append((as_word(lhs), rhs))
        elif section in ("coproduct", "counit", "antipode"):
            generator = stream.expect_ident("a generator")
            self._require_generator(generator, block.generators)
            stream.expect("->")
            rhs = parse_expression(stream)
            stream.expect_end()
            allowed = () if section == "counit" else block.generators
            self._require_symbols(rhs, allowed, allow_q=block.uses_q)
            getattr(block, section).append((generator.text, rhs))
        elif section == "braiding":
            left = stream.expect_ident("a generator")
            stream.expect("(*)")
            right = stream.expect_ident("a generator")
            for token in (left, right):
                self._require_generator(token, block.generators)
            stream.expect("->")
            rhs = parse_expression(stream)
            stream.expect_end()
            self._require_symbols(rhs, block.generators, allow_q=block.uses_q)
            block.braiding.append(((left.text, right.text), rhs))
        else:
            self._pair_entry(stream, section)

    def _pair_entry(self, stream: TokenStream, section: str) -> None:
        assert self.main is not None and self.dual is not None
        point = stream.expect_ident("a generator of the points algebra")
        stream.expect("," if section == "pairing" else "*")
        function = stream.expect_ident("a generator of the functions algebra")
        self._require_generator(point, self.main.generators)
        self._require_generator(function, self.dual.generators)
        stream.expect("->")
        rhs = parse_expression(stream)
        stream.expect_end()
        uses_q = self.main.uses_q or self.dual.uses_q
        if section == "pairing":
            self._require_symbols(rhs, (), allow_q=uses_q)
            self.pairing.append(((point.text, function.text), rhs))
        else:
            self._require_symbols(rhs, self.main.generators + self.dual.generators, allow_q=uses_q)
            self.smash.append(((point.text, function.text), rhs))

    # -- checks -------------------------------------------------------------

    @staticmethod
    def _require_generator(token: Token, generators) -> None:
        if token.text not in generators:
            raise UnknownSymbol(
                f"unknown generator '{token.text}' at line {token.line}, column {token.col}",
                witness=(token.line, token.col),
            )

    @staticmethod
    def _require_symbols(node: Expr, allowed, *, allow_q: bool) -> None:
        for symbol in symbols(node):
            if symbol.name in allowed or (allow_q and symbol.name == "q"):
                continue
            line, col = symbol.pos
            raise UnknownSymbol(f"unknown symbol '{symbol.name}' at line {line}, column {col}", witness=(line, col))

    @staticmethod
    def _finish(block: _BlockBuilder) -> AlgebraBlock:
        if not block.basis:
            raise InvalidPresentation(f"algebra {block.name} declares no basis")
        if block.basis[0] != ():
            raise InvalidPresentation(f"the first basis word of {block.name} must be 1")
        if len(set(block.basis)) != len(block.basis):
            raise InvalidPresentation(f"algebra {block.name} repeats a basis word")
        basis = set(block.basis)
        for lhs, _ in block.relations:
            if lhs in basis:
                raise InvalidPresentation(f"relation left-hand side {'*'.join(lhs)} is a basis word")
        return block.freeze()

    @staticmethod
    def _check_companion_entries(ast: PresentationAST) -> None:
        if (ast.pairing or ast.smash) and ast.dual is None:
            raise InvalidPresentation("pairing and smash sections need a dual block")


def parse(text: str) -> PresentationAST:
    return PresentationParser(text).parse()
