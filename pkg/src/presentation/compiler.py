"""Compile parsed presentations into validated structure-constant data.

Products of basis words are reduced with the relation rules; the
coproduct, counit, antipode and braiding given on generators are then
extended to every basis word. Δ and ε are extended multiplicatively,
with the tensor square multiplied through Ψ when a braiding is present.
S is extended antimultiplicatively, braided by S(uv) = m(S⊗S)Ψ(u⊗v).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from itertools import product
from typing import Callable

from src.algebra.braided import BraidingTensor, build_braided_hopf
from src.algebra.duality import DualPair, build_pair, dualize, extend_pairing
from src.algebra.errors import BasisEscape, InvalidPresentation
from src.algebra.hopf import HopfAlgebraData, assemble_hopf, check_hopf_axioms, raise_on_failure
from src.algebra.scalars import ONE, RatFunc
from src.algebra.smash import SmashAlgebra, build_smash, build_smash_custom
from src.algebra.tensors import SparseTensor, Vec, Vec2, add_term, axpy, vec_equal
from src.presentation.expressions import Expr, FreeRing, Poly, Word
from src.presentation.parser import AlgebraBlock, PresentationAST
from src.presentation.rewriting import RewriteRule, RewriteSystem, Strategy, word_text
from src.utils.logging import log_phase

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompiledPresentation:
    """The points algebra of a presentation and, when declared, its companions."""

    ast: PresentationAST
    algebra: HopfAlgebraData
    braiding: BraidingTensor | None = None
    companion: HopfAlgebraData | None = None
    companion_braiding: BraidingTensor | None = None
    pair: DualPair | None = None
    cross: SparseTensor | None = None
    smash: SmashAlgebra | None = None
    warnings: tuple[str, ...] = field(default=())

    @property
    def braided(self) -> bool:
        return self.braiding is not None


def _label(word: Word) -> str:
    return word_text(word)


def _plain(poly: Poly, what: str) -> dict[Word, RatFunc]:
    out: dict[Word, RatFunc] = {}
    for legs, value in poly.items():
        if len(legs) != 1:
            raise InvalidPresentation(f"{what} must be a plain polynomial, not a tensor")
        add_term(out, legs[0], value)
    return out


def _two_legs(poly: Poly, what: str) -> dict[tuple[Word, Word], RatFunc]:
    out: dict[tuple[Word, Word], RatFunc] = {}
    for legs, value in poly.items():
        if len(legs) != 2:
            raise InvalidPresentation(f"{what} must be a sum of two-leg tensors")
        add_term(out, (legs[0], legs[1]), value)
    return out


class _BlockCompiler:
    """Compiles one algebra block; keeps the rewrite system for later reuse."""

    def __init__(self, block: AlgebraBlock) -> None:
        self.block = block
        self.ring = FreeRing(block.generators, uses_q=block.uses_q)
        self.system = RewriteSystem(
            [RewriteRule(lhs, _plain(self.ring.evaluate(rhs), f"relation {_label(lhs)}")) for lhs, rhs in block.relations]
        )
        self.index = {word: n for n, word in enumerate(block.basis)}
        self.labels = tuple(_label(word) for word in block.basis)
        self.warnings: list[str] = []
        self.algebra: HopfAlgebraData | None = None
        self.psi_word: Callable[[Word, Word], Vec2] | None = None

    @property
    def dim(self) -> int:
        return len(self.block.basis)

    # -- reduction ----------------------------------------------------------

    def reduce(self, poly: dict[Word, RatFunc], strategy: Strategy = Strategy.leftmost) -> Vec:
        out: Vec = {}
        for word, value in self.system.normal_form(poly, strategy).items():
            if word not in self.index:
                raise BasisEscape(_label(word))
            add_term(out, self.index[word], value)
        return out

    def word(self, word: Word) -> Vec:
        return self.reduce({word: ONE})

    def plain(self, expr: Expr, what: str) -> Vec:
        return self.reduce(_plain(self.ring.evaluate(expr), what))

    def tensor(self, expr: Expr, what: str) -> Vec2:
        out: Vec2 = {}
        for (left, right), value in _two_legs(self.ring.evaluate(expr), what).items():
            for i, left_value in self.word(left).items():
                for j, right_value in self.word(right).items():
                    add_term(out, (i, j), value * left_value * right_value)
        return out

    def _entries(self, section: tuple, what: str) -> dict[str, Expr]:
        entries: dict[str, Expr] = {}
        for generator, expr in section:
            if generator in entries:
                raise InvalidPresentation(f"{what} of {generator} is given twice in {self.block.name}")
            entries[generator] = expr
        missing = [g for g in self.block.generators if g not in entries]
        if missing:
            raise InvalidPresentation(f"{self.block.name} has no {what} line for {', '.join(missing)}")
        return entries

    # -- stages -------------------------------------------------------------

    def _check_basis(self) -> None:
        for word in self.block.basis:
            if not vec_equal(self.word(word), {self.index[word]: ONE}):
                raise InvalidPresentation(f"basis word {_label(word)} of {self.block.name} is not in normal form")

    def _multiplication(self) -> SparseTensor:
        entries: dict[tuple[int, ...], RatFunc] = {}
        for (i, u), (j, v) in product(enumerate(self.block.basis), repeat=2):
            leftmost = self.reduce({u + v: ONE})
            rightmost = self.reduce({u + v: ONE}, Strategy.rightmost)
            if not vec_equal(leftmost, rightmost):
                message = f"ConfluenceWarning: {_label(u)}*{_label(v)} reduces differently from the right"
                logger.warning("%s in %s", message, self.block.name)
                self.warnings.append(message)
            for k, value in leftmost.items():
                entries[(i, j, k)] = value
        n = self.dim
        return SparseTensor((n, n, n), entries)

    def _braiding(self, mult: SparseTensor) -> SparseTensor | None:
        if not self.block.braiding:
            return None
        table: dict[tuple[str, str], Vec2] = {}
        for (g, h), expr in self.block.braiding:
            if (g, h) in table:
                raise InvalidPresentation(f"braiding of {g} (*) {h} is given twice")
            table[(g, h)] = self.tensor(expr, f"braiding of {g} (*) {h}")
        for g, h in product(self.block.generators, repeat=2):
            if (g, h) not in table:
                raise InvalidPresentation(f"{self.block.name} has no braiding line for {g} (*) {h}")

        basis = self.block.basis
        memo: dict[tuple[Word, Word], Vec2] = {}
        active: set[tuple[Word, Word]] = set()

        def psi(u: Word, v: Word) -> Vec2:
            key = (u, v)
            if key in memo:
                return memo[key]
            if key in active:
                raise InvalidPresentation(f"braiding of {_label(u)} (*) {_label(v)} does not terminate")
            active.add(key)
            out: Vec2 = {}
            if not u or not v:
                for i, x in self.word(v).items():
                    for j, y in self.word(u).items():
                        add_term(out, (i, j), x * y)
            elif len(u) == 1 and len(v) == 1:
                out = dict(table[(u[0], v[0])])
            elif len(u) >= 2:
                for (k, l), c in psi(u[1:], v).items():
                    for (m, n), d in psi(u[:1], basis[k]).items():
                        for r, e in mult.fiber(n, l).items():
                            add_term(out, (m, r), c * d * e)
            else:
                for (k, l), c in psi(u, v[:1]).items():
                    for (m, n), d in psi(basis[l], v[1:]).items():
                        for r, e in mult.fiber(k, m).items():
                            add_term(out, (r, n), c * d * e)
            active.discard(key)
            memo[key] = out
            return out

        self.psi_word = psi
        entries: dict[tuple[int, ...], RatFunc] = {}
        for (i, u), (j, v) in product(enumerate(basis), repeat=2):
            for (k, l), value in psi(u, v).items():
                entries[(i, j, k, l)] = value
        n = self.dim
        return SparseTensor((n,) * 4, entries)

    def _counit(self) -> tuple[RatFunc, ...]:
        values: dict[str, RatFunc] = {}
        for generator, expr in self._entries(self.block.counit, "counit").items():
            poly = self.ring.evaluate(expr)
            if not self.ring.is_scalar(poly):
                raise InvalidPresentation(f"counit of {generator} is not a scalar")
            values[generator] = self.ring.scalar_value(poly)
        counit = []
        for word in self.block.basis:
            value = ONE
            for letter in word:
                value = value * values[letter]
            counit.append(value)
        return tuple(counit)

    def _comultiplication(self, partial: HopfAlgebraData, psi: SparseTensor | None) -> SparseTensor:
        generators = {
            g: self.tensor(expr, f"coproduct of {g}") for g, expr in self._entries(self.block.coproduct, "coproduct").items()
        }
        unit = {(0, 0): ONE}
        entries: dict[tuple[int, ...], RatFunc] = {}
        for i, word in enumerate(self.block.basis):
            value: Vec2 = dict(unit)
            for letter in reversed(word):
                value = partial.tensor_product(generators[letter], value, psi)
            for (j, k), coefficient in value.items():
                entries[(i, j, k)] = coefficient
        n = self.dim
        return SparseTensor((n, n, n), entries)

    def _antipode(self, partial: HopfAlgebraData, psi: SparseTensor | None) -> SparseTensor:
        generators = {g: self.plain(expr, f"antipode of {g}") for g, expr in self._entries(self.block.antipode, "antipode").items()}
        basis = self.block.basis
        memo: dict[Word, Vec] = {}
        active: set[Word] = set()

        def of_index(index: int) -> Vec:
            return antipode(basis[index])

        def antipode(word: Word) -> Vec:
            if word in memo:
                return memo[word]
            if word in active:
                raise InvalidPresentation(f"antipode of {_label(word)} does not terminate")
            active.add(word)
            if not word:
                out: Vec = dict(partial.unit_vec)
            elif len(word) == 1:
                out = dict(generators[word[0]])
            elif psi is None:
                out = partial.product(antipode(word[1:]), generators[word[0]])
            else:
                assert self.psi_word is not None
                out = {}
                for (k, l), c in self.psi_word(word[:1], word[1:]).items():
                    axpy(out, c, partial.product(of_index(k), of_index(l)))
            active.discard(word)
            memo[word] = out
            return out

        entries: dict[tuple[int, ...], RatFunc] = {}
        for i, word in enumerate(basis):
            for j, value in antipode(word).items():
                entries[(i, j)] = value
        n = self.dim
        return SparseTensor((n, n), entries)

    def compile(self) -> tuple[HopfAlgebraData, BraidingTensor | None]:
        self._check_basis()
        with log_phase(logger, f"multiplication table of {self.block.name}", dim=self.dim):
            mult = self._multiplication()
        counit = self._counit()
        n = self.dim
        empty3 = SparseTensor((n, n, n), {})
        partial = assemble_hopf(n, self.labels, mult, None, empty3, counit, SparseTensor((n, n), {}), name=self.block.name)
        psi = self._braiding(mult)
        comult = self._comultiplication(partial, psi)
        antipode = self._antipode(partial, psi)
        algebra = replace(partial, comult=comult, antipode=antipode)
        if psi is None:
            raise_on_failure(check_hopf_axioms(algebra))
            braiding = None
        else:
            braiding = build_braided_hopf(algebra, psi).braiding
        self.algebra = algebra
        logger.info("Compiled %s of dimension %d%s", algebra.name, n, " (braided)" if braiding else "")
        return algebra, braiding


def _generator_table(entries, what: str) -> dict[tuple[str, str], Expr]:
    table: dict[tuple[str, str], Expr] = {}
    for key, expr in entries:
        if key in table:
            raise InvalidPresentation(f"{what} entry {key[0]}, {key[1]} is given twice")
        table[key] = expr
    return table


def _pairing(ast: PresentationAST, ring: FreeRing) -> dict[tuple[str, str], RatFunc]:
    values: dict[tuple[str, str], RatFunc] = {}
    for key, expr in _generator_table(ast.pairing, "pairing").items():
        poly = ring.evaluate(expr)
        if not ring.is_scalar(poly):
            raise InvalidPresentation(f"pairing of {key[0]} with {key[1]} is not a scalar")
        values[key] = ring.scalar_value(poly)
    return values


def _cross_tensor(
    ast: PresentationAST,
    ring: FreeRing,
    points: _BlockCompiler,
    functions: _BlockCompiler,
) -> SparseTensor:
    """Extend generator cross relations to e_j b_i = sum cross[j, i, i', j'] b_i' e_j'."""
    H, A = points.algebra, functions.algebra
    assert H is not None and A is not None
    a_letters = set(functions.block.generators)
    h_letters = set(points.block.generators)

    table: dict[tuple[str, str], Vec2] = {}
    for (h, a), expr in _generator_table(ast.smash, "smash").items():
        out: Vec2 = {}
        for word, value in _plain(ring.evaluate(expr), f"cross relation {h}*{a}").items():
            split = next((n for n, letter in enumerate(word) if letter in h_letters), len(word))
            a_part, h_part = word[:split], word[split:]
            if any(letter in a_letters for letter in h_part):
                raise InvalidPresentation(f"cross relation {h}*{a} is not normal ordered at {_label(word)}")
            for i, x in functions.word(a_part).items():
                for j, y in points.word(h_part).items():
                    add_term(out, (i, j), value * x * y)
        table[(h, a)] = out
    for h, a in product(points.block.generators, functions.block.generators):
        if (h, a) not in table:
            raise InvalidPresentation(f"no cross relation for {h} * {a}")

    h_basis, a_basis = points.block.basis, functions.block.basis
    memo: dict[tuple[Word, Word], Vec2] = {}
    active: set[tuple[Word, Word]] = set()

    def reorder(hw: Word, aw: Word) -> Vec2:
        key = (hw, aw)
        if key in memo:
            return memo[key]
        if key in active:
            raise InvalidPresentation(f"cross relations for {_label(hw)} * {_label(aw)} do not terminate")
        active.add(key)
        out: Vec2 = {}
        if not hw or not aw:
            for i, x in functions.word(aw).items():
                for j, y in points.word(hw).items():
                    add_term(out, (i, j), x * y)
        elif len(hw) == 1 and len(aw) == 1:
            out = dict(table[(hw[0], aw[0])])
        elif len(hw) >= 2:
            for (k, l), c in reorder(hw[1:], aw).items():
                for (m, n), d in reorder(hw[:1], a_basis[k]).items():
                    for r, e in H.mult.fiber(n, l).items():
                        add_term(out, (m, r), c * d * e)
        else:
            for (k, l), c in reorder(hw, aw[:1]).items():
                for (m, n), d in reorder(h_basis[l], aw[1:]).items():
                    for r, e in A.mult.fiber(k, m).items():
                        add_term(out, (r, n), c * d * e)
        active.discard(key)
        memo[key] = out
        return out

    entries: dict[tuple[int, ...], RatFunc] = {}
    for (j, hw), (i, aw) in product(enumerate(h_basis), enumerate(a_basis)):
        for (i2, j2), value in reorder(hw, aw).items():
            entries[(j, i, i2, j2)] = value
    return SparseTensor((H.dim, A.dim, A.dim, H.dim), entries)


def compile_presentation(ast: PresentationAST) -> CompiledPresentation:
    points = _BlockCompiler(ast.main)
    H, braiding = points.compile()
    warnings = list(points.warnings)
    if ast.dual is None:
        return CompiledPresentation(ast=ast, algebra=H, braiding=braiding, warnings=tuple(warnings))

    functions = _BlockCompiler(ast.dual)
    A, companion_braiding = functions.compile()
    warnings.extend(functions.warnings)
    if (braiding is None) != (companion_braiding is None):
        raise InvalidPresentation(f"{H.name} and {A.name} must both be braided or both unbraided")
    overlap = set(ast.main.generators) & set(ast.dual.generators)
    if overlap:
        raise InvalidPresentation(f"generator names shared by both algebras: {', '.join(sorted(overlap))}")

    braided = braiding is not None
    ring = FreeRing(ast.main.generators + ast.dual.generators, uses_q=ast.uses_q)
    P = extend_pairing(A, H, _pairing(ast, ring), braided=braided)
    pair = build_pair(A, H, P, braided=braided)

    cross: SparseTensor | None = None
    if ast.smash:
        cross = _cross_tensor(ast, ring, points, functions)
        smash = build_smash_custom(A, H, cross, pair=pair, name=f"{A.name}#{H.name}")
    elif not braided:
        smash = build_smash(pair)
        cross = smash.cross
    else:
        smash = None
    logger.info("Compiled presentation %s with companion %s", H.name, A.name)
    return CompiledPresentation(
        ast=ast,
        algebra=H,
        braiding=braiding,
        companion=A,
        companion_braiding=companion_braiding,
        pair=pair,
        cross=cross,
        smash=smash,
        warnings=tuple(warnings),
    )


def with_companion(compiled: CompiledPresentation) -> CompiledPresentation:
    """Fill in the dual pair and smash product of an unbraided presentation by dualizing."""
    if compiled.pair is not None:
        return compiled
    if compiled.braided:
        raise InvalidPresentation(f"braided presentation {compiled.algebra.name} declares no dual block")
    pair = dualize(compiled.algebra)
    smash = build_smash(pair)
    return replace(compiled, companion=pair.A, pair=pair, cross=smash.cross, smash=smash)
