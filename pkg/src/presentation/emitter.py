"""Canonical ``.hopf`` text for structure-constant data.

Only monomially labelled algebras can be emitted: the first basis label is
``1``, every other label is a ``*``-product of single-letter-word labels
(the generators), each label's value is the product of its generators, and
the labels are closed under taking prefixes. Relations are the minimal
words ``w*g`` (``w`` a basis word, ``g`` a generator) outside the basis.
"""

from __future__ import annotations

import logging
import re
from itertools import product
from typing import Union

from src.algebra.braided import BraidedHopfData, BraidingTensor
from src.algebra.errors import NotPresentable
from src.algebra.hopf import HopfAlgebraData
from src.algebra.scalars import ONE, RatFunc, format_ratfunc
from src.algebra.smash import format_terms
from src.algebra.tensors import Vec, Vec2, vec_equal
from src.presentation.compiler import CompiledPresentation

logger = logging.getLogger(__name__)

Emittable = Union[HopfAlgebraData, BraidedHopfData, CompiledPresentation]

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*(-[A-Za-z_0-9]+)*$")


def _words(algebra: HopfAlgebraData) -> list[tuple[str, ...]]:
    labels = algebra.labels
    if not labels or labels[0] != "1":
        raise NotPresentable(f"{algebra.name}: the first basis label must be 1")
    if not _NAME.match(algebra.name):
        raise NotPresentable(f"'{algebra.name}' is not a presentable algebra name")
    words: list[tuple[str, ...]] = [()]
    for label in labels[1:]:
        parts = tuple(label.split("*"))
        if not all(_IDENTIFIER.match(part) for part in parts):
            raise NotPresentable(f"{algebra.name}: basis label '{label}' is not a monomial")
        words.append(parts)
    if len(set(words)) != len(words):
        raise NotPresentable(f"{algebra.name} repeats a basis label")
    return words


class _Monomials:
    """Monomial view of a labelled basis."""

    def __init__(self, algebra: HopfAlgebraData) -> None:
        self.algebra = algebra
        self.words = _words(algebra)
        self.index = {word: n for n, word in enumerate(self.words)}
        self.generators = [word[0] for word in self.words if len(word) == 1]
        letters = {letter for word in self.words for letter in word}
        if letters - set(self.generators):
            missing = ", ".join(sorted(letters - set(self.generators)))
            raise NotPresentable(f"{algebra.name}: letters {missing} are not basis vectors")
        for word in self.words:
            if word and word[:-1] not in self.index:
                raise NotPresentable(f"{algebra.name}: basis is not closed under prefixes at {'*'.join(word)}")
            if not vec_equal(self.value(word), {self.index[word]: ONE}):
                raise NotPresentable(f"{algebra.name}: basis vector {'*'.join(word)} is not the product of its letters")

    def value(self, word: tuple[str, ...]) -> Vec:
        vector = dict(self.algebra.unit_vec)
        for letter in word:
            vector = self.algebra.product(vector, {self.index[(letter,)]: ONE})
        return vector

    def label(self, index: int) -> str:
        return self.algebra.labels[index]

    def generator_index(self, generator: str) -> int:
        return self.index[(generator,)]

    def polynomial(self, vector: Vec) -> str:
        return format_terms([(vector[i], self.label(i)) for i in sorted(vector)])

    def tensor(self, pair: Vec2) -> str:
        return format_terms([(pair[key], f"{self.label(key[0])}(*){self.label(key[1])}") for key in sorted(pair)])

    def relations(self) -> list[tuple[str, str]]:
        kept: list[tuple[str, ...]] = []
        out: list[tuple[str, str]] = []
        candidates = [word + (g,) for word in self.words for g in self.generators if word + (g,) not in self.index]
        for lhs in sorted(candidates, key=len):
            if any(_contains(lhs, other) for other in kept):
                continue
            kept.append(lhs)
            prefix = self.index[lhs[:-1]]
            value = self.algebra.product({prefix: ONE}, {self.generator_index(lhs[-1]): ONE})
            out.append(("*".join(lhs), self.polynomial(value)))
        return out


def _contains(word: tuple[str, ...], part: tuple[str, ...]) -> bool:
    return any(word[k : k + len(part)] == part for k in range(len(word) - len(part) + 1))


def _uses_q(values) -> bool:
    return any(not value.is_constant() for value in values)


def _block(keyword: str, algebra: HopfAlgebraData, braiding: BraidingTensor | None) -> tuple[list[str], _Monomials]:
    view = _Monomials(algebra)
    scalars: list[RatFunc] = [value for _, value in algebra.mult.items()]
    scalars += [value for _, value in algebra.comult.items()]
    scalars += [value for _, value in algebra.antipode.items()]
    scalars += list(algebra.counit)
    if braiding is not None:
        scalars += [value for _, value in braiding.psi.items()]
    header = f"{keyword} {algebra.name}" + (" over Q(q)" if _uses_q(scalars) else "")

    lines = [header, "generators " + " ".join(view.generators)]
    relations = view.relations()
    if relations:
        lines.append("relations")
        lines.extend(f"  {lhs} = {rhs}" for lhs, rhs in relations)
    lines.append("basis " + " ".join(algebra.labels))
    lines.append("coproduct")
    for g in view.generators:
        lines.append(f"  {g} -> {view.tensor(algebra.coproduct({view.generator_index(g): ONE}))}")
    lines.append("counit " + " ; ".join(f"{g} -> {format_ratfunc(algebra.counit[view.generator_index(g)])}" for g in view.generators))
    lines.append("antipode")
    for g in view.generators:
        lines.append(f"  {g} -> {view.polynomial(algebra.apply_antipode({view.generator_index(g): ONE}))}")
    if braiding is not None:
        lines.append("braiding")
        for g, h in product(view.generators, repeat=2):
            crossed = braiding.psi.fiber(view.generator_index(g), view.generator_index(h))
            lines.append(f"  {g}(*){h} -> {view.tensor(crossed)}")
    return lines, view


def _companion_lines(compiled: CompiledPresentation, points: _Monomials, functions: _Monomials) -> list[str]:
    assert compiled.pair is not None
    lines: list[str] = []
    pairing = [
        f"  {h} , {a} -> {format_ratfunc(value)}"
        for h, a in product(points.generators, functions.generators)
        if (value := compiled.pair.pairing[points.generator_index(h)][functions.generator_index(a)])
    ]
    if pairing:
        lines.append("pairing")
        lines.extend(pairing)
    if compiled.smash is not None and compiled.ast.smash:
        lines.append("smash")
        for h, a in product(points.generators, functions.generators):
            crossed = compiled.smash.reorder(points.generator_index(h), functions.generator_index(a))
            terms = [(crossed[key], compiled.smash.cell_label(*key)) for key in sorted(crossed)]
            lines.append(f"  {h} * {a} -> {format_terms(terms)}")
    return lines


def emit(data: Emittable) -> str:
    """Canonical presentation text; parsing it back compiles to identical tensors."""
    if isinstance(data, HopfAlgebraData):
        lines, _ = _block("algebra", data, None)
    elif isinstance(data, BraidedHopfData):
        lines, _ = _block("algebra", data.base, data.braiding)
    else:
        lines, points = _block("algebra", data.algebra, data.braiding)
        if data.companion is not None and (data.ast.dual is not None or data.braided):
            companion_lines, functions = _block("dual", data.companion, data.companion_braiding)
            lines.extend(companion_lines)
            lines.extend(_companion_lines(data, points, functions))
    logger.debug("Emitted %d presentation lines", len(lines))
    return "\n".join(lines) + "\n"
