"""Smash products A ⋊ H in the normal-ordered basis b^A_i · e_j.

Cross relations are stored as a rank-4 tensor ``cross[j, i, i', j']`` with
``e_j b_i = sum cross[j, i, i', j'] b_{i'} e_{j'}``. Unbraided pairs derive
it from x a = a_(1) <x_(1), a_(2)> x_(2); braided builds supply it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Literal, Sequence

from src.algebra.duality import DualPair
from src.algebra.errors import AlgebraMismatch, AssociativityFailure, ConsistencyFailure, ShapeMismatch
from src.algebra.hopf import Element, HopfAlgebraData
from src.algebra.scalars import ONE, ZERO, RatFunc, Scalar, as_ratfunc, format_ratfunc
from src.algebra.tensors import SparseTensor, Vec, Vec2, add_term, axpy, vec_equal
from src.config.settings import settings

logger = logging.getLogger(__name__)

Factor = Literal["A", "H"]


@dataclass(frozen=True)
class SmashElement:
    smash_id: str
    coeff: tuple[tuple[RatFunc, ...], ...]

    @property
    def vec(self) -> Vec2:
        return {(i, j): value for i, row in enumerate(self.coeff) for j, value in enumerate(row) if value}

    def coefficient(self, i: int, j: int) -> RatFunc:
        return self.coeff[i][j]

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.coeff)

    def _check(self, other: "SmashElement") -> None:
        if other.smash_id != self.smash_id:
            raise AlgebraMismatch(f"'{other.smash_id}' and '{self.smash_id}' are different smash products")

    def __add__(self, other: "SmashElement") -> "SmashElement":
        self._check(other)
        return SmashElement(
            self.smash_id,
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.coeff, other.coeff)),
        )

    def __sub__(self, other: "SmashElement") -> "SmashElement":
        return self + (-other)

    def __neg__(self) -> "SmashElement":
        return self.scale(-ONE)

    def scale(self, factor: Scalar) -> "SmashElement":
        factor = as_ratfunc(factor)
        return SmashElement(self.smash_id, tuple(tuple(factor * x for x in row) for row in self.coeff))


@dataclass(frozen=True)
class SmashAlgebra:
    name: str
    A: HopfAlgebraData
    H: HopfAlgebraData
    cross: SparseTensor
    pair: DualPair | None = None
    _products: dict[tuple[int, int, int, int], Vec2] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n_a, n_h = self.shape
        for i, j, k, l in product(range(n_a), range(n_h), range(n_a), range(n_h)):
            self._products[(i, j, k, l)] = self._basis_product(i, j, k, l)

    @property
    def dim(self) -> int:
        return self.A.dim * self.H.dim

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.dim, self.H.dim

    @cached_property
    def unit_vec(self) -> Vec2:
        return self.A.tensor(self.A.unit_vec, self.H.unit_vec)

    def element(self, vec: Vec2) -> SmashElement:
        n_a, n_h = self.shape
        return SmashElement(self.name, tuple(tuple(vec.get((i, j), ZERO) for j in range(n_h)) for i in range(n_a)))

    def zero(self) -> SmashElement:
        return self.element({})

    def one(self) -> SmashElement:
        return self.element(self.unit_vec)

    def basis(self, i: int, j: int) -> SmashElement:
        return self.element({(i, j): ONE})

    def require(self, *elements: SmashElement) -> None:
        for element in elements:
            if element.smash_id != self.name or len(element.coeff) != self.A.dim:
                raise AlgebraMismatch(
                    f"element of '{element.smash_id}' used with smash product '{self.name}'",
                    witness=(element.smash_id, self.name),
                )

    # -- products -------------------------------------------------------

    def reorder(self, j: int, i: int) -> Vec2:
        """Normal-ordered e_j · b_i."""
        return self.cross.fiber(j, i)

    def _basis_product(self, i: int, j: int, k: int, l: int) -> Vec2:
        out: Vec2 = {}
        for (m, n), weight in self.reorder(j, k).items():
            for left, left_value in self.A.mult.fiber(i, m).items():
                factor = weight * left_value
                for right, right_value in self.H.mult.fiber(n, l).items():
                    add_term(out, (left, right), factor * right_value)
        return out

    def basis_product(self, i: int, j: int, k: int, l: int) -> Vec2:
        """(b_i e_j)(b_k e_l) from the table filled at construction."""
        return self._products[(i, j, k, l)]

    def multiply(self, u: Vec2, v: Vec2) -> Vec2:
        out: Vec2 = {}
        for (i, j), x in u.items():
            for (k, l), y in v.items():
                axpy(out, x * y, self.basis_product(i, j, k, l))
        return out

    def mixed(self, a: Vec, x: Vec) -> Vec2:
        """The normal-ordered monomial a·x."""
        return self.A.tensor(a, x)

    # -- validation -----------------------------------------------------

    def _generators(self, algebra: HopfAlgebraData) -> list[int]:
        picked = [index for index, label in enumerate(algebra.labels) if label != "1" and "*" not in label]
        return picked or list(range(algebra.dim))

    def _fail(self, witness: tuple[str, ...], detail: str) -> None:
        raise AssociativityFailure(f"{self.name}: {detail}", witness=witness)

    def check_unit_crossings(self) -> None:
        for i in range(self.A.dim):
            a_vec = self.mixed({i: ONE}, self.H.unit_vec)
            if not vec_equal(self.multiply(self.unit_vec, a_vec), a_vec):
                self._fail(("1", self.A.labels[i]), "1_H does not commute with A")
        for j in range(self.H.dim):
            x_vec = self.mixed(self.A.unit_vec, {j: ONE})
            if not vec_equal(self.multiply(x_vec, self.unit_vec), x_vec):
                self._fail((self.H.labels[j], "1"), "1_A does not commute with H")

    def check_twisting(self) -> None:
        """(g y) a = g (y a) and x (a g) = (x a) g over generators g."""
        unit_a, unit_h = self.A.unit_vec, self.H.unit_vec
        for g in self._generators(self.H):
            left_g = self.mixed(unit_a, {g: ONE})
            for y, a in product(range(self.H.dim), range(self.A.dim)):
                y_vec = self.mixed(unit_a, {y: ONE})
                a_vec = self.mixed({a: ONE}, unit_h)
                lhs = self.multiply(self.multiply(left_g, y_vec), a_vec)
                rhs = self.multiply(left_g, self.multiply(y_vec, a_vec))
                if not vec_equal(lhs, rhs):
                    self._fail((self.H.labels[g], self.H.labels[y], self.A.labels[a]), "cross relation is not a left action")
        for g in self._generators(self.A):
            right_g = self.mixed({g: ONE}, unit_h)
            for x, a in product(range(self.H.dim), range(self.A.dim)):
                x_vec = self.mixed(unit_a, {x: ONE})
                a_vec = self.mixed({a: ONE}, unit_h)
                lhs = self.multiply(x_vec, self.multiply(a_vec, right_g))
                rhs = self.multiply(self.multiply(x_vec, a_vec), right_g)
                if not vec_equal(lhs, rhs):
                    self._fail((self.H.labels[x], self.A.labels[a], self.A.labels[g]), "cross relation does not respect products")

    def check_full_associativity(self) -> None:
        cells = list(product(range(self.A.dim), range(self.H.dim)))
        for p, r in product(cells, repeat=2):
            uv = self.basis_product(*p, *r)
            for s in cells:
                lhs = self.multiply(uv, {s: ONE})
                rhs = self.multiply({p: ONE}, self.basis_product(*r, *s))
                if not vec_equal(lhs, rhs):
                    self._fail(tuple(self.cell_label(*cell) for cell in (p, r, s)), "smash product is not associative")

    def cell_label(self, i: int, j: int) -> str:
        return _monomial(self.A.labels[i], self.H.labels[j])

    def validate(self) -> None:
        self.check_unit_crossings()
        self.check_twisting()
        if self.dim <= settings.smash_sweep_limit:
            self.check_full_associativity()


def _cross_from_pair(p: DualPair) -> SparseTensor:
    A, H = p.A, p.H
    entries: dict[tuple[int, ...], RatFunc] = {}
    for j in range(H.dim):
        for (s, j2), h_value in H.comult.fiber(j).items():
            for i in range(A.dim):
                for (i2, r), a_value in A.comult.fiber(i).items():
                    weight = p.pairing[s][r]
                    if weight:
                        add_term(entries, (j, i, i2, j2), h_value * a_value * weight)
    return SparseTensor((H.dim, A.dim, A.dim, H.dim), entries)


def build_smash(p: DualPair, *, name: str | None = None) -> SmashAlgebra:
    if p.braided:
        raise ShapeMismatch("braided pairs need an explicit cross-relation tensor")
    s = SmashAlgebra(name=name or f"{p.A.name}#{p.H.name}", A=p.A, H=p.H, cross=_cross_from_pair(p), pair=p)
    s.validate()
    _check_inverse_reordering(s)
    logger.info("Built smash product %s of dimension %d", s.name, s.dim)
    return s


def build_smash_custom(
    A: HopfAlgebraData,
    H: HopfAlgebraData,
    X,
    *,
    pair: DualPair | None = None,
    name: str | None = None,
) -> SmashAlgebra:
    shape = (H.dim, A.dim, A.dim, H.dim)
    if isinstance(X, SparseTensor):
        if X.shape != shape:
            raise ShapeMismatch(f"cross tensor shape {X.shape} does not match {shape}")
        cross = X
    else:
        cross = SparseTensor.from_nested(X, shape)
    s = SmashAlgebra(name=name or f"{A.name}#{H.name}", A=A, H=H, cross=cross, pair=pair)
    s.validate()
    logger.info("Built smash product %s from explicit cross relations", s.name)
    return s


def smash_mul(s: SmashAlgebra, u: SmashElement, v: SmashElement) -> SmashElement:
    s.require(u, v)
    return s.element(s.multiply(u.vec, v.vec))


def embed(s: SmashAlgebra, which: Factor, u: Element) -> SmashElement:
    if which == "A":
        s.A.require(u)
        return s.element(s.mixed(u.vec, s.H.unit_vec))
    if which == "H":
        s.H.require(u)
        return s.element(s.mixed(s.A.unit_vec, u.vec))
    raise ValueError(f"unknown factor {which!r}")


def vacuum_action(s: SmashAlgebra, x: Element, a: Element) -> Element:
    """x ▷ a read off as (id ⊗ ε_H) of the normal-ordered x·a."""
    s.H.require(x)
    s.A.require(a)
    out: Vec = {}
    for (i, j), value in s.multiply(s.mixed(s.A.unit_vec, x.vec), s.mixed(a.vec, s.H.unit_vec)).items():
        weight = s.H.counit[j]
        if weight:
            add_term(out, i, value * weight)
    return s.A.element(out)


def _reorder_inverse_vec(s: SmashAlgebra, i: int, j: int) -> Vec2:
    assert s.pair is not None
    A, H, p = s.A, s.H, s.pair
    out: Vec2 = {}
    for (i2, r), a_value in A.comult.fiber(i).items():
        twisted = A.apply_antipode({r: ONE}, -1)
        for (s_index, j2), h_value in H.comult.fiber(j).items():
            weight = p.pair({s_index: ONE}, twisted)
            if weight:
                add_term(out, (j2, i2), a_value * h_value * weight)
    return out


def reorder_inverse(s: SmashAlgebra, a: Element, x: Element) -> dict[tuple[int, int], RatFunc]:
    """a x = x_(2) <x_(1), S^{-1}(a_(2))> a_(1), keyed (H index, A index)."""
    if s.pair is None or s.pair.braided:
        raise ShapeMismatch("inverse cross relations need an unbraided dual pair")
    s.A.require(a)
    s.H.require(x)
    out: dict[tuple[int, int], RatFunc] = {}
    for i, a_value in a.vec.items():
        for j, x_value in x.vec.items():
            axpy(out, a_value * x_value, _reorder_inverse_vec(s, i, j))
    return out


def _check_inverse_reordering(s: SmashAlgebra) -> None:
    for i, j in product(range(s.A.dim), range(s.H.dim)):
        back: Vec2 = {}
        for (j2, i2), value in _reorder_inverse_vec(s, i, j).items():
            axpy(back, value, s.reorder(j2, i2))
        if not vec_equal(back, {(i, j): ONE}):
            raise ConsistencyFailure(
                "inverse-cross-relation",
                f"reordering {s.cell_label(i, j)} backwards and forwards does not return it",
            )


def _monomial(a_label: str, h_label: str) -> str:
    parts = [label for label in (a_label, h_label) if label != "1"]
    return "*".join(parts) if parts else "1"


def _is_single_term(text: str) -> bool:
    body = text[1:] if text.startswith("-") else text
    return " + " not in body and " - " not in body and "/" not in body


def format_terms(terms: Sequence[tuple[RatFunc, str]]) -> str:
    """Render ``coefficient * monomial`` pairs as ``1 + b - 2*y``."""
    pieces: list[tuple[bool, str]] = []
    for coefficient, monomial in terms:
        if not coefficient:
            continue
        text = format_ratfunc(coefficient)
        negative = text.startswith("-") and _is_single_term(text)
        if negative:
            text = text[1:]
        if monomial == "1":
            body = text if _is_single_term(text) else f"({text})"
        elif text == "1":
            body = monomial
        elif _is_single_term(text):
            body = f"{text}*{monomial}"
        else:
            body = f"({text})*{monomial}"
        pieces.append((negative, body))
    if not pieces:
        return "0"
    first_negative, first_body = pieces[0]
    rendered = f"-{first_body}" if first_negative else first_body
    for negative, body in pieces[1:]:
        rendered += f" - {body}" if negative else f" + {body}"
    return rendered


def format_smash_element(s: SmashAlgebra, u: SmashElement) -> str:
    s.require(u)
    terms = [
        (u.coeff[i][j], s.cell_label(i, j))
        for i, j in product(range(s.A.dim), range(s.H.dim))
        if u.coeff[i][j]
    ]
    return format_terms(terms)
