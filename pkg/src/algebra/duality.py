"""Dual pairs of Hopf algebras: dualization, pairing and the point actions."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Mapping, Sequence

from src.algebra.errors import AlgebraMismatch, ConsistencyFailure, ShapeMismatch
from src.algebra.hopf import Element, HopfAlgebraData, build_hopf, check_hopf_axioms, raise_on_failure
from src.algebra.linalg import identity, inverse
from src.algebra.scalars import ONE, ZERO, RatFunc, Scalar, as_ratfunc
from src.algebra.tensors import SparseTensor, Vec, axpy, vec_equal
from src.models.schemas import AxiomReport
from src.validators.axioms import PairingValidator

logger = logging.getLogger(__name__)

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")
_FRESH_LETTERS = "abcdefghijklmnoprstuvw"


@dataclass(frozen=True)
class DualPair:
    """Functions ``A`` and points ``H`` with ``pairing[i][j] = <b^H_i, b^A_j>``."""

    A: HopfAlgebraData
    H: HopfAlgebraData
    pairing: tuple[tuple[RatFunc, ...], ...]
    braided: bool = False

    @cached_property
    def dual_matrix(self) -> list[list[RatFunc]]:
        """Q = P^{-1}; the dual basis is f^i = sum_j Q[j][i] b^A_j."""
        return inverse([list(row) for row in self.pairing])

    @cached_property
    def dual_vectors(self) -> tuple[Vec, ...]:
        Q = self.dual_matrix
        n = self.A.dim
        return tuple({j: Q[j][i] for j in range(n) if Q[j][i]} for i in range(n))

    def pair(self, h: Vec, a: Vec) -> RatFunc:
        total = ZERO
        for i, hi in h.items():
            row = self.pairing[i]
            for j, aj in a.items():
                if row[j]:
                    total = total + hi * aj * row[j]
        return total

    def act_left_vec(self, x: Vec, a: Vec) -> Vec:
        out: Vec = {}
        for (j, k), value in self.A.coproduct(a).items():
            weight = self.pair(x, {k: ONE})
            if weight:
                axpy(out, value * weight, {j: ONE})
        return out

    def act_right_vec(self, x: Vec, a: Vec) -> Vec:
        out: Vec = {}
        for (j, k), value in self.H.coproduct(x).items():
            weight = self.pair({j: ONE}, a)
            if weight:
                axpy(out, value * weight, {k: ONE})
        return out


def _pairing_tuple(P: Sequence[Sequence[Scalar]], n_h: int, n_a: int) -> tuple[tuple[RatFunc, ...], ...]:
    if len(P) != n_h or any(len(row) != n_a for row in P):
        raise ShapeMismatch(f"pairing must be {n_h} x {n_a}")
    return tuple(tuple(as_ratfunc(value) for value in row) for row in P)


def validate_pair(
    A: HopfAlgebraData,
    H: HopfAlgebraData,
    P: Sequence[Sequence[Scalar]],
    *,
    braided: bool = False,
) -> AxiomReport:
    return PairingValidator().evaluate(A, H, _pairing_tuple(P, H.dim, A.dim), braided=braided)


def build_pair(
    A: HopfAlgebraData,
    H: HopfAlgebraData,
    P: Sequence[Sequence[Scalar]],
    *,
    braided: bool = False,
) -> DualPair:
    pairing = _pairing_tuple(P, H.dim, A.dim)
    raise_on_failure(PairingValidator().evaluate(A, H, pairing, braided=braided))
    return DualPair(A=A, H=H, pairing=pairing, braided=braided)


def _dual_labels(H: HopfAlgebraData, unit_is_first: bool) -> tuple[str, ...]:
    fallback = tuple(f"f{i}" for i in range(H.dim))
    if not unit_is_first or H.labels[0] != "1":
        return fallback
    generators = [label for label in H.labels[1:] if _IDENTIFIER.match(label)]
    taken = set(generators)
    letters = iter(letter for letter in _FRESH_LETTERS if letter not in taken)
    renamed: dict[str, str] = {}
    for generator in generators:
        try:
            renamed[generator] = next(letters)
        except StopIteration:
            return fallback
    labels = ["1"]
    for label in H.labels[1:]:
        parts = label.split("*")
        if not all(part in renamed for part in parts):
            return fallback
        labels.append("*".join(renamed[part] for part in parts))
    return tuple(labels)


def dualize(H: HopfAlgebraData, *, name: str | None = None) -> DualPair:
    """Transpose the structure constants of ``H`` into its dual ``A``."""
    raise_on_failure(check_hopf_axioms(H))
    n = H.dim
    mult = {(i, j, k): value for (k, i, j), value in H.comult.items()}
    comult = {(k, i, j): value for (i, j, k), value in H.mult.items()}
    antipode = {(j, i): value for (i, j), value in H.antipode.items()}
    unit_is_first = list(H.counit) == [ONE] + [ZERO] * (n - 1)
    A = build_hopf(
        n,
        _dual_labels(H, unit_is_first),
        SparseTensor((n, n, n), mult),
        H.counit,
        SparseTensor((n, n, n), comult),
        H.unit,
        SparseTensor((n, n), antipode),
        name=name or f"{H.name}-dual",
    )
    if not _labels_are_monomial(A):
        A = replace(A, labels=tuple(f"f{i}" for i in range(n)))
    logger.info("Dualized %s into %s", H.name, A.name)
    return DualPair(A=A, H=H, pairing=tuple(tuple(row) for row in identity(n)))


def _require_pair(p: DualPair, h: Element | None = None, a: Element | None = None) -> None:
    if h is not None and (h.algebra_id != p.H.name or len(h.coords) != p.H.dim):
        raise AlgebraMismatch(f"'{h.algebra_id}' is not the points algebra '{p.H.name}'", witness=(h.algebra_id,))
    if a is not None and (a.algebra_id != p.A.name or len(a.coords) != p.A.dim):
        raise AlgebraMismatch(f"'{a.algebra_id}' is not the functions algebra '{p.A.name}'", witness=(a.algebra_id,))


def pair_eval(p: DualPair, h: Element, a: Element) -> RatFunc:
    _require_pair(p, h=h, a=a)
    return p.pair(h.vec, a.vec)


def act_left(p: DualPair, x: Element, a: Element) -> Element:
    """x ▷ a = a_(1) <x, a_(2)>."""
    _require_pair(p, h=x, a=a)
    return p.A.element(p.act_left_vec(x.vec, a.vec))


def act_right(p: DualPair, x: Element, a: Element) -> Element:
    """x ◁ a = <x_(1), a> x_(2)."""
    _require_pair(p, h=x, a=a)
    return p.H.element(p.act_right_vec(x.vec, a.vec))


def canonical_element(p: DualPair) -> list[list[RatFunc]]:
    """Coefficients C[j][i] of b^A_j (x) b^H_i in sum_i f^i (x) e_i."""
    return [list(row) for row in p.dual_matrix]


def _words(H: HopfAlgebraData) -> list[tuple[str, ...]]:
    return [() if label == "1" else tuple(label.split("*")) for label in H.labels]


def _word_vector(H: HopfAlgebraData, word: Sequence[str]) -> Vec:
    vector = dict(H.unit_vec)
    for letter in word:
        vector = H.product(vector, {H.index_of(letter): ONE})
    return vector


def extend_pairing(
    A: HopfAlgebraData,
    H: HopfAlgebraData,
    generator_pairing: Mapping[tuple[str, str], Scalar],
    *,
    braided: bool = False,
) -> list[list[RatFunc]]:
    """Extend a pairing given on generator pairs ``(h, a)`` to all basis words.

    Unbraided pairs use <xy, a> = <x, a_(1)><y, a_(2)> and
    <h, ab> = <h_(1), a><h_(2), b>. Braided pairs use the primed
    convention <xy, a> = <y, a_(1)><x, a_(2)> and <h, ab> = <h_(1), b><h_(2), a>.
    Products of points are always split first.
    """
    h_words, a_words = _words(H), _words(A)
    table = {key: as_ratfunc(value) for key, value in generator_pairing.items()}
    memo: dict[tuple[int, int], RatFunc] = {}
    active: set[tuple[int, int]] = set()

    def against(h: Vec, a_index: int) -> RatFunc:
        total = ZERO
        for i, hi in h.items():
            total = total + hi * value(i, a_index)
        return total

    def against_a(h_index: int, a: Vec) -> RatFunc:
        total = ZERO
        for j, aj in a.items():
            total = total + aj * value(h_index, j)
        return total

    def value(h: int, a: int) -> RatFunc:
        key = (h, a)
        if key in memo:
            return memo[key]
        if key in active:
            raise ConsistencyFailure("pairing-extension", f"recursion revisits ({H.labels[h]}, {A.labels[a]})")
        active.add(key)
        hw, aw = h_words[h], a_words[a]
        if not hw:
            result = A.counit[a]
        elif not aw:
            result = H.counit[h]
        elif len(hw) == 1 and len(aw) == 1:
            result = table.get((hw[0], aw[0]), ZERO)
        elif len(hw) >= 2:
            head = {H.index_of(hw[0]): ONE}
            rest = _word_vector(H, hw[1:])
            result = ZERO
            for (j, k), coefficient in A.coproduct({a: ONE}).items():
                if braided:
                    term = against(rest, j) * against(head, k)
                else:
                    term = against(head, j) * against(rest, k)
                result = result + coefficient * term
        else:
            head_index = A.index_of(aw[0])
            rest = _word_vector(A, aw[1:])
            result = ZERO
            for (j, k), coefficient in H.coproduct({h: ONE}).items():
                if braided:
                    term = against_a(j, rest) * value(k, head_index)
                else:
                    term = value(j, head_index) * against_a(k, rest)
                result = result + coefficient * term
        active.discard(key)
        memo[key] = result
        return result

    return [[value(i, j) for j in range(A.dim)] for i in range(H.dim)]


def double_dual(H: HopfAlgebraData) -> HopfAlgebraData:
    return dualize(dualize(H).A).A


def same_structure(X: HopfAlgebraData, Y: HopfAlgebraData) -> bool:
    """Equal tensors in the same basis order, labels ignored."""
    return (
        X.dim == Y.dim
        and X.mult == Y.mult
        and X.comult == Y.comult
        and X.unit == Y.unit
        and X.counit == Y.counit
        and X.antipode == Y.antipode
    )


def _labels_are_monomial(A: HopfAlgebraData) -> bool:
    """Every ``*``-joined label is the product of its letters."""
    if A.labels[0] != "1":
        return False
    for k, label in enumerate(A.labels[1:], start=1):
        if "*" in label and not vec_equal(_word_vector(A, label.split("*")), {k: ONE}):
            return False
    return True
