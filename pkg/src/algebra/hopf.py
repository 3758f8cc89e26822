"""Structure-constant Hopf algebras and element arithmetic.

A Hopf algebra of dimension n is stored as

* ``mult[i, j, k]``: b_i b_j = sum_k mult[i, j, k] b_k
* ``comult[i, j, k]``: Delta(b_i) = sum_{j,k} comult[i, j, k] b_j (x) b_k
* ``counit[i]`` and the unit coordinate vector ``unit``
* ``antipode[i, j]``: S(b_i) = sum_j antipode[i, j] b_j

The helpers on :class:`HopfAlgebraData` work on sparse vectors
(``{index: RatFunc}``) and sparse tensor squares (``{(i, j): RatFunc}``).
The module-level operations wrap them for :class:`Element` values.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from src.algebra.errors import AlgebraMismatch, AxiomViolation, ShapeMismatch, SingularAntipode, SingularMatrix
from src.algebra.linalg import inverse
from src.algebra.scalars import ONE, ZERO, RatFunc, Scalar, as_ratfunc
from src.algebra.tensors import SparseTensor, Vec, Vec2, add_term, axpy, dense, sparse
from src.models.schemas import AxiomReport
from src.validators.axioms import HopfAxiomValidator

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Element:
    algebra_id: str
    coords: tuple[RatFunc, ...]

    @property
    def vec(self) -> Vec:
        return sparse(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class HopfAlgebraData:
    name: str
    labels: tuple[str, ...]
    mult: SparseTensor
    unit: tuple[RatFunc, ...]
    comult: SparseTensor
    counit: tuple[RatFunc, ...]
    antipode: SparseTensor

    @property
    def dim(self) -> int:
        return len(self.labels)

    # -- elements -------------------------------------------------------

    def element(self, coords: Sequence[Scalar] | Vec) -> Element:
        if isinstance(coords, dict):
            coords = dense(coords, self.dim)
        values = tuple(as_ratfunc(value) for value in coords)
        if len(values) != self.dim:
            raise ShapeMismatch(f"{self.name} has dimension {self.dim}, got {len(values)} coordinates")
        return Element(self.name, values)

    def basis_element(self, index: int) -> Element:
        return self.element({index: ONE})

    def unit_element(self) -> Element:
        return self.element(self.unit)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise KeyError(f"{self.name} has no basis vector labelled {label!r}") from exc

    def require(self, *elements: Element) -> None:
        for element in elements:
            if element.algebra_id != self.name or len(element.coords) != self.dim:
                raise AlgebraMismatch(
                    f"element of '{element.algebra_id}' used with algebra '{self.name}'",
                    witness=(element.algebra_id, self.name),
                )

    # -- sparse kernels -------------------------------------------------

    @cached_property
    def unit_vec(self) -> Vec:
        return sparse(self.unit)

    def product(self, u: Vec, v: Vec) -> Vec:
        out: Vec = {}
        for i, ui in u.items():
            for j, vj in v.items():
                axpy(out, ui * vj, self.mult.fiber(i, j))
        return out

    def coproduct(self, u: Vec) -> Vec2:
        out: Vec2 = {}
        for i, ui in u.items():
            axpy(out, ui, self.comult.fiber(i))
        return out

    def epsilon(self, u: Vec) -> RatFunc:
        total = ZERO
        for i, ui in u.items():
            if self.counit[i]:
                total = total + ui * self.counit[i]
        return total

    def apply_antipode(self, u: Vec, power: int = 1) -> Vec:
        if power == 0:
            return dict(u)
        tensor = self.antipode if power > 0 else self.antipode_inverse
        current = dict(u)
        for _ in range(abs(power)):
            out: Vec = {}
            for i, ui in current.items():
                axpy(out, ui, tensor.fiber(i))
            current = out
        return current

    @cached_property
    def antipode_matrix(self) -> list[list[RatFunc]]:
        return [list(row) for row in self.antipode.to_nested()]

    @cached_property
    def antipode_inverse(self) -> SparseTensor:
        try:
            inverted = inverse(self.antipode_matrix)
        except SingularMatrix as exc:
            raise SingularAntipode(f"antipode of {self.name} is not invertible") from exc
        return SparseTensor.from_nested(inverted, (self.dim, self.dim))

    # -- tensor squares -------------------------------------------------

    def multiply_pair(self, pair: Vec2) -> Vec:
        """m applied to a tensor-square vector."""
        out: Vec = {}
        for (i, j), value in pair.items():
            axpy(out, value, self.mult.fiber(i, j))
        return out

    def tensor_product(self, left: Vec2, right: Vec2, braiding: SparseTensor | None = None) -> Vec2:
        """Product in the (braided) tensor square: (a⊗b)(c⊗d) = a Ψ(b⊗c) d."""
        out: Vec2 = {}
        for (a, b), x in left.items():
            for (c, d), y in right.items():
                weight = x * y
                if braiding is None:
                    crossings = {(c, b): ONE}
                else:
                    crossings = braiding.fiber(b, c)
                for (m, n), psi in crossings.items():
                    factor = weight * psi
                    for k, left_value in self.mult.fiber(a, m).items():
                        for l, right_value in self.mult.fiber(n, d).items():
                            add_term(out, (k, l), factor * left_value * right_value)
        return out

    def tensor(self, u: Vec, v: Vec) -> Vec2:
        return {(i, j): ui * vj for i, ui in u.items() for j, vj in v.items()}


def _as_tensor(data, shape: tuple[int, ...]) -> SparseTensor:
    if isinstance(data, SparseTensor):
        if data.shape != shape:
            raise ShapeMismatch(f"tensor shape {data.shape} does not match {shape}")
        return data
    return SparseTensor.from_nested(data, shape)


def _as_vector(data: Sequence[Scalar], dim: int, what: str) -> tuple[RatFunc, ...]:
    values = tuple(as_ratfunc(value) for value in data)
    if len(values) != dim:
        raise ShapeMismatch(f"{what} has length {len(values)}, expected {dim}")
    return values


def assemble_hopf(
    dim: int,
    labels: Sequence[str],
    mult,
    unit: Sequence[Scalar] | None,
    comult,
    counit: Sequence[Scalar],
    antipode,
    *,
    name: str = "H",
) -> HopfAlgebraData:
    """Shape-checked construction without running the axiom suite."""
    if dim < 1:
        raise ShapeMismatch("dimension must be positive")
    if len(labels) != dim:
        raise ShapeMismatch(f"{len(labels)} labels for dimension {dim}")
    if unit is None:
        unit = [1] + [0] * (dim - 1)
    return HopfAlgebraData(
        name=name,
        labels=tuple(labels),
        mult=_as_tensor(mult, (dim, dim, dim)),
        unit=_as_vector(unit, dim, "unit"),
        comult=_as_tensor(comult, (dim, dim, dim)),
        counit=_as_vector(counit, dim, "counit"),
        antipode=_as_tensor(antipode, (dim, dim)),
    )


def check_hopf_axioms(H: HopfAlgebraData) -> AxiomReport:
    return HopfAxiomValidator().evaluate(H)


def raise_on_failure(report: AxiomReport) -> None:
    if report.ok:
        return
    failure = report.failures[0]
    raise AxiomViolation(failure.name, witness=tuple(failure.witness), detail=failure.detail)


def build_hopf(
    dim: int,
    labels: Sequence[str],
    mult,
    unit: Sequence[Scalar] | None,
    comult,
    counit: Sequence[Scalar],
    antipode,
    *,
    name: str = "H",
) -> HopfAlgebraData:
    data = assemble_hopf(dim, labels, mult, unit, comult, counit, antipode, name=name)
    raise_on_failure(check_hopf_axioms(data))
    logger.debug("Validated Hopf algebra %s of dimension %d", name, dim)
    return data


def mul_elem(H: HopfAlgebraData, u: Element, v: Element) -> Element:
    H.require(u, v)
    return H.element(H.product(u.vec, v.vec))


def coproduct_elem(H: HopfAlgebraData, u: Element) -> list[list[RatFunc]]:
    H.require(u)
    pair = H.coproduct(u.vec)
    return [[pair.get((j, k), ZERO) for k in range(H.dim)] for j in range(H.dim)]


def counit_elem(H: HopfAlgebraData, u: Element) -> RatFunc:
    H.require(u)
    return H.epsilon(u.vec)


def antipode_elem(H: HopfAlgebraData, u: Element, power: int = 1) -> Element:
    if power == 0:
        raise ValueError("antipode power must be nonzero")
    H.require(u)
    return H.element(H.apply_antipode(u.vec, power))
