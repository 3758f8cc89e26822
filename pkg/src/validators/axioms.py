"""Exhaustive axiom checks for Hopf algebras, braidings and dual pairings."""

from __future__ import annotations

import logging
from itertools import product
from typing import TYPE_CHECKING, Callable, Iterable, Sequence

from src.algebra.linalg import rank
from src.algebra.scalars import ONE, ZERO, RatFunc
from src.algebra.tensors import SparseTensor, Vec, Vec2, add_term, axpy, scaled, vec_equal
from src.models.schemas import AxiomCheck, AxiomReport

if TYPE_CHECKING:
    from src.algebra.hopf import HopfAlgebraData

logger = logging.getLogger(__name__)

HOPF_AXIOMS = (
    "unit-law",
    "associativity",
    "coassociativity",
    "counit-law",
    "unit-coalgebra",
    "bialgebra-law",
    "counit-multiplicative",
    "antipode-law",
    "antipode-antihomomorphism",
    "antipode-invertible",
)

BRAIDED_AXIOMS = (
    "unit-law",
    "associativity",
    "coassociativity",
    "counit-law",
    "unit-coalgebra",
    "braiding-invertible",
    "yang-baxter",
    "braiding-unit",
    "braiding-natural-product",
    "braiding-natural-coproduct",
    "braiding-natural-counit",
    "braiding-natural-antipode",
    "braided-bialgebra",
    "counit-multiplicative",
    "braided-antipode-law",
    "braided-antihomomorphism",
    "antipode-invertible",
)

PAIRING_AXIOMS = (
    "pairing-nondegenerate",
    "pairing-product-coproduct",
    "pairing-coproduct-product",
    "pairing-antipode",
    "pairing-units",
)

BRAIDED_PAIRING_AXIOMS = (
    "pairing-nondegenerate",
    "braided-pairing-coproduct-product",
    "pairing-units",
)


def _sweep(name: str, cases: Iterable[tuple], predicate: Callable[..., bool]) -> AxiomCheck:
    """Run ``predicate`` over basis tuples and stop at the first witness."""
    for case in cases:
        if not predicate(*case):
            return AxiomCheck(name=name, passed=False, witness=list(case))
    return AxiomCheck(name=name, passed=True)


def _unit(index: int) -> Vec:
    return {index: ONE}


def _map_left(pair: Vec2, fn: Callable[[int], dict]) -> dict:
    """Apply a linear map to the first leg of a tensor square, keeping the rest."""
    out: dict = {}
    for (i, j), value in pair.items():
        for key, weight in fn(i).items():
            head = key if isinstance(key, tuple) else (key,)
            add_term(out, head + (j,), value * weight)
    return out


def _map_right(pair: Vec2, fn: Callable[[int], dict]) -> dict:
    out: dict = {}
    for (i, j), value in pair.items():
        for key, weight in fn(j).items():
            tail = key if isinstance(key, tuple) else (key,)
            add_term(out, (i,) + tail, value * weight)
    return out


class _Kernels:
    """Shared contractions used by both Hopf suites."""

    def __init__(self, H: "HopfAlgebraData", braiding: SparseTensor | None = None) -> None:
        self.H = H
        self.n = H.dim
        self.braiding = braiding

    def psi(self, i: int, j: int) -> Vec2:
        if self.braiding is None:
            return {(j, i): ONE}
        return self.braiding.fiber(i, j)

    def psi_pair(self, pair: Vec2) -> Vec2:
        out: Vec2 = {}
        for (i, j), value in pair.items():
            axpy(out, value, self.psi(i, j))
        return out

    def psi_12(self, triple: dict) -> dict:
        out: dict = {}
        for (i, j, k), value in triple.items():
            for (a, b), weight in self.psi(i, j).items():
                add_term(out, (a, b, k), value * weight)
        return out

    def psi_23(self, triple: dict) -> dict:
        out: dict = {}
        for (i, j, k), value in triple.items():
            for (b, c), weight in self.psi(j, k).items():
                add_term(out, (i, b, c), value * weight)
        return out

    def unit_laws(self) -> AxiomCheck:
        H = self.H
        return _sweep(
            "unit-law",
            ((i,) for i in range(self.n)),
            lambda i: vec_equal(H.product(H.unit_vec, _unit(i)), _unit(i))
            and vec_equal(H.product(_unit(i), H.unit_vec), _unit(i)),
        )

    def associativity(self) -> AxiomCheck:
        H = self.H
        return _sweep(
            "associativity",
            product(range(self.n), repeat=3),
            lambda i, j, k: vec_equal(
                H.product(H.product(_unit(i), _unit(j)), _unit(k)),
                H.product(_unit(i), H.product(_unit(j), _unit(k))),
            ),
        )

    def coassociativity(self) -> AxiomCheck:
        H = self.H

        def holds(i: int) -> bool:
            delta = H.coproduct(_unit(i))
            left = _map_left(delta, lambda a: H.coproduct(_unit(a)))
            right = _map_right(delta, lambda b: H.coproduct(_unit(b)))
            return vec_equal(left, right)

        return _sweep("coassociativity", ((i,) for i in range(self.n)), holds)

    def counit_laws(self) -> AxiomCheck:
        H = self.H

        def holds(i: int) -> bool:
            delta = H.coproduct(_unit(i))
            left: Vec = {}
            right: Vec = {}
            for (a, b), value in delta.items():
                add_term(left, b, value * H.counit[a])
                add_term(right, a, value * H.counit[b])
            return vec_equal(left, _unit(i)) and vec_equal(right, _unit(i))

        return _sweep("counit-law", ((i,) for i in range(self.n)), holds)

    def unit_coalgebra(self) -> AxiomCheck:
        H = self.H
        unit = H.unit_vec
        ok = vec_equal(H.coproduct(unit), H.tensor(unit, unit)) and H.epsilon(unit) == ONE
        return AxiomCheck(name="unit-coalgebra", passed=ok, detail="" if ok else "Delta(1) != 1(x)1 or eps(1) != 1")

    def bialgebra(self, name: str) -> AxiomCheck:
        H = self.H
        return _sweep(
            name,
            product(range(self.n), repeat=2),
            lambda i, j: vec_equal(
                H.coproduct(H.product(_unit(i), _unit(j))),
                H.tensor_product(H.coproduct(_unit(i)), H.coproduct(_unit(j)), self.braiding),
            ),
        )

    def counit_multiplicative(self) -> AxiomCheck:
        H = self.H
        return _sweep(
            "counit-multiplicative",
            product(range(self.n), repeat=2),
            lambda i, j: H.epsilon(H.product(_unit(i), _unit(j))) == H.counit[i] * H.counit[j],
        )

    def antipode_law(self, name: str) -> AxiomCheck:
        H = self.H

        def holds(i: int) -> bool:
            delta = H.coproduct(_unit(i))
            expected = scaled(H.unit_vec, H.counit[i])
            left: Vec = {}
            right: Vec = {}
            for (a, b), value in delta.items():
                axpy(left, value, H.product(H.apply_antipode(_unit(a)), _unit(b)))
                axpy(right, value, H.product(_unit(a), H.apply_antipode(_unit(b))))
            return vec_equal(left, expected) and vec_equal(right, expected)

        return _sweep(name, ((i,) for i in range(self.n)), holds)

    def antihomomorphism(self, name: str) -> AxiomCheck:
        H = self.H

        def holds(i: int, j: int) -> bool:
            left = H.apply_antipode(H.product(_unit(i), _unit(j)))
            right: Vec = {}
            for (a, b), value in self.psi(i, j).items():
                axpy(right, value, H.product(H.apply_antipode(_unit(a)), H.apply_antipode(_unit(b))))
            return vec_equal(left, right)

        return _sweep(name, product(range(self.n), repeat=2), holds)

    def antipode_invertible(self) -> AxiomCheck:
        H = self.H
        rows = [H.antipode.fiber(i) for i in range(self.n)]
        ok = rank(rows, self.n) == self.n
        return AxiomCheck(name="antipode-invertible", passed=ok, detail="" if ok else "antipode matrix is singular")


class HopfAxiomValidator:
    """Checks every Hopf algebra axiom as an exact identity over basis tuples."""

    def evaluate(self, H: "HopfAlgebraData") -> AxiomReport:
        kernels = _Kernels(H)
        checks = [
            kernels.unit_laws(),
            kernels.associativity(),
            kernels.coassociativity(),
            kernels.counit_laws(),
            kernels.unit_coalgebra(),
            kernels.bialgebra("bialgebra-law"),
            kernels.counit_multiplicative(),
            kernels.antipode_law("antipode-law"),
            kernels.antihomomorphism("antipode-antihomomorphism"),
            kernels.antipode_invertible(),
        ]
        report = AxiomReport(subject=H.name, checks=checks)
        logger.debug("Hopf axioms for %s: %d/%d passed", H.name, len(checks) - len(report.failures), len(checks))
        return report


class BraidedAxiomValidator:
    """Braided Hopf axioms with every transposition replaced by the braiding."""

    def evaluate(self, H: "HopfAlgebraData", braiding: SparseTensor) -> AxiomReport:
        kernels = _Kernels(H, braiding)
        n = H.dim
        checks = [
            kernels.unit_laws(),
            kernels.associativity(),
            kernels.coassociativity(),
            kernels.counit_laws(),
            kernels.unit_coalgebra(),
            self._invertible(kernels),
            self._yang_baxter(kernels),
            self._unit_crossings(kernels),
            self._natural_product(kernels),
            self._natural_coproduct(kernels),
            _sweep(
                "braiding-natural-counit",
                product(range(n), repeat=2),
                lambda i, j: self._counit_crossing(kernels, i, j),
            ),
            _sweep(
                "braiding-natural-antipode",
                product(range(n), repeat=2),
                lambda i, j: self._antipode_crossing(kernels, i, j),
            ),
            kernels.bialgebra("braided-bialgebra"),
            kernels.counit_multiplicative(),
            kernels.antipode_law("braided-antipode-law"),
            kernels.antihomomorphism("braided-antihomomorphism"),
            kernels.antipode_invertible(),
        ]
        report = AxiomReport(subject=H.name, checks=checks)
        logger.debug("Braided axioms for %s: %d/%d passed", H.name, len(checks) - len(report.failures), len(checks))
        return report

    @staticmethod
    def _invertible(kernels: _Kernels) -> AxiomCheck:
        n = kernels.n
        rows = []
        for i, j in product(range(n), repeat=2):
            rows.append({a * n + b: value for (a, b), value in kernels.psi(i, j).items()})
        ok = rank(rows, n * n) == n * n
        return AxiomCheck(name="braiding-invertible", passed=ok, detail="" if ok else "braiding is singular")

    @staticmethod
    def _yang_baxter(kernels: _Kernels) -> AxiomCheck:
        def holds(i: int, j: int, k: int) -> bool:
            start = {(i, j, k): ONE}
            left = kernels.psi_12(kernels.psi_23(kernels.psi_12(start)))
            right = kernels.psi_23(kernels.psi_12(kernels.psi_23(start)))
            return vec_equal(left, right)

        return _sweep("yang-baxter", product(range(kernels.n), repeat=3), holds)

    @staticmethod
    def _unit_crossings(kernels: _Kernels) -> AxiomCheck:
        H = kernels.H
        unit = H.unit_vec

        def holds(i: int) -> bool:
            through_left = kernels.psi_pair(H.tensor(unit, _unit(i)))
            through_right = kernels.psi_pair(H.tensor(_unit(i), unit))
            return vec_equal(through_left, H.tensor(_unit(i), unit)) and vec_equal(
                through_right, H.tensor(unit, _unit(i))
            )

        return _sweep("braiding-unit", ((i,) for i in range(kernels.n)), holds)

    @staticmethod
    def _natural_product(kernels: _Kernels) -> AxiomCheck:
        H = kernels.H

        def multiply_first_two(triple: dict) -> Vec2:
            out: Vec2 = {}
            for (a, b, c), value in triple.items():
                for k, weight in H.mult.fiber(a, b).items():
                    add_term(out, (k, c), value * weight)
            return out

        def multiply_last_two(triple: dict) -> Vec2:
            out: Vec2 = {}
            for (a, b, c), value in triple.items():
                for k, weight in H.mult.fiber(b, c).items():
                    add_term(out, (a, k), value * weight)
            return out

        def holds(i: int, j: int, k: int) -> bool:
            start = {(i, j, k): ONE}
            # Ψ(ab⊗c) = (id⊗m)(Ψ⊗id)(id⊗Ψ)(a⊗b⊗c)
            left = kernels.psi_pair(multiply_first_two(start))
            right = multiply_last_two(kernels.psi_12(kernels.psi_23(start)))
            if not vec_equal(left, right):
                return False
            # Ψ(a⊗bc) = (m⊗id)(id⊗Ψ)(Ψ⊗id)(a⊗b⊗c)
            left = kernels.psi_pair(multiply_last_two(start))
            right = multiply_first_two(kernels.psi_23(kernels.psi_12(start)))
            return vec_equal(left, right)

        return _sweep("braiding-natural-product", product(range(kernels.n), repeat=3), holds)

    @staticmethod
    def _natural_coproduct(kernels: _Kernels) -> AxiomCheck:
        H = kernels.H

        def holds(i: int, j: int) -> bool:
            crossed = kernels.psi(i, j)
            left = _map_left(crossed, lambda a: H.coproduct(_unit(a)))
            right = kernels.psi_23(kernels.psi_12(_map_right({(i, j): ONE}, lambda b: H.coproduct(_unit(b)))))
            if not vec_equal(left, right):
                return False
            left = _map_right(crossed, lambda b: H.coproduct(_unit(b)))
            right = kernels.psi_12(kernels.psi_23(_map_left({(i, j): ONE}, lambda a: H.coproduct(_unit(a)))))
            return vec_equal(left, right)

        return _sweep("braiding-natural-coproduct", product(range(kernels.n), repeat=2), holds)

    @staticmethod
    def _counit_crossing(kernels: _Kernels, i: int, j: int) -> bool:
        H = kernels.H
        first: Vec = {}
        second: Vec = {}
        for (a, b), value in kernels.psi(i, j).items():
            add_term(first, b, value * H.counit[a])
            add_term(second, a, value * H.counit[b])
        return vec_equal(first, scaled(_unit(i), H.counit[j])) and vec_equal(second, scaled(_unit(j), H.counit[i]))

    @staticmethod
    def _antipode_crossing(kernels: _Kernels, i: int, j: int) -> bool:
        H = kernels.H
        crossed = kernels.psi(i, j)
        left = kernels.psi_pair(_map_left({(i, j): ONE}, lambda a: H.apply_antipode(_unit(a))))
        right = _map_right(crossed, lambda b: H.apply_antipode(_unit(b)))
        if not vec_equal(left, right):
            return False
        left = kernels.psi_pair(_map_right({(i, j): ONE}, lambda b: H.apply_antipode(_unit(b))))
        right = _map_left(crossed, lambda a: H.apply_antipode(_unit(a)))
        return vec_equal(left, right)


def _pair(P: Sequence[Sequence[RatFunc]], h: Vec, a: Vec) -> RatFunc:
    total = ZERO
    for i, hi in h.items():
        row = P[i]
        for j, aj in a.items():
            if row[j]:
                total = total + hi * aj * row[j]
    return total


class PairingValidator:
    """Checks that a pairing matrix makes (A, H) a dual pair of Hopf algebras."""

    def evaluate(
        self,
        A: "HopfAlgebraData",
        H: "HopfAlgebraData",
        P: Sequence[Sequence[RatFunc]],
        *,
        braided: bool = False,
    ) -> AxiomReport:
        n = H.dim
        if A.dim != n or len(P) != n or any(len(row) != n for row in P):
            return AxiomReport(
                subject=f"{H.name}|{A.name}",
                checks=[AxiomCheck(name="pairing-nondegenerate", passed=False, detail="dimensions differ")],
            )
        rows = [{j: value for j, value in enumerate(row) if value} for row in P]
        nondegenerate = rank(rows, n) == n
        units = _sweep(
            "pairing-units",
            ((i,) for i in range(n)),
            lambda i: _pair(P, H.unit_vec, _unit(i)) == A.counit[i] and _pair(P, _unit(i), A.unit_vec) == H.counit[i],
        )
        first = AxiomCheck(
            name="pairing-nondegenerate",
            passed=nondegenerate,
            detail="" if nondegenerate else "pairing matrix is singular",
        )
        if braided:
            checks = [
                first,
                _sweep(
                    "braided-pairing-coproduct-product",
                    product(range(n), repeat=3),
                    lambda h, g, a: _pair(P, H.product(_unit(h), _unit(g)), _unit(a))
                    == sum(
                        (value * P[g][x] * P[h][y] for (x, y), value in A.coproduct(_unit(a)).items()),
                        ZERO,
                    ),
                ),
                units,
            ]
            return AxiomReport(subject=f"{H.name}|{A.name}", checks=checks)
        checks = [
            first,
            _sweep(
                "pairing-product-coproduct",
                product(range(n), repeat=3),
                lambda h, a, b: _pair(P, _unit(h), A.product(_unit(a), _unit(b)))
                == sum(
                    (value * P[x][a] * P[y][b] for (x, y), value in H.coproduct(_unit(h)).items()),
                    ZERO,
                ),
            ),
            _sweep(
                "pairing-coproduct-product",
                product(range(n), repeat=3),
                lambda h, g, a: _pair(P, H.product(_unit(h), _unit(g)), _unit(a))
                == sum(
                    (value * P[h][x] * P[g][y] for (x, y), value in A.coproduct(_unit(a)).items()),
                    ZERO,
                ),
            ),
            _sweep(
                "pairing-antipode",
                product(range(n), repeat=2),
                lambda h, a: _pair(P, H.apply_antipode(_unit(h)), _unit(a))
                == _pair(P, _unit(h), A.apply_antipode(_unit(a))),
            ),
            units,
        ]
        return AxiomReport(subject=f"{H.name}|{A.name}", checks=checks)
