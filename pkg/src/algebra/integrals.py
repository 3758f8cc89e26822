"""Integrals on finite-dimensional pairs.

Two routes are implemented. The algebraic route goes through the modified
trace ``T(a) = sum_n f^n <e_n S^2(e_i), f^i a>``, whose image is spanned by
the right delta function. The vacuum route solves for the projectors E and
Ē inside the smash product and reads the integral off ``Ē a E``. Both use
the same normalization: the delta function has last nonzero coordinate 1
and integrates to 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from typing import Literal, Sequence

from src.algebra.duality import DualPair
from src.algebra.errors import (
    AllZeroTheta,
    ConsistencyFailure,
    DegenerateImage,
    DegenerateSolutionSpace,
    NilpotentCandidate,
    ProportionalityFailure,
)
from src.algebra.hopf import Element, HopfAlgebraData
from src.algebra.linalg import nullspace, rank, solve_unique
from src.algebra.scalars import ONE, ZERO, RatFunc
from src.algebra.smash import SmashAlgebra, SmashElement, vacuum_action
from src.algebra.tensors import Vec, Vec2, add_term, axpy, scaled, vec_equal
from src.models.schemas import AxiomCheck, AxiomReport
from src.utils.logging import log_phase

logger = logging.getLogger(__name__)

Factor = Literal["A", "H"]
Handedness = Literal["right", "left"]


@dataclass(frozen=True)
class ProjectorPair:
    E: SmashElement
    Ebar: SmashElement


@dataclass(frozen=True)
class NormalizationConvention:
    kind: str = "delta-last-coordinate"
    pivot: str | None = None


@dataclass(frozen=True)
class IntegralResult:
    value: RatFunc
    delta: Element | None
    realization: SmashElement | None
    convention: NormalizationConvention


@dataclass(frozen=True)
class VacuumFunctional:
    """All basis integrals of one side read off a common realization."""

    values: tuple[RatFunc, ...]
    realizations: tuple[Vec2, ...]
    delta: Element | None
    convention: NormalizationConvention


def _last_key(vector: dict):
    return max(key for key, value in vector.items() if value)


# -- algebraic route ---------------------------------------------------------


def _trace_A(p: DualPair, u: Vec) -> RatFunc:
    total = ZERO
    for i, f in enumerate(p.dual_vectors):
        total = total + p.pair(p.H.apply_antipode({i: ONE}, 2), p.A.product(f, u))
    return total


def _trace_H(p: DualPair, z: Vec) -> RatFunc:
    """Divided by dim H so that e_0 traces to 1 on Z_n; see the H-side trace decision in DESIGN.md."""
    total = ZERO
    for i, f in enumerate(p.dual_vectors):
        total = total + p.pair(p.H.product({i: ONE}, z), p.A.apply_antipode(f, 2))
    return total / p.H.dim


def trace_integral(p: DualPair, side: Factor, u: Element) -> RatFunc:
    if side == "A":
        p.A.require(u)
        return _trace_A(p, u.vec)
    if side == "H":
        p.H.require(u)
        return _trace_H(p, u.vec)
    raise ValueError(f"unknown side {side!r}")


def _modified_trace_vec(p: DualPair, a: Vec) -> Vec:
    H = p.H
    twisted = [H.apply_antipode({i: ONE}, 2) for i in range(H.dim)]
    shifted = [p.A.product(f, a) for f in p.dual_vectors]
    out: Vec = {}
    for n in range(H.dim):
        weight = ZERO
        for i in range(H.dim):
            if shifted[i]:
                weight = weight + p.pair(H.product({n: ONE}, twisted[i]), shifted[i])
        axpy(out, weight, p.dual_vectors[n])
    return out


def modified_trace(p: DualPair, a: Element) -> Element:
    p.A.require(a)
    return p.A.element(_modified_trace_vec(p, a.vec))


def _delta_vec(p: DualPair) -> Vec:
    images = [_modified_trace_vec(p, {k: ONE}) for k in range(p.A.dim)]
    dim = rank(images, p.A.dim)
    if dim != 1:
        raise DegenerateImage(dim)
    spanning = next(image for image in images if image)
    return scaled(spanning, ONE / spanning[_last_key(spanning)])


def normalize_delta(p: DualPair) -> Element:
    delta = _delta_vec(p)
    logger.debug("Right delta function of %s has %d terms", p.A.name, len(delta))
    return p.A.element(delta)


def _right_values(p: DualPair) -> tuple[list[RatFunc], Vec]:
    delta = _delta_vec(p)
    pivot = _last_key(delta)
    values = []
    for k in range(p.A.dim):
        image = _modified_trace_vec(p, {k: ONE})
        value = image.get(pivot, ZERO)
        if not vec_equal(image, scaled(delta, value)):
            raise DegenerateImage(2)
        values.append(value)
    return values, delta


def integral_values(p: DualPair, side: Handedness = "right") -> list[RatFunc]:
    """Integrals of every basis element of ``A``; the left one is I composed with S^-1."""
    right, _ = _right_values(p)
    if side == "right":
        return right
    return [_apply(right, p.A.apply_antipode({k: ONE}, -1)) for k in range(p.A.dim)]


def _apply(values: Sequence[RatFunc], vector: Vec) -> RatFunc:
    total = ZERO
    for k, coefficient in vector.items():
        total = total + coefficient * values[k]
    return total


def invariant_integral(p: DualPair, a: Element, side: Handedness = "right") -> IntegralResult:
    p.A.require(a)
    right, delta = _right_values(p)
    vector = a.vec if side == "right" else p.A.apply_antipode(a.vec, -1)
    convention = NormalizationConvention(pivot=p.A.labels[_last_key(delta)])
    return IntegralResult(value=_apply(right, vector), delta=p.A.element(delta), realization=None, convention=convention)


def theta_matrix(p: DualPair) -> list[list[RatFunc]]:
    H, A = p.H, p.A
    twisted = [H.apply_antipode({k: ONE}, 2) for k in range(H.dim)]
    theta = []
    for i in range(H.dim):
        row = []
        for l in range(A.dim):
            total = ZERO
            for k in range(H.dim):
                total = total + p.pair(H.product({i: ONE}, twisted[k]), A.product(p.dual_vectors[k], p.dual_vectors[l]))
            row.append(total)
        theta.append(row)
    if not any(any(row) for row in theta):
        raise AllZeroTheta(f"theta matrix of {A.name} x {H.name} vanishes identically")
    return theta


def right_invariance_defects(A: HopfAlgebraData, values: Sequence[RatFunc]) -> list[str]:
    """Basis elements where sum I(a_(1)) a_(2) differs from I(a) 1."""
    failures = []
    for k in range(A.dim):
        lhs: Vec = {}
        for (j, l), coefficient in A.comult.fiber(k).items():
            add_term(lhs, l, coefficient * values[j])
        if not vec_equal(lhs, scaled(A.unit_vec, values[k])):
            failures.append(A.labels[k])
    return failures


def left_invariance_defects(A: HopfAlgebraData, values: Sequence[RatFunc]) -> list[str]:
    failures = []
    for k in range(A.dim):
        lhs: Vec = {}
        for (j, l), coefficient in A.comult.fiber(k).items():
            add_term(lhs, j, coefficient * values[l])
        if not vec_equal(lhs, scaled(A.unit_vec, values[k])):
            failures.append(A.labels[k])
    return failures


def derivative_annihilation_defects(target: DualPair | SmashAlgebra, values: Sequence[RatFunc]) -> list[str]:
    """Pairs ``x|a`` where I(x ▷ a) differs from ε(x) I(a)."""
    A, H = target.A, target.H
    failures = []
    for x, a in product(range(H.dim), range(A.dim)):
        if isinstance(target, DualPair):
            moved = target.act_left_vec({x: ONE}, {a: ONE})
        else:
            moved = vacuum_action(target, H.basis_element(x), A.basis_element(a)).vec
        if _apply(values, moved) != H.counit[x] * values[a]:
            failures.append(f"{H.labels[x]}|{A.labels[a]}")
    return failures


def trace_proportionality(p: DualPair) -> RatFunc | None:
    """The constant c with trace_integral(a) = c I(a), or None."""
    values = integral_values(p)
    traces = [_trace_A(p, {k: ONE}) for k in range(p.A.dim)]
    pivot = next((k for k, value in enumerate(values) if value), None)
    if pivot is None:
        return None
    c = traces[pivot] / values[pivot]
    if any(trace != c * value for trace, value in zip(traces, values)):
        return None
    return c


# -- vacuum projectors -------------------------------------------------------


def _generators(algebra: HopfAlgebraData) -> list[int]:
    picked = [index for index, label in enumerate(algebra.labels) if label != "1" and "*" not in label]
    return picked or list(range(algebra.dim))


def _absorption_rows(s: SmashAlgebra, mirrored: bool) -> list[dict[int, RatFunc]]:
    """Rows of the linear conditions fixing E (or Ē when mirrored)."""
    A, H = s.A, s.H
    cells = list(product(range(A.dim), range(H.dim)))
    index = {cell: n for n, cell in enumerate(cells)}
    rows: dict[tuple, dict[int, RatFunc]] = {}
    movers = [("H", x, s.mixed(A.unit_vec, {x: ONE}), H.counit[x]) for x in _generators(H)]
    movers += [("A", a, s.mixed({a: ONE}, H.unit_vec), A.counit[a]) for a in _generators(A)]
    for factor, label, mover, weight in movers:
        mover_on_left = (factor == "H") != mirrored
        for cell in cells:
            unknown = {cell: ONE}
            moved = s.multiply(mover, unknown) if mover_on_left else s.multiply(unknown, mover)
            axpy(moved, -weight, unknown)
            for out_cell, value in moved.items():
                add_term(rows.setdefault((factor, label, out_cell), {}), index[cell], value)
    return [row for row in rows.values() if row]


def _solve_projector(s: SmashAlgebra, mirrored: bool) -> Vec2:
    what = "Ebar" if mirrored else "E"
    cells = list(product(range(s.A.dim), range(s.H.dim)))
    kernel = nullspace(_absorption_rows(s, mirrored), len(cells))
    if len(kernel) != 1:
        raise DegenerateSolutionSpace(len(kernel), what=what)
    candidate = {cells[n]: value for n, value in kernel[0].items()}
    square = s.multiply(candidate, candidate)
    pivot = _last_key(candidate)
    scale = square.get(pivot, ZERO) / candidate[pivot]
    if not scale:
        raise NilpotentCandidate(f"{what} squares to zero in {s.name}")
    if not vec_equal(square, scaled(candidate, scale)):
        raise DegenerateSolutionSpace(2, what=what)
    return scaled(candidate, ONE / scale)


def closed_form_projectors(s: SmashAlgebra, p: DualPair) -> ProjectorPair:
    """E = S^{-1}(f^i) e_i and Ē = S^2(e_i) f^i, normal-ordered."""
    E: Vec2 = {}
    Ebar: Vec2 = {}
    for i, f in enumerate(p.dual_vectors):
        axpy(E, ONE, s.mixed(p.A.apply_antipode(f, -1), {i: ONE}))
        twisted = s.mixed(p.A.unit_vec, p.H.apply_antipode({i: ONE}, 2))
        axpy(Ebar, ONE, s.multiply(twisted, s.mixed(f, p.H.unit_vec)))
    return ProjectorPair(E=s.element(E), Ebar=s.element(Ebar))


def solve_vacuum_projectors(s: SmashAlgebra) -> ProjectorPair:
    with log_phase(logger, f"projector solve on {s.name}", dim=s.dim):
        proj = ProjectorPair(E=s.element(_solve_projector(s, False)), Ebar=s.element(_solve_projector(s, True)))
    if s.pair is not None and not s.pair.braided:
        closed = closed_form_projectors(s, s.pair)
        if closed != proj:
            raise ConsistencyFailure("projector-closed-form", f"solved and closed-form projectors of {s.name} differ")
    logger.info("Solved vacuum projectors of %s", s.name)
    return proj


def check_projector_conditions(s: SmashAlgebra, proj: ProjectorPair) -> AxiomReport:
    s.require(proj.E, proj.Ebar)
    E, Ebar = proj.E.vec, proj.Ebar.vec
    checks = []

    def absorb(name: str, target: Vec2, factor: Factor, on_left: bool) -> AxiomCheck:
        algebra = s.H if factor == "H" else s.A
        for k in range(algebra.dim):
            mover = s.mixed(s.A.unit_vec, {k: ONE}) if factor == "H" else s.mixed({k: ONE}, s.H.unit_vec)
            moved = s.multiply(mover, target) if on_left else s.multiply(target, mover)
            if not vec_equal(moved, scaled(target, algebra.counit[k])):
                return AxiomCheck(name=name, passed=False, witness=[algebra.labels[k]])
        return AxiomCheck(name=name, passed=True)

    checks.append(absorb("E-absorbs-H", E, "H", True))
    checks.append(absorb("E-absorbs-A", E, "A", False))
    checks.append(absorb("Ebar-absorbs-A", Ebar, "A", True))
    checks.append(absorb("Ebar-absorbs-H", Ebar, "H", False))
    for name, target in (("E-idempotent", E), ("Ebar-idempotent", Ebar)):
        checks.append(AxiomCheck(name=name, passed=bool(target) and vec_equal(s.multiply(target, target), target)))
    return AxiomReport(subject=s.name, checks=checks)


def _line(vectors: Sequence[Vec2]) -> tuple[Vec2, list[RatFunc]]:
    """Common direction K of the vectors and their coefficients against K."""
    base = next((vector for vector in vectors if vector), None)
    if base is None:
        raise DegenerateSolutionSpace(0, what="vacuum realization")
    pivot = _last_key(base)
    coefficients = []
    for vector in vectors:
        c = vector.get(pivot, ZERO) / base[pivot]
        if not vec_equal(vector, scaled(base, c)):
            cells = sorted({key for v in vectors for key in v})
            position = {key: n for n, key in enumerate(cells)}
            rows = [{position[key]: value for key, value in v.items()} for v in vectors]
            raise DegenerateSolutionSpace(rank(rows, len(cells)), what="vacuum realization")
        coefficients.append(c)
    return base, coefficients


def vacuum_functional_A(s: SmashAlgebra, proj: ProjectorPair) -> VacuumFunctional:
    A, H = s.A, s.H
    E, Ebar = proj.E.vec, proj.Ebar.vec
    realizations = [s.multiply(s.multiply(Ebar, s.mixed({k: ONE}, H.unit_vec)), E) for k in range(A.dim)]
    base, ratios = _line(realizations)
    cells = list(product(range(A.dim), range(H.dim)))
    columns = [s.multiply(s.mixed({d: ONE}, H.unit_vec), E) for d in range(A.dim)]
    rows = [{d: column[cell] for d, column in enumerate(columns) if cell in column} for cell in cells]
    solution = solve_unique(rows, [base.get(cell, ZERO) for cell in cells], A.dim)
    if solution:
        pivot = _last_key(solution)
        c0 = solution[pivot]
        delta: Element | None = A.element(scaled(solution, ONE / c0))
        values = tuple(ratio * c0 for ratio in ratios)
        convention = NormalizationConvention(pivot=A.labels[pivot])
    else:
        pivot_cell = _last_key(base)
        delta = None
        values = tuple(ratios)
        convention = NormalizationConvention(kind="realization-last-coordinate", pivot=s.cell_label(*pivot_cell))
    return VacuumFunctional(values=values, realizations=tuple(realizations), delta=delta, convention=convention)


def vacuum_integral_A(
    s: SmashAlgebra,
    proj: ProjectorPair,
    a: Element,
    functional: VacuumFunctional | None = None,
) -> IntegralResult:
    s.A.require(a)
    functional = functional or vacuum_functional_A(s, proj)
    value = _apply(functional.values, a.vec)
    realization: Vec2 = {}
    for k, coefficient in a.vec.items():
        axpy(realization, coefficient, functional.realizations[k])
    return IntegralResult(
        value=value,
        delta=functional.delta,
        realization=s.element(realization),
        convention=functional.convention,
    )


def vacuum_functional_H(s: SmashAlgebra, proj: ProjectorPair, delta: Element | None = None) -> VacuumFunctional:
    """Left integral on H from E z Ē, checked against <z, δ>."""
    A, H = s.A, s.H
    E, Ebar = proj.E.vec, proj.Ebar.vec
    realizations = [s.multiply(s.multiply(E, s.mixed(A.unit_vec, {k: ONE})), Ebar) for k in range(H.dim)]
    base, ratios = _line(realizations)
    pivot_cell = _last_key(base)
    values = tuple(ratio * base[pivot_cell] for ratio in ratios)
    if delta is None and s.pair is not None:
        if s.pair.braided:
            delta = vacuum_functional_A(s, proj).delta
        else:
            delta = normalize_delta(s.pair)
    if delta is not None and s.pair is not None:
        expected = [s.pair.pair({k: ONE}, delta.vec) for k in range(H.dim)]
        anchor = next((k for k, value in enumerate(expected) if value), None)
        if anchor is None:
            raise ProportionalityFailure("the delta function pairs to zero with every point")
        c = values[anchor] / expected[anchor]
        if any(value != c * target for value, target in zip(values, expected)):
            raise ProportionalityFailure(
                f"E z Ē on {H.name} is not proportional to <z, delta>",
                witness=tuple(H.labels[k] for k in range(H.dim) if values[k] != c * expected[k]),
            )
    convention = NormalizationConvention(kind="realization-last-coordinate", pivot=s.cell_label(*pivot_cell))
    return VacuumFunctional(values=values, realizations=tuple(realizations), delta=delta, convention=convention)


def vacuum_integral_H(
    s: SmashAlgebra,
    proj: ProjectorPair,
    z: Element,
    functional: VacuumFunctional | None = None,
) -> IntegralResult:
    s.H.require(z)
    functional = functional or vacuum_functional_H(s, proj)
    realization: Vec2 = {}
    for k, coefficient in z.vec.items():
        axpy(realization, coefficient, functional.realizations[k])
    return IntegralResult(
        value=_apply(functional.values, z.vec),
        delta=functional.delta,
        realization=s.element(realization),
        convention=functional.convention,
    )
