"""Exact linear algebra over Q(q) backed by sympy's ``DomainMatrix``."""

from __future__ import annotations

import logging
from typing import Mapping, Sequence

from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from src.algebra.errors import ShapeMismatch, SingularMatrix
from src.algebra.scalars import FIELD_DOMAIN, ONE, ZERO, RatFunc

logger = logging.getLogger(__name__)

SparseRow = Mapping[int, RatFunc]


def _sparse_matrix(rows: Sequence[SparseRow], ncols: int) -> DomainMatrix:
    dod = {}
    for i, row in enumerate(rows):
        entries = {j: value.to_domain() for j, value in row.items() if value}
        if entries:
            dod[i] = entries
    return DomainMatrix.from_dod(dod, (len(rows), ncols), FIELD_DOMAIN)


def _dense_matrix(matrix: Sequence[Sequence[RatFunc]]) -> DomainMatrix:
    rows = [[RatFunc(value).to_domain() for value in row] for row in matrix]
    ncols = len(rows[0]) if rows else 0
    return DomainMatrix(rows, (len(rows), ncols), FIELD_DOMAIN)

def rref(rows: Sequence[SparseRow], ncols: int) -> tuple[list[dict[int, RatFunc]], tuple[int, ...]]:
    """Reduced row echelon form of a sparse system, keeping only nonzero rows."""
    if not rows or ncols == 0:
        return [], ()
    reduced, pivots = _sparse_matrix(rows, ncols).rref()
    dod = reduced.to_dod()
    result = []
    for i in range(len(pivots)):
        row = dod.get(i, {})
        result.append({j: RatFunc.from_domain(value) for j, value in row.items() if value})
    return result, tuple(pivots)


def rank(rows: Sequence[SparseRow], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[SparseRow], ncols: int) -> list[dict[int, RatFunc]]:
    """Basis of ``{v : row·v = 0 for every row}``, one vector per free column."""
    reduced, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = {free: ONE}
        for row, pivot in zip(reduced, pivots):
            coefficient = row.get(free)
            if coefficient:
                vector[pivot] = -coefficient
        basis.append(vector)
    logger.debug("Nullspace of %d x %d system has dimension %d", len(rows), ncols, len(basis))
    return basis


def solve_unique(rows: Sequence[SparseRow], rhs: Sequence[RatFunc], ncols: int) -> dict[int, RatFunc] | None:
    """Unique solution of ``rows·v = rhs``, or ``None`` if absent or not unique."""
    if len(rows) != len(rhs):
        raise ShapeMismatch(f"{len(rows)} equations but {len(rhs)} right-hand sides")
    augmented = []
    for row, value in zip(rows, rhs):
        extended = dict(row)
        if value:
            extended[ncols] = -value
        augmented.append(extended)
    kernel = nullspace(augmented, ncols + 1)
    candidates = [vector for vector in kernel if vector.get(ncols)]
    if len(kernel) != 1 or not candidates:
        return None
    vector = candidates[0]
    scale = vector[ncols]
    return {j: value / scale for j, value in vector.items() if j != ncols and value}


def inverse(matrix: Sequence[Sequence[RatFunc]]) -> list[list[RatFunc]]:
    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise ShapeMismatch("only square matrices can be inverted")
    if size == 0:
        return []
    try:
        inverted = _dense_matrix(matrix).inv()
    except DMNonInvertibleMatrixError as exc:
        raise SingularMatrix("matrix is not invertible") from exc
    return [[RatFunc.from_domain(value) for value in row] for row in inverted.to_list()]

def identity(size: int) -> list[list[RatFunc]]:
    return [[ONE if i == j else ZERO for j in range(size)] for i in range(size)]

def matmul(left: Sequence[Sequence[RatFunc]], right: Sequence[Sequence[RatFunc]]) -> list[list[RatFunc]]:
    inner = len(right)
    width = len(right[0]) if right else 0
    product = []
    for row in left:
        if len(row) != inner:
            raise ShapeMismatch("matrix shapes do not compose")
        out = [ZERO] * width
        for k, value in enumerate(row):
            if not value:
                continue
            for j, other in enumerate(right[k]):
                if other:
                    out[j] = out[j] + value * other
        product.append(out)
    return product
