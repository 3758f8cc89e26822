"""Sparse vectors and structure-constant tensors with RatFunc entries."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from src.algebra.errors import ShapeMismatch
from src.algebra.scalars import ZERO, RatFunc, Scalar, as_ratfunc

Vec = dict[int, RatFunc]
Vec2 = dict[tuple[int, int], RatFunc]


def axpy(target: dict, coefficient: RatFunc, source: Mapping) -> None:
    """``target += coefficient * source`` in place, dropping cancelled entries."""
    if not coefficient:
        return
    for key, value in source.items():
        updated = target.get(key, ZERO) + coefficient * value
        if updated:
            target[key] = updated
        else:
            target.pop(key, None)


def add_term(target: dict, key, value: RatFunc) -> None:
    if not value:
        return
    updated = target.get(key, ZERO) + value
    if updated:
        target[key] = updated
    else:
        target.pop(key, None)


def scaled(source: Mapping, coefficient: Scalar) -> dict:
    factor = as_ratfunc(coefficient)
    if not factor:
        return {}
    return {key: factor * value for key, value in source.items()}

def dense(vector: Mapping[int, RatFunc], size: int) -> tuple[RatFunc, ...]:
    return tuple(vector.get(i, ZERO) for i in range(size))


def sparse(coords: Iterable[Scalar]) -> Vec:
    return {i: as_ratfunc(value) for i, value in enumerate(coords) if value}

def vec_equal(left: Mapping, right: Mapping) -> bool:
    keys = set(left) | set(right)
    return all(left.get(key, ZERO) == right.get(key, ZERO) for key in keys)

@dataclass(frozen=True)
class SparseTensor:
    """Rank-k tensor storing only nonzero entries.

    ``fiber(head)`` returns the entries whose leading indices equal
    ``head`` as a mapping from the remaining index (or index tuple) to
    the value. Fibers are indexed lazily and cached on the instance.
    """

    shape: tuple[int, ...]
    entries: Mapping[tuple[int, ...], RatFunc] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {}
        for key, value in self.entries.items():
            if len(key) != len(self.shape):
                raise ShapeMismatch(f"index {key} does not match tensor rank {len(self.shape)}")
            if any(not 0 <= k < n for k, n in zip(key, self.shape)):
                raise ShapeMismatch(f"index {key} out of range for shape {self.shape}")
            value = as_ratfunc(value)
            if value:
                cleaned[tuple(key)] = value
        object.__setattr__(self, "entries", cleaned)

    @classmethod
    def from_nested(cls, nested, shape: tuple[int, ...]) -> "SparseTensor":
        entries: dict[tuple[int, ...], RatFunc] = {}

        def walk(node, prefix: tuple[int, ...]) -> None:
            depth = len(prefix)
            if depth == len(shape):
                if node:
                    entries[prefix] = as_ratfunc(node)
                return
            if len(node) != shape[depth]:
                raise ShapeMismatch(f"axis {depth} has length {len(node)}, expected {shape[depth]}")
            for index, child in enumerate(node):
                walk(child, prefix + (index,))

        walk(nested, ())
        return cls(shape, entries)

    def __getitem__(self, key: tuple[int, ...]) -> RatFunc:
        return self.entries.get(tuple(key), ZERO)

    def items(self) -> Iterator[tuple[tuple[int, ...], RatFunc]]:
        return iter(self.entries.items())

    @cached_property
    def _fibers(self) -> dict[int, dict[tuple[int, ...], dict]]:
        return {}

    def fiber(self, *head: int) -> dict:
        depth = len(head)
        index = self._fibers.get(depth)
        if index is None:
            index = {}
            for key, value in self.entries.items():
                tail = key[depth:]
                index.setdefault(key[:depth], {})[tail[0] if len(tail) == 1 else tail] = value
            self._fibers[depth] = index
        return index.get(tuple(head), {})

    def to_nested(self) -> list:
        def build(prefix: tuple[int, ...]):
            depth = len(prefix)
            if depth == len(self.shape):
                return self[prefix]
            return [build(prefix + (i,)) for i in range(self.shape[depth])]

        return build(())
