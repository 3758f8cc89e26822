"""Exact rational functions in the formal parameter q.

Values are kept in sympy's fraction field ``QQ(q)``, whose elements are
always stored gcd-reduced. ``RatFunc`` wraps those elements so that the
rest of the code base can mix them freely with ``int`` and ``Fraction``.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Union

from sympy import QQ, Symbol

from src.algebra.errors import DivisionByZero, PoleAtPoint

Q_SYMBOL = Symbol("q")
FIELD_DOMAIN = QQ.frac_field(Q_SYMBOL)
_FIELD = FIELD_DOMAIN.field
_RING = _FIELD.ring

Number = Union[int, Fraction]


def _ground(value: Number):
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        return _FIELD.ground_new(QQ(value))
    if isinstance(value, Fraction):
        return _FIELD.ground_new(QQ(value.numerator, value.denominator))
    raise TypeError(f"cannot embed {type(value).__name__} into Q(q)")


def _to_fraction(coefficient) -> Fraction:
    return Fraction(int(coefficient.numerator), int(coefficient.denominator))


def _coefficients(poly) -> list[Fraction]:
    """Dense ascending coefficient list of a univariate ``PolyElement``."""
    if not poly:
        return [Fraction(0)]
    degree = max(monom[0] for monom in poly.keys())
    dense = [Fraction(0)] * (degree + 1)
    for monom, coefficient in poly.items():
        dense[monom[0]] = _to_fraction(coefficient)
    return dense


class RatFunc:
    """A canonical rational function ``n(q)/d(q)`` over the rationals."""

    __slots__ = ("_frac",)

    def __init__(self, value: "RatFunc | Number" = 0) -> None:
        if isinstance(value, RatFunc):
            self._frac = value._frac
        else:
            self._frac = _ground(value)

    @classmethod
    def _wrap(cls, frac) -> "RatFunc":
        obj = cls.__new__(cls)
        obj._frac = frac
        return obj

    @classmethod
    def from_domain(cls, element) -> "RatFunc":
        return cls._wrap(element)

    def to_domain(self):
        return self._frac

    # -- structure ------------------------------------------------------

    @property
    def numerator(self) -> tuple[Fraction, ...]:
        """Ascending coefficients of the numerator, scaled for a monic denominator."""
        lead = self._denominator_lead()
        return tuple(c / lead for c in _coefficients(self._frac.numer))

    @property
    def denominator(self) -> tuple[Fraction, ...]:
        """Ascending coefficients of the monic denominator."""
        lead = self._denominator_lead()
        return tuple(c / lead for c in _coefficients(self._frac.denom))

    def _denominator_lead(self) -> Fraction:
        return _coefficients(self._frac.denom)[-1]

    def is_zero(self) -> bool:
        return not self._frac

    def is_constant(self) -> bool:
        return len(self.numerator) == 1 and len(self.denominator) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} depends on q")
        return self.numerator[0]

    def derivative(self) -> "RatFunc":
        """The q-derivative; zero exactly for constants."""
        return RatFunc._wrap(self._frac.diff(_FIELD.gens[0]))

    # -- arithmetic -----------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunc):
            return other._frac
        if isinstance(other, (int, Fraction)):
            return _ground(other)
        return None

    def __add__(self, other):
        frac = self._coerce(other)
        if frac is None:
            return NotImplemented
        return RatFunc._wrap(self._frac + frac)

    __radd__ = __add__

    def __sub__(self, other):
        frac = self._coerce(other)
        if frac is None:
            return NotImplemented
        return RatFunc._wrap(self._frac - frac)

    def __rsub__(self, other):
        frac = self._coerce(other)
        if frac is None:
            return NotImplemented
        return RatFunc._wrap(frac - self._frac)

    def __mul__(self, other):
        frac = self._coerce(other)
        if frac is None:
            return NotImplemented
        return RatFunc._wrap(self._frac * frac)

    __rmul__ = __mul__

    def __truediv__(self, other):
        frac = self._coerce(other)
        if frac is None:
            return NotImplemented
        if not frac:
            raise DivisionByZero("division by the zero rational function")
        return RatFunc._wrap(self._frac / frac)

    def __rtruediv__(self, other):
        frac = self._coerce(other)
        if frac is None:
            return NotImplemented
        if not self._frac:
            raise DivisionByZero("division by the zero rational function")
        return RatFunc._wrap(frac / self._frac)

    def __neg__(self) -> "RatFunc":
        return RatFunc._wrap(-self._frac)

    def __pos__(self) -> "RatFunc":
        return self

    def __pow__(self, exponent: int) -> "RatFunc":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent >= 0:
            return RatFunc._wrap(self._frac**exponent)
        if not self._frac:
            raise DivisionByZero("negative power of the zero rational function")
        return RatFunc._wrap(_FIELD.one / self._frac ** (-exponent))

    def inverse(self) -> "RatFunc":
        return self**-1

    # -- comparison -----------------------------------------------------

    def __eq__(self, other) -> bool:
        frac = self._coerce(other)
        if frac is None:
            return NotImplemented
        return self._frac == frac

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.numerator[0])
        return hash(self._frac)

    def __bool__(self) -> bool:
        return bool(self._frac)

    # -- rendering ------------------------------------------------------

    def __repr__(self) -> str:
        return f"RatFunc({str(self)!r})"

    def __str__(self) -> str:
        return format_ratfunc(self)


ZERO = RatFunc(0)
ONE = RatFunc(1)
Q = RatFunc._wrap(_FIELD.gens[0])

Scalar = Union[RatFunc, int, Fraction]


def as_ratfunc(value: Scalar) -> RatFunc:
    return value if isinstance(value, RatFunc) else RatFunc(value)


def _poly_from_coefficients(coefficients: Iterable[Number]):
    terms = {}
    for power, coefficient in enumerate(coefficients):
        value = Fraction(coefficient)
        if value:
            terms[(power,)] = QQ(value.numerator, value.denominator)
    return _RING.from_dict(terms) if terms else _RING.zero


def rf_normalize(numerator: Sequence[Number], denominator: Sequence[Number]) -> RatFunc:
    """Canonical form of ``n/d`` from ascending coefficient sequences."""
    numer = _poly_from_coefficients(numerator)
    denom = _poly_from_coefficients(denominator)
    if not denom:
        raise DivisionByZero("zero denominator polynomial")
    return RatFunc._wrap(_FIELD.new(numer, denom))


class ArithOp(str, Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    NEG = "neg"
    INV = "inv"


def rf_arith(op: ArithOp | str, x: Scalar, y: Scalar | None = None) -> RatFunc:
    op = ArithOp(op)
    left = as_ratfunc(x)
    if op is ArithOp.NEG:
        return -left
    if op is ArithOp.INV:
        return left.inverse()
    if y is None:
        raise ValueError(f"operation '{op.value}' needs two operands")
    right = as_ratfunc(y)
    if op is ArithOp.ADD:
        return left + right
    if op is ArithOp.SUB:
        return left - right
    if op is ArithOp.MUL:
        return left * right
    return left / right


def _horner(coefficients: Sequence[Fraction], point: Fraction) -> Fraction:
    total = Fraction(0)
    for coefficient in reversed(coefficients):
        total = total * point + coefficient
    return total


def rf_eval(x: Scalar, q0: Number) -> Fraction:
    value = as_ratfunc(x)
    point = Fraction(q0)
    denominator = _horner(value.denominator, point)
    if denominator == 0:
        raise PoleAtPoint(f"{value} has a pole at q = {point}", witness=(str(point),))
    return _horner(value.numerator, point) / denominator


def _format_polynomial(coefficients: Sequence[Fraction]) -> tuple[str, int]:
    """Render ascending coefficients; also returns the number of terms."""
    pieces: list[tuple[bool, str]] = []
    for power, coefficient in enumerate(coefficients):
        if coefficient == 0:
            continue
        negative = coefficient < 0
        magnitude = -coefficient if negative else coefficient
        if power == 0:
            body = str(magnitude)
        else:
            monomial = "q" if power == 1 else f"q^{power}"
            body = monomial if magnitude == 1 else f"{magnitude}*{monomial}"
        pieces.append((negative, body))
    if not pieces:
        return "0", 1
    first_negative, first_body = pieces[0]
    text = f"-{first_body}" if first_negative else first_body
    for negative, body in pieces[1:]:
        text += f" - {body}" if negative else f" + {body}"
    return text, len(pieces)


def format_ratfunc(x: Scalar) -> str:
    """Reduced fraction of expanded polynomials, e.g. ``(1 - q^2)/(1 + q^2)``."""
    value = as_ratfunc(x)
    numerator, numerator_terms = _format_polynomial(value.numerator)
    denominator_coefficients = value.denominator
    if len(denominator_coefficients) == 1:
        return numerator
    denominator, denominator_terms = _format_polynomial(denominator_coefficients)
    if numerator_terms > 1 or "/" in numerator:
        numerator = f"({numerator})"
    if denominator_terms > 1:
        denominator = f"({denominator})"
    return f"{numerator}/{denominator}"
