import unittest
from fractions import Fraction

from src.algebra.errors import DivisionByZero, PoleAtPoint, SingularMatrix
from src.algebra.linalg import identity, inverse, matmul, nullspace, rank, solve_unique
from src.algebra.scalars import ONE, Q, ZERO, ArithOp, RatFunc, format_ratfunc, rf_arith, rf_eval, rf_normalize
from src.presentation.expressions import parse_scalar


class RationalFunctionTests(unittest.TestCase):
    def test_normalize_cancels_common_factors(self) -> None:
        self.assertEqual(rf_normalize([1, 0, 0, 0, -1], [1, 0, -1]), ONE + Q * Q)
        self.assertEqual(rf_normalize([0, 3], [3]), Q)

    def test_normalize_zero_is_canonical(self) -> None:
        zero = rf_normalize([0], [0, 7])
        self.assertEqual(zero, ZERO)
        self.assertFalse(zero)
        self.assertEqual(zero.denominator, (Fraction(1),))

    def test_normalize_rejects_zero_denominator(self) -> None:
        with self.assertRaises(DivisionByZero):
            rf_normalize([1], [0])

    def test_arithmetic_examples(self) -> None:
        self.assertEqual(rf_arith(ArithOp.MUL, ONE / (ONE - Q * Q), ONE - Q * Q), ONE)
        self.assertEqual(rf_arith("add", Q, -Q), ZERO)
        self.assertEqual(rf_arith("div", ONE - Q**4, ONE - Q * Q), ONE + Q * Q)
        self.assertEqual(rf_arith("neg", Q), -Q)

    def test_division_by_zero_raises(self) -> None:
        with self.assertRaises(DivisionByZero):
            rf_arith("div", Q, ZERO)

    def test_evaluation_reduces_before_substituting(self) -> None:
        self.assertEqual(rf_eval(ONE + Q * Q, 1), 2)
        self.assertEqual(rf_eval((ONE - Q**4) / (ONE - Q * Q), -1), 2)

    def test_evaluation_at_pole_raises(self) -> None:
        with self.assertRaises(PoleAtPoint):
            rf_eval(ONE / (ONE - Q), 1)

    def test_constants_and_derivative(self) -> None:
        self.assertTrue(RatFunc(Fraction(3, 4)).is_constant())
        self.assertFalse((Q / (ONE + Q)).is_constant())
        self.assertFalse(RatFunc(5).derivative())
        self.assertEqual((Q * Q).derivative(), 2 * Q)

    def test_format_round_trips_through_scalar_parser(self) -> None:
        samples = [ONE - Q * Q, (ONE - Q * Q) / (ONE + Q * Q), ONE / Q, RatFunc(Fraction(1, 2)), -Q**3, ZERO]
        for value in samples:
            with self.subTest(value=format_ratfunc(value)):
                self.assertEqual(parse_scalar(format_ratfunc(value)), value)

    def test_format_renders_ascending_terms(self) -> None:
        self.assertEqual(format_ratfunc(ONE - Q * Q), "1 - q^2")
        self.assertEqual(format_ratfunc((ONE - Q * Q) / (ONE + Q * Q)), "(1 - q^2)/(1 + q^2)")
        self.assertEqual(format_ratfunc(ONE / Q), "1/q")
        self.assertEqual(format_ratfunc(RatFunc(Fraction(1, 2))), "1/2")


def _samples() -> list[RatFunc]:
    return [ONE - Q * Q, (ONE + Q) / (2 - Q), Q**3 / (ONE + Q * Q), RatFunc(Fraction(-3, 7)), ONE / Q]


def _poly_mul(left: list[int], right: list[int]) -> list[int]:
    out = [0] * (len(left) + len(right) - 1)
    for i, x in enumerate(left):
        for j, y in enumerate(right):
            out[i + j] += x * y
    return out


class FieldLawTests(unittest.TestCase):
    def test_ring_laws_over_samples(self) -> None:
        samples = _samples()
        for a in samples:
            for b in samples:
                with self.subTest(a=format_ratfunc(a), b=format_ratfunc(b)):
                    self.assertEqual(a + b, b + a)
                    self.assertEqual(a * b, b * a)
                    for c in samples[:3]:
                        self.assertEqual((a + b) + c, a + (b + c))
                        self.assertEqual((a * b) * c, a * (b * c))
                        self.assertEqual(a * (b + c), a * b + a * c)

    def test_identities_and_inverses(self) -> None:
        for a in _samples():
            with self.subTest(a=format_ratfunc(a)):
                self.assertEqual(a + ZERO, a)
                self.assertEqual(a * ONE, a)
                self.assertEqual(a + (-a), ZERO)
                self.assertEqual(a * a.inverse(), ONE)
                self.assertEqual(a / a, ONE)

    def test_evaluation_is_a_homomorphism(self) -> None:
        samples = _samples()
        for point in (3, Fraction(1, 3), Fraction(-5, 2)):
            for a in samples:
                for b in samples:
                    with self.subTest(point=point, a=format_ratfunc(a), b=format_ratfunc(b)):
                        self.assertEqual(rf_eval(a + b, point), rf_eval(a, point) + rf_eval(b, point))
                        self.assertEqual(rf_eval(a * b, point), rf_eval(a, point) * rf_eval(b, point))
                        self.assertEqual(rf_eval(a / b, point), rf_eval(a, point) / rf_eval(b, point))

    def test_normalize_ignores_common_factors(self) -> None:
        pairs = (([1, 2], [3, 0, 1]), ([0, 0, 5], [1, -1]), ([7], [2]))
        factors = ([1, 1], [-2, 0, 3], [0, 1], [4])
        for numerator, denominator in pairs:
            reduced = rf_normalize(numerator, denominator)
            for factor in factors:
                with self.subTest(numerator=numerator, denominator=denominator, factor=factor):
                    scaled = rf_normalize(_poly_mul(numerator, factor), _poly_mul(denominator, factor))
                    self.assertEqual(scaled, reduced)
                    self.assertEqual(scaled.numerator, reduced.numerator)
                    self.assertEqual(scaled.denominator, reduced.denominator)


class LinearAlgebraTests(unittest.TestCase):
    def test_rank_and_nullspace(self) -> None:
        rows = [{0: ONE, 1: ONE}, {0: Q, 1: Q}]
        self.assertEqual(rank(rows, 2), 1)
        kernel = nullspace(rows, 2)
        self.assertEqual(len(kernel), 1)
        self.assertEqual(kernel[0], {1: ONE, 0: -ONE})

    def test_solve_unique_returns_none_when_underdetermined(self) -> None:
        self.assertIsNone(solve_unique([{0: ONE, 1: ONE}], [ONE], 2))
        self.assertEqual(solve_unique([{0: ONE, 1: ONE}, {1: Q}], [ONE, Q], 2), {1: ONE})

    def test_inverse_over_rational_functions(self) -> None:
        matrix = [[ONE, Q], [ZERO, ONE + Q]]
        self.assertEqual(matmul(matrix, inverse(matrix)), identity(2))

    def test_singular_matrix_raises(self) -> None:
        with self.assertRaises(SingularMatrix):
            inverse([[ONE, Q], [ONE, Q]])


if __name__ == "__main__":
    unittest.main()
