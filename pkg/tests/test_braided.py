import unittest

from src.algebra.braided import (
    build_braided_hopf,
    build_fermionic_line,
    build_q_fermionic_plane,
    check_braided_axioms,
    check_canonical_element,
    classical_limit_smoke,
    q_binomial,
    q_factorial,
    q_int,
    q_vanishing_sum,
    verify_qplane_closed_forms,
)
from src.algebra.errors import AxiomViolation
from src.algebra.integrals import (
    check_projector_conditions,
    solve_vacuum_projectors,
    vacuum_functional_A,
    vacuum_integral_A,
)
from src.algebra.scalars import ONE, Q, ZERO
from src.algebra.smash import embed
from src.algebra.tensors import SparseTensor


class QArithmeticTests(unittest.TestCase):
    def test_q_integers(self) -> None:
        self.assertEqual(q_int(0), ZERO)
        self.assertEqual(q_int(1), ONE)
        self.assertEqual(q_int(2), ONE + Q * Q)
        self.assertEqual(q_int(3, ONE), 3)
        self.assertEqual(q_int(2, -ONE), 2)

    def test_factorials_and_binomials(self) -> None:
        self.assertEqual(q_factorial(0), ONE)
        self.assertEqual(q_factorial(2), ONE + Q * Q)
        self.assertEqual(q_binomial(2, 1), ONE + Q * Q)
        self.assertEqual(q_binomial(4, 0), ONE)

    def test_vanishing_sum_for_small_orders(self) -> None:
        for order in range(1, 7):
            with self.subTest(order=order):
                self.assertEqual(q_vanishing_sum(order), ZERO)

    def test_vanishing_sum_rejects_order_zero(self) -> None:
        with self.assertRaises(ValueError):
            q_vanishing_sum(0)


class FermionicLineTests(unittest.TestCase):
    def test_axioms_hold_with_the_sign_braiding(self) -> None:
        pair, _ = build_fermionic_line()
        self.assertTrue(check_braided_axioms(pair.A).ok)
        self.assertTrue(check_braided_axioms(pair.H).ok)

    def test_trivial_flip_is_rejected(self) -> None:
        pair, _ = build_fermionic_line()
        flip = SparseTensor((2, 2, 2, 2), {(i, j, j, i): ONE for i in range(2) for j in range(2)})
        with self.assertRaises(AxiomViolation):
            build_braided_hopf(pair.H.base, flip)

    def test_projectors_and_integral(self) -> None:
        _, s = build_fermionic_line()
        proj = solve_vacuum_projectors(s)
        self.assertEqual(proj.E.vec, {(0, 0): 1, (1, 1): -1})
        self.assertEqual(proj.Ebar.vec, {(1, 1): 1})
        self.assertTrue(s.element(s.multiply(proj.Ebar.vec, proj.E.vec)).is_zero())
        self.assertTrue(check_projector_conditions(s, proj).ok)

        xi = embed(s, "A", s.A.basis_element(1))
        sandwich = s.multiply(s.multiply(proj.Ebar.vec, xi.vec), proj.E.vec)
        self.assertEqual(sandwich, {(1, 0): 1})

        functional = vacuum_functional_A(s, proj)
        self.assertEqual(functional.values, (0, 1))
        result = vacuum_integral_A(s, proj, s.A.basis_element(1), functional)
        self.assertEqual(result.value, 1)
        self.assertEqual(result.convention.pivot, "xi")

    def test_classical_limit_smoke(self) -> None:
        pair, _ = build_fermionic_line()
        self.assertTrue(classical_limit_smoke(pair).ok)


class QPlaneTests(unittest.TestCase):
    def test_closed_forms_for_two_generators(self) -> None:
        _, s = build_q_fermionic_plane(2)
        forms = verify_qplane_closed_forms(s, 2)
        self.assertTrue(forms.report.ok)
        self.assertEqual(len(forms.d), 2)
        self.assertEqual(sum(1 for value in forms.integrals if value), 1)
        self.assertTrue(forms.integrals[-1])

    def test_closed_forms_for_three_generators(self) -> None:
        _, s = build_q_fermionic_plane(3)
        forms = verify_qplane_closed_forms(s, 3)
        self.assertTrue(forms.report.ok)
        self.assertEqual(forms.d, (ONE / Q, ONE / Q**3, ONE / Q**5))
        self.assertEqual(forms.integrals[-1], ONE)
        self.assertEqual(sum(1 for value in forms.integrals if value), 1)

    def test_canonical_element_is_a_q_exponential(self) -> None:
        for N in (1, 2):
            with self.subTest(N=N):
                pair, _ = build_q_fermionic_plane(N)
                check_canonical_element(pair, N)

    def test_classical_limit_smoke(self) -> None:
        pair, _ = build_q_fermionic_plane(2)
        report = classical_limit_smoke(pair)
        self.assertTrue(report.ok, [check.name for check in report.failures])


if __name__ == "__main__":
    unittest.main()
