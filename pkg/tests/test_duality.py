import unittest
from itertools import product

from src.algebra.duality import (
    act_left,
    act_right,
    build_pair,
    canonical_element,
    double_dual,
    dualize,
    pair_eval,
    same_structure,
    validate_pair,
)
from src.algebra.errors import AxiomViolation
from src.algebra.hopf import antipode_elem, mul_elem
from src.algebra.scalars import ONE
from src.algebra.tensors import axpy
from src.presentation.builtins import builtin
from src.presentation.compiler import compile_presentation


def _compiled(name: str, **params):
    return compile_presentation(builtin(name, params))


def _dqs_pair():
    return dualize(_compiled("dqs").algebra)


class DualizeTests(unittest.TestCase):
    def test_dual_of_dqs_has_the_expected_relations(self) -> None:
        p = _dqs_pair()
        A = p.A
        self.assertEqual(A.labels, ("1", "a", "b", "a*b"))
        a, b = A.basis_element(1), A.basis_element(2)
        self.assertTrue(mul_elem(A, a, a).is_zero())
        self.assertEqual(mul_elem(A, b, b).coords, (0, 0, -2, 0))
        self.assertEqual(mul_elem(A, b, a).coords, (0, -2, 0, -1))
        self.assertEqual(antipode_elem(A, a).coords, (0, 1, 0, 1))

    def test_dual_of_dqs_matches_the_shipped_dual(self) -> None:
        shipped = _compiled("dqs-dual").algebra
        self.assertTrue(same_structure(_dqs_pair().A, shipped))

    def test_dual_of_group_algebra_is_functions(self) -> None:
        for n in (2, 3, 4):
            with self.subTest(n=n):
                p = dualize(_compiled("cyclic-group", n=n).algebra)
                A = p.A
                self.assertEqual(A.labels, tuple(f"f{i}" for i in range(n)))
                self.assertEqual(A.unit, tuple(ONE for _ in range(n)))
                for i in range(n):
                    for j in range(n):
                        product = mul_elem(A, A.basis_element(i), A.basis_element(j))
                        expected = A.basis_element(i) if i == j else A.element({})
                        self.assertEqual(product, expected)

    def test_double_dual_reproduces_tensors(self) -> None:
        for name, params in (("dqs", {}), ("dqs-dual", {}), ("cyclic-group", {"n": 3})):
            with self.subTest(name=name):
                H = _compiled(name, **params).algebra
                self.assertTrue(same_structure(H, double_dual(H)))


class PairingTests(unittest.TestCase):
    def test_dqs_pairing_values(self) -> None:
        p = _dqs_pair()
        x, a = p.H.basis_element(1), p.A.basis_element(1)
        self.assertEqual(pair_eval(p, x, a), 1)
        self.assertEqual(pair_eval(p, x, p.A.unit_element()), 0)
        self.assertEqual(pair_eval(p, antipode_elem(p.H, x), a), 1)
        self.assertEqual(pair_eval(p, x, antipode_elem(p.A, a)), 1)

    def test_actions_on_dqs(self) -> None:
        p = _dqs_pair()
        x, y = p.H.basis_element(1), p.H.basis_element(2)
        a, b = p.A.basis_element(1), p.A.basis_element(2)
        self.assertEqual(act_left(p, x, a).coords, (1, 0, 1, 0))
        self.assertEqual(act_left(p, p.H.unit_element(), a), a)
        self.assertEqual(act_right(p, x, p.A.unit_element()), x)
        self.assertEqual(act_right(p, x, a).coords, (1, 0, 0, 0))
        self.assertEqual(act_right(p, y, b).coords, (1, 0, -2, 0))

    def test_validate_pair_reports_all_invariants(self) -> None:
        p = _dqs_pair()
        report = validate_pair(p.A, p.H, p.pairing)
        self.assertTrue(report.ok)
        self.assertGreaterEqual(len(report.checks), 5)

    def test_build_pair_rejects_a_scaled_pairing(self) -> None:
        p = _dqs_pair()
        scaled = [[2 * value for value in row] for row in p.pairing]
        with self.assertRaises(AxiomViolation):
            build_pair(p.A, p.H, scaled)

    def test_canonical_element_is_the_inverse_pairing(self) -> None:
        p = _dqs_pair()
        C = canonical_element(p)
        self.assertEqual(C, [[ONE if i == j else 0 for j in range(4)] for i in range(4)])


class ActionLawTests(unittest.TestCase):
    def _pairs(self):
        return (("dqs", _dqs_pair()), ("cyclic-group-3", dualize(_compiled("cyclic-group", n=3).algebra)))

    def test_left_action_composes(self) -> None:
        for name, p in self._pairs():
            H, A = p.H, p.A
            for x, y, a in product(range(H.dim), range(H.dim), range(A.dim)):
                with self.subTest(pair=name, x=H.labels[x], y=H.labels[y], a=A.labels[a]):
                    xe, ye, ae = H.basis_element(x), H.basis_element(y), A.basis_element(a)
                    self.assertEqual(act_left(p, mul_elem(H, xe, ye), ae), act_left(p, xe, act_left(p, ye, ae)))

    def test_functions_form_a_module_algebra(self) -> None:
        for name, p in self._pairs():
            H, A = p.H, p.A
            for x, a, b in product(range(H.dim), range(A.dim), range(A.dim)):
                with self.subTest(pair=name, x=H.labels[x], a=A.labels[a], b=A.labels[b]):
                    xe, ae, be = H.basis_element(x), A.basis_element(a), A.basis_element(b)
                    expected: dict = {}
                    for (j, k), value in H.coproduct(xe.vec).items():
                        left = p.act_left_vec({j: ONE}, ae.vec)
                        right = p.act_left_vec({k: ONE}, be.vec)
                        axpy(expected, value, A.product(left, right))
                    self.assertEqual(act_left(p, xe, mul_elem(A, ae, be)), A.element(expected))

    def test_right_action_composes(self) -> None:
        for name, p in self._pairs():
            H, A = p.H, p.A
            for x, a, b in product(range(H.dim), range(A.dim), range(A.dim)):
                with self.subTest(pair=name, x=H.labels[x], a=A.labels[a], b=A.labels[b]):
                    xe, ae, be = H.basis_element(x), A.basis_element(a), A.basis_element(b)
                    self.assertEqual(act_right(p, xe, mul_elem(A, ae, be)), act_right(p, act_right(p, xe, ae), be))
                    self.assertEqual(act_right(p, xe, A.unit_element()), xe)


if __name__ == "__main__":
    unittest.main()
