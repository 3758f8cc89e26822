import random
import unittest
from fractions import Fraction

from src.algebra.errors import AlgebraMismatch, AxiomViolation, ShapeMismatch
from src.algebra.hopf import (
    antipode_elem,
    assemble_hopf,
    build_hopf,
    check_hopf_axioms,
    coproduct_elem,
    counit_elem,
    mul_elem,
)
from src.algebra.scalars import ONE, Q, RatFunc
from src.algebra.tensors import SparseTensor, axpy, scaled, vec_equal
from src.presentation.builtins import builtin
from src.presentation.compiler import compile_presentation

ONE_, X, Y, XY = range(4)


def _dqs():
    return compile_presentation(builtin("dqs")).algebra


def _z2_tensors() -> dict:
    mult = {(0, 0, 0): 1, (0, 1, 1): 1, (1, 0, 1): 1, (1, 1, 0): 1}
    comult = {(0, 0, 0): 1, (1, 1, 1): 1}
    return {
        "mult": SparseTensor((2, 2, 2), mult),
        "comult": SparseTensor((2, 2, 2), comult),
        "antipode": SparseTensor((2, 2), {(0, 0): 1, (1, 1): 1}),
    }


class DiscreteQuantumSpaceTensorTests(unittest.TestCase):
    def test_multiplication_slices_follow_relations(self) -> None:
        H = _dqs()
        self.assertEqual(H.labels, ("1", "x", "y", "x*y"))
        expected = {
            (ONE_, ONE_, ONE_): 1, (ONE_, X, X): 1, (ONE_, Y, Y): 1, (ONE_, XY, XY): 1,
            (X, ONE_, X): 1, (X, Y, XY): 1,
            (Y, ONE_, Y): 1, (Y, X, X): 1, (Y, X, XY): -1, (Y, Y, Y): 1,
            (XY, ONE_, XY): 1, (XY, Y, XY): 1,
        }
        self.assertEqual(H.mult, SparseTensor((4, 4, 4), expected))

    def test_comultiplication_including_the_derived_cell(self) -> None:
        H = _dqs()
        expected = {
            (ONE_, ONE_, ONE_): 1,
            (X, X, ONE_): 1, (X, ONE_, X): 1, (X, Y, X): -2,
            (Y, Y, ONE_): 1, (Y, ONE_, Y): 1, (Y, Y, Y): -2,
            (XY, XY, ONE_): 1, (XY, ONE_, XY): 1, (XY, X, Y): 1, (XY, Y, X): -1, (XY, XY, Y): -2,
        }
        self.assertEqual(H.comult, SparseTensor((4, 4, 4), expected))
        # W_2 row x*y, column x
        self.assertEqual(H.comult[(XY, Y, X)], RatFunc(-1))

    def test_zeroed_cell_breaks_the_antipode_law(self) -> None:
        H = _dqs()
        entries = dict(H.comult.entries)
        del entries[(XY, Y, X)]
        broken = assemble_hopf(4, H.labels, H.mult, H.unit, SparseTensor((4, 4, 4), entries), H.counit, H.antipode)
        report = check_hopf_axioms(broken)
        self.assertFalse(report.ok)
        self.assertTrue(check_hopf_axioms(H).ok)

    def test_element_operations(self) -> None:
        H = _dqs()
        x, y = H.basis_element(X), H.basis_element(Y)
        self.assertEqual(mul_elem(H, y, x).coords, (0, 1, 0, -1))
        self.assertTrue(mul_elem(H, x, x).is_zero())
        self.assertEqual(antipode_elem(H, x).coords, (0, 1, 0, -2))
        self.assertEqual(antipode_elem(H, x, 2).coords, (0, -1, 0, 0))
        self.assertEqual(counit_elem(H, x), 0)
        self.assertEqual(counit_elem(H, H.unit_element()), 1)
        delta = coproduct_elem(H, x)
        self.assertEqual(delta[X][ONE_], 1)
        self.assertEqual(delta[Y][X], -2)

    def test_inverse_antipode_undoes_antipode(self) -> None:
        H = _dqs()
        for k in range(H.dim):
            with self.subTest(label=H.labels[k]):
                u = H.basis_element(k)
                self.assertEqual(antipode_elem(H, antipode_elem(H, u), -1), u)


def _mixed_element(H, seed: int):
    """A fixed dense combination with rational and q-dependent coefficients."""
    rng = random.Random(seed)
    coords = []
    for _ in range(H.dim):
        value = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        coords.append(RatFunc(value) * Q**rng.randint(-1, 2) if rng.random() < 0.5 else RatFunc(value))
    return H.element(coords)


class HopfLawTests(unittest.TestCase):
    def _algebras(self):
        return (
            ("dqs", _dqs()),
            ("dqs-dual", compile_presentation(builtin("dqs-dual")).algebra),
            ("cyclic-group-3", compile_presentation(builtin("cyclic-group", {"n": 3})).algebra),
        )

    def test_antipode_squares_to_alternating_signs_on_dqs(self) -> None:
        H = _dqs()
        signs = (1, -1, 1, -1)
        for k, sign in enumerate(signs):
            with self.subTest(label=H.labels[k]):
                self.assertEqual(H.apply_antipode({k: ONE}, 2), {k: RatFunc(sign)})

    def test_laws_on_mixed_elements(self) -> None:
        for name, H in self._algebras():
            for seed in (1, 2, 3):
                u, v = _mixed_element(H, seed), _mixed_element(H, seed + 10)
                with self.subTest(algebra=name, seed=seed):
                    delta_u = H.coproduct(u.vec)
                    counit_left: dict = {}
                    counit_right: dict = {}
                    antipode_left: dict = {}
                    for (j, k), value in delta_u.items():
                        axpy(counit_left, value * H.counit[j], {k: ONE})
                        axpy(counit_right, value * H.counit[k], {j: ONE})
                        axpy(antipode_left, value, H.product(H.apply_antipode({j: ONE}), {k: ONE}))
                    self.assertTrue(vec_equal(counit_left, u.vec))
                    self.assertTrue(vec_equal(counit_right, u.vec))
                    self.assertTrue(vec_equal(antipode_left, scaled(H.unit_vec, H.epsilon(u.vec))))

                    uv = H.product(u.vec, v.vec)
                    self.assertTrue(vec_equal(H.coproduct(uv), H.tensor_product(delta_u, H.coproduct(v.vec))))
                    self.assertEqual(H.epsilon(uv), H.epsilon(u.vec) * H.epsilon(v.vec))
                    self.assertTrue(
                        vec_equal(H.apply_antipode(uv), H.product(H.apply_antipode(v.vec), H.apply_antipode(u.vec)))
                    )


class AxiomSuiteTests(unittest.TestCase):
    def test_hand_built_z2_is_valid(self) -> None:
        H = build_hopf(2, ("e0", "e1"), unit=None, counit=(1, 1), name="Z2", **_z2_tensors())
        self.assertEqual(H.dim, 2)
        self.assertTrue(check_hopf_axioms(H).ok)

    def test_wrong_counit_fails_counit_law(self) -> None:
        H = assemble_hopf(2, ("e0", "e1"), unit=None, counit=(1, 0), name="Z2", **_z2_tensors())
        report = check_hopf_axioms(H)
        self.assertFalse(report.ok)
        self.assertIn("counit", " ".join(check.name for check in report.failures))

    def test_identity_antipode_violates_antipode_law(self) -> None:
        H = _dqs()
        identity = SparseTensor((4, 4), {(k, k): ONE for k in range(4)})
        with self.assertRaisesRegex(AxiomViolation, "antipode"):
            build_hopf(4, H.labels, H.mult, H.unit, H.comult, H.counit, identity, name="dqs-broken")

    def test_shape_mismatch_is_rejected(self) -> None:
        with self.assertRaises(ShapeMismatch):
            assemble_hopf(2, ("e0",), unit=None, counit=(1, 1), **_z2_tensors())

    def test_elements_of_other_algebras_are_rejected(self) -> None:
        H = _dqs()
        Z2 = build_hopf(2, ("e0", "e1"), unit=None, counit=(1, 1), name="Z2", **_z2_tensors())
        with self.assertRaises(AlgebraMismatch):
            mul_elem(H, H.basis_element(X), Z2.basis_element(1))


if __name__ == "__main__":
    unittest.main()
