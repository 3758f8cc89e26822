import unittest
from unittest.mock import patch

from src.algebra.duality import dualize
from src.algebra.errors import AssociativityFailure
from src.algebra.smash import SmashAlgebra, build_smash, build_smash_custom, embed, format_smash_element, reorder_inverse, smash_mul, vacuum_action
from src.algebra.tensors import SparseTensor
from src.config.settings import settings
from src.presentation.builtins import builtin
from src.presentation.compiler import compile_presentation

# functions a, b and points x, y of the discrete quantum space
A1, A_, B_, AB = range(4)
H1, X, Y, XY = range(4)


def _dqs_smash():
    return build_smash(dualize(compile_presentation(builtin("dqs")).algebra))


def _fermionic():
    return compile_presentation(builtin("fermionic-line"))


class CrossRelationTests(unittest.TestCase):
    def test_dqs_cross_relations(self) -> None:
        s = _dqs_smash()
        self.assertEqual(s.reorder(X, A_), {(A1, H1): 1, (B_, H1): 1, (A_, X): 1})
        self.assertEqual(s.reorder(X, B_), {(B_, X): -1, (A1, X): -2})
        self.assertEqual(s.reorder(Y, A_), {(A_, Y): 1})
        self.assertEqual(s.reorder(Y, B_), {(A1, H1): 1, (B_, H1): 1, (B_, Y): -1, (A1, Y): -2})

    def test_embedded_products(self) -> None:
        s = _dqs_smash()
        x = embed(s, "H", s.H.basis_element(X))
        a = embed(s, "A", s.A.basis_element(A_))
        self.assertEqual(format_smash_element(s, smash_mul(s, x, a)), "1 + a*x + b")
        self.assertEqual(format_smash_element(s, smash_mul(s, a, x)), "a*x")
        self.assertEqual(embed(s, "A", s.A.unit_element()), s.one())

    def test_vacuum_action_matches_left_action(self) -> None:
        s = _dqs_smash()
        moved = vacuum_action(s, s.H.basis_element(X), s.A.basis_element(A_))
        self.assertEqual(moved.coords, (1, 0, 1, 0))

    def test_inverse_reordering(self) -> None:
        s = _dqs_smash()
        back = reorder_inverse(s, s.A.basis_element(A_), s.H.basis_element(X))
        total = {}
        for (j, i), value in back.items():
            for cell, weight in s.reorder(j, i).items():
                total[cell] = total.get(cell, 0) + value * weight
        self.assertEqual({cell: value for cell, value in total.items() if value}, {(A_, X): 1})

    def test_z2_translation_permutes_delta_functions(self) -> None:
        s = build_smash(dualize(compile_presentation(builtin("cyclic-group", {"n": 2})).algebra))
        self.assertEqual(s.reorder(1, 0), {(1, 1): 1})
        self.assertEqual(s.reorder(1, 1), {(0, 1): 1})


class ExplicitCrossRelationTests(unittest.TestCase):
    def test_fermionic_line_smash_is_valid(self) -> None:
        compiled = _fermionic()
        s = compiled.smash
        self.assertEqual(s.dim, 4)
        self.assertEqual(s.reorder(1, 1), {(0, 0): 1, (1, 1): -1})

    def test_wrong_sign_is_not_associative(self) -> None:
        compiled = _fermionic()
        wrong = SparseTensor((2, 2, 2, 2), {(0, 0, 0, 0): 1, (0, 1, 1, 0): 1, (1, 0, 0, 1): 1, (1, 1, 0, 0): 1, (1, 1, 1, 1): 1})
        with self.assertRaises(AssociativityFailure):
            build_smash_custom(compiled.companion, compiled.algebra, wrong, pair=compiled.pair)

    def test_q_plane_smash_is_valid(self) -> None:
        compiled = compile_presentation(builtin("q-plane", {"n": 2}))
        self.assertEqual(compiled.smash.dim, 16)
        self.assertTrue(compiled.braided)


class FullAssociativityTests(unittest.TestCase):
    def test_every_builtin_smash_is_associative_on_all_triples(self) -> None:
        cases = (
            ("dqs", {}, _dqs_smash),
            ("dqs-dual", {}, lambda: build_smash(dualize(compile_presentation(builtin("dqs-dual")).algebra))),
            ("cyclic-group", {"n": 3}, lambda: build_smash(dualize(compile_presentation(builtin("cyclic-group", {"n": 3})).algebra))),
            ("fermionic-line", {}, lambda: _fermionic().smash),
            ("q-plane", {"n": 1}, lambda: compile_presentation(builtin("q-plane", {"n": 1})).smash),
            ("q-plane", {"n": 2}, lambda: compile_presentation(builtin("q-plane", {"n": 2})).smash),
        )
        for name, params, build in cases:
            with self.subTest(name=name, **params):
                s = build()
                s.check_full_associativity()
                self.assertEqual(len(s._products), s.dim**2)

    def test_default_limit_sweeps_the_three_generator_plane(self) -> None:
        self.assertGreaterEqual(settings.smash_sweep_limit, 64)
        with patch.object(SmashAlgebra, "check_full_associativity") as sweep:
            compile_presentation(builtin("q-plane", {"n": 3}))
        sweep.assert_called()

    def test_product_table_is_filled_at_construction(self) -> None:
        s = _dqs_smash()
        fresh = SmashAlgebra(name="copy", A=s.A, H=s.H, cross=s.cross)
        self.assertEqual(len(fresh._products), 16 * 16)
        self.assertEqual(fresh.basis_product(A_, H1, A1, X), {(A_, X): 1})
        self.assertEqual(fresh.basis_product(A1, X, A_, H1), s.reorder(X, A_))


if __name__ == "__main__":
    unittest.main()
