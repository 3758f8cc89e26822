import unittest

from src.algebra.integrals import (
    check_projector_conditions,
    closed_form_projectors,
    derivative_annihilation_defects,
    integral_values,
    invariant_integral,
    left_invariance_defects,
    modified_trace,
    normalize_delta,
    right_invariance_defects,
    solve_vacuum_projectors,
    theta_matrix,
    trace_integral,
    trace_proportionality,
    vacuum_functional_A,
    vacuum_functional_H,
    vacuum_integral_A,
)
from src.algebra.scalars import ONE
from src.presentation.builtins import builtin
from src.presentation.compiler import compile_presentation, with_companion

A1, A_, B_, AB = range(4)
H1, X, Y, XY = range(4)

UNBRAIDED = (("dqs", {}), ("dqs-dual", {}), ("cyclic-group", {"n": 2}), ("cyclic-group", {"n": 3}), ("cyclic-group", {"n": 4}))


def _complete(name: str, **params):
    return with_companion(compile_presentation(builtin(name, params)))


def _dqs():
    compiled = _complete("dqs")
    return compiled.pair, compiled.smash


class TraceFormulaTests(unittest.TestCase):
    def test_trace_vanishes_on_dqs(self) -> None:
        p, _ = _dqs()
        for k in range(p.A.dim):
            with self.subTest(label=p.A.labels[k]):
                self.assertEqual(trace_integral(p, "A", p.A.basis_element(k)), 0)

    def test_cyclic_groups(self) -> None:
        for n in range(2, 7):
            with self.subTest(n=n):
                p = _complete("cyclic-group", n=n).pair
                self.assertEqual(trace_integral(p, "A", p.A.unit_element()), n)
                for i in range(n):
                    self.assertEqual(trace_integral(p, "H", p.H.basis_element(i)), 1 if i == 0 else 0)

    def test_trace_proportionality(self) -> None:
        p, _ = _dqs()
        self.assertEqual(trace_proportionality(p), 0)
        self.assertEqual(trace_proportionality(_complete("cyclic-group", n=3).pair), 1)


class ModifiedTraceTests(unittest.TestCase):
    def test_modified_trace_on_dqs(self) -> None:
        p, _ = _dqs()
        A = p.A
        self.assertEqual(modified_trace(p, A.basis_element(A_)).coords, (0, 0, 0, -1))
        self.assertEqual(modified_trace(p, A.basis_element(AB)).coords, (0, 0, 0, 1))
        self.assertTrue(modified_trace(p, A.unit_element()).is_zero())
        self.assertTrue(modified_trace(p, A.basis_element(B_)).is_zero())

    def test_delta_function(self) -> None:
        p, _ = _dqs()
        self.assertEqual(normalize_delta(p), p.A.basis_element(AB))
        z3 = _complete("cyclic-group", n=3).pair
        self.assertEqual(normalize_delta(z3), z3.A.basis_element(0))

    def test_right_and_left_integrals_on_dqs(self) -> None:
        p, _ = _dqs()
        self.assertEqual(integral_values(p), [0, -1, 0, 1])
        self.assertEqual(integral_values(p, "left"), [0, 0, 0, -1])
        result = invariant_integral(p, p.A.basis_element(AB), side="left")
        self.assertEqual(result.value, -1)
        self.assertEqual(result.convention.pivot, "a*b")

    def test_theta_is_nonzero(self) -> None:
        for name, params in UNBRAIDED:
            with self.subTest(name=name, **params):
                theta = theta_matrix(_complete(name, **params).pair)
                self.assertTrue(any(any(row) for row in theta))


class VacuumProjectorTests(unittest.TestCase):
    def test_dqs_projectors(self) -> None:
        p, s = _dqs()
        proj = solve_vacuum_projectors(s)
        expected_E = {(A1, H1): 1, (A_, X): -1, (A_, XY): 2, (B_, Y): 1, (AB, X): -1, (AB, XY): 1}
        self.assertEqual(proj.E.vec, expected_E)

        def hp(h: int, a: int) -> dict:
            return s.multiply(s.mixed(s.A.unit_vec, {h: ONE}), s.mixed({a: ONE}, s.H.unit_vec))

        expected_Ebar = dict(s.unit_vec)
        for cells, sign in ((hp(X, A_), -1), (hp(Y, B_), 1), (hp(XY, AB), -1)):
            for cell, value in cells.items():
                expected_Ebar[cell] = expected_Ebar.get(cell, 0) + sign * value
        self.assertEqual(proj.Ebar.vec, {cell: value for cell, value in expected_Ebar.items() if value})
        self.assertTrue(check_projector_conditions(s, proj).ok)
        self.assertEqual(closed_form_projectors(s, p), proj)

    def test_dqs_vacuum_integrals(self) -> None:
        _, s = _dqs()
        proj = solve_vacuum_projectors(s)
        functional = vacuum_functional_A(s, proj)
        self.assertEqual(functional.values, (0, -1, 0, 1))
        self.assertEqual(functional.delta, s.A.basis_element(AB))
        result = vacuum_integral_A(s, proj, s.A.basis_element(A_), functional)
        self.assertEqual(result.realization.vec, {(AB, H1): -1, (AB, Y): 2})

    def test_dqs_points_side(self) -> None:
        _, s = _dqs()
        functional = vacuum_functional_H(s, solve_vacuum_projectors(s))
        self.assertEqual(functional.realizations[XY], {(A1, X): -1, (A1, XY): 1, (B_, X): -1, (B_, XY): 1})
        for k in (H1, X, Y):
            with self.subTest(label=s.H.labels[k]):
                self.assertEqual(functional.realizations[k], {})

    def test_routes_agree_on_unbraided_builtins(self) -> None:
        for name, params in UNBRAIDED:
            with self.subTest(name=name, **params):
                compiled = _complete(name, **params)
                vacuum = vacuum_functional_A(compiled.smash, solve_vacuum_projectors(compiled.smash))
                self.assertEqual(list(vacuum.values), integral_values(compiled.pair))


class InvarianceTests(unittest.TestCase):
    def test_unbraided_invariance_suite(self) -> None:
        for name, params in UNBRAIDED:
            with self.subTest(name=name, **params):
                p = _complete(name, **params).pair
                right = integral_values(p)
                self.assertEqual(right_invariance_defects(p.A, right), [])
                self.assertEqual(left_invariance_defects(p.A, integral_values(p, "left")), [])
                self.assertEqual(derivative_annihilation_defects(p, right), [])

    def test_braided_invariance_suite(self) -> None:
        for name, params in (("fermionic-line", {}), ("q-plane", {"n": 1}), ("q-plane", {"n": 2})):
            with self.subTest(name=name, **params):
                s = compile_presentation(builtin(name, params)).smash
                values = vacuum_functional_A(s, solve_vacuum_projectors(s)).values
                self.assertEqual(right_invariance_defects(s.A, values), [])
                self.assertEqual(left_invariance_defects(s.A, values), [])
                self.assertEqual(derivative_annihilation_defects(s, values), [])


if __name__ == "__main__":
    unittest.main()
