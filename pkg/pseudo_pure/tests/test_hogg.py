import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from pseudo_pure.errors import InputError, NotPseudoPureError, PreconditionError
from pseudo_pure.hogg import (Literal, OneSatFormula, conflicts, hogg_run, hogg_unitary, mixing, parse_formula,
                              phase_oracle, walsh)
from pseudo_pure.presets import CHLOROFORM
from pseudo_pure.prep import prepare_pseudo_pure
from pseudo_pure.spin_core import evolve, is_unitary

ALL_FORMULAS = {"V1&V2": "11", "V1&!V2": "10", "!V1&V2": "01", "!V1&!V2": "00"}


class FormulaTests(SimpleTestCase):
    def test_parse(self):
        formula = parse_formula("V1 & !V2")
        self.assertEqual(formula.clauses, (Literal(1), Literal(2, negated=True)))
        self.assertEqual(str(formula), "V1&!V2")
        self.assertTrue(formula.maximally_constrained)
        self.assertEqual(formula.solution(), "10")

    def test_under_constrained(self):
        formula = parse_formula("V2")
        self.assertFalse(formula.maximally_constrained)
        self.assertIsNone(formula.solution())
        self.assertEqual(parse_formula("").clauses, ())

    def test_malformed(self):
        for text in ("V1|V2", "V3", "V1&V1", "X1", "V1&"):
            with self.subTest(text=text):
                with self.assertRaises(InputError):
                    parse_formula(text)

    def test_conflicts(self):
        formula = parse_formula("V1&V2")
        self.assertEqual([conflicts(bits, formula) for bits in ("00", "01", "10", "11")], [2, 1, 1, 0])
        with self.assertRaises(InputError):
            conflicts("0", formula)

    def test_formula_validation(self):
        with self.assertRaises(InputError):
            OneSatFormula((Literal(1), Literal(1, negated=True)))


class GateTests(SimpleTestCase):
    def test_walsh_is_an_involution(self):
        for n in (1, 2, 3):
            assert_allclose(walsh(n) @ walsh(n), np.eye(2 ** n), atol=1e-14)

    def test_gates_are_unitary(self):
        self.assertTrue(is_unitary(mixing()))
        for text in ALL_FORMULAS:
            formula = parse_formula(text)
            self.assertTrue(is_unitary(phase_oracle(formula)))
            self.assertTrue(is_unitary(hogg_unitary(formula)))

    def test_oracle_phases(self):
        assert_allclose(np.diag(phase_oracle(parse_formula("V1&V2"))), [-1, 1j, 1j, 1])

    def test_mixing_needs_two_variables(self):
        with self.assertRaises(InputError):
            mixing(3)

    def test_pure_state_maps_to_the_solution(self):
        for text, solution in ALL_FORMULAS.items():
            psi = hogg_unitary(parse_formula(text))[:, 0]
            self.assertAlmostEqual(abs(psi[int(solution, 2)]), 1, delta=1e-12)


class HoggRunTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.rho_pp = prepare_pseudo_pure(CHLOROFORM, "00").rho

    def test_every_sign_pattern(self):
        for text, solution in ALL_FORMULAS.items():
            with self.subTest(formula=text):
                outcome = hogg_run(self.rho_pp, parse_formula(text))
                self.assertAlmostEqual(outcome.probabilities[solution], 1, delta=1e-10)
                others = [p for bits, p in outcome.probabilities.items() if bits != solution]
                assert_allclose(others, 0, atol=1e-10)

    def test_spectrum_and_trace_are_preserved(self):
        outcome = hogg_run(self.rho_pp, parse_formula("V1&V2"))
        self.assertAlmostEqual(np.trace(outcome.rho_final), np.trace(self.rho_pp), delta=1e-12)
        assert_allclose(np.linalg.eigvalsh(outcome.rho_final), np.linalg.eigvalsh(self.rho_pp), atol=1e-12)

    def test_global_phase_of_the_oracle_is_irrelevant(self):
        formula = parse_formula("!V1&V2")
        u = mixing() @ (np.exp(0.4j) * phase_oracle(formula)) @ walsh(2)
        assert_allclose(evolve(self.rho_pp, u), hogg_run(self.rho_pp, formula).rho_final, atol=1e-12)

    def test_uniform_state(self):
        with self.assertRaises(NotPseudoPureError):
            hogg_run(np.eye(4), parse_formula("V1&V2"))

    def test_other_target(self):
        rho = prepare_pseudo_pure(CHLOROFORM, "11").rho
        with self.assertRaises(PreconditionError):
            hogg_run(rho, parse_formula("V1&V2"))

    def test_size_mismatch(self):
        with self.assertRaises(InputError):
            hogg_run(np.eye(8), parse_formula("V1&V2"))
