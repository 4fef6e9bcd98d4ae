import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from pseudo_pure.errors import ContractError, InputError, NotPseudoPureError, UndefinedMetricError
from pseudo_pure.models import CrushMode, SpinSystem
from pseudo_pure.presets import CHLOROFORM, HOMONUCLEAR_2, MEASURED_PSEUDO_PURE_00
from pseudo_pure.spin_core import (coherence_order, crush, evolve, expm_unitary, generator, hard_pulse,
                                   is_unitary, max_rel_error, projector, pure_part, spin_op,
                                   symmetric_rel_error, thermal_deviation, traceless_part, transition_op)
from pseudo_pure.utils import bits_of, flipped_spins, level_of


def random_hermitian(rng, dim, scale=1.0):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (a + a.conj().T) / 2


class LevelTests(SimpleTestCase):
    def test_level_of_bitstrings(self):
        self.assertEqual(level_of("00"), 1)
        self.assertEqual(level_of("01"), 2)
        self.assertEqual(level_of("10"), 3)
        self.assertEqual(level_of("111"), 8)

    def test_bits_of_inverts_level_of(self):
        for level in range(1, 9):
            self.assertEqual(level_of(bits_of(level, 3)), level)

    def test_bad_bitstrings(self):
        for bits in ("", "012", "ab"):
            with self.assertRaises(InputError):
                level_of(bits)
        with self.assertRaises(InputError):
            level_of("01", n_spins=3)

    def test_flipped_spins(self):
        self.assertEqual(flipped_spins(3, 4, 2), [2])
        self.assertEqual(flipped_spins(4, 2, 2), [1])
        self.assertEqual(flipped_spins(1, 4, 2), [1, 2])


class OperatorTests(SimpleTestCase):
    def test_spin_op_is_half_pauli(self):
        assert_allclose(spin_op(1, "z", 1), np.diag([0.5, -0.5]))
        assert_allclose(spin_op(2, "x", 2), np.kron(np.eye(2), [[0, 0.5], [0.5, 0]]))

    def test_projectors(self):
        assert_allclose(projector(1, "+", 2), np.diag([1, 1, 0, 0]))
        assert_allclose(projector(1, "-", 2), np.diag([0, 0, 1, 1]))
        assert_allclose(projector(2, "-", 2), np.diag([0, 1, 0, 1]))

    def test_transition_operators_match_product_form(self):
        assert_allclose(transition_op(3, 4, "x", 2), projector(1, "-", 2) @ spin_op(2, "x", 2), atol=1e-15)
        assert_allclose(transition_op(4, 2, "x", 2), spin_op(1, "x", 2) @ projector(2, "-", 2), atol=1e-15)

    def test_transition_op_sign_of_y(self):
        op = transition_op(1, 2, "y", 1)
        assert_allclose(op, [[0, -0.5j], [0.5j, 0]])
        assert_allclose(transition_op(2, 1, "y", 1), -op)

    def test_degenerate_transition(self):
        with self.assertRaises(InputError):
            transition_op(2, 2, "x", 2)
        with self.assertRaises(InputError):
            transition_op(1, 5, "x", 2)

    def test_thermal_deviation(self):
        assert_allclose(np.diag(thermal_deviation(HOMONUCLEAR_2)), [2, 0, 0, -2])
        assert_allclose(np.real(np.diag(thermal_deviation(CHLOROFORM))), [6.9905, -4.1809, 4.1809, -6.9905])

    def test_unknown_axis(self):
        with self.assertRaises(InputError):
            spin_op(1, "w", 2)


class PropagatorTests(SimpleTestCase):
    def test_expm_unitary_is_unitary(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            dim = 2 ** rng.integers(1, 4)
            h = random_hermitian(rng, dim)
            h *= rng.uniform(0, 10) / np.linalg.norm(h, 2)
            u = expm_unitary(h)
            assert_allclose(u @ u.conj().T, np.eye(dim), atol=1e-12)

    def test_expm_unitary_matches_rotation(self):
        beta = 0.7
        u = expm_unitary(beta * transition_op(1, 2, "x", 1))
        expected = np.array([[np.cos(beta / 2), -1j * np.sin(beta / 2)],
                             [-1j * np.sin(beta / 2), np.cos(beta / 2)]])
        assert_allclose(u, expected, atol=1e-14)

    def test_non_hermitian_generator(self):
        with self.assertRaises(ContractError):
            expm_unitary(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_evolve_preserves_trace_and_hermiticity(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            rho = random_hermitian(rng, 4)
            u = expm_unitary(random_hermitian(rng, 4))
            out = evolve(rho, u)
            self.assertAlmostEqual(np.trace(out), np.trace(rho), delta=1e-12)
            assert_allclose(out, out.conj().T, atol=1e-12)

    def test_two_level_population_mixing(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            beta = rng.uniform(0, 2 * np.pi)
            m, k = rng.choice(np.arange(1, 5), size=2, replace=False)
            populations = rng.normal(size=4)
            u = expm_unitary(generator([((m, k), "x", beta)], 2))
            out = np.real(np.diag(evolve(np.diag(populations), u)))
            c, s = np.cos(beta / 2) ** 2, np.sin(beta / 2) ** 2
            expected = populations.copy()
            expected[m - 1] = c * populations[m - 1] + s * populations[k - 1]
            expected[k - 1] = s * populations[m - 1] + c * populations[k - 1]
            assert_allclose(out, expected, atol=1e-12)

    def test_homonuclear_generator_spectrum(self):
        beta = 1.3
        h = generator([((3, 4), "x", beta), ((4, 2), "x", beta)], 2)
        eigenvalues = np.linalg.eigvalsh(h[1:, 1:])
        assert_allclose(eigenvalues, [-beta / np.sqrt(2), 0, beta / np.sqrt(2)], atol=1e-12)
        u = expm_unitary(h)
        self.assertAlmostEqual(abs(u[3, 3]) ** 2, np.cos(beta / np.sqrt(2)) ** 2, delta=1e-12)

    def test_hard_pulse_on_all_spins(self):
        u = hard_pulse(None, "x", np.pi, 2)
        self.assertTrue(is_unitary(u))
        rho = evolve(thermal_deviation(HOMONUCLEAR_2), u)
        assert_allclose(np.real(np.diag(rho)), [-2, 0, 0, 2], atol=1e-12)


class CrushTests(SimpleTestCase):
    def test_coherence_order_antisymmetric(self):
        for j in range(1, 9):
            for k in range(1, 9):
                self.assertEqual(coherence_order(j, k, 3), -coherence_order(k, j, 3))

    def test_crush_modes(self):
        rng = np.random.default_rng(5)
        rho = random_hermitian(rng, 4)
        ideal = crush(rho)
        assert_allclose(ideal, np.diag(np.diag(rho)))
        ordered = crush(rho, CrushMode.COHERENCE_ORDER)
        # |01> <-> |10> is a zero-quantum coherence and survives
        self.assertEqual(ordered[1, 2], rho[1, 2])
        self.assertEqual(ordered[0, 3], 0)
        self.assertEqual(np.trace(ordered), np.trace(rho))

    def test_crush_is_idempotent_and_commutes_with_diagonal_unitaries(self):
        rng = np.random.default_rng(9)
        rho = random_hermitian(rng, 8)
        d = np.diag(np.exp(1j * rng.uniform(0, 2 * np.pi, 8)))
        for mode in CrushMode:
            once = crush(rho, mode)
            assert_allclose(crush(once, mode), once)
            assert_allclose(crush(evolve(rho, d), mode), evolve(crush(rho, mode), d), atol=1e-12)

    def test_unknown_mode(self):
        with self.assertRaises(InputError):
            crush(np.eye(2), "sideways")


class PurePartTests(SimpleTestCase):
    def test_homonuclear_pseudo_pure(self):
        part = pure_part(np.diag([2, -2 / 3, -2 / 3, -2 / 3]))
        self.assertAlmostEqual(part.uniform_coeff, -2 / 3)
        self.assertAlmostEqual(part.pure_coeff, 8 / 3)
        self.assertEqual(part.target, 1)

    def test_heteronuclear_pseudo_pure(self):
        part = pure_part(np.diag([6.9905, -2.3303, -2.3303, -2.3303]))
        self.assertAlmostEqual(part.uniform_coeff, -2.3303)
        self.assertAlmostEqual(part.pure_coeff, 9.3208)
        self.assertEqual(part.target, 1)

    def test_uniform_populations(self):
        with self.assertRaises(NotPseudoPureError):
            pure_part(np.eye(4) * 0.3)

    def test_two_distinct_levels(self):
        with self.assertRaises(NotPseudoPureError) as raised:
            pure_part(np.diag([2, 1, 0, 0]))
        self.assertIn("spread", raised.exception.context)

    def test_coherences_are_rejected(self):
        rho = np.diag([2, -2 / 3, -2 / 3, -2 / 3]).astype(complex)
        rho[0, 1] = rho[1, 0] = 0.1
        with self.assertRaises(NotPseudoPureError):
            pure_part(rho)


class ErrorMetricTests(SimpleTestCase):
    def test_identical(self):
        b = np.diag([1, 2, 3, 4])
        self.assertEqual(max_rel_error(b, b), 0)

    def test_relative_to_largest_entry(self):
        b = np.diag([1, 2, 3, 4]).astype(complex)
        a = b.copy()
        a[0, 0] += 0.03 * 4
        self.assertAlmostEqual(max_rel_error(a, b), 0.03)

    def test_measured_state_against_ideal(self):
        self.assertLessEqual(max_rel_error(MEASURED_PSEUDO_PURE_00, np.diag([1, 0, 0, 0])), 0.03)

    def test_symmetric_variant(self):
        a, b = np.diag([2, 0]), np.diag([1, 0])
        self.assertAlmostEqual(symmetric_rel_error(a, b), 0.5)
        self.assertAlmostEqual(symmetric_rel_error(b, a), 0.5)

    def test_zero_reference(self):
        with self.assertRaises(UndefinedMetricError):
            max_rel_error(np.eye(2), np.zeros((2, 2)))

    def test_shape_mismatch(self):
        with self.assertRaises(InputError):
            max_rel_error(np.eye(2), np.eye(4))

    def test_traceless_part(self):
        self.assertAlmostEqual(abs(np.trace(traceless_part(MEASURED_PSEUDO_PURE_00))), 0, delta=1e-15)


class SpinSystemTests(SimpleTestCase):
    def test_validation(self):
        with self.assertRaises(InputError):
            SpinSystem(gamma=())
        with self.assertRaises(InputError):
            SpinSystem(gamma=(1.0, 0.0))
        with self.assertRaises(InputError):
            SpinSystem(gamma=(1.0, 1.0), labels=("A",))
        with self.assertRaises(InputError):
            SpinSystem(gamma=(1.0, 1.0), j_hz=((0, 1), (2, 0)))

    def test_defaults(self):
        system = SpinSystem(gamma=[1, 2, 3])
        self.assertEqual(system.labels, ("S1", "S2", "S3"))
        self.assertEqual(system.dim, 8)
        self.assertEqual(system.offsets(), (0.0, 0.0, 0.0))
        self.assertEqual(CHLOROFORM.coupling(1, 2), 214.95)
