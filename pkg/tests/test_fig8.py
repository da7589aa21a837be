import unittest

import numpy as np

from qhgeom.errors import DomainError
from qhgeom.fig8 import (NATURAL_CHARGE, NATURAL_FLATTENING, Fig8Point, build_fig8_mesh, closed_form, crosscheck,
                         dehn_filled_value, dehn_sum, filling_residual, level_one_modulus, natural_mesh,
                         simpfs_residual, solve_dehn_point, solver_decorations, standard_flattening,
                         surgery_flattening, volume, weights)
from qhgeom.mesh import validate_charged, validate_flattened, validate_I, validate_quantum
from qhgeom.statesum import eq_mod_n, trace_tensor
from qhgeom.tetra import w_prime


class TestDeformationSpace(unittest.TestCase):

    def test_complete_structure(self):
        p = Fig8Point.complete()
        self.assertAlmostEqual(p.plus.w0, np.exp(1j * np.pi / 3))
        self.assertAlmostEqual(p.z0, np.exp(-1j * np.pi / 3))
        m = natural_mesh(p)
        for report in (validate_I(m), validate_flattened(m), validate_charged(m), validate_quantum(m, 3)):
            self.assertTrue(report.ok, report.to_dict())

    def test_edge_equation_along_a_path(self):
        start, end = np.exp(1j * np.pi / 3), 0.55 + 0.9j
        for t in np.linspace(0, 1, 20):
            p = Fig8Point(start + t * (end - start))
            self.assertLess(p.edge_residual(), 1e-9)
            self.assertGreater(p.plus.w0.imag, 0)
            self.assertLess(p.z0.imag, 0)

    def test_quantum_moduli_at_complete_structure(self):
        N = 5
        m = natural_mesh()
        w0p, w1p, _ = w_prime(m.tets[0], N)
        self.assertAlmostEqual(w0p, np.exp(1j * np.pi / (3 * N)))
        self.assertAlmostEqual(w1p, np.exp(-5j * np.pi / (3 * N)))

    def test_degenerate(self):
        with self.assertRaises(DomainError):
            Fig8Point(1)
        with self.assertRaises(DomainError):
            Fig8Point(0.5 + 0.5j, sheet=2)


class TestFlatteningFamilies(unittest.TestCase):

    def test_natural_is_standard(self):
        self.assertEqual(standard_flattening(0, 0), NATURAL_FLATTENING)
        self.assertEqual(weights(NATURAL_FLATTENING), (0, 0))

    def test_standard_weights(self):
        for k_m, k_l, f0p in ((1, 2, 0), (-2, 4, 1), (3, -6, -2)):
            f = standard_flattening(k_m, k_l, f0p)
            self.assertEqual(weights(f), (k_m, k_l))
            self.assertEqual(simpfs_residual(f), 0)
            self.assertTrue(validate_flattened(build_fig8_mesh(None, f, NATURAL_CHARGE)).ok)

    def test_odd_longitude(self):
        with self.assertRaises(DomainError):
            standard_flattening(0, 1)

    def test_random_standard(self):
        rng = np.random.default_rng(41)
        for _ in range(100):
            k_m, half, f0p = (int(x) for x in rng.integers(-20, 21, size=3))
            f = standard_flattening(k_m, 2 * half, f0p)
            self.assertEqual(weights(f), (k_m, 2 * half))
            self.assertEqual(simpfs_residual(f), 0)
            self.assertEqual(f[0][0], f0p)

    def test_surgery(self):
        f = surgery_flattening(5, 1, -1, 0)
        self.assertEqual(simpfs_residual(f), 0)
        with self.assertRaises(DomainError):
            surgery_flattening(5, 1, 1, 1)

    def test_surgery_unfilled_example(self):
        f = surgery_flattening(1, 0, 0, 1, f0p=0)
        self.assertEqual((f[0][0], f[0][1], f[1][0], f[1][1]), (0, -1, -2, 5))

    def test_random_surgery(self):
        rng = np.random.default_rng(43)
        for _ in range(100):
            # words in the elementary matrices stay unimodular
            p, q, r, s = 1, 0, 0, 1
            for k in rng.integers(-3, 4, size=6):
                k = int(k)
                if rng.random() < 0.5:
                    q, s = q + k * p, s + k * r
                else:
                    p, r = p + k * q, r + k * s
            self.assertEqual(p * s - q * r, 1)
            f0p = int(rng.integers(-5, 6))
            f = surgery_flattening(p, q, r, s, f0p)
            k_m, k_l = weights(f)
            self.assertEqual(p * k_m + q * k_l, -2, (p, q, r, s))
            self.assertEqual((f[0][0] + f[0][1] + f[1][0] + f[1][1]) % 2, 0)
            self.assertEqual(simpfs_residual(f), 0)


class TestSolverDecorations(unittest.TestCase):

    def test_flattening_is_standard(self):
        f, _ = solver_decorations()
        self.assertEqual(weights(f), (0, 0))
        self.assertEqual(simpfs_residual(f), 0)
        self.assertEqual(f, standard_flattening(0, 0, f[0][0]))

    def test_charge_relation(self):
        f, c = solver_decorations()
        self.assertEqual(2 * c[0][0] + c[0][1], 2 * c[1][0] + c[1][1])
        m = build_fig8_mesh(None, f, c)
        self.assertTrue(validate_charged(m).ok)
        self.assertTrue(validate_flattened(m).ok)

    def test_deformed_point(self):
        p = Fig8Point(0.55 + 0.9j)
        m = build_fig8_mesh(p, *solver_decorations(p))
        self.assertTrue(validate_flattened(m).ok)
        self.assertTrue(validate_charged(m).ok)


class TestClosedForms(unittest.TestCase):

    def test_crosscheck(self):
        for N in (1, 3, 5, 7):
            witness = crosscheck(N)
            self.assertTrue(witness, witness)

    def test_crosscheck_deformed(self):
        self.assertTrue(crosscheck(3, Fig8Point(0.55 + 0.9j)))

    def test_crosscheck_natural_decorations(self):
        for N in (3, 5):
            self.assertTrue(crosscheck(N, None, NATURAL_FLATTENING, NATURAL_CHARGE))

    def test_wrong_charge_is_detected(self):
        # shifts one edge sum by one; at the complete structure such shifts only move the phase
        p = Fig8Point(0.55 + 0.9j)
        m = build_fig8_mesh(p, NATURAL_FLATTENING, [(0, 0, 1), (0, 1, 0)])
        self.assertFalse(validate_charged(m).ok)
        for N in (3, 5):
            state = trace_tensor(m, N).scalar
            self.assertFalse(eq_mod_n(np.array(state), np.array(closed_form(N, p) / N ** 2), N))

    def test_lattice_shift(self):
        shifted = standard_flattening(0, 0, f0p=1)
        for N in (3, 5):
            self.assertTrue(eq_mod_n(np.array(closed_form(N, f=shifted)), np.array(closed_form(N)), N))

    def test_level_one(self):
        self.assertAlmostEqual(volume(), 2.029883212819307, places=9)
        self.assertAlmostEqual(level_one_modulus(), np.exp(volume() / np.pi), places=6)

    def test_unfilled_double_sum(self):
        p = Fig8Point.complete()
        for N in (3, 5):
            np.testing.assert_allclose(dehn_sum(N, p, NATURAL_FLATTENING, NATURAL_CHARGE, 0, 0),
                                       closed_form(N, p), rtol=1e-9)


class TestDehnFilling(unittest.TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        cls.point = solve_dehn_point(5, 1)

    def test_point_solves_filling_equation(self):
        self.assertLess(abs(filling_residual(self.point, (5, 1))), 1e-8)
        self.assertGreater(self.point.plus.w0.imag, 0)

    def test_filled_value(self):
        value = dehn_filled_value(3, 5, 1, -1, 0, self.point)
        self.assertTrue(np.isfinite(value))

    def test_rejects_bad_inputs(self):
        with self.assertRaises(DomainError):
            dehn_filled_value(3, 5, 1, 1, 1, self.point)
        with self.assertRaises(DomainError):
            dehn_filled_value(3, 5, 1, -1, 0, Fig8Point.complete())
        with self.assertRaises(DomainError):
            solve_dehn_point(0, 0)


if __name__ == "__main__":
    unittest.main()
