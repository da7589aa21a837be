import unittest

import numpy as np

from qhgeom.errors import DomainError, SingularInputError
from qhgeom.specialfn import (LevelN, bracket, dilog, g_func, h_func, level, lobachevsky, lobachevsky_series,
                              nth_root, omega, principal_log, rogers_closed_form, rogers_extended,
                              rogers_path)


def on_curve(u: complex, N: int) -> complex:
    return nth_root(1 - u ** N, N)


class TestLevel(unittest.TestCase):

    def test_odd_levels(self):
        lv = level(5)
        self.assertEqual(lv.m, 2)
        self.assertAlmostEqual(lv.zeta ** 5, 1)
        self.assertEqual(level(lv), lv)
        self.assertEqual(int(LevelN(1)), 1)

    def test_even_or_nonpositive_rejected(self):
        for n in (0, 2, 4, -3):
            with self.assertRaises(DomainError):
                LevelN(n)


class TestLogs(unittest.TestCase):

    def test_principal_log_on_the_cut(self):
        self.assertAlmostEqual(principal_log(-1), 1j * np.pi)
        self.assertAlmostEqual(principal_log(complex(-1, -0.0)).imag, np.pi)

    def test_log_of_zero(self):
        with self.assertRaises(DomainError):
            principal_log(0)

    def test_nth_root(self):
        self.assertAlmostEqual(nth_root(-1, 3), np.exp(1j * np.pi / 3))
        self.assertEqual(nth_root(0, 5), 0)


class TestCyclicFunctions(unittest.TestCase):

    def setUp(self) -> None:
        self.rng = np.random.default_rng(11)

    def test_omega_empty_product(self):
        u = 0.3 + 0.2j
        self.assertEqual(omega(u, on_curve(u, 3), 0, 3), 1)

    def test_omega_periodic(self):
        for N in (3, 5, 7):
            u = complex(*self.rng.uniform(-0.7, 0.7, 2))
            v = on_curve(u, N)
            for n in range(N):
                self.assertTrue(np.isclose(omega(u, v, n, N), omega(u, v, n + N, N)))

    def test_omega_off_curve(self):
        with self.assertRaises(DomainError):
            omega(0.3, 0.3, 1, 3)

    def test_omega_pole(self):
        lv = level(3)
        u = 1 / lv.zeta
        with self.assertRaises(SingularInputError):
            omega(u, 0, 1, lv)

    def test_g_needs_level_above_one(self):
        with self.assertRaises(DomainError):
            g_func(0.5, 1)
        self.assertNotEqual(g_func(1, 3), 0)

    def test_h_is_normalized_g(self):
        for N in (3, 5):
            self.assertAlmostEqual(h_func(1, N), 1)
            x = 0.4 - 0.3j
            self.assertAlmostEqual(h_func(x, N) * g_func(1, N), g_func(x, N))

    def test_bracket(self):
        self.assertAlmostEqual(bracket(1, 5), 1)
        x = 0.4 - 0.3j
        self.assertAlmostEqual(bracket(x, 5), (1 - x ** 5) / (5 * (1 - x)))


class TestRogers(unittest.TestCase):

    def test_dilog_values(self):
        self.assertAlmostEqual(dilog(0), 0)
        self.assertAlmostEqual(dilog(1), np.pi ** 2 / 6)
        self.assertAlmostEqual(dilog(-1), -np.pi ** 2 / 12)

    def test_quadrature_matches_closed_form(self):
        for w0 in (0.3 + 0.4j, -0.8 + 1.3j, 0.5, 1.7 - 0.2j, np.exp(1j * np.pi / 3)):
            for f0, f1 in ((0, 0), (1, -2), (-3, 1)):
                self.assertTrue(np.isclose(rogers_extended(w0, f0, f1), rogers_closed_form(w0, f0, f1),
                                           atol=1e-8), msg=f"w0={w0}, f=({f0},{f1})")

    def test_path_detours_around_one(self):
        self.assertEqual(len(rogers_path(0.3 + 0.4j)), 2)
        self.assertEqual(len(rogers_path(2.0)), 3)

    def test_detour_avoids_zero_and_one(self):
        for w0 in (2.0, 5 + 1e-12j, 40 - 1e-10j):
            path = rogers_path(w0)
            self.assertEqual(path[0], 0)
            for a, b in zip(path[1:-1], path[2:]):
                points = a + np.linspace(0, 1, 2001) * (b - a)
                self.assertGreater(np.min(np.abs(points)), abs(w0) / 2)
                self.assertGreater(np.min(np.abs(points - 1)), 0.5)

    def test_conjugation_symmetry(self):
        for w0 in (0.3 + 0.4j, -0.8 + 1.3j, 1.7 - 0.2j, np.exp(1j * np.pi / 3)):
            for f0, f1 in ((0, 0), (1, -2), (-3, 1)):
                self.assertTrue(np.isclose(rogers_extended(np.conj(w0), -f0, -f1),
                                           np.conj(rogers_extended(w0, f0, f1)), atol=1e-8),
                                msg=f"w0={w0}, f=({f0},{f1})")

    def test_undefined_at_zero_and_one(self):
        for w0 in (0, 1):
            with self.assertRaises(DomainError):
                rogers_extended(w0, 0, 0)

    def test_volume_of_regular_tetrahedra(self):
        w = np.exp(1j * np.pi / 3)
        difference = rogers_extended(w, 0, 0).imag - rogers_extended(np.conj(w), 0, 0).imag
        self.assertAlmostEqual(difference, 6 * lobachevsky(np.pi / 3), places=8)


class TestLobachevsky(unittest.TestCase):

    def test_regular_ideal_tetrahedron(self):
        self.assertAlmostEqual(6 * lobachevsky(np.pi / 3), 2.0298832128193, places=9)

    def test_series_oracle(self):
        for theta in (0.3, np.pi / 3, 1.2, 2.5):
            self.assertAlmostEqual(lobachevsky(theta), lobachevsky_series(theta), places=5)

    def test_odd_and_periodic(self):
        self.assertAlmostEqual(lobachevsky(-0.7), -lobachevsky(0.7))
        self.assertAlmostEqual(lobachevsky(0.7 + np.pi), lobachevsky(0.7))
        self.assertEqual(lobachevsky(0.0), 0.0)


if __name__ == "__main__":
    unittest.main()
