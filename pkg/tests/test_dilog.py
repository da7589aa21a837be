import unittest

import numpy as np

from qhgeom.dilog import (NEGATIVE_FACE_MAP, POSITIVE_FACE_MAP, charge_prefactor, ln_tensor, ln_tensor_inv,
                          r1_scalar, rn_tensor)
from qhgeom.errors import DomainError
from qhgeom.specialfn import nth_root, rogers_extended
from qhgeom.tetra import FlatChargedTet, moduli_from_w0, w_prime


def random_curve_point(rng, N):
    u = rng.uniform(0.2, 0.8) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return u, nth_root(1 - u ** N, N)


class TestLN(unittest.TestCase):

    def setUp(self) -> None:
        self.rng = np.random.default_rng(3)

    def test_inverse_identity(self):
        for N in (3, 5, 7):
            for _ in range(50):
                u, v = random_curve_point(self.rng, N)
                product = ln_tensor(u, v, N).matrix() @ ln_tensor_inv(u, v, N).matrix()
                np.testing.assert_allclose(product, np.eye(N * N), rtol=0, atol=1e-10)

    def test_support(self):
        u, v = random_curve_point(self.rng, 3)
        T = ln_tensor(u, v, 3)
        self.assertEqual(T.nonzero_count(), 27)
        self.assertEqual(T.entries[0, 1, 0, 2], 0)

    def test_off_curve(self):
        with self.assertRaises(DomainError):
            ln_tensor(0.3, 0.3, 3)


class TestRN(unittest.TestCase):

    def setUp(self) -> None:
        self.w = moduli_from_w0(0.3 + 0.8j)

    def test_face_maps(self):
        for b_sign, face_map in ((1, POSITIVE_FACE_MAP), (-1, NEGATIVE_FACE_MAP)):
            R = rn_tensor(FlatChargedTet(self.w, b_sign, (0, 0, -1), (0, 1, 0)), 3)
            self.assertEqual(R.face_map, face_map)
            by_face = R.by_face()
            for slot, face in enumerate(face_map):
                self.assertEqual(by_face.shape[face], R.entries.shape[slot])

    def test_charge_prefactor(self):
        t = FlatChargedTet(self.w, 1, (0, 0, -1), (0, 1, 0))
        w0p, _, _ = w_prime(t, 5)
        self.assertAlmostEqual(charge_prefactor(t, 5), w0p ** -2)

    def test_level_one(self):
        t = FlatChargedTet(self.w, 1, (0, 0, -1), (0, 1, 0))
        with self.assertRaises(DomainError):
            rn_tensor(t, 1)
        expected = np.exp(rogers_extended(self.w.w0, 0, 0).imag / np.pi)
        self.assertAlmostEqual(abs(r1_scalar(t)), expected)
        self.assertAlmostEqual(abs(r1_scalar(FlatChargedTet(self.w, -1, (0, 0, -1)))), 1 / expected)


if __name__ == "__main__":
    unittest.main()
