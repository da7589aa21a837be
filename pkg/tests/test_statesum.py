import os
import unittest
from unittest import mock

import numpy as np

from qhgeom.dilog import rn_tensor
from qhgeom.errors import DomainError, UndecoratedMeshError
from qhgeom.latsolve import decorate
from qhgeom.mesh import doubled_tet, single_tet
from qhgeom.moves import pentagon_sides
from qhgeom.specialfn import level
from qhgeom.statesum import (brute_force_trace, contraction_plan, eq_mod_n, normalization, trace_tensor,
                             worker_count)


class TestSingleTet(unittest.TestCase):

    def setUp(self) -> None:
        self.m = single_tet(0.3 + 0.8j).with_decorations(f=[(0, 0, -1)], c=[(0, 1, 0)])

    def test_open_tensor_is_normalized_dilogarithm(self):
        for N in (3, 5):
            tt = trace_tensor(self.m, N)
            self.assertEqual(tt.rank, 4)
            self.assertEqual(tt.faces, [(0, 0), (0, 1), (0, 2), (0, 3)])
            expected = rn_tensor(self.m.tets[0], N).by_face() / N ** 2
            np.testing.assert_allclose(tt.values, expected, atol=1e-12)

    def test_scalar_of_open_tensor(self):
        with self.assertRaises(DomainError):
            _ = trace_tensor(self.m, 3).scalar

    def test_undecorated(self):
        with self.assertRaises(UndecoratedMeshError):
            trace_tensor(single_tet(0.3 + 0.8j), 3)


class TestClosedContraction(unittest.TestCase):

    def setUp(self) -> None:
        self.m = decorate(doubled_tet(0.3 + 0.8j))

    def test_normalization(self):
        self.assertAlmostEqual(normalization(self.m, 3), 3.0 ** -4)

    def test_plan(self):
        plan = contraction_plan(self.m)
        self.assertEqual(len(plan), 1)
        self.assertEqual(plan.max_rank, 4)

    def test_plan_agrees_with_enumeration(self):
        for N in (3, 5):
            fast = trace_tensor(self.m, N).scalar
            slow = brute_force_trace(self.m, N).scalar
            self.assertAlmostEqual(fast, slow, places=10)

    def test_workers(self):
        one = brute_force_trace(self.m, 3, workers=1).scalar
        three = brute_force_trace(self.m, 3, workers=3).scalar
        self.assertAlmostEqual(one, three, places=12)

    def test_level_one_cancels(self):
        self.assertAlmostEqual(trace_tensor(self.m, 1).scalar, 1)


class TestOpenContraction(unittest.TestCase):

    @classmethod
    def setUpClass(cls) -> None:
        transit = pentagon_sides(0.4 + 0.9j, -0.2 + 1.3j)
        cls.two, cls.three = transit.before, transit.after

    def test_plan_agrees_with_enumeration(self):
        for m in (self.two, self.three):
            for N in (3, 5):
                fast = trace_tensor(m, N)
                slow = brute_force_trace(m, N)
                self.assertEqual(fast.faces, slow.faces)
                np.testing.assert_allclose(fast.values, slow.values, rtol=1e-10, atol=1e-10)


class TestEqModN(unittest.TestCase):

    def setUp(self) -> None:
        self.rng = np.random.default_rng(5)
        self.b = self.rng.normal(size=(3, 3)) + 1j * self.rng.normal(size=(3, 3))

    def test_phase_recovered(self):
        lv = level(5)
        witness = eq_mod_n(-lv.zeta ** 2 * self.b, self.b, lv)
        self.assertTrue(witness)
        self.assertEqual((witness.sign, witness.phase_index), (-1, 2))

    def test_unequal(self):
        other = self.rng.normal(size=(3, 3)) + 0j
        self.assertFalse(eq_mod_n(other, self.b, 5))
        self.assertFalse(eq_mod_n(2 * self.b, self.b, 5))

    def test_shape_mismatch(self):
        with self.assertRaises(DomainError):
            eq_mod_n(np.ones(3), np.ones(4), 3)


class TestWorkers(unittest.TestCase):

    def test_env(self):
        with mock.patch.dict(os.environ, {"QHGEOM_THREADS": "4"}):
            self.assertEqual(worker_count(), 4)
        with mock.patch.dict(os.environ, {"QHGEOM_THREADS": "many"}):
            self.assertEqual(worker_count(), 1)


if __name__ == "__main__":
    unittest.main()
