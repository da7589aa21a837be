import json
import os
import tempfile
import unittest

from qhgeom import config
from qhgeom.errors import MeshError, UndecoratedMeshError
from qhgeom.fig8 import (NATURAL_CHARGE, Fig8Point, alt_meridian_path, build_fig8_mesh, meridian_path, natural_mesh,
                         solver_decorations, standard_flattening)
from qhgeom.mesh import (Gluing, Mesh, NormalPath, VertexClass, check_path, classify_vertices, doubled_tet,
                         edge_total_charge, link_vertex_loop, path_weight, single_tet, validate_charged,
                         validate_flattened, validate_I, validate_quantum)
from qhgeom.moves import pentagon_configuration


class TestDoubledTet(unittest.TestCase):

    def setUp(self) -> None:
        self.m = doubled_tet(0.3 + 0.8j, f=(0, 0, -1), c_plus=(0, 0, 1), c_minus=(0, 0, 1))

    def test_classes(self):
        self.assertEqual(len(self.m.edge_classes), 6)
        self.assertTrue(all(ec.degree == 2 and not ec.boundary for ec in self.m.edge_classes))
        self.assertEqual(len(self.m.vertex_classes), 4)
        self.assertTrue(all(vc.kind == VertexClass.MANIFOLD for vc in self.m.vertex_classes))
        self.assertEqual(self.m.vertex_counts(), (4, 0))
        self.assertEqual(self.m.boundary_faces, [])

    def test_validations(self):
        self.assertTrue(validate_I(self.m).ok)
        self.assertTrue(validate_flattened(self.m).ok)
        self.assertTrue(validate_charged(self.m).ok)
        for N in (3, 5):
            self.assertTrue(validate_quantum(self.m, N).ok)

    def test_charge_violation_is_reported(self):
        m = self.m.with_decorations(c=[(1, -1, 1), (0, 0, 1)])
        report = validate_charged(m)
        self.assertFalse(report.ok)
        edges = {v["edge"] for v in report.violations}
        self.assertIn(m.edge_class_of(0, 0, 1).index, edges)
        self.assertEqual(edge_total_charge(m, m.edge_class_of(0, 0, 2)), 2)

    def test_missing_decorations(self):
        m = doubled_tet(0.3 + 0.8j)
        self.assertFalse(validate_flattened(m).ok)
        with self.assertRaises(UndecoratedMeshError):
            m.flattenings()

    def test_link_loop(self):
        loop = link_vertex_loop(self.m, 0, 0, 1)
        self.assertEqual(len(loop), 2)
        check_path(self.m, loop)
        self.assertAlmostEqual(path_weight(self.m, loop), 0)

    def test_file_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "mesh.json")
            self.m.save(path)
            again = Mesh.load(path)
        self.assertEqual(again.flattenings(), self.m.flattenings())
        self.assertEqual(again.hamiltonian, self.m.hamiltonian)

    def test_bundled_file(self):
        m = Mesh.load(config.DOUBLED_TET_FILE)
        self.assertEqual(len(m.hamiltonian), 4)
        self.assertTrue(validate_I(m).ok)


class TestFigureEightFile(unittest.TestCase):

    def setUp(self) -> None:
        self.m = Mesh.load(config.FIG8_MESH_FILE)

    def test_structure(self):
        self.assertEqual(len(self.m.edge_classes), 2)
        self.assertEqual(sorted(ec.degree for ec in self.m.edge_classes), [6, 6])
        self.assertEqual([vc.kind for vc in self.m.vertex_classes], [VertexClass.TOROIDAL])
        self.assertEqual(self.m.vertex_counts(), (0, 0))

    def test_paths(self):
        self.assertEqual(set(self.m.paths), {"meridian", "longitude"})
        for p in self.m.paths.values():
            check_path(self.m, p)
            self.assertAlmostEqual(path_weight(self.m, p.reversed()), -path_weight(self.m, p))


class TestVertexLinks(unittest.TestCase):

    def test_single_tet(self):
        classes = classify_vertices(single_tet(0.3 + 0.8j))
        self.assertEqual(len(classes), 4)
        for vc in classes:
            self.assertEqual(vc.kind, VertexClass.BOUNDARY)
            self.assertEqual(len(vc.members), 1)

    def test_open_two_tet_mesh(self):
        two, _ = pentagon_configuration(0.4 + 0.9j, -0.2 + 1.3j)
        classes = classify_vertices(two)
        self.assertEqual(len(classes), 5)
        self.assertTrue(all(vc.kind == VertexClass.BOUNDARY for vc in classes))
        self.assertEqual(sorted(len(vc.members) for vc in classes), [1, 1, 2, 2, 2])

    def test_closed_meshes(self):
        self.assertTrue(all(vc.kind == VertexClass.MANIFOLD for vc in classify_vertices(doubled_tet(0.3 + 0.8j))))
        self.assertEqual([vc.kind for vc in classify_vertices(natural_mesh())], [VertexClass.TOROIDAL])


class TestPathHomotopy(unittest.TestCase):

    def test_meridians_agree(self):
        deformed = Fig8Point(0.55 + 0.9j)
        meshes = [
            natural_mesh(),
            build_fig8_mesh(None, standard_flattening(1, 2, -1), NATURAL_CHARGE),
            build_fig8_mesh(deformed, *solver_decorations(deformed)),
        ]
        for m in meshes:
            check_path(m, alt_meridian_path())
            for kind in ("flattening", "log-derivative", "charge"):
                self.assertAlmostEqual(path_weight(m, alt_meridian_path(), kind),
                                       path_weight(m, meridian_path(), kind), msg=kind)


class TestGluingErrors(unittest.TestCase):

    def test_glued_twice(self):
        m = single_tet(0.3 + 0.8j)
        tets = m.tets + single_tet(0.3 + 0.8j, -1).tets
        with self.assertRaises(MeshError):
            Mesh(tets, [Gluing(0, 0, 1, 0, (1, 2, 3)), Gluing(0, 0, 1, 1, (0, 2, 3))])

    def test_orientation(self):
        tets = single_tet(0.3 + 0.8j).tets * 2
        with self.assertRaises(MeshError):
            Mesh(tets, [Gluing(0, 0, 1, 0, (1, 2, 3))])

    def test_branching(self):
        tets = single_tet(0.3 + 0.8j).tets + single_tet(0.3 + 0.8j, -1).tets
        with self.assertRaises(MeshError):
            Mesh(tets, [Gluing(0, 0, 1, 0, (3, 2, 1))])

    def test_malformed_document(self):
        with self.assertRaises(MeshError):
            Mesh.from_dict({"n_tets": 1})
        with self.assertRaises(MeshError):
            Mesh.from_dict(json.loads('{"n_tets": 2, "moduli": [[0.5, 0.5]]}'))

    def test_open_path(self):
        m = single_tet(0.3 + 0.8j)
        with self.assertRaises(MeshError):
            check_path(m, NormalPath([(0, 0, 1, 2)]))


if __name__ == "__main__":
    unittest.main()
