import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout

from qhgeom import config
from qhgeom.cli import _unimodular_completion, main
from qhgeom.mesh import Mesh


def run(*argv):
    """Run the CLI and return (exit code, parsed stdout)"""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            main(["--quiet", *argv])
        except SystemExit as e:
            code = e.code
    text = out.getvalue()
    return code, json.loads(text) if text.strip() else None


class TestCommands(unittest.TestCase):

    def test_validate(self):
        code, payload = run("validate", str(config.FIG8_MESH_FILE))
        self.assertEqual(code, 0)
        self.assertTrue(payload["ok"])
        self.assertEqual([v["kind"] for v in payload["vertices"]], ["toroidal"])

    def test_validate_reports_violations(self):
        data = Mesh.load(config.FIG8_MESH_FILE).to_dict()
        data["charges"] = [[1, 0, 0], [0, 1, 0]]
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "bad.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(data, fh)
            code, payload = run("validate", path)
        self.assertEqual(code, 1)
        self.assertFalse(payload["reports"]["charged"]["ok"])

    def test_missing_file(self):
        code, payload = run("validate", "no/such/mesh.json")
        self.assertEqual(code, 2)
        self.assertEqual(payload["error"], "MeshError")

    def test_flatten_and_charge(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "flat.json")
            code, payload = run("flatten", str(config.DOUBLED_TET_FILE), "--output", path)
            self.assertEqual(code, 0)
            self.assertTrue(payload["validation"]["ok"])
            self.assertTrue(Mesh.load(path).is_flattened)
        code, payload = run("charge", str(config.DOUBLED_TET_FILE))
        self.assertEqual(code, 0)
        self.assertTrue(payload["validation"]["ok"])

    def test_contract(self):
        code, payload = run("contract", str(config.DOUBLED_TET_FILE), "--N", "3", "--brute")
        self.assertEqual(code, 0)
        self.assertIn("value", payload)
        self.assertTrue(payload["brute_force"]["eq_mod_n"])

    def test_fig8(self):
        code, payload = run("fig8", "--N", "3")
        self.assertEqual(code, 0)
        self.assertTrue(payload["eq_mod_n"])
        code, payload = run("fig8", "--N", "1")
        self.assertAlmostEqual(payload["volume"], 2.029883212819307, places=9)

    def test_fig8_deformed(self):
        code, payload = run("fig8", "--N", "3", "--mode", "deformed")
        self.assertEqual(code, 0)
        self.assertTrue(payload["eq_mod_n"])

    def test_even_level(self):
        code, payload = run("fig8", "--N", "4")
        self.assertEqual(code, 2)
        self.assertEqual(payload["error"], "DomainError")

    def test_pentagon(self):
        code, payload = run("pentagon", "--N", "3", "--samples", "3")
        self.assertEqual(code, 0)
        self.assertEqual(payload["passed"], 3)

    def test_holonomy(self):
        code, payload = run("holonomy", str(config.PUNCTURED_TORUS_FILE))
        self.assertEqual(code, 0)
        self.assertTrue(payload["round_trip"]["ok"])
        self.assertEqual(sorted(payload["parameters"]), ["a", "b", "c"])


class TestHelpers(unittest.TestCase):

    def test_unimodular_completion(self):
        self.assertEqual(_unimodular_completion(5, 1), (-1, 0))
        for p, q in ((3, 2), (-4, 7), (1, 0)):
            r, s = _unimodular_completion(p, q)
            self.assertEqual(p * s - q * r, 1)


if __name__ == "__main__":
    unittest.main()
