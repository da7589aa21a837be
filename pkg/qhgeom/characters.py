"""PSL(2,C) cocycles, idealization and surface holonomies"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from .errors import DomainError, MeshError, NotIdealizableError
from .mesh import Mesh
from .specialfn import nth_root, principal_log
from .tetra import ModuliTriple, edge_index, moduli_from_w0

logger = logging.getLogger(__name__)

INF = complex(np.inf, 0)


class Psl2:
    """2x2 complex matrix of determinant one, up to sign"""

    def __init__(self, a: complex, b: complex, c: complex, d: complex, check: bool = True):
        self.m = np.array([[a, b], [c, d]], dtype=complex)
        if check and abs(self.det() - 1) > 1e-10 * max(1.0, float(np.max(np.abs(self.m))) ** 2):
            raise DomainError(f"matrix has determinant {self.det():.6g}, not 1")

    @classmethod
    def from_matrix(cls, m: np.ndarray, normalize: bool = False) -> "Psl2":
        m = np.asarray(m, dtype=complex)
        if normalize:
            det = np.linalg.det(m)
            if abs(det) < 1e-300:
                raise DomainError("singular matrix")
            m = m / np.sqrt(complex(det))
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def from_points(cls, a: complex, b: complex, c: complex) -> "Psl2":
        """The Mobius map sending (0, 1, inf) to the finite points (a, b, c)"""
        m = np.array([[c * (b - a), a * (c - b)], [b - a, c - b]], dtype=complex)
        return cls.from_matrix(m, normalize=True)

    @classmethod
    def identity(cls) -> "Psl2":
        return cls(1, 0, 0, 1)

    @classmethod
    def translation(cls, u: complex) -> "Psl2":
        return cls(1, u, 0, 1)

    def det(self) -> complex:
        return complex(self.m[0, 0] * self.m[1, 1] - self.m[0, 1] * self.m[1, 0])

    def trace(self) -> complex:
        return complex(self.m[0, 0] + self.m[1, 1])

    def inverse(self) -> "Psl2":
        (a, b), (c, d) = self.m
        return Psl2(d, -b, -c, a, check=False)

    def __matmul__(self, other: "Psl2") -> "Psl2":
        return Psl2.from_matrix(self.m @ other.m)

    def mobius(self, z: complex) -> complex:
        """Action on the Riemann sphere; INF stands for infinity"""
        (a, b), (c, d) = self.m
        if np.isinf(z):
            return INF if c == 0 else complex(a / c)
        denom = c * z + d
        if denom == 0:
            return INF
        return complex((a * z + b) / denom)

    def fixed_points(self) -> Tuple[complex, complex]:
        (a, b), (c, d) = self.m
        if abs(c) < 1e-300:
            raise DomainError("fixed points of an upper triangular matrix are not both finite")
        root = np.sqrt(complex((a + d) ** 2 - 4))
        return complex((a - d + root) / (2 * c)), complex((a - d - root) / (2 * c))

    def equals(self, other: "Psl2", tol: float = 1e-10) -> bool:
        return (np.max(np.abs(self.m - other.m)) <= tol) or (np.max(np.abs(self.m + other.m)) <= tol)

    def __repr__(self) -> str:
        (a, b), (c, d) = self.m
        return f"Psl2([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]])"


# Frame of a loop step: the entered side runs from 0 to inf, the third corner sits at -1
ROTATE = Psl2(0, -1, 1, 1)  # corners (0, inf, -1) -> (-1, 0, inf)
FLIP = Psl2(0, -1, 1, 0)  # exchanges the endpoints of the entered side
TURN_RIGHT = ROTATE.inverse() @ FLIP
TURN_LEFT = ROTATE @ FLIP


def gamma_matrix(w: complex) -> Psl2:
    """Edge crossing matrix diag(W^(1/2), W^(-1/2))"""
    root = nth_root(w, 2)
    if root == 0:
        raise DomainError("edge parameter must be nonzero")
    return Psl2(root, 0, 0, 1 / root)


# ── Idealization ─────────────────────────────────────────────────────────────
def cross_ratio(u0: complex, u1: complex, u2: complex, u3: complex) -> complex:
    """w0 = (u2-u1)(u3-u0) / ((u2-u0)(u3-u1))"""
    points = [complex(u) for u in (u0, u1, u2, u3)]
    if any(np.isinf(u) for u in points):
        finite = [abs(u) for u in points if not np.isinf(u)]
        shift = complex(max(finite, default=0.0) + 1.0)
        points = [0j if np.isinf(u) else 1 / (u - shift) for u in points]
    u0, u1, u2, u3 = points
    return (u2 - u1) * (u3 - u0) / ((u2 - u0) * (u3 - u1))


def _check_distinct(points: Sequence[complex], tet: Optional[int] = None):
    scale = max([1.0] + [abs(u) for u in points if not np.isinf(u)])
    for i in range(4):
        for j in range(i + 1, 4):
            both_inf = np.isinf(points[i]) and np.isinf(points[j])
            if both_inf or (not np.isinf(points[i]) and not np.isinf(points[j])
                            and abs(points[i] - points[j]) < 1e-12 * scale):
                where = "" if tet is None else f" in tetrahedron {tet}"
                raise NotIdealizableError(f"idealization points u{i} and u{j} coincide{where}", tet)


class Cocycle:
    """PSL(2,C) values on the oriented edges (tet, i, j), i < j, of a triangulation"""

    def __init__(self, values: Dict[Tuple[int, int, int], Psl2]):
        self.values = dict(values)

    @classmethod
    def from_vertex_gauges(cls, m: Mesh, gauges: Sequence[Psl2]) -> "Cocycle":
        """z(ij) = g_i^-1 g_j with one gauge per vertex class of m"""
        owner = {corner: vc.index for vc in m.vertex_classes for corner in vc.members}
        values = {}
        for t in range(len(m.tets)):
            for i in range(4):
                for j in range(i + 1, 4):
                    values[(t, i, j)] = gauges[owner[(t, i)]].inverse() @ gauges[owner[(t, j)]]
        return cls(values)

    def restricted(self, tet: int) -> Dict[Tuple[int, int], Psl2]:
        return {(i, j): z for (t, i, j), z in self.values.items() if t == tet}

    def conjugated(self, g: Psl2) -> "Cocycle":
        return Cocycle({k: g @ z @ g.inverse() for k, z in self.values.items()})

    def check(self, m: Mesh, tol: float = 1e-8) -> List[str]:
        """Violations of the triangle relation z(ij) z(jk) = z(ik) and of the gluings"""
        problems = []
        for t in range(len(m.tets)):
            for i, j, k in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
                lhs = self.values[(t, i, j)] @ self.values[(t, j, k)]
                if not lhs.equals(self.values[(t, i, k)], tol):
                    problems.append(f"tet {t}: relation fails on face {i}{j}{k}")
        for g in m.gluings:
            vmap = g.vertex_map()
            verts = sorted(vmap)
            for x in range(3):
                for y in range(x + 1, 3):
                    a, b = verts[x], verts[y]
                    if not self.values[(g.tet_a, a, b)].equals(self.values[(g.tet_b, vmap[a], vmap[b])], tol):
                        problems.append(f"{g}: values differ on edge {a}{b}")
        return problems


def idealization_points(z: Dict[Tuple[int, int], Psl2]) -> List[complex]:
    """u_0 = 0 and u_j = z(x_0 x_j)(0)"""
    return [0j] + [z[(0, j)].mobius(0j) for j in (1, 2, 3)]


def idealize_tet(z: Dict[Tuple[int, int], Psl2], tet: Optional[int] = None) -> ModuliTriple:
    """Moduli of the ideal tetrahedron spanned by the idealization points"""
    points = idealization_points(z)
    _check_distinct(points, tet)
    return moduli_from_w0(cross_ratio(*points))


def canonical_flattening(u0: complex, u1: complex, u2: complex, u3: complex) -> Tuple[complex, complex, complex]:
    """Log-branches read off the vertex positions; they sum to zero"""
    _check_distinct([u0, u1, u2, u3])
    if any(np.isinf(u) for u in (u0, u1, u2, u3)):
        raise NotIdealizableError("canonical flattening needs finite points")
    u1, u2, u3 = u1 - u0, u2 - u0, u3 - u0
    log = principal_log
    l0 = log(u2 - u1) + log(u3) - log(u2) - log(u3 - u1)
    l1 = log(u2) + log(u3 - u1) - log(u1) - log(u3 - u2) + 1j * np.pi
    l2 = log(u3 - u2) + log(u1) - log(u3) - log(u2 - u1) - 1j * np.pi
    return l0, l1, l2


def idealize_mesh(m: Mesh, z: Cocycle) -> Mesh:
    """Install idealized moduli and canonical flattenings on every tetrahedron"""
    tets = []
    for t, tet in enumerate(m.tets):
        local = z.restricted(t)
        points = idealization_points(local)
        w = idealize_tet(local, t)
        logs = canonical_flattening(*points)
        f = [int(round(((lj - principal_log(wj)) / (1j * np.pi)).real)) for lj, wj in zip(logs, w)]
        tets.append(type(tet)(w, tet.b_sign, f, tet.c, tet.vertices))
        logger.debug(f"tet {t}: points {points}, flattening {f}")
    return m.with_tets(tets)


def random_gauges(rng: np.random.Generator, count: int) -> List[Psl2]:
    gauges = []
    for _ in range(count):
        raw = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        gauges.append(Psl2.from_matrix(raw, normalize=True))
    return gauges


# ── Surfaces ─────────────────────────────────────────────────────────────────
class LoopStep:
    """Enter triangle through side `enter`, then turn left or right"""

    def __init__(self, triangle: int, enter: int, turn: str):
        if turn not in ("left", "right"):
            raise MeshError(f"turn must be 'left' or 'right', got {turn!r}")
        self.triangle = int(triangle)
        self.enter = int(enter)
        self.turn = turn

    @property
    def exit(self) -> int:
        return (self.enter - 1) % 3 if self.turn == "left" else (self.enter + 1) % 3


class SurfaceMesh:
    """
    Ideal triangulation of a punctured surface.

    Triangle sides are listed counterclockwise, side i running from corner i
    to corner i + 1; each edge label occurs on exactly two sides. quads[e]
    holds the group words of the four ideal points (r, p, q, s) around e: p, q
    are the corners of one side labelled e in counterclockwise order, r is the
    third corner of that triangle and s the far corner across e.
    """

    def __init__(self, triangles: List[Sequence[str]], genus: int, punctures: int,
                 quads: Optional[Dict[str, Sequence[str]]] = None,
                 loops: Optional[Dict[str, List[LoopStep]]] = None,
                 generators: Sequence[str] = ("A", "B"), peripheral: str = "ABab"):
        self.triangles = [tuple(t) for t in triangles]
        self.genus = genus
        self.punctures = punctures
        self.quads = {k: tuple(v) for k, v in (quads or {}).items()}
        self.loops = dict(loops or {})
        self.generators = tuple(generators)
        self.peripheral = peripheral
        self._sides = self._pair_sides()
        self._check_topology()

    @property
    def edges(self) -> List[str]:
        return sorted(self._sides)

    def _pair_sides(self) -> Dict[str, List[Tuple[int, int]]]:
        sides: Dict[str, List[Tuple[int, int]]] = {}
        for t, tri in enumerate(self.triangles):
            if len(tri) != 3:
                raise MeshError(f"triangle {t} must have three sides")
            for i, label in enumerate(tri):
                sides.setdefault(label, []).append((t, i))
        for label, occ in sides.items():
            if len(occ) != 2:
                raise MeshError(f"edge {label!r} occurs {len(occ)} times, expected 2")
        return sides

    def _check_topology(self):
        graph = nx.Graph()
        for t in range(len(self.triangles)):
            graph.add_nodes_from((t, i) for i in range(3))
        for (t, i), (u, j) in self._sides.values():
            # orientation-reversing identification of sides
            graph.add_edge((t, i), (u, (j + 1) % 3))
            graph.add_edge((t, (i + 1) % 3), (u, j))
        vertices = nx.number_connected_components(graph)
        euler = vertices - len(self._sides) + len(self.triangles)
        if vertices != self.punctures or euler != 2 - 2 * self.genus:
            raise MeshError(f"surface has {vertices} punctures and Euler characteristic {euler}, "
                            f"declared genus {self.genus} with {self.punctures} punctures")

    def other_side(self, triangle: int, side: int) -> Tuple[int, int]:
        first, second = self._sides[self.triangles[triangle][side]]
        return second if first == (triangle, side) else first

    def check_loop(self, steps: List[LoopStep]):
        if not steps:
            raise MeshError("empty loop")
        for k, step in enumerate(steps):
            nxt = steps[(k + 1) % len(steps)]
            if self.other_side(step.triangle, step.exit) != (nxt.triangle, nxt.enter):
                raise MeshError(f"loop step {k} does not continue into step {k + 1}")

    def exit_edge(self, step: LoopStep) -> str:
        return self.triangles[step.triangle][step.exit]

    def to_dict(self) -> Dict:
        return {
            "genus": self.genus,
            "punctures": self.punctures,
            "triangles": [list(t) for t in self.triangles],
            "generators": list(self.generators),
            "peripheral": self.peripheral,
            "quads": {k: list(v) for k, v in self.quads.items()},
            "loops": {name: [[s.triangle, s.enter, s.turn] for s in steps] for name, steps in self.loops.items()},
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "SurfaceMesh":
        try:
            loops = {name: [LoopStep(*s) for s in steps] for name, steps in data.get("loops", {}).items()}
            return cls(data["triangles"], int(data["genus"]), int(data["punctures"]),
                       data.get("quads"), loops, data.get("generators", ("A", "B")),
                       data.get("peripheral", "ABab"))
        except (KeyError, TypeError, ValueError) as e:
            raise MeshError(f"malformed surface document: {e}") from e

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SurfaceMesh":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


class SurfaceCocycle:
    """
    Holonomy of a surface cocycle on the free generators, decorated by a fixed
    point of the peripheral element. Ideal vertices of the universal cover are
    the images of that point.
    """

    def __init__(self, generators: Dict[str, Psl2], point: complex, peripheral: str = "ABab"):
        self.generators = dict(generators)
        self.point = complex(point)
        self.peripheral = peripheral

    @classmethod
    def decorate(cls, generators: Dict[str, Psl2], peripheral: str = "ABab", sheet: int = 0) -> "SurfaceCocycle":
        rep = cls(generators, 0j, peripheral)
        rep.point = rep.word(peripheral).fixed_points()[sheet]
        return rep

    def word(self, letters: str) -> Psl2:
        """Product of generators, lowercase letters standing for inverses"""
        result = Psl2.identity()
        for letter in letters:
            g = self.generators.get(letter.upper())
            if g is None:
                raise DomainError(f"unknown generator {letter!r}")
            result = result @ (g if letter.isupper() else g.inverse())
        return result

    def conjugated(self, g: Psl2) -> "SurfaceCocycle":
        return SurfaceCocycle({k: g @ v @ g.inverse() for k, v in self.generators.items()},
                              g.mobius(self.point), self.peripheral)

    def ideal_point(self, letters: str) -> complex:
        return self.word(letters).mobius(self.point)


def w_minus(s: SurfaceMesh, z: SurfaceCocycle, e: str) -> complex:
    """(-)-exponential parameter of edge e: the inverse shear of its quadrilateral"""
    if e not in s.quads:
        raise MeshError(f"no quadrilateral recorded for edge {e!r}")
    r, p, q, far = (z.ideal_point(w) for w in s.quads[e])
    points = [r, p, q, far]
    if any(np.isinf(u) for u in points):
        raise NotIdealizableError(f"quadrilateral of edge {e!r} has a point at infinity")
    _check_distinct(points)
    shear = -(far - p) * (r - q) / ((far - q) * (r - p))
    return complex(1 / shear)


def surface_parameters(s: SurfaceMesh, z: SurfaceCocycle) -> Dict[str, complex]:
    return {e: w_minus(s, z, e) for e in s.edges}


def holonomy_from_parameters(s: SurfaceMesh, params: Dict[str, complex],
                             loop: Union[str, List[LoopStep]]) -> Psl2:
    """
    Ordered product of turn . gamma(e) along a transverse loop, e the edge
    through which each step leaves its triangle.

    The result is the holonomy in the frame of the first step, so loops that
    start with the same triangle and side multiply like their concatenation.
    """
    steps = s.loops[loop] if isinstance(loop, str) else loop
    s.check_loop(steps)
    result = Psl2.identity()
    for step in steps:
        turn = TURN_LEFT if step.turn == "left" else TURN_RIGHT
        result = result @ turn @ gamma_matrix(params[s.exit_edge(step)])
    return result


def puncture_trace(s: SurfaceMesh, params: Dict[str, complex]) -> complex:
    """Trace of the loop around the puncture, when the surface records one"""
    if "puncture" not in s.loops:
        raise MeshError("surface records no puncture loop")
    return holonomy_from_parameters(s, params, "puncture").trace()


def commutator(a: Psl2, b: Psl2) -> Psl2:
    return a @ b @ a.inverse() @ b.inverse()


def trace_invariants(a: Psl2, b: Psl2) -> Tuple[complex, complex, complex, complex]:
    """(tr^2 A, tr^2 B, tr^2 AB, tr^2 [A,B]); insensitive to the PSL sign"""
    return (a.trace() ** 2, b.trace() ** 2, (a @ b).trace() ** 2, commutator(a, b).trace() ** 2)
