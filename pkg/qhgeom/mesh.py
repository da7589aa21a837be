"""Branched triangulations with face gluings, edge classes and vertex links"""

import json
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from . import config
from .errors import MeshError, QHGError, UndecoratedMeshError
from .specialfn import level, principal_log
from .tetra import (ALL_EDGES, FlatChargedTet, edge_index, face_vertices,
                    log_branch, moduli_from_w0, permutation_sign, w_prime)

logger = logging.getLogger(__name__)

EdgeKey = Tuple[int, Tuple[int, int]]


class Gluing:
    """Face tet_a:face_a glued to tet_b:face_b; perm lists the images of face_a's vertices"""

    def __init__(self, tet_a: int, face_a: int, tet_b: int, face_b: int, perm: Sequence[int]):
        self.tet_a = int(tet_a)
        self.face_a = int(face_a)
        self.tet_b = int(tet_b)
        self.face_b = int(face_b)
        self.perm = tuple(int(p) for p in perm)

    def vertex_map(self) -> Dict[int, int]:
        return dict(zip(face_vertices(self.face_a), self.perm))

    def inverse(self) -> "Gluing":
        back = {v: u for u, v in self.vertex_map().items()}
        return Gluing(self.tet_b, self.face_b, self.tet_a, self.face_a,
                      [back[v] for v in face_vertices(self.face_b)])

    def to_list(self) -> list:
        return [self.tet_a, self.face_a, self.tet_b, self.face_b, list(self.perm)]

    def __repr__(self) -> str:
        return f"Gluing({self.tet_a}:{self.face_a} -> {self.tet_b}:{self.face_b} {self.perm})"


class EdgeClass:
    """Orbit of abstract tetrahedron edges under the gluings"""

    def __init__(self, index: int, members: List[EdgeKey], boundary: bool):
        self.index = index
        self.members = sorted(members)
        self.boundary = boundary

    @property
    def representative(self) -> EdgeKey:
        return self.members[0]

    @property
    def degree(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        tet, (a, b) = self.representative
        kind = "boundary" if self.boundary else "interior"
        return f"EdgeClass({self.index}: {tet}[{a}{b}], degree {self.degree}, {kind})"


class VertexClass:
    """Orbit of tetrahedron corners together with its link surface"""

    MANIFOLD = "manifold"
    TOROIDAL = "toroidal"
    OTHER = "other"
    BOUNDARY = "boundary"

    def __init__(self, index: int, members: List[Tuple[int, int]], euler: int, closed: bool):
        self.index = index
        self.members = sorted(members)
        self.euler = euler
        self.closed = closed

    @property
    def kind(self) -> str:
        if not self.closed:
            return self.BOUNDARY
        if self.euler == 2:
            return self.MANIFOLD
        if self.euler == 0:
            return self.TOROIDAL
        return self.OTHER

    @property
    def genus(self) -> Optional[int]:
        if not self.closed:
            return None
        return (2 - self.euler) // 2

    @property
    def is_disk(self) -> bool:
        return not self.closed and self.euler == 1

    def to_dict(self) -> Dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "euler": self.euler,
            "genus": self.genus,
            "corners": [list(c) for c in self.members],
        }


class NormalStep:
    """One corner crossing: in tet, around vertex, from face enter to face exit"""

    def __init__(self, tet: int, vertex: int, enter: int, exit: int):
        self.tet = int(tet)
        self.vertex = int(vertex)
        self.enter = int(enter)
        self.exit = int(exit)

    def corner_edge(self) -> Tuple[int, int]:
        """(v, w): the edge shared by both faces, starting at the selected vertex"""
        other = [u for u in range(4) if u not in (self.enter, self.exit, self.vertex)]
        return self.vertex, other[0]

    def sign(self) -> int:
        v, w = self.corner_edge()
        return permutation_sign((v, w, self.exit, self.enter))

    def to_list(self) -> list:
        return [self.tet, self.vertex, self.enter, self.exit]


class NormalPath:
    """Closed normal path on the vertex links"""

    def __init__(self, steps: Iterable[Union[NormalStep, Sequence[int]]], name: str = ""):
        self.steps = [s if isinstance(s, NormalStep) else NormalStep(*s) for s in steps]
        self.name = name

    def __len__(self) -> int:
        return len(self.steps)

    def reversed(self) -> "NormalPath":
        return NormalPath([NormalStep(s.tet, s.vertex, s.exit, s.enter) for s in reversed(self.steps)],
                          self.name)

    def to_list(self) -> list:
        return [s.to_list() for s in self.steps]


class ValidationReport:
    """Per-edge residuals and the list of violations of one validation"""

    def __init__(self, kind: str):
        self.kind = kind
        self.residuals: Dict[int, object] = {}
        self.violations: List[Dict] = []

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, edge: int, residual, violated: bool, detail: str = ""):
        self.residuals[edge] = residual
        if violated:
            self.violations.append({"edge": edge, "residual": _jsonable(residual), "detail": detail})

    def to_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "ok": self.ok,
            "residuals": {str(k): _jsonable(v) for k, v in self.residuals.items()},
            "violations": self.violations,
        }


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


class Mesh:
    """
    Singular branched triangulation of a 3-pseudomanifold.

    Tetrahedra are glued face to face by order-preserving, orientation-reversing
    maps. Edge classes, face classes and vertex classes are derived once at
    construction; the mesh itself is never mutated.
    """

    def __init__(self, tets: List[FlatChargedTet], gluings: List[Gluing],
                 hamiltonian: Iterable[EdgeKey] = (), paths: Optional[Dict[str, NormalPath]] = None):
        self.tets = list(tets)
        self.gluings = list(gluings)
        self.paths = dict(paths or {})
        self._glued: Dict[Tuple[int, int], Gluing] = {}
        self._check_gluings()
        self.edge_classes = self._derive_edge_classes()
        self._edge_lookup = {key: ec.index for ec in self.edge_classes for key in ec.members}
        self.vertex_classes = self._derive_vertex_classes()
        self.hamiltonian = frozenset(self.edge_class_of(t, a, b).index for t, (a, b) in hamiltonian)

    # ── Gluings ──────────────────────────────────────────────────────────────
    def _check_gluings(self):
        n = len(self.tets)
        for g in self.gluings:
            for tet, face in ((g.tet_a, g.face_a), (g.tet_b, g.face_b)):
                if not (0 <= tet < n and 0 <= face < 4):
                    raise MeshError(f"{g}: face {tet}:{face} does not exist")
                if (tet, face) in self._glued:
                    raise MeshError(f"{g}: face {tet}:{face} is glued twice")
            if (g.tet_a, g.face_a) == (g.tet_b, g.face_b):
                raise MeshError(f"{g}: a face cannot be glued to itself")
            if sorted(g.perm) != list(face_vertices(g.face_b)):
                raise MeshError(f"{g}: vertex correspondence does not land on face {g.face_b}")
            if list(g.perm) != sorted(g.perm):
                raise MeshError(f"{g}: gluing does not match the branchings")
            sign_a = self.tets[g.tet_a].b_sign * (-1) ** g.face_a
            sign_b = self.tets[g.tet_b].b_sign * (-1) ** g.face_b
            if sign_a != -sign_b:
                raise MeshError(f"{g}: gluing is not orientation-reversing")
            self._glued[(g.tet_a, g.face_a)] = g
            self._glued[(g.tet_b, g.face_b)] = g.inverse()

    def glued(self, tet: int, face: int) -> Optional[Gluing]:
        """The gluing leaving face tet:face, oriented from that face, or None"""
        return self._glued.get((tet, face))

    @property
    def boundary_faces(self) -> List[Tuple[int, int]]:
        return [(t, f) for t in range(len(self.tets)) for f in range(4) if (t, f) not in self._glued]

    @property
    def face_classes(self) -> List[Tuple[Tuple[int, int], ...]]:
        """Glued pairs and single boundary faces, in canonical order"""
        classes = []
        for t in range(len(self.tets)):
            for f in range(4):
                g = self._glued.get((t, f))
                if g is None:
                    classes.append(((t, f),))
                elif (t, f) < (g.tet_b, g.face_b):
                    classes.append(((t, f), (g.tet_b, g.face_b)))
        return classes

    # ── Derived classes ──────────────────────────────────────────────────────
    def _derive_edge_classes(self) -> List[EdgeClass]:
        graph = nx.Graph()
        for t in range(len(self.tets)):
            graph.add_nodes_from((t, e) for e in ALL_EDGES)
        for g in self.gluings:
            vmap = g.vertex_map()
            verts = face_vertices(g.face_a)
            for i, a in enumerate(verts):
                for b in verts[i + 1:]:
                    image = tuple(sorted((vmap[a], vmap[b])))
                    graph.add_edge((g.tet_a, (a, b)), (g.tet_b, image))

        boundary = set(self.boundary_faces)
        orbits = sorted(sorted(c) for c in nx.connected_components(graph))
        classes = []
        for index, members in enumerate(orbits):
            on_boundary = any((t, f) in boundary for t, (a, b) in members for f in range(4) if f not in (a, b))
            classes.append(EdgeClass(index, members, on_boundary))
        return classes

    def _derive_vertex_classes(self) -> List[VertexClass]:
        corners = nx.Graph()
        ends = nx.Graph()
        face_corners = nx.Graph()
        for t in range(len(self.tets)):
            for v in range(4):
                corners.add_node((t, v))
                ends.add_nodes_from((t, v, w) for w in range(4) if w != v)
                face_corners.add_nodes_from((t, f, v) for f in range(4) if f != v)
        for g in self.gluings:
            vmap = g.vertex_map()
            for a, b in vmap.items():
                corners.add_edge((g.tet_a, a), (g.tet_b, b))
                face_corners.add_edge((g.tet_a, g.face_a, a), (g.tet_b, g.face_b, b))
                for c, d in vmap.items():
                    if c != a:
                        ends.add_edge((g.tet_a, a, c), (g.tet_b, b, d))

        orbits = sorted(sorted(c) for c in nx.connected_components(corners))
        owner = {corner: i for i, orbit in enumerate(orbits) for corner in orbit}
        n_vertices = [0] * len(orbits)
        n_edges = [0] * len(orbits)
        closed = [True] * len(orbits)
        for comp in nx.connected_components(ends):
            t, v, _ = next(iter(comp))
            n_vertices[owner[(t, v)]] += 1
        for comp in nx.connected_components(face_corners):
            t, _, v = next(iter(comp))
            n_edges[owner[(t, v)]] += 1
            if len(comp) == 1:
                closed[owner[(t, v)]] = False

        classes = []
        for i, orbit in enumerate(orbits):
            euler = n_vertices[i] - n_edges[i] + len(orbit)
            classes.append(VertexClass(i, orbit, euler, closed[i]))
        return classes

    def edge_class_of(self, tet: int, a: int, b: int) -> EdgeClass:
        key = (int(tet), tuple(sorted((int(a), int(b)))))
        if key not in self._edge_lookup:
            raise MeshError(f"no edge {tet}[{a}{b}] in mesh")
        return self.edge_classes[self._edge_lookup[key]]

    @property
    def interior_edges(self) -> List[EdgeClass]:
        return [ec for ec in self.edge_classes if not ec.boundary]

    def vertex_counts(self) -> Tuple[int, int]:
        """(v_I, v_delta): manifold vertices inside and on the boundary"""
        v_inner = sum(1 for vc in self.vertex_classes if vc.kind == VertexClass.MANIFOLD)
        v_boundary = sum(1 for vc in self.vertex_classes if vc.is_disk)
        return v_inner, v_boundary

    # ── Decorations ──────────────────────────────────────────────────────────
    @property
    def is_flattened(self) -> bool:
        return all(t.f is not None for t in self.tets)

    @property
    def is_charged(self) -> bool:
        return all(t.c is not None for t in self.tets)

    def with_decorations(self, f: Optional[Sequence[Sequence[int]]] = None,
                         c: Optional[Sequence[Sequence[int]]] = None) -> "Mesh":
        tets = []
        for i, t in enumerate(self.tets):
            tets.append(t.with_decorations(None if f is None else f[i], None if c is None else c[i]))
        return self.with_tets(tets)

    def with_tets(self, tets: List[FlatChargedTet]) -> "Mesh":
        ham = [self.edge_classes[i].representative for i in sorted(self.hamiltonian)]
        return Mesh(tets, self.gluings, ham, self.paths)

    def flattenings(self) -> List[Tuple[int, int, int]]:
        if not self.is_flattened:
            raise UndecoratedMeshError("mesh has tetrahedra without flattening")
        return [t.f for t in self.tets]

    def charges(self) -> List[Tuple[int, int, int]]:
        if not self.is_charged:
            raise UndecoratedMeshError("mesh has tetrahedra without charge")
        return [t.c for t in self.tets]

    # ── Serialization ────────────────────────────────────────────────────────
    def to_dict(self) -> Dict:
        data = {
            "n_tets": len(self.tets),
            "gluings": [g.to_list() for g in self.gluings],
            "moduli": [[t.w.w0.real, t.w.w0.imag] for t in self.tets],
            "orientations": [t.b_sign for t in self.tets],
        }
        if any(t.vertices != (0, 1, 2, 3) for t in self.tets):
            data["vertex_labels"] = [list(t.vertices) for t in self.tets]
        if self.is_flattened:
            data["flattenings"] = [list(t.f) for t in self.tets]
        if self.is_charged:
            data["charges"] = [list(t.c) for t in self.tets]
        if self.hamiltonian:
            data["hamiltonian_edges"] = [
                [self.edge_classes[i].representative[0], *self.edge_classes[i].representative[1]]
                for i in sorted(self.hamiltonian)
            ]
        if self.paths:
            data["paths"] = {name: p.to_list() for name, p in self.paths.items()}
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "Mesh":
        try:
            n = int(data["n_tets"])
            moduli = data["moduli"]
            orientations = data.get("orientations", [1] * n)
            flats = data.get("flattenings")
            charges = data.get("charges")
            labels = data.get("vertex_labels", [(0, 1, 2, 3)] * n)
            if len(moduli) != n or len(orientations) != n:
                raise MeshError("moduli and orientations must list one entry per tetrahedron")
            tets = [
                FlatChargedTet(
                    moduli_from_w0(complex(*moduli[i])),
                    b_sign=orientations[i],
                    f=None if flats is None else flats[i],
                    c=None if charges is None else charges[i],
                    vertices=labels[i],
                )
                for i in range(n)
            ]
            gluings = [Gluing(*g) for g in data.get("gluings", [])]
            ham = [(t, (a, b)) for t, a, b in data.get("hamiltonian_edges", [])]
            paths = {name: NormalPath(steps, name) for name, steps in data.get("paths", {}).items()}
        except QHGError:
            raise
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise MeshError(f"malformed mesh document: {e}") from e
        return cls(tets, gluings, ham, paths)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Mesh":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path: Union[str, Path]):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)

    def __repr__(self) -> str:
        return (f"Mesh({len(self.tets)} tets, {len(self.gluings)} gluings, "
                f"{len(self.edge_classes)} edges, {len(self.vertex_classes)} vertices)")


def _as_class(m: Mesh, e: Union[EdgeClass, int]) -> EdgeClass:
    return e if isinstance(e, EdgeClass) else m.edge_classes[int(e)]


# ── Edge totals ──────────────────────────────────────────────────────────────
def edge_total_modulus(m: Mesh, e: Union[EdgeClass, int]) -> complex:
    """W(e) = prod w(h)^{*_b} over the edge orbit"""
    total = 1 + 0j
    for tet, (a, b) in _as_class(m, e).members:
        t = m.tets[tet]
        total *= t.w[edge_index(a, b)] ** t.b_sign
    return total


def edge_total_log_branch(m: Mesh, e: Union[EdgeClass, int]) -> complex:
    """L(e) = sum *_b l(h)"""
    total = 0j
    for tet, (a, b) in _as_class(m, e).members:
        t = m.tets[tet]
        if t.f is None:
            raise UndecoratedMeshError(f"tetrahedron {tet} has no flattening")
        total += t.b_sign * log_branch(t)[edge_index(a, b)]
    return total


def edge_total_charge(m: Mesh, e: Union[EdgeClass, int]) -> int:
    """C(e) = sum c(h)"""
    total = 0
    for tet, (a, b) in _as_class(m, e).members:
        t = m.tets[tet]
        if t.c is None:
            raise UndecoratedMeshError(f"tetrahedron {tet} has no charge")
        total += t.c[edge_index(a, b)]
    return total


def quantum_edge_product(m: Mesh, e: Union[EdgeClass, int], N) -> complex:
    """prod w'(h)^{*_b} over the edge orbit"""
    total = 1 + 0j
    for tet, (a, b) in _as_class(m, e).members:
        t = m.tets[tet]
        total *= w_prime(t, N)[edge_index(a, b)] ** t.b_sign
    return total


def expected_charge(m: Mesh, e: Union[EdgeClass, int]) -> int:
    return 0 if _as_class(m, e).index in m.hamiltonian else 2


# ── Vertices ─────────────────────────────────────────────────────────────────
def classify_vertices(m: Mesh) -> List[VertexClass]:
    """Vertex classes with their link type (manifold, toroidal, other, boundary)"""
    for vc in m.vertex_classes:
        logger.debug(f"vertex {vc.index}: {vc.kind}, link euler characteristic {vc.euler}")
    return list(m.vertex_classes)


# ── Validation ───────────────────────────────────────────────────────────────
def validate_I(m: Mesh, tol: float = config.VALIDATION_TOL) -> ValidationReport:
    """Edge compatibility W(e) = 1 at every interior edge"""
    report = ValidationReport("I")
    for ec in m.interior_edges:
        residual = abs(edge_total_modulus(m, ec) - 1)
        report.add(ec.index, residual, residual > tol, "W(e) != 1")
    return report


def validate_flattened(m: Mesh, tol: float = config.VALIDATION_TOL) -> ValidationReport:
    """L(e) = 0 at every interior edge"""
    report = ValidationReport("flattened")
    if not m.is_flattened:
        report.violations.append({"edge": None, "residual": None, "detail": "missing flattenings"})
        return report
    for ec in m.interior_edges:
        residual = abs(edge_total_log_branch(m, ec))
        report.add(ec.index, residual, residual > tol, "L(e) != 0")
    return report


def validate_charged(m: Mesh) -> ValidationReport:
    """C(e) = 0 on Hamiltonian edges and 2 on the other interior edges"""
    report = ValidationReport("charged")
    if not m.is_charged:
        report.violations.append({"edge": None, "residual": None, "detail": "missing charges"})
        return report
    for ec in m.interior_edges:
        expected = expected_charge(m, ec)
        total = edge_total_charge(m, ec)
        report.add(ec.index, total - expected, total != expected, f"C(e) != {expected}")
    return report


def validate_quantum(m: Mesh, N, tol: float = config.VALIDATION_TOL) -> ValidationReport:
    """
    Level-N quantum moduli: w'_0 w'_1 w'_2 = exp(-*_b i pi/N) in every
    tetrahedron, and the signed edge product is 1 on Hamiltonian edges and
    exp(-2 i pi/N) on the other interior edges.
    """
    lv = level(N)
    report = ValidationReport("quantum")
    if not (m.is_flattened and m.is_charged):
        report.violations.append({"edge": None, "residual": None, "detail": "missing decorations"})
        return report
    for i, t in enumerate(m.tets):
        product = np.prod(w_prime(t, lv))
        residual = abs(product - np.exp(-t.b_sign * 1j * np.pi / lv.n))
        if residual > tol:
            report.violations.append({"edge": None, "tet": i, "residual": residual,
                                      "detail": "w' product per tetrahedron"})
    for ec in m.interior_edges:
        target = 1.0 if ec.index in m.hamiltonian else np.exp(-2j * np.pi / lv.n)
        residual = abs(quantum_edge_product(m, ec, lv) - target)
        report.add(ec.index, residual, residual > tol, "w' product around edge")
    return report


# ── Normal paths ─────────────────────────────────────────────────────────────
def check_path(m: Mesh, p: NormalPath):
    """Raise MeshError unless p is a closed normal path of m"""
    if not p.steps:
        raise MeshError("empty normal path")
    for k, step in enumerate(p.steps):
        if not 0 <= step.tet < len(m.tets):
            raise MeshError(f"step {k}: no tetrahedron {step.tet}")
        if step.enter == step.exit:
            raise MeshError(f"step {k}: path enters and exits through face {step.enter}")
        if step.vertex in (step.enter, step.exit) or not all(0 <= x < 4 for x in step.to_list()[1:]):
            raise MeshError(f"step {k}: vertex {step.vertex} is not on faces {step.enter}, {step.exit}")
        g = m.glued(step.tet, step.exit)
        if g is None:
            raise MeshError(f"step {k}: face {step.tet}:{step.exit} is on the boundary")
        nxt = p.steps[(k + 1) % len(p.steps)]
        if (nxt.tet, nxt.enter, nxt.vertex) != (g.tet_b, g.face_b, g.vertex_map()[step.vertex]):
            raise MeshError(f"step {k}: path is not continuous through {g}")


def path_weight(m: Mesh, p: NormalPath, kind: str = "flattening"):
    """
    Weight of a closed normal path.

    Each step turns around its corner edge {v, w}; the step sign is the sign
    of the permutation (v, w, exit, enter). kind is "flattening" (log-branches),
    "log-derivative" (logs of the moduli) or "charge" (charges, signed by *_b).
    """
    check_path(m, p)
    total = 0j if kind != "charge" else 0
    for step in p.steps:
        t = m.tets[step.tet]
        j = edge_index(*step.corner_edge())
        sign = step.sign()
        if kind == "flattening":
            if t.f is None:
                raise UndecoratedMeshError(f"tetrahedron {step.tet} has no flattening")
            total += sign * log_branch(t)[j]
        elif kind == "log-derivative":
            total += sign * principal_log(t.w[j])
        elif kind == "charge":
            if t.c is None:
                raise UndecoratedMeshError(f"tetrahedron {step.tet} has no charge")
            total += t.b_sign * sign * t.c[j]
        else:
            raise MeshError(f"unknown path weight kind {kind!r}")
    return total


def path_coefficients(m: Mesh, p: NormalPath, kind: str = "flattening") -> np.ndarray:
    """Integer coefficients of the weight in the per-tetrahedron triples"""
    check_path(m, p)
    coeffs = np.zeros(3 * len(m.tets), dtype=int)
    for step in p.steps:
        j = edge_index(*step.corner_edge())
        sign = step.sign()
        if kind == "charge":
            sign *= m.tets[step.tet].b_sign
        coeffs[3 * step.tet + j] += sign
    return coeffs


def link_vertex_loop(m: Mesh, tet: int, v: int, w: int) -> NormalPath:
    """Small loop on the link of v circling the end of edge [vw]"""
    x, y = [u for u in range(4) if u not in (v, w)]
    steps = []
    cur = (tet, v, w, y, x)  # tet, vertex, other end, enter, exit
    for _ in range(4 * len(m.tets) + 1):
        t, a, b, enter, exit_ = cur
        steps.append(NormalStep(t, a, enter, exit_))
        g = m.glued(t, exit_)
        if g is None:
            raise MeshError(f"edge {tet}[{v}{w}] reaches the boundary")
        vmap = g.vertex_map()
        a2, b2 = vmap[a], vmap[b]
        enter2 = g.face_b
        exit2 = [u for u in range(4) if u not in (a2, b2, enter2)][0]
        cur = (g.tet_b, a2, b2, enter2, exit2)
        if cur == (tet, v, w, y, x):
            return NormalPath(steps, f"loop {tet}[{v}{w}]")
    raise MeshError(f"loop around {tet}[{v}{w}] does not close")


# ── Builders ─────────────────────────────────────────────────────────────────
def single_tet(w0: complex, b_sign: int = 1) -> Mesh:
    return Mesh([FlatChargedTet(moduli_from_w0(w0), b_sign)], [])


def doubled_tet(w0: complex, f: Optional[Sequence[int]] = None,
                c_plus: Optional[Sequence[int]] = None,
                c_minus: Optional[Sequence[int]] = None) -> Mesh:
    """
    Two copies of one tetrahedron with opposite branching orientations glued
    face to face by the identity: a triangulated 3-sphere with four vertices.
    The Hamiltonian cycle 0-1-2-3-0 makes the charge system solvable.
    """
    w = moduli_from_w0(w0)
    tets = [FlatChargedTet(w, 1, f, c_plus), FlatChargedTet(w, -1, f, c_minus)]
    gluings = [Gluing(0, face, 1, face, face_vertices(face)) for face in range(4)]
    ham = [(0, (0, 1)), (0, (1, 2)), (0, (2, 3)), (0, (0, 3))]
    return Mesh(tets, gluings, ham)
