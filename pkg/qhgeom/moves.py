"""2-3 and bubble transits, and the pentagon identity harness"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from . import config
from .errors import DomainError, InfeasibleSystemError, SingularInputError
from .latsolve import solve_charge, solve_flattening
from .mesh import (Gluing, Mesh, ValidationReport, edge_total_charge,
                   edge_total_log_branch, edge_total_modulus)
from .specialfn import level
from .statesum import PhaseWitness, eq_mod_n, trace_tensor
from .tetra import FlatChargedTet, face_vertices, moduli_from_w0, w_prime

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]
Triple = Tuple[int, int, int]

# Vertices 0..4 of the bipyramid; the tetrahedron omitting vertex a is listed
# under a. The central edge of the three-tetrahedron side joins 1 and 3.
TWO_SIDE = (1, 3)
THREE_SIDE = (0, 2, 4)
CENTRAL_EDGE = (1, 3)


class TransitResult:
    """Both sides of a transit with the correspondence of their common edges"""

    def __init__(self, before: Mesh, after: Mesh, edge_map: Dict[Pair, Tuple[int, int]],
                 new_edges: List[Pair]):
        self.before = before
        self.after = after
        self.edge_map = edge_map
        self.new_edges = new_edges

    def __repr__(self) -> str:
        return f"TransitResult({len(self.before.tets)} -> {len(self.after.tets)} tets, new edges {self.new_edges})"


def _is_degenerate(u: complex, guard: float = 1e-12) -> bool:
    return not np.isfinite(u) or abs(u) < guard or abs(u - 1) < guard


def two_three_moduli(x: complex, y: complex) -> Tuple[complex, complex, complex]:
    """Moduli of the remaining three tetrahedra from the first two, x and y"""
    x, y = complex(x), complex(y)
    if _is_degenerate(x) or _is_degenerate(y):
        raise DomainError(f"degenerate transit input x={x}, y={y}")
    moduli = (y / x, y * (1 - x) / (x * (1 - y)), (1 - x) / (1 - y))
    for u in moduli:
        if _is_degenerate(u):
            raise DomainError(f"degenerate transit modulus {u} from x={x}, y={y}")
    return moduli


# ── Labelled fragments ───────────────────────────────────────────────────────
def _glue_by_labels(tets: List[FlatChargedTet], a: int, face_a: int, b: int, face_b: int) -> Gluing:
    va, vb = tets[a].vertices, tets[b].vertices
    perm = [vb.index(va[v]) for v in face_vertices(face_a)]
    return Gluing(a, face_a, b, face_b, perm)


def _omit(a: int) -> Tuple[int, ...]:
    return tuple(v for v in range(5) if v != a)


def edge_labels(m: Mesh) -> Dict[int, Pair]:
    """Global vertex labels of every edge class"""
    labels = {}
    for ec in m.edge_classes:
        tet, (a, b) = ec.representative
        verts = m.tets[tet].vertices
        labels[ec.index] = tuple(sorted((verts[a], verts[b])))
    return labels


def face_label(m: Mesh, tet: int, face: int) -> Triple:
    verts = m.tets[tet].vertices
    return tuple(sorted(verts[v] for v in face_vertices(face)))


def pentagon_configuration(x: complex, y: complex) -> Tuple[Mesh, Mesh]:
    """Undecorated two-tetrahedron and three-tetrahedron sides of a 2-3 move"""
    u2, u3, u4 = two_three_moduli(x, y)
    moduli = {0: x, 1: y, 2: u2, 3: u3, 4: u4}

    two = [FlatChargedTet(moduli_from_w0(moduli[a]), 1, vertices=_omit(a)) for a in TWO_SIDE]
    # shared face {0,2,4}
    two_mesh = Mesh(two, [_glue_by_labels(two, 0, 2, 1, 1)])

    three = [FlatChargedTet(moduli_from_w0(moduli[a]), 1, vertices=_omit(a)) for a in THREE_SIDE]
    three_gluings = [
        _glue_by_labels(three, 1, 3, 2, 2),  # {0,1,3}
        _glue_by_labels(three, 0, 3, 2, 0),  # {1,2,3}
        _glue_by_labels(three, 0, 1, 1, 0),  # {1,3,4}
    ]
    return two_mesh, Mesh(three, three_gluings)


def _solve_with_targets(target: Mesh, source: Mesh) -> Mesh:
    """Decorate target so that its edges shared with source carry the same totals"""
    source_labels = {v: k for k, v in edge_labels(source).items()}
    f_targets, c_targets = {}, {}
    for index, pair in edge_labels(target).items():
        if pair in source_labels:
            f_targets[index] = edge_total_log_branch(source, source_labels[pair])
            c_targets[index] = edge_total_charge(source, source_labels[pair])
    f = solve_flattening(target, edge_targets=f_targets)
    c = solve_charge(target, edge_targets=c_targets)
    if f is None or c is None:
        raise InfeasibleSystemError("transit constraint system has no solution")
    return target.with_decorations(f=f.values, c=c.values)


def _edge_map(before: Mesh, after: Mesh) -> Tuple[Dict[Pair, Tuple[int, int]], List[Pair]]:
    b_labels = {v: k for k, v in edge_labels(before).items()}
    mapping, new = {}, []
    for index, pair in sorted(edge_labels(after).items(), key=lambda kv: kv[1]):
        if pair in b_labels:
            mapping[pair] = (b_labels[pair], index)
        else:
            new.append(pair)
    return mapping, new


def _check_preserved(result: TransitResult, tol: float):
    for pair, (i, j) in result.edge_map.items():
        before, after = result.before, result.after
        if abs(edge_total_modulus(before, i) - edge_total_modulus(after, j)) > tol * max(1.0, abs(edge_total_modulus(before, i))):
            raise InfeasibleSystemError(f"total modulus changes at edge {pair}")
        if abs(edge_total_log_branch(before, i) - edge_total_log_branch(after, j)) > tol:
            raise InfeasibleSystemError(f"total log-branch changes at edge {pair}")
        if edge_total_charge(before, i) != edge_total_charge(after, j):
            raise InfeasibleSystemError(f"total charge changes at edge {pair}")


def two_three_transit(two_side: Mesh, tol: float = config.VALIDATION_TOL) -> TransitResult:
    """
    Replace the decorated two-tetrahedron side by the three-tetrahedron side
    with equal totals on the nine common edges and W=1, L=0, C=2 on the new
    central edge.
    """
    y = two_side.tets[0].w.w0
    u3 = two_side.tets[1].w.w0
    x = y / (u3 * (1 - y) + y)
    _, three = pentagon_configuration(x, y)
    three = _solve_with_targets(three, two_side)

    edge_map, new = _edge_map(two_side, three)
    result = TransitResult(two_side, three, edge_map, new)
    _check_preserved(result, tol)
    central = {v: k for k, v in edge_labels(three).items()}[CENTRAL_EDGE]
    if (abs(edge_total_modulus(three, central) - 1) > tol
            or abs(edge_total_log_branch(three, central)) > tol
            or edge_total_charge(three, central) != 2):
        raise InfeasibleSystemError("central edge violates W=1, L=0, C=2")
    logger.debug(f"2-3 transit at x={x:.6g}, y={y:.6g}: {three.flattenings()} / {three.charges()}")
    return result


def three_two_transit(three_side: Mesh, tol: float = config.VALIDATION_TOL) -> TransitResult:
    """Inverse transit: decorate the two-tetrahedron side from the three-tetrahedron side"""
    x = three_side.tets[0].w.w0
    u2 = three_side.tets[1].w.w0
    two, _ = pentagon_configuration(x, u2 * x)
    two = _solve_with_targets(two, three_side)
    edge_map, _ = _edge_map(two, three_side)
    result = TransitResult(three_side, two, {p: (j, i) for p, (i, j) in edge_map.items()}, [])
    _check_preserved(result, tol)
    return result


def decorate_two_side(two_side: Mesh) -> Mesh:
    f = solve_flattening(two_side)
    c = solve_charge(two_side)
    if f is None or c is None:
        raise InfeasibleSystemError("two-tetrahedron side cannot be decorated")
    return two_side.with_decorations(f=f.values, c=c.values)


# ── Bubble ───────────────────────────────────────────────────────────────────
def bubble_pair(w_outer: complex = 0.3 + 0.8j, w_bubble: complex = -0.4 + 1.1j,
                c_bubble: Tuple[Triple, Triple] = ((1, 0, 0), (1, 0, 0))) -> Tuple[Mesh, Mesh, Pair]:
    """
    A tetrahedron on 0,1,2,4 (before) and the same tetrahedron with a pillow
    of two tetrahedra on 0,1,2,3 inserted at its face {0,1,2} (after).
    Returns (before, after, marked edge).
    """
    outer = FlatChargedTet(moduli_from_w0(w_outer), 1, vertices=(0, 1, 2, 4))
    f_outer = (0, 0, -1) if outer.w.w0.imag > 0 else (0, 0, 1)
    c_outer = (0, 1, 0)
    outer = outer.with_decorations(f_outer, c_outer)
    before = Mesh([outer], [])

    w = moduli_from_w0(w_bubble)
    f_b = (0, 0, -1) if w.w0.imag > 0 else (0, 0, 1)
    tets = [
        outer,
        FlatChargedTet(w, -1, f_b, c_bubble[0], vertices=(0, 1, 2, 3)),
        FlatChargedTet(w, 1, f_b, c_bubble[1], vertices=(0, 1, 2, 3)),
    ]
    gluings = [Gluing(0, 3, 1, 3, (0, 1, 2))]
    gluings += [Gluing(1, face, 2, face, face_vertices(face)) for face in range(3)]
    after = Mesh(tets, gluings)
    return before, after, (0, 1)


def bubble_constraints_check(before: Mesh, after: Mesh, marked_edge: Pair,
                             tol: float = config.VALIDATION_TOL) -> ValidationReport:
    """Check the bubble transit rules on common and new edges"""
    report = ValidationReport("bubble")
    marked = tuple(sorted(marked_edge))
    edge_map, new = _edge_map(before, after)
    if marked not in edge_map:
        report.violations.append({"edge": list(marked), "residual": None, "detail": "marked edge is not common"})
        return report

    for pair, (i, j) in edge_map.items():
        name = f"{pair[0]}{pair[1]}"
        dw = abs(edge_total_modulus(before, i) - edge_total_modulus(after, j))
        dl = abs(edge_total_log_branch(before, i) - edge_total_log_branch(after, j))
        shift = edge_total_charge(after, j) - edge_total_charge(before, i)
        expected = 2 if pair == marked else 0
        report.add(name, {"W": dw, "L": dl, "C_shift": shift},
                   dw > tol or dl > tol or shift != expected,
                   f"common edge: W, L preserved and C shifted by {expected}")

    for pair in new:
        j = {v: k for k, v in edge_labels(after).items()}[pair]
        name = f"{pair[0]}{pair[1]}"
        on_new_face = marked[0] in pair or marked[1] in pair
        expected = 0 if on_new_face else 2
        dw = abs(edge_total_modulus(after, j) - 1)
        dl = abs(edge_total_log_branch(after, j))
        charge = edge_total_charge(after, j)
        report.add(name, {"W": dw, "L": dl, "C": charge},
                   dw > tol or dl > tol or charge != expected,
                   f"new edge: W=1, L=0, C={expected}")
    return report


# ── Pentagon ─────────────────────────────────────────────────────────────────
def _aligned(m: Mesh, values: np.ndarray, faces: List[Tuple[int, int]]) -> np.ndarray:
    labels = [face_label(m, t, f) for t, f in faces]
    order = sorted(range(len(labels)), key=lambda k: labels[k])
    return np.transpose(values, order)


def _pole_distance(m: Mesh, N) -> float:
    lv = level(N)
    nearest = np.inf
    for t in m.tets:
        u = w_prime(t, lv)[0]
        nearest = min(nearest, float(np.min(np.abs(1 - u * lv.roots()))))
    return nearest


def pentagon_sides(x: complex, y: complex, two_side: Optional[Mesh] = None) -> TransitResult:
    """Decorated transit at (x, y); the two-tetrahedron decorations default to the solver's"""
    if two_side is None:
        two_side, _ = pentagon_configuration(x, y)
        two_side = decorate_two_side(two_side)
    return two_three_transit(two_side)


def pentagon_check(x: complex, y: complex, N, tol: float = config.EQ_MOD_N_TOL,
                   transit: Optional[TransitResult] = None, guard: bool = True) -> PhaseWitness:
    """
    Contract both sides of the 2-3 transit at (x, y) into boundary tensors and
    compare them up to sign and N-th roots of unity.
    """
    lv = level(N)
    transit = transit or pentagon_sides(x, y)
    sides = []
    for m in (transit.before, transit.after):
        if guard and lv.n > 1 and _pole_distance(m, lv) < config.POLE_GUARD:
            raise SingularInputError("quantum modulus too close to a pole")
        tt = trace_tensor(m, lv)
        sides.append(_aligned(m, tt.values, tt.faces))
    witness = eq_mod_n(sides[1], sides[0], lv, tol)
    logger.debug(f"pentagon N={lv.n} at x={x:.6g}, y={y:.6g}: {witness}")
    return witness


def sample_transit(rng: np.random.Generator) -> Tuple[complex, complex]:
    """Random (x, y) in the upper half plane with all moduli away from 0 and 1"""
    for _ in range(config.MAX_RESAMPLE):
        x = complex(rng.uniform(-1.5, 2.5), rng.uniform(0.05, 2.0))
        y = complex(rng.uniform(-1.5, 2.5), rng.uniform(0.05, 2.0))
        try:
            moduli = (x, y) + two_three_moduli(x, y)
        except DomainError:
            continue
        triples = [w for u in moduli for w in moduli_from_w0(u)]
        if all(abs(w) > config.DEGENERACY_GUARD and abs(w - 1) > config.DEGENERACY_GUARD for w in triples):
            return x, y
        logger.debug(f"resampling degenerate transit x={x:.4g}, y={y:.4g}")
    raise DomainError("could not draw a nondegenerate transit")


class PentagonReport:
    """Summary of a batch of pentagon checks"""

    def __init__(self, N: int, seed: int):
        self.N = N
        self.seed = seed
        self.witnesses: List[PhaseWitness] = []
        self.samples: List[Tuple[complex, complex]] = []
        self.resampled = 0

    @property
    def passed(self) -> int:
        return sum(1 for w in self.witnesses if w.equal)

    @property
    def failed(self) -> int:
        return len(self.witnesses) - self.passed

    def to_dict(self) -> Dict:
        return {
            "N": self.N,
            "seed": self.seed,
            "passed": self.passed,
            "failed": self.failed,
            "resampled": self.resampled,
            "max_error": max((w.error for w in self.witnesses), default=0.0),
        }


def pentagon_batch(N, samples: int = config.DEFAULT_SAMPLES, seed: int = config.DEFAULT_SEED,
                   tol: float = config.EQ_MOD_N_TOL, progress: bool = False) -> PentagonReport:
    """Pentagon checks on seeded random nondegenerate transits"""
    lv = level(N)
    rng = np.random.default_rng(seed)
    report = PentagonReport(lv.n, seed)
    with tqdm(total=samples, desc=f"pentagon N={lv.n}", disable=not progress, leave=False) as bar:
        while len(report.witnesses) < samples:
            x, y = sample_transit(rng)
            try:
                witness = pentagon_check(x, y, lv, tol)
            except SingularInputError:
                report.resampled += 1
                if report.resampled > config.MAX_RESAMPLE:
                    raise
                continue
            report.samples.append((x, y))
            report.witnesses.append(witness)
            if not witness.equal:
                logger.warning(f"pentagon failed at x={x:.6g}, y={y:.6g}: {witness}")
            bar.update(1)
    logger.info(f"pentagon N={lv.n}: {report.passed} passed, {report.failed} failed")
    return report
