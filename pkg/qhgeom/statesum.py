"""State sums: contraction of matrix dilogarithms into trace tensors"""

import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

import networkx as nx
import numpy as np

from . import config
from .dilog import r1_scalar, rn_tensor
from .errors import DomainError, UndecoratedMeshError
from .mesh import Mesh
from .specialfn import level

logger = logging.getLogger(__name__)


class TraceTensor:
    """Contracted tensor with one axis per boundary face (a scalar when closed)"""

    def __init__(self, values: np.ndarray, faces: List[Tuple[int, int]]):
        self.values = np.asarray(values, dtype=complex)
        self.faces = list(faces)

    @property
    def rank(self) -> int:
        return self.values.ndim

    @property
    def scalar(self) -> complex:
        if self.values.ndim:
            raise DomainError("trace tensor has open boundary indices")
        return complex(self.values)

    def __repr__(self) -> str:
        return f"TraceTensor(rank {self.rank}, faces {self.faces})"


class PhaseWitness:
    """Outcome of comparing two tensors up to sign and N-th roots of unity"""

    def __init__(self, equal: bool, scalar: complex, phase_index: int, sign: int, error: float):
        self.equal = equal
        self.scalar = complex(scalar)
        self.phase_index = phase_index
        self.sign = sign
        self.error = error

    def to_dict(self) -> Dict:
        return {
            "eq_mod_n": self.equal,
            "scalar": [self.scalar.real, self.scalar.imag],
            "phase_index": self.phase_index,
            "sign": self.sign,
            "error": self.error,
        }

    def __bool__(self) -> bool:
        return self.equal

    def __repr__(self) -> str:
        return f"PhaseWitness(equal={self.equal}, sign={self.sign:+d}, k={self.phase_index}, error={self.error:.2e})"


class ContractionPlan:
    """Pairwise contraction schedule; node ids 0..n-1 are the tetrahedra"""

    def __init__(self, traces: List[int], steps: List[Tuple[int, int, int]],
                 leftovers: List[int], max_rank: int):
        self.traces = traces
        self.steps = steps
        self.leftovers = leftovers
        self.max_rank = max_rank

    def __len__(self) -> int:
        return len(self.steps)

    def __repr__(self) -> str:
        return f"ContractionPlan({len(self.steps)} steps, max rank {self.max_rank})"


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(config.THREADS_ENV, "1")))
    except ValueError:
        return 1


# ── Labels ───────────────────────────────────────────────────────────────────
def face_labels(m: Mesh) -> Dict[Tuple[int, int], int]:
    """Summation label of every face; glued faces share a label"""
    labels = {}
    for k, cls in enumerate(m.face_classes):
        for face in cls:
            labels[face] = k
    return labels


def _tet_labels(m: Mesh, labels: Dict[Tuple[int, int], int]) -> List[List[int]]:
    return [[labels[(t, f)] for f in range(4)] for t in range(len(m.tets))]


def normalization(m: Mesh, N) -> float:
    """N^{-(v_delta/2 + v_I)}"""
    v_inner, v_boundary = m.vertex_counts()
    return float(int(N) ** (-(v_boundary / 2 + v_inner)))


# ── Planning ─────────────────────────────────────────────────────────────────
def contraction_plan(m: Mesh) -> ContractionPlan:
    """
    Greedy schedule: traces first, then repeatedly the adjacent pair whose
    contraction leaves the fewest open indices.
    """
    labels = face_labels(m)
    graph = nx.Graph()
    traces = []
    for t, tl in enumerate(_tet_labels(m, labels)):
        counts = {x: tl.count(x) for x in tl}
        if any(c > 1 for c in counts.values()):
            traces.append(t)
        graph.add_node(t, labels=frozenset(x for x, c in counts.items() if c == 1))

    def link(node):
        for other in graph.nodes:
            if other != node and graph.nodes[node]["labels"] & graph.nodes[other]["labels"]:
                graph.add_edge(node, other)

    for node in list(graph.nodes):
        link(node)

    steps = []
    max_rank = max([len(graph.nodes[n]["labels"]) for n in graph.nodes] or [0])
    next_id = len(m.tets)
    while graph.number_of_edges():
        def cost(edge):
            a, b = edge
            return (len(graph.nodes[a]["labels"] ^ graph.nodes[b]["labels"]), min(a, b), max(a, b))

        a, b = min(graph.edges, key=cost)
        a, b = min(a, b), max(a, b)
        merged = graph.nodes[a]["labels"] ^ graph.nodes[b]["labels"]
        graph.remove_nodes_from((a, b))
        graph.add_node(next_id, labels=merged)
        link(next_id)
        steps.append((a, b, next_id))
        max_rank = max(max_rank, len(merged))
        next_id += 1

    plan = ContractionPlan(traces, steps, sorted(graph.nodes), max_rank)
    logger.debug(f"{plan} for {m}")
    return plan


# ── Contraction ──────────────────────────────────────────────────────────────
def _local_tensors(m: Mesh, N) -> List[Tuple[np.ndarray, List[int]]]:
    if not all(t.decorated for t in m.tets):
        raise UndecoratedMeshError("state sum needs flattenings and charges on every tetrahedron")
    labels = face_labels(m)
    tensors = []
    for t, tl in zip(m.tets, _tet_labels(m, labels)):
        arr = rn_tensor(t, N).by_face()
        tensors.append((arr, tl))
    return tensors


def _trace(arr: np.ndarray, tl: List[int]) -> Tuple[np.ndarray, List[int]]:
    kept = [x for x in tl if tl.count(x) == 1]
    return np.einsum(arr, tl, kept), kept


def _pair(a: Tuple[np.ndarray, List[int]], b: Tuple[np.ndarray, List[int]]) -> Tuple[np.ndarray, List[int]]:
    arr_a, la = a
    arr_b, lb = b
    shared = [x for x in la if x in lb]
    result = np.tensordot(arr_a, arr_b, axes=([la.index(x) for x in shared], [lb.index(x) for x in shared]))
    return result, [x for x in la if x not in shared] + [x for x in lb if x not in shared]


def _boundary_order(m: Mesh) -> Tuple[List[Tuple[int, int]], List[int]]:
    labels = face_labels(m)
    faces = m.boundary_faces
    return faces, [labels[f] for f in faces]


def trace_tensor(m: Mesh, N, plan: Optional[ContractionPlan] = None) -> TraceTensor:
    """
    Normalized total contraction of the matrix dilogarithms of m over the
    states of its interior faces; open axes follow m.boundary_faces.
    """
    lv = level(N)
    faces, out_labels = _boundary_order(m)
    if lv.n == 1:
        # one state: every boundary axis has length one
        if not m.is_flattened:
            raise UndecoratedMeshError("level one state sum needs flattenings")
        value = np.prod([r1_scalar(t) for t in m.tets])
        return TraceTensor(np.full((1,) * len(faces), value, dtype=complex), faces)

    plan = plan or contraction_plan(m)
    nodes = dict(enumerate(_local_tensors(m, lv)))
    for t in plan.traces:
        nodes[t] = _trace(*nodes[t])
    for a, b, new in plan.steps:
        nodes[new] = _pair(nodes.pop(a), nodes.pop(b))

    arr, labels = np.array(1 + 0j), []
    for node in plan.leftovers:
        arr, labels = _pair((arr, labels), nodes[node])
    arr = np.transpose(arr, [labels.index(x) for x in out_labels])
    return TraceTensor(normalization(m, lv.n) * arr, faces)


def _block_sum(tensors, interior: List[int], states: List[Tuple[int, ...]],
               out_labels: List[int], n: int) -> np.ndarray:
    shape = (n,) * len(out_labels)
    total = np.zeros(shape, dtype=complex)
    for state in states:
        fixed = dict(zip(interior, state))
        operands = []
        for arr, tl in tensors:
            index = tuple(fixed[x] if x in fixed else slice(None) for x in tl)
            operands.append(arr[index])
            operands.append([x for x in tl if x not in fixed])
        total += np.einsum(*operands, out_labels)
    return total


def brute_force_trace(m: Mesh, N, workers: Optional[int] = None) -> TraceTensor:
    """Same value as trace_tensor by explicit enumeration of interior states"""
    lv = level(N)
    if lv.n == 1:
        return trace_tensor(m, lv)
    tensors = _local_tensors(m, lv)
    faces, out_labels = _boundary_order(m)
    labels = face_labels(m)
    interior = sorted({labels[c[0]] for c in m.face_classes if len(c) == 2})

    states = list(itertools.product(range(lv.n), repeat=len(interior)))
    workers = workers or worker_count()
    blocks = [states[k::workers] for k in range(workers)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        partials = list(pool.map(lambda block: _block_sum(tensors, interior, block, out_labels, lv.n), blocks))
    total = np.sum(partials, axis=0)
    return TraceTensor(normalization(m, lv.n) * total, faces)


# ── Comparison ───────────────────────────────────────────────────────────────
def eq_mod_n(a, b, N, tol: float = config.EQ_MOD_N_TOL) -> PhaseWitness:
    """
    Compare a and b up to a global factor in {+-zeta^k}.

    The candidate factor is read off at the largest entry of b; the tensors are
    then compared entrywise relative to max|b|.
    """
    lv = level(N)
    a = np.asarray(a.values if isinstance(a, TraceTensor) else a, dtype=complex)
    b = np.asarray(b.values if isinstance(b, TraceTensor) else b, dtype=complex)
    if a.shape != b.shape:
        raise DomainError(f"cannot compare shapes {a.shape} and {b.shape}")

    scale = float(np.max(np.abs(b))) if b.size else 0.0
    if scale == 0.0:
        equal = float(np.max(np.abs(a))) <= tol
        return PhaseWitness(equal, 1.0, 0, 1, float(np.max(np.abs(a))))

    pos = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    ratio = a[pos] / b[pos]
    candidates = [(sign, k) for sign in (1, -1) for k in range(lv.n)]
    sign, k = min(candidates, key=lambda sk: abs(ratio - sk[0] * lv.zeta ** sk[1]))
    phase = sign * lv.zeta ** k
    if abs(ratio - phase) > tol:
        return PhaseWitness(False, ratio, k, sign, abs(ratio - phase))
    error = float(np.max(np.abs(a - phase * b))) / scale
    return PhaseWitness(error <= tol, ratio, k, sign, error)
