"""Integer solver for global flattenings and charges"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from . import config
from .errors import InfeasibleSystemError, MeshError
from .mesh import EdgeClass, Mesh, NormalPath, path_coefficients
from .specialfn import principal_log
from .tetra import edge_index, flattening_sum

logger = logging.getLogger(__name__)

FLATTENING = "flattening"
CHARGE = "charge"


class IntAssignment:
    """One integer triple per tetrahedron (flattening or charge)"""

    def __init__(self, kind: str, values: Sequence[Sequence[int]]):
        self.kind = kind
        self.values = [tuple(int(x) for x in v) for v in values]

    @classmethod
    def from_vector(cls, kind: str, vector: Sequence[int]) -> "IntAssignment":
        flat = [int(x) for x in vector]
        return cls(kind, [flat[i:i + 3] for i in range(0, len(flat), 3)])

    def vector(self) -> np.ndarray:
        return np.array([x for v in self.values for x in v], dtype=int)

    def __getitem__(self, i: int) -> Tuple[int, int, int]:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntAssignment) and self.kind == other.kind and self.values == other.values

    def to_list(self) -> List[List[int]]:
        return [list(v) for v in self.values]

    def apply(self, m: Mesh) -> Mesh:
        """Mesh carrying this assignment"""
        if self.kind == FLATTENING:
            return m.with_decorations(f=self.values)
        return m.with_decorations(c=self.values)

    def __repr__(self) -> str:
        return f"IntAssignment({self.kind}, {self.values})"


class LatticeGen:
    """Integer direction in the space of per-tetrahedron triples"""

    def __init__(self, kind: str, vector: Sequence[int], edge: Optional[int] = None):
        self.kind = kind
        self.vector = np.asarray(vector, dtype=int).reshape(-1)
        self.edge = edge

    def apply(self, a: IntAssignment, times: int = 1) -> IntAssignment:
        return IntAssignment.from_vector(a.kind, a.vector() + times * self.vector)

    def scaled(self, times: int) -> "LatticeGen":
        return LatticeGen(self.kind, times * self.vector, self.edge)

    def __repr__(self) -> str:
        return f"LatticeGen({self.kind}, {self.vector.tolist()}, edge={self.edge})"


# ── Integer core ─────────────────────────────────────────────────────────────
def solve_integer_system(A: np.ndarray, b: Sequence[int]) -> Tuple[np.ndarray, List[np.ndarray]]:
    """
    Solve A x = b over the integers through the Smith decomposition D = S A T.

    Returns a particular solution and a basis of the integer kernel of A.
    Raises InfeasibleSystemError with the offending residuals otherwise.
    """
    A = np.asarray(A, dtype=int)
    b = np.asarray(b, dtype=int).reshape(-1)
    rows, cols = A.shape
    if rows == 0:
        return np.zeros(cols, dtype=int), [np.eye(cols, dtype=int)[:, k] for k in range(cols)]

    D, S, T = smith_normal_decomp(Matrix(A.tolist()), domain=ZZ)
    sb = S * Matrix(b.tolist())
    rank = sum(1 for k in range(min(rows, cols)) if D[k, k] != 0)

    y = [0] * cols
    residual = {}
    for k in range(rank):
        quotient, remainder = divmod(int(sb[k]), int(D[k, k]))
        if remainder:
            residual[k] = remainder
        y[k] = quotient
    for k in range(rank, rows):
        if sb[k] != 0:
            residual[k] = int(sb[k])
    if residual:
        raise InfeasibleSystemError(f"integer system has no solution (residual {residual})", residual)

    x = np.array((T * Matrix(y)).tolist(), dtype=int).reshape(-1)
    kernel = [np.array(T[:, k].tolist(), dtype=int).reshape(-1) for k in range(rank, cols)]
    if not np.array_equal(A @ x, b):
        raise InfeasibleSystemError("Smith decomposition returned an inconsistent solution", None)
    return x, kernel


def reduce_solution(x: np.ndarray, kernel: List[np.ndarray]) -> np.ndarray:
    """Greedy max-norm reduction of x modulo the kernel lattice"""
    x = np.array(x, dtype=int)

    def norm(v):
        return (int(np.max(np.abs(v))) if v.size else 0, int(np.sum(np.abs(v))))

    for _ in range(config.REDUCTION_MAX_ROUNDS):
        improved = False
        for g in kernel:
            for step in (g, -g):
                while norm(x + step) < norm(x):
                    x = x + step
                    improved = True
        if not improved:
            break
    return x


def canonical_kernel(kernel: List[np.ndarray]) -> List[np.ndarray]:
    """Hermite-normal-form basis of the lattice spanned by kernel"""
    if not kernel:
        return []
    K = Matrix(np.column_stack(kernel).tolist())
    H = hermite_normal_form(K)
    return [np.array(H[:, k].tolist(), dtype=int).reshape(-1) for k in range(H.shape[1])]


def in_lattice(vector: Sequence[int], generators: List[LatticeGen]) -> bool:
    """True when vector is an integer combination of the generators"""
    vector = np.asarray(vector, dtype=int).reshape(-1)
    if not generators:
        return not vector.any()
    G = np.column_stack([g.vector for g in generators])
    try:
        solve_integer_system(G, vector)
    except InfeasibleSystemError:
        return False
    return True


# ── System assembly ──────────────────────────────────────────────────────────
def _integral(value: complex, what: str) -> int:
    value = complex(value)
    nearest = round(value.real)
    if abs(value.imag) > config.INTEGRALITY_TOL or abs(value.real - nearest) > config.INTEGRALITY_TOL:
        raise InfeasibleSystemError(f"{what}: right-hand side {value:.6g} is not an integer", value)
    return int(nearest)


def _edge_row(m: Mesh, ec: EdgeClass, signed: bool) -> np.ndarray:
    row = np.zeros(3 * len(m.tets), dtype=int)
    for tet, (a, b) in ec.members:
        row[3 * tet + edge_index(a, b)] += m.tets[tet].b_sign if signed else 1
    return row


def _tet_rows(m: Mesh) -> np.ndarray:
    n = len(m.tets)
    rows = np.zeros((n, 3 * n), dtype=int)
    for i in range(n):
        rows[i, 3 * i:3 * i + 3] = 1
    return rows


def flattening_system(m: Mesh, path_constraints: Sequence[Tuple[NormalPath, complex]] = (),
                      edge_targets: Optional[Dict[int, complex]] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Integer matrix and right-hand side of the flattening conditions"""
    targets = {ec.index: 0j for ec in m.interior_edges}
    targets.update(edge_targets or {})

    rows = list(_tet_rows(m))
    rhs = [flattening_sum(t.w) for t in m.tets]
    for index in sorted(targets):
        ec = m.edge_classes[index]
        logs = sum(m.tets[tet].b_sign * principal_log(m.tets[tet].w[edge_index(a, b)])
                   for tet, (a, b) in ec.members)
        rows.append(_edge_row(m, ec, signed=True))
        rhs.append(_integral((targets[index] - logs) / (1j * np.pi), f"edge {index}"))
    for path, target in path_constraints:
        coeffs = path_coefficients(m, path, FLATTENING)
        logs = 0j
        for step in path.steps:
            logs += step.sign() * principal_log(m.tets[step.tet].w[edge_index(*step.corner_edge())])
        rows.append(coeffs)
        rhs.append(_integral((target - logs) / (1j * np.pi), f"path {path.name or '?'}"))
    return np.array(rows, dtype=int), np.array(rhs, dtype=int)


def charge_system(m: Mesh, ham: Optional[Iterable[int]] = None,
                  edge_targets: Optional[Dict[int, int]] = None,
                  path_constraints: Sequence[Tuple[NormalPath, int]] = ()) -> Tuple[np.ndarray, np.ndarray]:
    """Integer matrix and right-hand side of the charge conditions"""
    ham = m.hamiltonian if ham is None else frozenset(ham)
    targets = {ec.index: (0 if ec.index in ham else 2) for ec in m.interior_edges}
    targets.update(edge_targets or {})

    rows = list(_tet_rows(m))
    rhs = [1] * len(m.tets)
    for index in sorted(targets):
        rows.append(_edge_row(m, m.edge_classes[index], signed=False))
        rhs.append(int(targets[index]))
    for path, target in path_constraints:
        rows.append(path_coefficients(m, path, CHARGE))
        rhs.append(int(target))
    return np.array(rows, dtype=int), np.array(rhs, dtype=int)


def _solve(kind: str, A: np.ndarray, b: np.ndarray, parity_rows: Sequence[Tuple[np.ndarray, int]] = ()):
    n = A.shape[1]
    if parity_rows:
        # a slack column per parity row: coeffs . x - 2 s = parity
        extra = len(parity_rows)
        A = np.hstack([A, np.zeros((A.shape[0], extra), dtype=int)])
        rows = []
        for k, (coeffs, parity) in enumerate(parity_rows):
            row = np.zeros(n + extra, dtype=int)
            row[:n] = coeffs
            row[n + k] = -2
            rows.append(row)
        A = np.vstack([A] + rows)
        b = np.concatenate([b, [p % 2 for _, p in parity_rows]])
    x, kernel = solve_integer_system(A, b)
    x = x[:n]
    kernel = [k[:n] for k in kernel if k[:n].any()]
    kernel = canonical_kernel(kernel)
    x = reduce_solution(x, kernel)
    return IntAssignment.from_vector(kind, x), kernel


# ── Public solvers ───────────────────────────────────────────────────────────
def solve_flattening(m: Mesh, path_constraints: Sequence[Tuple[NormalPath, complex]] = (),
                     edge_targets: Optional[Dict[int, complex]] = None,
                     parity_constraints: Sequence[Tuple[NormalPath, int]] = ()) -> Optional[IntAssignment]:
    """
    Global flattening with L(e) = 0 at interior edges (or the given targets)
    and prescribed path weights. Returns None when no integer solution exists.
    """
    try:
        A, b = flattening_system(m, path_constraints, edge_targets)
        parity = [(path_coefficients(m, p, FLATTENING), int(r)) for p, r in parity_constraints]
        solution, _ = _solve(FLATTENING, A, b, parity)
    except InfeasibleSystemError as e:
        logger.warning(f"No flattening: {e} (certificate {e.residual})")
        return None
    logger.info(f"Flattening found: {solution.values}")
    return solution


def solve_charge(m: Mesh, ham: Optional[Iterable[int]] = None,
                 edge_targets: Optional[Dict[int, int]] = None,
                 path_constraints: Sequence[Tuple[NormalPath, int]] = ()) -> Optional[IntAssignment]:
    """Charge with sum 1 per tetrahedron, C(e) = 0 on ham and 2 on other interior edges"""
    try:
        A, b = charge_system(m, ham, edge_targets, path_constraints)
        solution, _ = _solve(CHARGE, A, b)
    except InfeasibleSystemError as e:
        logger.warning(f"No charge: {e} (certificate {e.residual})")
        return None
    logger.info(f"Charge found: {solution.values}")
    return solution


def decorate(m: Mesh, path_constraints: Sequence[Tuple[NormalPath, complex]] = ()) -> Mesh:
    """Mesh with solver flattenings and charges; raises when either is infeasible"""
    f = solve_flattening(m, path_constraints)
    if f is None:
        raise InfeasibleSystemError("mesh admits no flattening")
    c = solve_charge(m)
    if c is None:
        raise InfeasibleSystemError("mesh admits no charge")
    return m.with_decorations(f=f.values, c=c.values)


def lattice_generators(m: Mesh, kind: str = FLATTENING,
                       paths: Sequence[NormalPath] = ()) -> List[LatticeGen]:
    """
    Basis of the integer directions that keep every per-tetrahedron sum,
    every interior edge total and the weights of the given paths fixed.
    """
    A = [_tet_rows(m)]
    for ec in m.interior_edges:
        A.append(_edge_row(m, ec, signed=(kind == FLATTENING))[None, :])
    for p in paths:
        A.append(path_coefficients(m, p, kind)[None, :])
    A = np.vstack(A)
    _, kernel = solve_integer_system(A, np.zeros(A.shape[0], dtype=int))
    kernel = canonical_kernel(kernel)
    logger.debug(f"{kind} lattice of rank {len(kernel)}")
    return [LatticeGen(kind, k) for k in kernel]


def edge_generator(m: Mesh, e, kind: str = FLATTENING) -> LatticeGen:
    """
    The move adding +1/-1 around an edge: at every occurrence of e with index
    j, f_{j+1} += 1 and f_{j+2} -= 1 (times *_b for charges).
    """
    ec = e if isinstance(e, EdgeClass) else m.edge_classes[int(e)]
    if ec.boundary:
        raise MeshError(f"edge {ec.index} is on the boundary")
    vector = np.zeros(3 * len(m.tets), dtype=int)
    for tet, (a, b) in ec.members:
        j = edge_index(a, b)
        sign = m.tets[tet].b_sign if kind == CHARGE else 1
        vector[3 * tet + (j + 1) % 3] += sign
        vector[3 * tet + (j + 2) % 3] -= sign
    return LatticeGen(kind, vector, ec.index)


def mod2_weights(m: Mesh, paths: Dict[str, NormalPath], f: Optional[IntAssignment] = None) -> Dict[str, int]:
    """Flattening path weights reduced mod 2 (integer part of the weight)"""
    values = f.vector() if f is not None else np.array([x for t in m.flattenings() for x in t])
    return {name: int(path_coefficients(m, p, FLATTENING) @ values) % 2 for name, p in paths.items()}
