"""Matrix dilogarithms R_N of flat/charged tetrahedra"""

import logging
from typing import Tuple

import numpy as np

from . import config
from .errors import DomainError, SingularInputError
from .specialfn import LevelN, bracket, h_func, level, omega, rogers_extended
from .tetra import FlatChargedTet, w_prime

logger = logging.getLogger(__name__)

# Faces carried by the slots (i, j, k, l) of T[i, j, k, l] = L^{i,j}_{k,l}
POSITIVE_FACE_MAP = (2, 0, 3, 1)
NEGATIVE_FACE_MAP = (3, 1, 2, 0)


class DilogTensor:
    """Rank-4 tensor of side N; slot s carries the state of face face_map[s]"""

    def __init__(self, n: LevelN, entries: np.ndarray, face_map: Tuple[int, int, int, int] = (0, 1, 2, 3)):
        self.n = level(n)
        self.entries = np.asarray(entries, dtype=complex)
        self.face_map = tuple(face_map)
        if self.entries.shape != (self.n.n,) * 4:
            raise DomainError(f"dilogarithm tensor must have shape {(self.n.n,) * 4}")
        if not np.all(np.isfinite(self.entries)):
            raise SingularInputError("dilogarithm tensor has non-finite entries")

    def matrix(self) -> np.ndarray:
        """The N^2 x N^2 matrix with rows (i, j) and columns (k, l)"""
        size = self.n.n ** 2
        return self.entries.reshape(size, size)

    def by_face(self) -> np.ndarray:
        """Entries with axes permuted into face order 0..3"""
        order = [self.face_map.index(face) for face in range(4)]
        return np.transpose(self.entries, order)

    def scaled(self, factor: complex) -> "DilogTensor":
        return DilogTensor(self.n, self.entries * factor, self.face_map)

    def nonzero_count(self) -> int:
        return int(np.count_nonzero(np.abs(self.entries) > 0))


def _check_curve(u1: complex, v1: complex, lv: LevelN):
    residual = abs(u1 ** lv.n + v1 ** lv.n - 1)
    if residual > config.PRECONDITION_TOL * max(1.0, abs(u1) ** lv.n):
        raise DomainError(f"(u', v') is not on u'^N + v'^N = 1 (residual {residual:.3e})")


def ln_tensor(u1: complex, v1: complex, N) -> DilogTensor:
    """L_N(u', v')^{i,j}_{k,l} = h(u') zeta^{kj+(m+1)k^2} omega(u',v'|i-k) delta(i+j-l)"""
    lv = level(N)
    n, m, zeta = lv.n, lv.m, lv.zeta
    u1, v1 = complex(u1), complex(v1)
    _check_curve(u1, v1, lv)

    h = h_func(u1, lv) if n > 1 else 1.0
    omegas = [omega(u1, v1, d, lv) for d in range(n)]
    entries = np.zeros((n,) * 4, dtype=complex)
    for i in range(n):
        for j in range(n):
            l = (i + j) % n
            for k in range(n):
                entries[i, j, k, l] = h * zeta ** ((k * j + (m + 1) * k * k) % n) * omegas[(i - k) % n]
    return DilogTensor(lv, entries)


def ln_tensor_inv(u1: complex, v1: complex, N) -> DilogTensor:
    """Inverse of ln_tensor as an operator (k, l) -> (i, j)"""
    lv = level(N)
    n, m, zeta = lv.n, lv.m, lv.zeta
    u1, v1 = complex(u1), complex(v1)
    _check_curve(u1, v1, lv)

    br = bracket(u1, lv)
    if abs(br) < 1e-14:
        raise SingularInputError(f"[u'] vanishes at u' = {u1}")
    h = h_func(u1, lv) if n > 1 else 1.0
    denominators = [omega(u1 / zeta, v1, d, lv) for d in range(n)]
    entries = np.zeros((n,) * 4, dtype=complex)
    for i in range(n):
        for k in range(n):
            for l in range(n):
                j = (k + l) % n
                entries[i, j, k, l] = (br / h) * zeta ** ((-i * l - (m + 1) * i * i) % n) / denominators[(k - i) % n]
    return DilogTensor(lv, entries)


def charge_prefactor(t: FlatChargedTet, N) -> complex:
    """((w'_0)^{-c_1} (w'_1)^{c_0})^{(N-1)/2}"""
    lv = level(N)
    w0p, w1p, _ = w_prime(t, lv)
    c0, c1, _ = t.c
    return complex((w0p ** (-c1) * w1p ** c0) ** lv.m)


def rn_tensor(t: FlatChargedTet, N) -> DilogTensor:
    """Matrix dilogarithm R_N of a decorated tetrahedron, N > 1"""
    lv = level(N)
    if lv.n == 1:
        raise DomainError("use r1_scalar at level 1")
    if not t.decorated:
        raise DomainError("matrix dilogarithm needs a flattening and a charge")

    w0p, w1p, _ = w_prime(t, lv)
    if t.b_sign > 0:
        base = ln_tensor(w0p, 1 / w1p, lv)
        face_map = POSITIVE_FACE_MAP
    else:
        base = ln_tensor_inv(w0p, 1 / w1p, lv)
        face_map = NEGATIVE_FACE_MAP
    prefactor = charge_prefactor(t, lv)
    logger.debug(f"R_{lv.n} for {t}: prefactor {prefactor:.6g}")
    return DilogTensor(lv, prefactor * base.entries, face_map)


def r1_scalar(t: FlatChargedTet) -> complex:
    """Level-one matrix dilogarithm exp(*_b R(w0; f0, f1) / (i pi))"""
    if t.f is None:
        raise DomainError("R_1 needs a flattening")
    value = rogers_extended(t.w.w0, t.f[0], t.f[1])
    return complex(np.exp(t.b_sign * value / (1j * np.pi)))
