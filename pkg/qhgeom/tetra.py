"""Branched flat/charged ideal tetrahedra"""

import logging
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from . import config
from .errors import DomainError
from .specialfn import level, principal_log

logger = logging.getLogger(__name__)

# Local vertices 0..3 are listed in branching order. Edge index j names the
# pair of opposite edges carrying the modulus w_j.
EDGE_PAIRS = {
    0: ((0, 1), (2, 3)),
    1: ((1, 2), (0, 3)),
    2: ((0, 2), (1, 3)),
}
ALL_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def edge_index(a: int, b: int) -> int:
    """Modulus index j of the edge joining local vertices a and b"""
    pair = (min(a, b), max(a, b))
    for j, edges in EDGE_PAIRS.items():
        if pair in edges:
            return j
    raise DomainError(f"no edge between local vertices {a} and {b}")


def face_vertices(face: int) -> Tuple[int, ...]:
    """Local vertices of the face opposite to vertex `face`"""
    return tuple(v for v in range(4) if v != face)


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence of distinct integers"""
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


class ModuliTriple:
    """Cross-ratio moduli (w0, w1, w2) with w_{j+1} = 1/(1 - w_j)"""

    def __init__(self, w0: complex, w1: complex, w2: complex):
        self.w0 = complex(w0)
        self.w1 = complex(w1)
        self.w2 = complex(w2)

    def __getitem__(self, j: int) -> complex:
        return (self.w0, self.w1, self.w2)[j]

    def __iter__(self):
        return iter((self.w0, self.w1, self.w2))

    def __repr__(self) -> str:
        return f"ModuliTriple({self.w0:.6g}, {self.w1:.6g}, {self.w2:.6g})"

    def conjugate(self) -> "ModuliTriple":
        return ModuliTriple(np.conj(self.w0), np.conj(self.w1), np.conj(self.w2))

    def rotate(self) -> "ModuliTriple":
        return ModuliTriple(self.w1, self.w2, self.w0)


def moduli_from_w0(w0: complex) -> ModuliTriple:
    """Complete a single modulus into its triple"""
    w0 = complex(w0)
    if not np.isfinite(w0) or abs(w0) < 1e-300 or w0 == 1:
        raise DomainError(f"degenerate modulus w0 = {w0}")
    w1 = 1 / (1 - w0)
    w2 = 1 / (1 - w1)
    return ModuliTriple(w0, w1, w2)


def flattening_sum(w: ModuliTriple) -> int:
    """The value of f0+f1+f2 forced by l0+l1+l2 = 0"""
    total = sum(principal_log(wj) for wj in w)
    return int(round(-total.imag / np.pi))


class FlatChargedTet:
    """
    One branched ideal tetrahedron with moduli and optional decorations.

    b_sign is the branching orientation *_b. The flattening f and the charge c
    are integer triples indexed like the moduli; either may be None until a
    solver fills it in.
    """

    def __init__(self, w: ModuliTriple, b_sign: int = 1,
                 f: Optional[Sequence[int]] = None,
                 c: Optional[Sequence[int]] = None,
                 vertices: Sequence[int] = (0, 1, 2, 3)):
        if b_sign not in (1, -1):
            raise DomainError(f"branching sign must be +1 or -1, got {b_sign}")
        if len(set(vertices)) != 4:
            raise DomainError(f"branching needs four distinct vertices, got {vertices}")
        self.w = w
        self.b_sign = int(b_sign)
        self.vertices = tuple(int(v) for v in vertices)
        self.f = None if f is None else tuple(int(x) for x in f)
        self.c = None if c is None else tuple(int(x) for x in c)
        self._check()

    def _check(self):
        if self.f is not None:
            total = sum(log_branch(self))
            if abs(total) > config.VALIDATION_TOL:
                raise DomainError(f"flattening {self.f} violates l0+l1+l2 = 0 (sum {total:.3e})")
        if self.c is not None and sum(self.c) != 1:
            raise DomainError(f"charge {self.c} violates c0+c1+c2 = 1")

    @property
    def star_w(self) -> int:
        """Sign of Im(w0), 0 for degenerate real moduli"""
        im = self.w.w0.imag
        if abs(im) <= config.VALIDATION_TOL * max(1.0, abs(self.w.w0)):
            return 0
        return 1 if im > 0 else -1

    @property
    def decorated(self) -> bool:
        return self.f is not None and self.c is not None

    def with_decorations(self, f: Optional[Sequence[int]] = None,
                         c: Optional[Sequence[int]] = None) -> "FlatChargedTet":
        return FlatChargedTet(self.w, self.b_sign,
                              self.f if f is None else f,
                              self.c if c is None else c,
                              self.vertices)

    def rotate(self) -> "FlatChargedTet":
        """Cyclic relabelling of the moduli indices j -> j+1"""
        def turn(t):
            return None if t is None else (t[1], t[2], t[0])
        return FlatChargedTet(self.w.rotate(), self.b_sign, turn(self.f), turn(self.c), self.vertices)

    def conjugate(self) -> "FlatChargedTet":
        """Complex conjugate moduli with negated flattening"""
        f = None if self.f is None else tuple(-x for x in self.f)
        return FlatChargedTet(self.w.conjugate(), self.b_sign, f, self.c, self.vertices)

    def to_dict(self) -> Dict:
        data = {
            "w0": [self.w.w0.real, self.w.w0.imag],
            "orientation": self.b_sign,
            "vertices": list(self.vertices),
        }
        if self.f is not None:
            data["flattening"] = list(self.f)
        if self.c is not None:
            data["charge"] = list(self.c)
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "FlatChargedTet":
        re, im = data["w0"]
        return cls(
            moduli_from_w0(complex(re, im)),
            b_sign=data.get("orientation", 1),
            f=data.get("flattening"),
            c=data.get("charge"),
            vertices=data.get("vertices", (0, 1, 2, 3)),
        )

    def __repr__(self) -> str:
        return f"FlatChargedTet(w0={self.w.w0:.6g}, b={self.b_sign:+d}, f={self.f}, c={self.c})"


def log_branch(t: FlatChargedTet) -> Tuple[complex, complex, complex]:
    """Classical log-branch l_j = log w_j + i pi f_j"""
    if t.f is None:
        raise DomainError("log-branch needs a flattening")
    return tuple(principal_log(wj) + 1j * np.pi * fj for wj, fj in zip(t.w, t.f))


def quantum_log_branch(t: FlatChargedTet, N) -> Tuple[complex, complex, complex]:
    """Level-N log-branch log w_j + i pi (N+1)(f_j - *_b c_j)"""
    n = int(level(N))
    if t.f is None or t.c is None:
        raise DomainError("quantum log-branch needs a flattening and a charge")
    return tuple(
        principal_log(wj) + 1j * np.pi * (n + 1) * (fj - t.b_sign * cj)
        for wj, fj, cj in zip(t.w, t.f, t.c)
    )


def w_prime(t: FlatChargedTet, N) -> Tuple[complex, complex, complex]:
    """Quantum moduli w'_j = exp(l_{j,N}/N)"""
    n = int(level(N))
    return tuple(complex(np.exp(lj / n)) for lj in quantum_log_branch(t, n))
