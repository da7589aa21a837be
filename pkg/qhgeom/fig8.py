"""The figure-eight knot complement: mesh, flattenings and closed forms"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import config
from .errors import ConvergenceError, DomainError, SingularInputError
from .latsolve import decorate
from .mesh import Gluing, Mesh, NormalPath, path_weight
from .specialfn import g_func, level, lobachevsky, omega
from .statesum import PhaseWitness, eq_mod_n, trace_tensor
from .tetra import FlatChargedTet, moduli_from_w0, w_prime
from .dilog import r1_scalar

logger = logging.getLogger(__name__)

Triple = Tuple[int, int, int]

POSITIVE, NEGATIVE = 0, 1

# Delta+ = tet 0 (*_b = +1), Delta- = tet 1 (*_b = -1)
GLUINGS = [
    Gluing(POSITIVE, 3, NEGATIVE, 1, (0, 2, 3)),
    Gluing(POSITIVE, 1, NEGATIVE, 3, (0, 1, 2)),
    Gluing(POSITIVE, 2, NEGATIVE, 0, (1, 2, 3)),
    Gluing(POSITIVE, 0, NEGATIVE, 2, (0, 1, 3)),
]

MERIDIAN_STEPS = [(NEGATIVE, 0, 1, 3), (POSITIVE, 0, 1, 3)]
ALT_MERIDIAN_STEPS = [(POSITIVE, 3, 2, 0), (NEGATIVE, 3, 2, 0)]
LONGITUDE_STEPS = [
    (NEGATIVE, 1, 0, 2), (POSITIVE, 2, 0, 3), (NEGATIVE, 3, 1, 2), (POSITIVE, 3, 0, 1),
    (NEGATIVE, 2, 3, 0), (POSITIVE, 1, 2, 0), (NEGATIVE, 0, 2, 3), (POSITIVE, 0, 1, 2),
]

NATURAL_FLATTENING: List[Triple] = [(0, -1, 0), (0, 1, 0)]
NATURAL_CHARGE: List[Triple] = [(0, 1, 0), (0, 1, 0)]


def meridian_path() -> NormalPath:
    return NormalPath(MERIDIAN_STEPS, "meridian")


def alt_meridian_path() -> NormalPath:
    """A second meridian through the other corners; same weights as meridian_path"""
    return NormalPath(ALT_MERIDIAN_STEPS, "meridian'")


def longitude_path() -> NormalPath:
    return NormalPath(LONGITUDE_STEPS, "longitude")


# ── Deformation space ────────────────────────────────────────────────────────
class Fig8Point:
    """
    A point of the deformation space, parametrized by the modulus w2 of
    Delta+. The modulus z0 of Delta- solves the edge equation
    w1 w2^2 z0^-2 z1^-1 = 1; sheet=-1 selects the other square root.
    """

    def __init__(self, w2: complex, sheet: int = 1):
        if sheet not in (1, -1):
            raise DomainError(f"sheet must be +1 or -1, got {sheet}")
        self.w2 = complex(w2)
        self.sheet = sheet
        if self.w2 in (0, 1):
            raise DomainError(f"degenerate modulus w2 = {self.w2}")
        root = complex(np.sqrt(0.25 + 1 / (self.w2 * (self.w2 - 1))))
        # sheet +1 takes the root in the upper half plane (i sqrt(3)/2 at the complete point)
        if root.imag < 0 or (root.imag == 0 and root.real < 0):
            root = -root
        denom = 0.5 + sheet * root
        if abs(denom) < 1e-300:
            raise DomainError(f"no tetrahedron Delta- at w2 = {self.w2}")
        self.z0 = complex(1 / denom)
        self.plus = moduli_from_w0(1 / (1 - self.w2))
        self.minus = moduli_from_w0(self.z0)

    @classmethod
    def complete(cls) -> "Fig8Point":
        return cls(np.exp(1j * np.pi / 3))

    def edge_residual(self) -> float:
        w, z = self.plus, self.minus
        return abs(w[1] * w[2] ** 2 * z[0] ** -2 * z[1] ** -1 - 1)

    def to_dict(self) -> Dict:
        return {
            "w2": [self.w2.real, self.w2.imag],
            "z0": [self.z0.real, self.z0.imag],
            "sheet": self.sheet,
        }

    def __repr__(self) -> str:
        return f"Fig8Point(w2={self.w2:.6g}, z0={self.z0:.6g})"


def build_fig8_mesh(p: Optional[Fig8Point] = None,
                    f: Optional[Sequence[Triple]] = None,
                    c: Optional[Sequence[Triple]] = None) -> Mesh:
    """Two tetrahedra, one toroidal vertex, meridian and longitude attached"""
    p = p or Fig8Point.complete()
    f = f or (None, None)
    c = c or (None, None)
    tets = [
        FlatChargedTet(p.plus, 1, f[POSITIVE], c[POSITIVE]),
        FlatChargedTet(p.minus, -1, f[NEGATIVE], c[NEGATIVE]),
    ]
    paths = {"meridian": meridian_path(), "longitude": longitude_path()}
    return Mesh(tets, GLUINGS, (), paths)


def natural_mesh(p: Optional[Fig8Point] = None) -> Mesh:
    return build_fig8_mesh(p, NATURAL_FLATTENING, NATURAL_CHARGE)


# ── Flattening families ──────────────────────────────────────────────────────
def _family(f0p: int, f1p: int, f0m: int, f1m: int) -> List[Triple]:
    # per-tet sums -1 and +1 at the complete structure
    return [(f0p, f1p, -1 - f0p - f1p), (f0m, f1m, 1 - f0m - f1m)]


def standard_flattening(k_m: int, k_l: int, f0p: int = 0) -> List[Triple]:
    """Flattenings with meridian weight k_m and longitude weight k_l"""
    if k_l % 2:
        raise DomainError(f"longitude weight must be even, got {k_l}")
    f1p = k_l // 2 - 1 - 2 * f0p
    f0m = k_m - f0p
    f1m = -2 * k_m - k_l // 2 + 1 + 2 * f0p
    return _family(f0p, f1p, f0m, f1m)


def surgery_flattening(p: int, q: int, r: int, s: int, f0p: int = 0) -> List[Triple]:
    """Flattening adapted to the (p, q) filling, given r, s with ps - qr = 1"""
    if p * s - q * r != 1:
        raise DomainError(f"(p, q, r, s) = ({p}, {q}, {r}, {s}) is not unimodular")
    return _family(f0p, r - 1 - 2 * f0p, -2 * s - f0p, -r + 4 * s + 1 + 2 * f0p)


def simpfs_residual(f: Sequence[Triple]) -> int:
    """f1- + 2 f0- + 2 f0+ + f1+, zero on every valid flattening"""
    return f[NEGATIVE][1] + 2 * f[NEGATIVE][0] + 2 * f[POSITIVE][0] + f[POSITIVE][1]


def weights(f: Sequence[Triple]) -> Tuple[int, int]:
    """(k_m, k_l) at the complete structure"""
    k_m = f[POSITIVE][2] + f[NEGATIVE][2]
    k_l = f[POSITIVE][0] - f[POSITIVE][2] + f[NEGATIVE][2] - f[NEGATIVE][0]
    return k_m, k_l


# ── Closed forms ─────────────────────────────────────────────────────────────
def s_sum(w0p: complex, w1p: complex, N) -> complex:
    """sum_{b=0}^{N-1} zeta^{b^2} prod_{k=1}^{b} w1'^-1 / (1 - w0' zeta^k)"""
    lv = level(N)
    total, term = 1 + 0j, 1 + 0j
    for beta in range(1, lv.n):
        denom = 1 - complex(w0p) * lv.zeta ** beta
        if abs(denom) < 1e-14:
            raise SingularInputError(f"pole of S at w0' zeta^{beta} = 1")
        term *= 1 / (complex(w1p) * denom)
        total += lv.zeta ** (beta * beta % lv.n) * term
    return complex(total)


def _quantum_moduli(N, p: Fig8Point, f, c) -> Tuple[Tuple[complex, ...], Tuple[complex, ...]]:
    m = build_fig8_mesh(p, f, c)
    return w_prime(m.tets[POSITIVE], N), w_prime(m.tets[NEGATIVE], N)


def _outer_factor(N, p: Fig8Point, f, c) -> Tuple[complex, Tuple[complex, ...], Tuple[complex, ...]]:
    lv = level(N)
    wp, zp = _quantum_moduli(lv, p, f, c)
    cp, cm = c[POSITIVE], c[NEGATIVE]
    prefactor = (wp[0] ** (-cp[1]) * wp[1] ** cp[0] * zp[0] ** (-cm[1]) * zp[1] ** cm[0]) ** lv.m
    g_part = np.conj(g_func(np.conj(zp[0]), lv)) * g_func(wp[0], lv) / abs(g_func(1, lv)) ** 2
    return complex(lv.n ** 2 * prefactor * g_part), wp, zp


def closed_form(N, p: Optional[Fig8Point] = None,
                f: Optional[Sequence[Triple]] = None,
                c: Optional[Sequence[Triple]] = None) -> complex:
    """Partition function of the knot complement as a product of two finite sums"""
    p = p or Fig8Point.complete()
    f = f or NATURAL_FLATTENING
    c = c or NATURAL_CHARGE
    lv = level(N)
    if lv.n == 1:
        m = build_fig8_mesh(p, f, c)
        return complex(np.prod([r1_scalar(t) for t in m.tets]))
    outer, wp, zp = _outer_factor(lv, p, f, c)
    return complex(outer * s_sum(wp[0], wp[1], lv) * np.conj(s_sum(np.conj(zp[0]), np.conj(zp[1]), lv)))


def dehn_sum(N, p: Fig8Point, f: Sequence[Triple], c: Sequence[Triple], r: int, s: int) -> complex:
    """
    Double sum over (alpha, beta) of the filled invariant. At r = s = 0 it
    factors into closed_form.
    """
    lv = level(N)
    if lv.n == 1:
        raise DomainError("the filled double sum needs N > 1")
    n, m, zeta = lv.n, lv.m, lv.zeta
    outer, wp, zp = _outer_factor(lv, p, f, c)
    u, v = wp[0], 1 / wp[1]
    uc, vc = np.conj(zp[0]), np.conj(1 / zp[1])
    filled = (n - 2 * s) % n
    total = 0j
    for beta in range(n):
        left = zeta ** ((beta * beta + r * (n - beta) * (m + 1)) % n) * omega(u, v, n - beta, lv)
        for alpha in range(n):
            right = np.conj(omega(uc, vc, alpha, lv)) * zeta ** (-(alpha * alpha) % n)
            tail = omega(uc * zeta ** alpha, vc * zeta ** ((-4 * s * alpha * (m + 1)) % n), filled, lv)
            total += left * right * tail
    return complex(outer * total)


def meridian_longitude_logs(p: Fig8Point) -> Tuple[complex, complex]:
    """(log mu(m), log mu(l)) as log-derivative weights of the cusp paths"""
    m = build_fig8_mesh(p)
    return path_weight(m, meridian_path(), "log-derivative"), path_weight(m, longitude_path(), "log-derivative")


def filling_residual(p: Fig8Point, pq: Tuple[int, int]) -> complex:
    hm, hl = meridian_longitude_logs(p)
    return pq[0] * hm + pq[1] * hl - 2j * np.pi


def solve_dehn_point(p: int, q: int, start: Optional[Fig8Point] = None,
                     max_iter: int = config.NEWTON_MAX_ITER, tol: float = config.NEWTON_TOL) -> Fig8Point:
    """
    Damped Newton on w2 for p log mu(m) + q log mu(l) = 2 pi i, continued
    from the complete structure by ramping the right hand side.
    """
    if p == 0 and q == 0:
        raise DomainError("(p, q) = (0, 0) is not a filling slope")
    point = start or Fig8Point.complete()
    sheet = point.sheet
    h = config.NEWTON_STEP

    def residual(w2: complex, target: complex) -> complex:
        hm, hl = meridian_longitude_logs(Fig8Point(w2, sheet))
        return p * hm + q * hl - target

    w2 = point.w2
    for step in range(1, config.CONTINUATION_STEPS + 1):
        target = 2j * np.pi * step / config.CONTINUATION_STEPS
        for it in range(max_iter):
            try:
                value = residual(w2, target)
                if abs(value) < tol:
                    break
                slope = (residual(w2 + h, target) - residual(w2 - h, target)) / (2 * h)
            except DomainError as e:
                raise ConvergenceError(f"Newton left the deformation space at w2 = {w2}: {e}") from e
            if slope == 0:
                raise ConvergenceError(f"flat residual at w2 = {w2}")
            delta = value / slope
            damping = 1.0
            while damping > 1e-6:
                trial = w2 - damping * delta
                try:
                    if abs(residual(trial, target)) < abs(value):
                        break
                except DomainError:
                    pass
                damping *= config.NEWTON_DAMPING
            w2 = w2 - damping * delta
        else:
            raise ConvergenceError(f"no convergence for ({p}, {q}) at continuation step {step}")
        logger.debug(f"continuation {step}/{config.CONTINUATION_STEPS}: w2 = {w2:.10g}")

    solved = Fig8Point(w2, sheet)
    logger.info(f"Dehn filling ({p}, {q}) solved at {solved}")
    return solved


def dehn_filled_value(N, p: int, q: int, r: int, s: int, point: Optional[Fig8Point] = None,
                      f0p: int = 0, c: Optional[Sequence[Triple]] = None,
                      tol: float = 1e-8) -> complex:
    """Invariant of the (p, q) filling at a point solving the filling equation"""
    if p * s - q * r != 1:
        raise DomainError(f"(p, q, r, s) = ({p}, {q}, {r}, {s}) is not unimodular")
    point = point or solve_dehn_point(p, q)
    residual = abs(filling_residual(point, (p, q)))
    if residual > tol:
        raise DomainError(f"point does not solve the ({p}, {q}) filling equation (residual {residual:.3e})")
    f = surgery_flattening(p, q, r, s, f0p)
    return dehn_sum(N, point, f, c or NATURAL_CHARGE, r, s)


# ── Checks ───────────────────────────────────────────────────────────────────
def solver_decorations(p: Optional[Fig8Point] = None) -> Tuple[List[Triple], List[Triple]]:
    """Integer-solver flattening with zero cusp weights and charge with C(e) = 2"""
    p = p or Fig8Point.complete()
    hm, hl = meridian_longitude_logs(p)
    m = decorate(build_fig8_mesh(p), [(meridian_path(), hm), (longitude_path(), hl)])
    return m.flattenings(), m.charges()


def crosscheck(N, p: Optional[Fig8Point] = None,
               f: Optional[Sequence[Triple]] = None,
               c: Optional[Sequence[Triple]] = None,
               tol: float = config.EQ_MOD_N_TOL) -> PhaseWitness:
    """
    Generic contraction of the mesh against closed_form / N^2. Missing
    decorations come from the integer solvers.
    """
    lv = level(N)
    p = p or Fig8Point.complete()
    if f is None or c is None:
        solved_f, solved_c = solver_decorations(p)
        f = f or solved_f
        c = c or solved_c
    m = build_fig8_mesh(p, f, c)
    state = trace_tensor(m, lv).scalar
    closed = closed_form(lv, p, f, c)
    if lv.n > 1:
        closed /= lv.n ** 2
    witness = eq_mod_n(np.array(state), np.array(closed), lv, tol)
    logger.info(f"fig-8 N={lv.n}: state sum {state:.10g}, closed form {closed:.10g}, {witness}")
    return witness


def volume() -> float:
    """Hyperbolic volume of the complement, 6 Lambda(pi/3)"""
    return 6 * lobachevsky(np.pi / 3)


def level_one_modulus(p: Optional[Fig8Point] = None) -> float:
    """|prod r1|; equals exp(volume / pi) at the complete structure"""
    m = natural_mesh(p)
    return float(abs(np.prod([r1_scalar(t) for t in m.tets])))
