"""Complex special functions behind the matrix dilogarithms"""

import logging
from typing import Union

import numpy as np
from scipy import integrate, special

from . import config
from .errors import DomainError, SingularInputError

logger = logging.getLogger(__name__)


class LevelN:
    """An odd level N = 2m+1 together with zeta = exp(2i pi/N)"""

    def __init__(self, n: int):
        n = int(n)
        if n < 1 or n % 2 == 0:
            raise DomainError(f"level must be an odd positive integer, got {n}")
        self.n = n
        self.m = (n - 1) // 2
        self.zeta = np.exp(2j * np.pi / n)

    def __int__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return int(self) == int(other)

    def __hash__(self) -> int:
        return hash(self.n)

    def __repr__(self) -> str:
        return f"LevelN({self.n})"

    def roots(self) -> np.ndarray:
        """All powers zeta^0 .. zeta^(N-1)"""
        return self.zeta ** np.arange(self.n)


def level(N: Union[int, LevelN]) -> LevelN:
    """Coerce an int or a LevelN into a LevelN"""
    if isinstance(N, LevelN):
        return N
    return LevelN(N)


def principal_log(z: complex) -> complex:
    """Logarithm with imaginary part in (-pi, pi]"""
    z = complex(z)
    if z == 0:
        raise DomainError("logarithm of zero")
    result = complex(np.log(z))
    # numpy gives -pi on the negative axis when Im(z) is -0.0
    if result.imag <= -np.pi:
        result += 2j * np.pi
    return result


def nth_root(z: complex, N: Union[int, LevelN]) -> complex:
    """z^(1/N) = exp(log(z)/N), with 0^(1/N) = 0"""
    z = complex(z)
    if z == 0:
        return 0j
    return complex(np.exp(principal_log(z) / int(N)))


def g_func(x: complex, N: Union[int, LevelN]) -> complex:
    """The cyclic product g(x) = prod_j (1 - x zeta^-j)^(j/N)"""
    lv = level(N)
    if lv.n == 1:
        raise DomainError("g is only defined for N > 1")
    result = 1 + 0j
    for j in range(1, lv.n):
        factor = 1 - complex(x) * lv.zeta ** (-j)
        if factor == 0:
            return 0j
        result *= np.exp(j * principal_log(factor) / lv.n)
    return complex(result)


def h_func(x: complex, N: Union[int, LevelN]) -> complex:
    """g normalized at one: h(x) = g(x) / g(1)"""
    return g_func(x, N) / g_func(1, N)


def omega(u1: complex, v1: complex, n: int, N: Union[int, LevelN]) -> complex:
    """
    omega(u', v'|n) = prod_{j=1}^{n mod N} v' / (1 - u' zeta^j)

    The pair must lie on the Fermat curve u'^N + v'^N = 1.
    """
    lv = level(N)
    u1 = complex(u1)
    v1 = complex(v1)
    residual = abs(u1 ** lv.n + v1 ** lv.n - 1)
    if residual > config.PRECONDITION_TOL * max(1.0, abs(u1) ** lv.n):
        raise DomainError(f"omega arguments off the curve u^N + v^N = 1 (residual {residual:.3e})")

    result = 1 + 0j
    for j in range(1, int(n) % lv.n + 1):
        denom = 1 - u1 * lv.zeta ** j
        if abs(denom) < 1e-14:
            raise SingularInputError(f"omega pole: u' zeta^{j} = 1")
        result *= v1 / denom
    return result


def bracket(x: complex, N: Union[int, LevelN]) -> complex:
    """[x] = (1 - x^N) / (N (1 - x)), extended by 1 at x = 1"""
    n = int(N)
    powers = complex(x) ** np.arange(n)
    return complex(np.sum(powers) / n)


def dilog(z: complex) -> complex:
    """Principal dilogarithm Li2(z)"""
    return complex(special.spence(1 - complex(z)))


def _complex_quad(func, a: complex, b: complex) -> complex:
    """Integrate a complex function along the segment a -> b"""
    direction = b - a

    def real_part(s):
        return (func(a + direction * s) * direction).real

    def imag_part(s):
        return (func(a + direction * s) * direction).imag

    opts = dict(epsabs=config.QUAD_EPSABS, epsrel=config.QUAD_EPSREL, limit=config.QUAD_LIMIT)
    re, _ = integrate.quad(real_part, 0.0, 1.0, **opts)
    im, _ = integrate.quad(imag_part, 0.0, 1.0, **opts)
    return complex(re, im)


def _rogers_integrand(t: complex) -> complex:
    # (log t)/(1-t) + log(1-t)/t, the flattening-free part
    return np.log(t) / (1 - t) + np.log(1 - t) / t


def _segment_distance(point: complex, a: complex, b: complex) -> float:
    direction = b - a
    s = ((point - a) * np.conj(direction)).real / abs(direction) ** 2
    s = min(max(s, 0.0), 1.0)
    return abs(point - (a + s * direction))


def rogers_path(w0: complex) -> list:
    """
    Integration path from 0 to w0 (list of vertices).

    Only the first vertex may sit at 0, where the integrand has an integrable
    log singularity. A straight segment passing near 1 is replaced by a detour
    through i|w0|; its second leg keeps a distance of at least |w0|/sqrt(2)
    from 0, and the first leg stays on the imaginary axis.
    """
    w0 = complex(w0)
    if _segment_distance(1.0, 0.0, w0) >= config.ROGERS_CUT_GUARD:
        return [0j, w0]
    detour = 1j * abs(w0)
    if min(_segment_distance(0.0, detour, w0), _segment_distance(1.0, detour, w0)) < config.ROGERS_CUT_GUARD:
        raise DomainError(f"no admissible Rogers path to w0 = {w0}")
    logger.debug(f"Rogers path detours through {detour}")
    return [0j, detour, w0]


def rogers_extended(w0: complex, f0: int, f1: int) -> complex:
    """
    Extended Rogers dilogarithm R(w0; f0, f1).

    The flattening-free part is integrated numerically along rogers_path;
    the f0 and f1 terms integrate in closed form.
    """
    w0 = complex(w0)
    if abs(w0) < config.ROGERS_CUT_GUARD or abs(w0 - 1) < config.ROGERS_CUT_GUARD:
        raise DomainError(f"Rogers dilogarithm undefined at w0 = {w0}")

    path = rogers_path(w0)
    regular = 0j
    for a, b in zip(path[:-1], path[1:]):
        regular += _complex_quad(_rogers_integrand, a, b)

    log_w = principal_log(w0)
    log_1w = principal_log(1 - w0)
    flat = 0.5j * np.pi * (f0 * log_1w + f1 * log_w)
    return complex(-0.5 * regular + flat - np.pi ** 2 / 6)


def rogers_closed_form(w0: complex, f0: int, f1: int) -> complex:
    """Same value through Li2, valid off the real ray (1, inf)"""
    w0 = complex(w0)
    log_w = principal_log(w0)
    log_1w = principal_log(1 - w0)
    return (dilog(w0) + 0.5 * log_w * log_1w
            + 0.5j * np.pi * (f0 * log_1w + f1 * log_w) - np.pi ** 2 / 6)


def lobachevsky(theta: float) -> float:
    """Lobachevsky function -int_0^theta log|2 sin t| dt"""
    reduced = float(theta) % np.pi
    sign = 1.0
    if reduced > np.pi / 2:
        reduced = np.pi - reduced
        sign = -1.0
    if reduced == 0.0:
        return 0.0
    value, _ = integrate.quad(lambda t: np.log(abs(2 * np.sin(t))), 0.0, reduced,
                              epsabs=config.QUAD_EPSABS, limit=config.QUAD_LIMIT)
    return -sign * value


def lobachevsky_series(theta: float, terms: int = 200000) -> float:
    """Fourier series 1/2 sum sin(2n theta)/n^2, used as an independent oracle"""
    n = np.arange(1, terms + 1)
    return float(0.5 * np.sum(np.sin(2 * n * theta) / n ** 2))
