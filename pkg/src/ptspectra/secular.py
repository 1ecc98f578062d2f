"""WKB secular equations for real levels, and the complex quantization rule.

For real E the path G runs -1 -> alpha_1 -> alpha_2 -> +1 through the mirror
pair of turning points picked by ``stokes.relevant_pair``.  With the global
prefactor hbar^-1 g^(1/2) L^((2n+3)/2):

    I_T = int_G sqrt(Q),  I_M = int_{alpha_1}^{alpha_2} sqrt(Q),
    I_L = Re int_{-1}^{alpha_1} sqrt(Q),  Delta = (-1)^(n+1) 2 Im int_{-1}^{alpha_1} sqrt(Q),

and real levels solve +-sin(I_T) + e^Delta cos(I_M) = 0.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .core.model import ModelParams, QFunction
from .core.paths import ComplexPath, action_integral, sqrtq_continued
from .core.roots import find_root_complex
from .errors import NotMonotone, TurningPairUnavailable
from .scaling import relevant_turning_point
from .stokes import relevant_pair, seed_radius

MASLOV = math.pi / 4


@dataclass(frozen=True)
class SecularData:
    I_T: float
    I_M: float
    I_L: float
    Delta: float
    path: ComplexPath
    I_T_complex: complex = 0j
    I_M_complex: complex = 0j


def _mapped_real(E_real: float, params: ModelParams) -> float:
    if params.g == 0:
        raise TurningPairUnavailable("no turning points without coupling")
    e = float(E_real) / params.energy_unit
    if not e > 0:
        raise ValueError("energy must be real and positive")
    return e


def secular_data(E_real: float, params: ModelParams) -> SecularData:
    e = _mapped_real(E_real, params)
    n = params.n
    Q = QFunction(e, n)
    a1, a2 = relevant_pair(e, n)
    # pass each turning point on the side facing the real axis, so G stays
    # homotopic to the real segment [-1, 1]
    side = 1.0 if n % 2 == 0 else -1.0
    off = -1j * side * 50 * seed_radius(e, n)
    seed = cmath.sqrt(Q(-1.0))
    if n == 0:
        verts = [-1.0, a1 + off, 1.0]
    else:
        verts = [-1.0, a1 + off, a2 + off, 1.0]
    G = ComplexPath(verts, seed)
    i_t = action_integral(G, Q)
    s_at = sqrtq_continued(G, Q)
    left = action_integral(ComplexPath([-1.0, a1], seed), Q)
    i_m = 0j
    if n > 0:
        i_m = action_integral(ComplexPath([a1, a2], s_at[1]), Q)
    sc = params.scale
    return SecularData(
        I_T=sc * i_t.real,
        I_M=sc * i_m.real,
        I_L=sc * left.real,
        Delta=(-1) ** (n + 1) * 2 * sc * left.imag,
        path=G,
        I_T_complex=sc * i_t,
        I_M_complex=sc * i_m,
    )


def bounded_pair(I_T: float, I_M: float, Delta: float):
    """(+sin I_T + e^D cos I_M, -sin I_T + e^D cos I_M) divided by max(1, e^D)."""
    w1 = math.exp(-max(Delta, 0.0))
    w2 = math.exp(min(Delta, 0.0))
    return w1 * math.sin(I_T) + w2 * math.cos(I_M), -w1 * math.sin(I_T) + w2 * math.cos(I_M)


def secular_residuals(E_real: float, params: ModelParams):
    d = secular_data(E_real, params)
    return bounded_pair(d.I_T, d.I_M, d.Delta)


def _solve_increasing(f, target: float, lo: float, hi: float) -> float:
    flo = f(lo) - target
    if flo > 0:
        raise NotMonotone(f"target {target:g} lies below the bracket start")
    fhi = f(hi) - target
    for _ in range(80):
        if fhi > 0:
            break
        lo, flo = hi, fhi
        hi *= 2
        fhi = f(hi) - target
    else:
        raise NotMonotone(f"could not bracket {target:g}")
    return brentq(lambda x: f(x) - target, lo, hi, xtol=1e-14, rtol=1e-14)


def bt_levels(params: ModelParams, j_max: int) -> list[float]:
    """Box-type levels from I_T(E) = j pi, j = 1..j_max."""
    if params.g == 0:
        return [(math.pi * params.hbar * j / (2 * params.L)) ** 2 for j in range(1, j_max + 1)]
    it = lambda E: secular_data(E, params).I_T
    lo = 1e-3 * params.box_ground
    out = []
    for j in range(1, j_max + 1):
        E = _solve_increasing(it, j * math.pi, lo, max(2 * lo, params.box_ground * j * j))
        out.append(E)
        lo = E
    return out


def bs_levels(params: ModelParams, j_max: int) -> list[float]:
    """Bohr-Sommerfeld levels from I_M(E) = (j - 1/2) pi, j = 1..j_max.

    The count starts at j = 1 for the ground state, so the (N + 1/2) form of
    the rule corresponds to N = j - 1.
    """
    if params.n == 0:
        raise TurningPairUnavailable("the linear model has a single turning point")
    im = lambda E: secular_data(E, params).I_M
    lo = 1e-6 * params.energy_unit
    out = []
    for j in range(1, j_max + 1):
        E = _solve_increasing(im, (j - 0.5) * math.pi, lo, 2 * lo)
        out.append(E)
        lo = E
    return out


def _dist_to_pi_multiple(x: float) -> float:
    return abs(x - math.pi * round(x / math.pi))


def breakup_residuals(E_real: float, params: ModelParams):
    """Distances of I_L + pi/4 and I_L + I_M + pi/4 to the nearest multiple of pi."""
    d = secular_data(E_real, params)
    return _dist_to_pi_multiple(d.I_L + MASLOV), _dist_to_pi_multiple(d.I_L + d.I_M + MASLOV)


def y_action(E: complex, params: ModelParams, alpha: complex | None = None, wall: float = -1.0) -> complex:
    """Scaled action from the relevant turning point to the wall (default y = -1), on the Re >= 0 sheet.

    Under E -> conj E the reflection y -> -conj y maps the turning point and
    the wall together, so the mirrored evaluation uses wall = +1.
    """
    e = complex(E) / params.energy_unit
    if alpha is None:
        alpha = relevant_turning_point(params.n, e)
    if abs(alpha - wall) < 1e-14:
        return 0j
    val = action_integral(ComplexPath([alpha, wall], 1.0), QFunction(e, params.n))
    return params.scale * (-val if val.real < 0 else val)


def complex_quantization_residual(E: complex, params: ModelParams, penalty: float = 1.0,
                                  alpha: complex | None = None, wall: float = -1.0) -> float:
    a = y_action(E, params, alpha, wall)
    return abs(cmath.sin(a + MASLOV)) + penalty * abs(a.imag)


def complex_level(params: ModelParams, j: int, seed: complex) -> complex:
    """Solve action(E) = (j - 1/4) pi near ``seed``; the conjugate is the partner level."""
    target = (j - 0.25) * math.pi
    seed = complex(seed)
    z = find_root_complex(lambda E: y_action(E, params) - target, seed, tol=1e-11)
    return z.conjugate() if z.imag * seed.imag < 0 else z
