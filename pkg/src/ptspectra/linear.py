"""Exact and semiclassical analysis of the linear model V = -i g x (n = 0).

In the variable z = exp(-i pi/6) hbar^(-2/3) g^(1/3) (x - i E / g) the
Schroedinger equation becomes Airy's equation, so Dirichlet eigenvalues are
the zeros of

    D(E) = w1(z+) w2(z-) - w1(z-) w2(z+),    z+- = exp(-i pi/6) kappa (+-1 - i E/(gL))

for any pair of independent Airy solutions w1, w2.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .airy import AI0, AIP0, MU, airy_scaled, airy_zero_wkb, airy_zeros
from .core.model import ModelParams, QFunction
from .core.paths import ComplexPath, action_integral
from .core.roots import ZeroSearch, real_sign_roots
from .errors import IncompleteSpectrum, PTSpectraError
from .scaling import E_C_N0, TAU_C_N0, ScalingBranch, closed_form_n0

ROT = cmath.exp(-1j * math.pi / 6)
PAIRINGS = {"a": (1.0, MU), "b": (1.0, MU * MU), "c": (MU, MU * MU)}


class WrongModel(PTSpectraError, ValueError):
    pass


def _require_linear(params: ModelParams):
    if params.n != 0:
        raise WrongModel("the Airy analysis applies to n = 0 only")


def kappa(params: ModelParams) -> float:
    return params.hbar ** (-2 / 3) * params.g ** (1 / 3) * params.L


@dataclass(frozen=True)
class LinearMapping:
    kappa: float
    z_plus: complex
    z_minus: complex

    @classmethod
    def from_energy(cls, E: complex, params: ModelParams) -> "LinearMapping":
        _require_linear(params)
        k = kappa(params)
        e = complex(E) / params.energy_unit
        return cls(k, ROT * k * (1 - 1j * e), ROT * k * (-1 - 1j * e))


def _scaled_ai(c: complex, z: complex):
    m, _, zeta, _ = airy_scaled(c * z)
    return m, zeta


def characteristic_det_scaled(E: complex, params: ModelParams, pairing: str = "a"):
    """Characteristic determinant as (mantissa, log_scale).

    D = mantissa * exp(log_scale) with log_scale the log-magnitude of the
    larger of the two products, so |mantissa| <= 2.
    """
    mp = LinearMapping.from_energy(E, params)
    c1, c2 = PAIRINGS[pairing]
    a_p, za_p = _scaled_ai(c1, mp.z_plus)
    b_m, zb_m = _scaled_ai(c2, mp.z_minus)
    a_m, za_m = _scaled_ai(c1, mp.z_minus)
    b_p, zb_p = _scaled_ai(c2, mp.z_plus)
    # log of each product: log|m1 m2| - Re(zeta1 + zeta2)
    x1 = -(za_p + zb_m)
    x2 = -(za_m + zb_p)
    l1 = x1.real + math.log(abs(a_p * b_m) or 1e-300)
    l2 = x2.real + math.log(abs(a_m * b_p) or 1e-300)
    ref = max(l1, l2)
    t1 = a_p * b_m * cmath.exp(x1 - ref)
    t2 = a_m * b_p * cmath.exp(x2 - ref)
    return t1 - t2, ref


def characteristic_det(E: complex, params: ModelParams, pairing: str = "a") -> complex:
    m, ref = characteristic_det_scaled(E, params, pairing)
    return m * math.exp(ref) if ref < 700 else m * math.inf


def _wronskian0(pairing: str) -> complex:
    """W[w1, w2] in z, evaluated at z = 0 where both values are exact."""
    c1, c2 = PAIRINGS[pairing]
    return AI0 * c2 * AIP0 - c1 * AIP0 * AI0


def dirichlet_scaled(E: complex, params: ModelParams, pairing: str = "a"):
    """psi(L) for the solution with psi(-L) = 0, psi'(-L) = 1, as (mantissa, log_scale).

    This is independent of the pairing and real for real E.
    """
    m, ref = characteristic_det_scaled(E, params, pairing)
    dzdx = ROT * params.hbar ** (-2 / 3) * params.g ** (1 / 3)
    c = -1.0 / (dzdx * _wronskian0(pairing))
    return m * c, ref


def dirichlet_value(E: complex, params: ModelParams) -> complex:
    m, ref = dirichlet_scaled(E, params)
    return m * math.exp(ref)


# --- SSH branches ------------------------------------------------------------

class SshBranch(str, Enum):
    III = "III"
    X = "X"


@dataclass(frozen=True)
class SshBranchPoint:
    s: float
    branch: SshBranch
    E_mapped: complex
    E_phys: complex


def ssh_branch_point(s: float, branch: SshBranch, params: ModelParams) -> SshBranchPoint:
    k = kappa(params)
    if branch is SshBranch.III:
        e = 1j + cmath.exp(-1j * math.pi / 3) * s / k
    else:
        e = -1j + cmath.exp(1j * math.pi / 3) * s / k
    return SshBranchPoint(s, branch, e, e * params.energy_unit)


def s_critical(params: ModelParams) -> float:
    return 2 * kappa(params) / math.sqrt(3)


def ssh_complex_eigenvalues(params: ModelParams, zeros: str = "wkb"):
    """Conjugate pairs E(s_k) for all Airy zeros s_k below s_c = 2 kappa / sqrt 3.

    ``zeros='wkb'`` uses s_k = [3 pi (4k - 1) / 8]^(2/3), which reproduces the
    closed-form threshold; ``'exact'`` uses the refined Airy zeros.
    """
    _require_linear(params)
    sc = s_critical(params)
    out = []
    k = 1
    exact = airy_zeros(100) if zeros == "exact" else None
    while True:
        s = exact[k - 1] if exact is not None else airy_zero_wkb(k)
        if s >= sc:
            break
        out.append((ssh_branch_point(s, SshBranch.III, params), ssh_branch_point(s, SshBranch.X, params)))
        k += 1
        if k > 100:
            break
    return out


def pt_threshold(hbar: float = 1.0) -> float:
    """Value of g L^3 above which complex pairs appear: (3/4)^(3/2) (9 hbar pi / 8)^2."""
    return 0.75 ** 1.5 * (9 * hbar * math.pi / 8) ** 2


# --- real box spectrum ---------------------------------------------------------

def box_action(emapped: float) -> complex:
    """Integral of sqrt(E + i y) over y in [-1, 1] (real for real E > 0)."""
    return action_integral(ComplexPath([-1.0, 1.0], 1.0), QFunction(emapped, 0))


def box_quantization_real(params: ModelParams, j_max: int):
    """Real levels from scale * int sqrt(E + i y) dy = pi j, keeping E >= 1/sqrt(3).

    Returns (levels, filtered) with levels a list of (j, E) and filtered the
    number of solutions discarded below the validity bound.
    """
    _require_linear(params)
    scale = params.scale
    e_min = 3 ** -0.5
    levels, filtered = [], 0
    i_min = box_action(e_min).real
    for j in range(1, j_max + 1):
        target = math.pi * j / scale
        if i_min >= target:
            filtered += 1
            continue
        hi = max(2 * e_min, (target / 2) ** 2 * 1.5 + 1)
        while box_action(hi).real < target:
            hi *= 2
        e = brentq(lambda x: box_action(x).real - target, e_min, hi, xtol=1e-14, rtol=1e-14)
        levels.append((j, e * params.energy_unit))
    return levels, filtered


def scaling_graph_n0(samples: int = 400) -> ScalingBranch:
    s = np.linspace(0.0, 1.0, samples)
    tau = TAU_C_N0 * s ** 1.5
    e = closed_form_n0(tau)
    e[-1] = E_C_N0
    return ScalingBranch(0, tau, e, TAU_C_N0, E_C_N0, True, None)


# --- exhaustive spectrum -----------------------------------------------------------

def _mode_spacing(params: ModelParams):
    h = params.hbar
    return lambda E: math.pi * h * math.sqrt(max(E, params.box_ground)) / params.L


def exact_spectrum(params: ModelParams, count: int, per_mode: int = 40):
    """The ``count`` eigenvalues of smallest modulus, from the Airy determinant.

    Real ones come from sign changes of the (real) Dirichlet function on the
    real axis; complex ones from an argument-principle search over
    Re E in [E0/2, E_hi], |Im E| <= 1.05 g L + E0, seeded by the SSH formula.
    """
    _require_linear(params)
    e0 = params.box_ground
    f_real = lambda x: (lambda mr: (mr[0]).real * math.exp(min(mr[1] - ref_box[0], 700)))(dirichlet_scaled(x, params))
    ref_box = [dirichlet_scaled(e0, params)[1]]
    spacing = _mode_spacing(params)
    e_hi = e0 * (count + 3) ** 2
    seeds = [p.E_phys for pair in ssh_complex_eigenvalues(params) for p in pair]
    while True:
        reals, _, _ = real_sign_roots(lambda x: _sign_safe(f_real, x), 0.5 * e0, e_hi, spacing, per_mode)
        hi_edge = _edge_between(reals, e_hi)
        im = 1.05 * params.energy_unit + e0
        search = ZeroSearch(lambda E: dirichlet_scaled(E, params), tol=1e-13,
                            max_step=lambda E: 0.25 * spacing(abs(E)))
        roots = search.run(complex(0.5 * e0, -im), complex(hi_edge, im), known=[r for r in reals if r < hi_edge],
                           seeds=seeds)
        roots = _symmetrize(roots)
        if len(roots) >= count:
            roots.sort(key=lambda z: (abs(z), -z.imag))
            if abs(roots[count - 1]) <= hi_edge:
                return sorted(roots[:count], key=_order_key)
        e_hi *= 1.6


def _sign_safe(f, x):
    v = f(x)
    return v if math.isfinite(v) else math.copysign(1e300, v)


def _edge_between(reals, e_hi):
    """A right edge placed halfway between real roots so no root sits on it."""
    below = [r for r in reals if r < e_hi]
    if not below:
        return e_hi
    if len(below) >= 2:
        return 0.5 * (below[-1] + below[-2]) if e_hi - below[-1] < 0.25 * (below[-1] - below[-2]) else e_hi
    return e_hi


def _symmetrize(roots):
    """Snap near-real roots onto the axis; complex roots come in conjugate pairs."""
    out = []
    for r in roots:
        if abs(r.imag) <= 1e-10 * max(1.0, abs(r)):
            out.append(complex(r.real, 0.0))
        else:
            out.append(r)
    return out


def _order_key(z: complex):
    return (round(z.real, 12), 0 if z.imag >= 0 else 1, abs(z.imag))
