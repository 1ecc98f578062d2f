"""Complex Airy function Ai(z) and its derivative, zeros and WKB forms.

Evaluation strategy (all scalar, double precision):

* ``maclaurin``: the two power-series solutions with exact values at 0.
  Used when the series does not suffer cancellation, which is measured by
  ``|zeta| + Re zeta`` with ``zeta = (2/3) z^(3/2)``.
* ``taylor``: inside |z| <= Z_SWITCH but deep in the decaying sector the
  series cancels catastrophically; there the ODE is Taylor-stepped inward
  from the asymptotic region along the same ray (a stable direction).
* ``asymptotic_dominant``: Poincare series, optimally truncated, for
  |arg z| <= 2 pi / 3.
* ``asymptotic_oscillatory``: beyond that sector via the connection
  formula Ai(z) = -mu Ai(mu z) - mu^2 Ai(mu^2 z), mu = exp(2 pi i / 3).

Every path returns a mantissa ``m`` with Ai(z) = m * exp(-zeta), so that
products of Airy functions deep in the dominant sector can be formed
without overflow.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import PTSpectraError, SectorViolation

Z_SWITCH = 6.5
MU = cmath.exp(2j * math.pi / 3)
AI0 = 3 ** (-2 / 3) / math.gamma(2 / 3)
AIP0 = -(3 ** (-1 / 3)) / math.gamma(1 / 3)
_SQRT_PI = math.sqrt(math.pi)
_LOSS_MAX = 11.5   # log of tolerated series cancellation, keeps ~1e-11 relative
_LOSS_INNER = 8.0  # stricter bound inside Z_SWITCH where the Taylor route is cheap
_ASYM_MIN = 27.6   # 2|zeta| beyond which the Poincare series is good to ~1e-12
_TAYLOR_R = 9.0


class OverflowRisk(PTSpectraError, OverflowError):
    pass


class Method(str, Enum):
    MACLAURIN = "maclaurin"
    TAYLOR = "taylor"
    ASYMPTOTIC_DOMINANT = "asymptotic_dominant"
    ASYMPTOTIC_OSCILLATORY = "asymptotic_oscillatory"


@dataclass(frozen=True)
class AiryEval:
    z: complex
    ai: complex
    aip: complex
    method: Method


def _zeta(z: complex) -> complex:
    return (2.0 / 3.0) * z * cmath.sqrt(z)


# --- power series -----------------------------------------------------------

def _maclaurin(z: complex):
    z3 = z * z * z
    f, fp = 1.0 + 0j, 0j
    g, gp = z, 1.0 + 0j
    t, tp = 1.0 + 0j, 0j      # terms of f and f'
    u, up = z, 1.0 + 0j       # terms of g and g'
    tp = z * z / 2.0
    fp = tp
    for k in range(1, 400):
        t = t * z3 / ((3 * k - 1) * (3 * k))
        u = u * z3 / ((3 * k) * (3 * k + 1))
        up = up * z3 / ((3 * k - 2) * (3 * k))
        if k > 1:
            tp = tp * z3 / ((3 * k - 3) * (3 * k - 1))
            fp += tp
        f += t
        g += u
        gp += up
        if k > 3 and max(abs(t), abs(u), abs(up), abs(tp)) < 1e-18 * max(abs(f), abs(g), abs(gp), abs(fp), 1e-300):
            break
    ai = AI0 * f + AIP0 * g
    aip = AI0 * fp + AIP0 * gp
    return ai, aip


def _asymptotic(z: complex):
    """Mantissas (m, m') with Ai = m e^-zeta, Ai' = m' e^-zeta; |arg z| <= 2pi/3."""
    zeta = _zeta(z)
    inv = 1.0 / zeta
    su, sv = 1.0 + 0j, 1.0 + 0j
    u = 1.0
    pw = 1.0 + 0j
    last = math.inf
    for k in range(1, 200):
        u = u * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
        v = -u * (6 * k + 1) / (6 * k - 1)
        pw = -pw * inv
        tu, tv = u * pw, v * pw
        mag = max(abs(tu), abs(tv))
        if mag >= last:
            break  # optimal truncation
        su += tu
        sv += tv
        last = mag
        if mag < 1e-17:
            break
    z14 = cmath.sqrt(cmath.sqrt(z))
    m = su / (2 * _SQRT_PI * z14)
    mp = -z14 * sv / (2 * _SQRT_PI)
    return m, mp, zeta


def _taylor_inward(z: complex):
    """Ai, Ai' at z by Taylor-stepping w'' = z w inward from radius _TAYLOR_R."""
    r = abs(z)
    direction = z / r
    z0 = direction * _TAYLOR_R
    m, mp, zeta0, _ = airy_scaled(z0)
    e = cmath.exp(-zeta0)
    w, wp = m * e, mp * e
    nsteps = max(1, int(math.ceil((_TAYLOR_R - r) / 0.5)))
    h = (z - z0) / nsteps
    for _ in range(nsteps):
        # coefficients c_m of w(z0 + h) = sum c_m h^m, with m(m-1) c_m = z0 c_{m-2} + c_{m-3}
        c2, c1, c0 = z0 * w / 2.0, wp, w
        s = c0 + c1 * h + c2 * h * h
        sp = c1 + 2 * c2 * h
        hm1 = h * h  # h^(m-1)
        for m in range(3, 120):
            cm = (z0 * c1 + c0) / (m * (m - 1))
            term_p = m * cm * hm1
            hm1 = hm1 * h
            term = cm * hm1
            s += term
            sp += term_p
            c0, c1, c2 = c1, c2, cm
            if m > 6 and abs(term) < 1e-18 * abs(s) and abs(term_p) < 1e-18 * abs(sp):
                break
        w, wp = s, sp
        z0 = z0 + h
    return w, wp


def _method_for(z: complex) -> Method:
    r = abs(z)
    if r <= 2.0:
        return Method.MACLAURIN
    zeta = _zeta(z)
    loss = abs(zeta) + zeta.real
    if r <= Z_SWITCH:
        return Method.MACLAURIN if loss <= _LOSS_INNER else Method.TAYLOR
    if 2 * abs(zeta) < _ASYM_MIN and loss <= _LOSS_MAX:
        return Method.MACLAURIN
    if abs(cmath.phase(z)) <= 2 * math.pi / 3:
        return Method.ASYMPTOTIC_DOMINANT
    return Method.ASYMPTOTIC_OSCILLATORY


def _scaled_upper(z: complex, method: Method):
    """(m, m', zeta) for Im z >= 0."""
    if method is Method.ASYMPTOTIC_DOMINANT:
        return _asymptotic(z)
    if method is Method.ASYMPTOTIC_OSCILLATORY:
        # arg z in (2pi/3, pi]: zeta(mu z) = zeta and zeta(mu^2 z) = -zeta on principal sheets
        zeta = _zeta(z)
        m1, m1p, zeta1 = _asymptotic(MU * z)
        m2, m2p, zeta2 = _asymptotic(MU * MU * z)
        e1 = cmath.exp(zeta - zeta1)
        e2 = cmath.exp(zeta - zeta2)
        m = -MU * m1 * e1 - MU * MU * m2 * e2
        mp = -MU * MU * m1p * e1 - MU * m2p * e2
        return m, mp, zeta
    zeta = _zeta(z)
    ai, aip = _maclaurin(z) if method is Method.MACLAURIN else _taylor_inward(z)
    e = cmath.exp(zeta)
    return ai * e, aip * e, zeta


def airy_scaled(z: complex):
    """Return (m, m', zeta, method) with Ai(z) = m e^-zeta and Ai'(z) = m' e^-zeta."""
    z = complex(z)
    if z.imag < 0 or (z.imag == 0 and z.real < 0 and math.copysign(1.0, z.imag) < 0):
        m, mp, zeta, method = airy_scaled(z.conjugate())
        return m.conjugate(), mp.conjugate(), zeta.conjugate(), method
    method = _method_for(z)
    m, mp, zeta = _scaled_upper(z, method)
    return m, mp, zeta, method


def airy_ai_scaled(z: complex):
    """(mantissa, zeta) with Ai(z) = mantissa * exp(-zeta), zeta = (2/3) z^(3/2)."""
    m, _, zeta, _ = airy_scaled(z)
    return m, zeta


def airy_eval(z: complex) -> AiryEval:
    m, mp, zeta, method = airy_scaled(z)
    if -zeta.real > 700:
        raise OverflowRisk(f"Ai({z}) exceeds the double range; use airy_ai_scaled")
    e = cmath.exp(-zeta)
    return AiryEval(complex(z), m * e, mp * e, method)


def airy_ai(z: complex) -> complex:
    return airy_eval(z).ai


def airy_ai_prime(z: complex) -> complex:
    return airy_eval(z).aip


# --- zeroth-order WKB -------------------------------------------------------

def airy_ai_wkb(z: complex, form: str = "auto") -> complex:
    """Leading WKB approximation of Ai(z), |z| >= 3.

    ``form='dominant'`` is (1/(2 sqrt(pi))) z^(-1/4) exp(-(2/3) z^(3/2)),
    valid for |arg z| < pi; ``form='oscillatory'`` is
    (1/sqrt(pi)) s^(-1/4) sin((2/3) s^(3/2) + pi/4) with s = -z, valid for
    |arg s| < 2 pi / 3.  ``auto`` picks the oscillatory form within pi/3 of
    the negative axis.
    """
    z = complex(z)
    if abs(z) < 3:
        raise SectorViolation("WKB forms need |z| >= 3")
    if form == "auto":
        form = "oscillatory" if abs(cmath.phase(-z)) < math.pi / 3 else "dominant"
    if form == "dominant":
        if abs(cmath.phase(z)) >= math.pi - 1e-12:
            raise SectorViolation("dominant form undefined on the negative axis")
        return cmath.exp(-_zeta(z)) / (2 * _SQRT_PI * cmath.sqrt(cmath.sqrt(z)))
    if form == "oscillatory":
        s = -z
        if abs(cmath.phase(s)) >= 2 * math.pi / 3:
            raise SectorViolation("oscillatory form needs |arg(-z)| < 2pi/3")
        return cmath.sin(_zeta(s) + math.pi / 4) / (_SQRT_PI * cmath.sqrt(cmath.sqrt(s)))
    raise ValueError(f"unknown form {form!r}")


def airy_wkb_extensions(z: complex):
    """The two continuations (1/(2 sqrt pi)) z^(-1/4) [e^-zeta +/- i e^zeta].

    On z = exp(+i pi) s the '+' member reproduces the oscillatory form, on
    z = exp(-i pi) s the '-' member does.
    """
    z = complex(z)
    zeta = _zeta(z)
    pre = 1.0 / (2 * _SQRT_PI * cmath.sqrt(cmath.sqrt(z)))
    return pre * (cmath.exp(-zeta) + 1j * cmath.exp(zeta)), pre * (cmath.exp(-zeta) - 1j * cmath.exp(zeta))


def airy_zero_wkb(k: int) -> float:
    return (3 * math.pi * (4 * k - 1) / 8) ** (2 / 3)


def airy_zeros(count: int) -> list[float]:
    """First ``count`` positive s_k with Ai(-s_k) = 0, Newton-refined."""
    if count < 0 or count > 100:
        raise ValueError("count must be in [0, 100]")
    out = []
    for k in range(1, count + 1):
        s = airy_zero_wkb(k)
        for _ in range(50):
            ev = airy_eval(-s)
            # d/ds Ai(-s) = -Ai'(-s)
            step = ev.ai.real / (-ev.aip.real)
            s -= step
            if abs(step) < 1e-15 * s:
                break
        out.append(s)
    return out
