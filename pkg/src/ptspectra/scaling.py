"""Complex component of the asymptotic spectral scaling graph.

The branch E(tau) starting at (-1)^n i solves

    dE/dtau = (2n+1) E / ((2n+3) tau / 2 + sqrt(E - (-1)^n i))

and ends where it meets the positive real axis at (tau_c, E_c).  The square
root is not the principal one: near the seed it behaves as S tau^(1/3) with a
phase fixed by the Puiseux expansion, and it is carried along the
trajectory as a second state component that only serves as a sign reference.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .core.model import ModelParams, QFunction
from .core.ode import Trajectory, rk_adaptive
from .core.paths import ComplexPath, action_integral
from .errors import NumericalFailure, PTSpectraError, PuiseuxOutOfRange

DELTA_TAU = 1e-6
MIN_SAMPLES = 400
TAU_MAX = 100.0


class SingularDenominator(NumericalFailure, ZeroDivisionError):
    pass


class NoRealCrossing(NumericalFailure):
    pass


class OutOfBranch(PTSpectraError, ValueError):
    pass


def endpoint(n: int) -> complex:
    return 1j if n % 2 == 0 else -1j


def puiseux_coefficient(n: int) -> complex:
    sigma = 1 if n % 2 == 0 else -1
    return (1.5 * (2 * n + 1)) ** (2 / 3) * cmath.exp(-sigma * 1j * 7 * math.pi / 3)


def puiseux_sqrt_coefficient(n: int) -> complex:
    """S with sqrt(E - (-1)^n i) ~ S tau^(1/3) on the integrated branch."""
    return 1.5 * (2 * n + 1) * endpoint(n) / puiseux_coefficient(n)


def puiseux_seed(n: int, delta_tau: float = DELTA_TAU) -> complex:
    if not (0 < delta_tau <= 1e-3):
        raise PuiseuxOutOfRange(f"delta_tau must lie in (0, 1e-3], got {delta_tau}")
    return endpoint(n) + puiseux_coefficient(n) * delta_tau ** (2 / 3)


def ode_rhs(tau: float, emapped: complex, n: int, sqrt_ref: complex | None = None) -> complex:
    """Right-hand side of the scaling-graph ODE.

    The square root is the one nearest ``sqrt_ref``; the principal root is
    used when no reference is given.
    """
    w = cmath.sqrt(emapped - endpoint(n))
    if sqrt_ref is not None and (w * sqrt_ref.conjugate()).real < 0:
        w = -w
    d = (2 * n + 3) * tau / 2 + w
    if abs(d) < 1e-12:
        raise SingularDenominator(f"denominator vanishes at tau={tau}")
    return (2 * n + 1) * emapped / d


def closed_form_n0(tau):
    """Exact n = 0 branch i + exp(-i pi/3) (3 tau / 2)^(2/3)."""
    return 1j + cmath.exp(-1j * math.pi / 3) * np.power(1.5 * np.asarray(tau, dtype=float), 2 / 3)


TAU_C_N0 = 2 ** 2.5 * 3 ** -1.75
E_C_N0 = 3 ** -0.5


@dataclass
class ScalingBranch:
    n: int
    tau: np.ndarray
    E: np.ndarray
    tau_c: float
    E_c: float
    monotone_im: bool = True
    _traj: Trajectory | None = field(default=None, repr=False)

    @property
    def samples(self):
        return list(zip(self.tau.tolist(), self.E.tolist()))

    def at(self, tau: float) -> complex:
        """E(tau) on [delta_tau, tau_c] from the dense output."""
        if self._traj is None:
            return complex(np.interp(tau, self.tau, self.E.real) + 1j * np.interp(tau, self.tau, self.E.imag))
        return complex(self._traj(tau)[0])

    def conjugate(self) -> np.ndarray:
        return np.conj(self.E)

    def project(self, emapped: complex):
        """Nearest point of branch or its mirror image: (tau, distance)."""
        z = complex(emapped)
        if (z.imag > 0) != (self.E[len(self.E) // 2].imag > 0):
            z = z.conjugate()
        d = np.abs(self.E - z)
        k = int(np.argmin(d))
        lo = self.tau[max(k - 1, 0)]
        hi = self.tau[min(k + 1, len(self.tau) - 1)]
        if hi <= lo:
            return float(self.tau[k]), float(d[k])
        res = minimize_scalar(lambda t: abs(self.at(t) - z), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        if res.fun <= d[k]:
            return float(res.x), float(res.fun)
        return float(self.tau[k]), float(d[k])

    def predict(self, j: int, params: ModelParams) -> complex:
        t = mode_tau(j, params)
        if t >= self.tau_c:
            raise OutOfBranch(f"mode {j} has tau={t:.6g} beyond tau_c={self.tau_c:.6g}")
        return self.at(t)


def integrate_branch(n: int, tol: float = 1e-10, delta_tau: float = DELTA_TAU,
                     samples: int = MIN_SAMPLES) -> ScalingBranch:
    if n < 0 or n > 15:
        raise ValueError("n must lie in [0, 15]")
    sigma_i = endpoint(n)
    e0 = puiseux_seed(n, delta_tau)
    w0 = puiseux_sqrt_coefficient(n) * delta_tau ** (1 / 3)

    def rhs(t, y):
        e, w_ref = y[0], y[1]
        w = cmath.sqrt(e - sigma_i)
        if (w * w_ref.conjugate()).real < 0:
            w = -w
        de = (2 * n + 1) * e / ((2 * n + 3) * t / 2 + w)
        return [de, de / (2 * w)]

    traj = rk_adaptive(rhs, (delta_tau, TAU_MAX), [e0, w0], tol=tol, h0=delta_tau,
                       event=lambda t, y: y[0].imag)
    if traj.t_event is None:
        raise NoRealCrossing(f"n={n}: Im E never crossed zero for tau <= {TAU_MAX}")
    tau_c = float(traj.t_event)
    e_c = float(traj.y_event[0].real)
    s = np.linspace(0.0, 1.0, samples)
    taus = delta_tau + (tau_c - delta_tau) * s ** 1.5
    taus[-1] = tau_c
    es = np.array([traj(t)[0] for t in taus])
    es[-1] = e_c
    im = np.abs(es.imag)
    monotone = bool(np.all(np.diff(im) <= 1e-12))
    return ScalingBranch(n, taus, es, tau_c, e_c, monotone, traj)


def relevant_turning_point(n: int, emapped: complex, previous: complex | None = None) -> complex:
    """Turning point that sits at y = -1 when E = (-1)^n i, tracked by proximity."""
    roots = QFunction(emapped, n).roots()
    ref = -1.0 if previous is None else previous
    return complex(roots[int(np.argmin(np.abs(roots - ref)))])


def tau_of(emapped: complex, n: int, alpha: complex | None = None) -> complex:
    """tau(E) = integral of sqrt(Q) from the relevant turning point to y = -1.

    The sheet is the one with non-negative real part.
    """
    q = QFunction(emapped, n)
    if alpha is None:
        alpha = relevant_turning_point(n, emapped)
    if abs(alpha + 1) < 1e-14:
        return 0j
    val = action_integral(ComplexPath([alpha, -1.0], 1.0), q)
    return -val if val.real < 0 else val


def reality_residual(branch: ScalingBranch, index: int) -> float:
    alpha = None
    for e in branch.E[: index + 1]:
        alpha = relevant_turning_point(branch.n, e, alpha)
    t = tau_of(branch.E[index], branch.n, alpha)
    return abs(t.imag) + abs(t.real - branch.tau[index])


def mode_tau(j: int, params: ModelParams) -> float:
    """tau of the j-th complex mode: (4j - 1) pi hbar / (4 sqrt(g L^(2n+3)))."""
    if j < 1:
        raise ValueError("mode index starts at 1")
    return (4 * j - 1) * math.pi / (4 * params.scale)


def complex_mode_count(params: ModelParams, tau_c: float) -> int:
    """Number of j with mode_tau(j) < tau_c."""
    x = (4 * tau_c * params.scale / math.pi + 1) / 4
    k = math.ceil(x) - 1
    return max(0, k)
