"""Embedded Dormand-Prince 5(4) integrator for complex-valued systems."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ..errors import RhsSingular, StepUnderflow

C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
A = np.array([
    [0, 0, 0, 0, 0, 0],
    [1 / 5, 0, 0, 0, 0, 0],
    [3 / 40, 9 / 40, 0, 0, 0, 0],
    [44 / 45, -56 / 15, 32 / 9, 0, 0, 0],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
])
B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
# difference between the 5th- and 4th-order weights
E = np.array([71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# continuous extension of order 4 (Shampine's coefficients)
P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray
    nfev: int = 0
    t_event: float | None = None
    y_event: np.ndarray | None = None
    _K: list = field(default_factory=list, repr=False)

    def __call__(self, t):
        """Dense output at t (scalar) from the 4th-order interpolant."""
        ts = self.t
        if ts[-1] >= ts[0]:
            i = int(np.searchsorted(ts, t, side="right")) - 1
        else:
            i = int(np.searchsorted(-ts, -t, side="right")) - 1
        i = min(max(i, 0), len(ts) - 2)
        h = ts[i + 1] - ts[i]
        theta = (t - ts[i]) / h
        powers = theta ** np.arange(1, 5)
        return self.y[i] + h * (self._K[i].T @ P) @ powers


def _step(rhs, t, y, h, k1):
    K = np.empty((7, y.size), dtype=y.dtype)
    K[0] = k1
    for s in range(1, 7):
        K[s] = rhs(t + C[s] * h, y + h * (A[s, :s] @ K[:s]))
    y_new = y + h * (B[:6] @ K[:6])  # equals the 7th stage argument, so K[6] is FSAL
    err = h * (E @ K)
    return y_new, err, K


def rk_adaptive(rhs, t_span, y0, tol: float = 1e-10, h0: float | None = None,
                h_max: float | None = None, event=None, max_steps: int = 1_000_000) -> Trajectory:
    """Integrate y' = rhs(t, y) over t_span with local error per step <= tol.

    The error of a step is measured as max|err_i| / max(1, max|y_i|).
    ``event(t, y)`` is an optional real function; integration stops at its
    first sign change, located by Brent's method on the dense output.
    """
    t0, t1 = float(t_span[0]), float(t_span[1])
    span = abs(t1 - t0)
    direction = 1.0 if t1 >= t0 else -1.0
    y = np.array(y0, dtype=complex).ravel()

    def f(t, z):
        v = np.asarray(rhs(t, z), dtype=complex).ravel()
        if not np.all(np.isfinite(v)):
            raise RhsSingular(f"right-hand side not finite at t={t}")
        return v

    k1 = f(t0, y)
    nfev = 1
    h = abs(h0) if h0 else min(span, 0.01 * span if span > 0 else 1.0)
    if h_max is None:
        h_max = span
    ts, ys, Ks = [t0], [y.copy()], []
    g_prev = event(t0, y) if event is not None else None
    t = t0
    steps = 0
    while direction * (t1 - t) > 0:
        if steps >= max_steps:
            raise StepUnderflow("step budget exhausted")
        h = min(h, h_max, abs(t1 - t))
        if h < 1e-14 * span:
            raise StepUnderflow(f"step {h:g} below 1e-14 of the span at t={t}")
        y_new, err, K = _step(f, t, y, direction * h, k1)
        nfev += 6
        scale = max(1.0, float(np.max(np.abs(y))), float(np.max(np.abs(y_new))))
        en = float(np.max(np.abs(err))) / scale
        if not math.isfinite(en):
            h *= 0.2
            continue
        if en <= tol:
            t_new = t1 if abs(t1 - (t + direction * h)) < 1e-15 * span else t + direction * h
            ts.append(t_new)
            ys.append(y_new)
            Ks.append(K)
            steps += 1
            if event is not None:
                g_new = event(t_new, y_new)
                if g_prev * g_new < 0:
                    traj = Trajectory(np.array(ts), np.array(ys), nfev, _K=Ks)
                    te = brentq(lambda s: event(s, traj(s)), ts[-2], t_new, xtol=1e-15, rtol=1e-15)
                    traj.t_event, traj.y_event = te, traj(te)
                    return traj
                g_prev = g_new
            t, y, k1 = t_new, y_new, K[6]
            fac = 5.0 if en == 0 else min(5.0, 0.9 * (tol / en) ** 0.2)
        else:
            fac = max(0.2, 0.9 * (tol / en) ** 0.2)
        h *= fac
    return Trajectory(np.array(ts), np.array(ys), nfev, _K=Ks)
