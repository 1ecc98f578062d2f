"""Pure-Python twin of ``_kernels.pyx`` (same algorithm, same constants)."""
from __future__ import annotations

import math

RENORM = 1e100

C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40


def _integrate(a, b, p, y0, y1, tol, grid=None, rec=None, max_steps=50_000_000):
    direction = 1.0 if y1 >= y0 else -1.0
    span = abs(y1 - y0)
    kw = math.sqrt(max(1.0, abs(a) + abs(b)))
    t = y0
    u, v = 0j, 1 + 0j
    logscale = 0.0
    steps = 0
    gi = 0
    ngrid = 0 if grid is None else len(grid)
    h = min(span, 0.05 / kw)
    k1u, k1v = v, -(a + b * t ** p) * u
    while direction * (y1 - t) > 0:
        if steps >= max_steps:
            raise FloatingPointError("step budget exhausted")
        target = grid[gi] if gi < ngrid else y1
        hit = False
        h_free = h  # step before clipping to a node, restored after the hit
        if h >= abs(target - t):
            h = abs(target - t)
            hit = True
        if h < 1e-14 * span and not hit:
            raise FloatingPointError("step size underflow")
        hs = direction * h
        k2u = v + hs * A21 * k1v
        k2v = -(a + b * (t + C2 * hs) ** p) * (u + hs * A21 * k1u)
        k3u = v + hs * (A31 * k1v + A32 * k2v)
        k3v = -(a + b * (t + C3 * hs) ** p) * (u + hs * (A31 * k1u + A32 * k2u))
        k4u = v + hs * (A41 * k1v + A42 * k2v + A43 * k3v)
        k4v = -(a + b * (t + C4 * hs) ** p) * (u + hs * (A41 * k1u + A42 * k2u + A43 * k3u))
        k5u = v + hs * (A51 * k1v + A52 * k2v + A53 * k3v + A54 * k4v)
        k5v = -(a + b * (t + C5 * hs) ** p) * (u + hs * (A51 * k1u + A52 * k2u + A53 * k3u + A54 * k4u))
        k6u = v + hs * (A61 * k1v + A62 * k2v + A63 * k3v + A64 * k4v + A65 * k5v)
        k6v = -(a + b * (t + hs) ** p) * (u + hs * (A61 * k1u + A62 * k2u + A63 * k3u + A64 * k4u + A65 * k5u))
        un = u + hs * (B1 * k1u + B3 * k3u + B4 * k4u + B5 * k5u + B6 * k6u)
        vn = v + hs * (B1 * k1v + B3 * k3v + B4 * k4v + B5 * k5v + B6 * k6v)
        k7u, k7v = vn, -(a + b * (t + hs) ** p) * un
        eu = hs * (E1 * k1u + E3 * k3u + E4 * k4u + E5 * k5u + E6 * k6u + E7 * k7u)
        ev = hs * (E1 * k1v + E3 * k3v + E4 * k4v + E5 * k5v + E6 * k6v + E7 * k7v)
        sc = max(kw * abs(u), abs(v), kw * abs(un), abs(vn))
        err = max(kw * abs(eu), abs(ev)) / (sc if sc > 0 else 1.0)
        if err <= tol * h:
            steps += 1
            t = target if hit else t + hs
            u, v, k1u, k1v = un, vn, k7u, k7v
            nrm = max(abs(u), abs(v))
            if nrm > RENORM:
                u, v, k1u, k1v = u / nrm, v / nrm, k1u / nrm, k1v / nrm
                logscale += math.log(nrm)
            if hit and gi < ngrid:
                rec[0][gi], rec[1][gi], rec[2][gi] = u, v, logscale
                gi += 1
            fac = 5.0 if err == 0 else min(5.0, 0.9 * (tol * h / err) ** 0.25)
            h = h * fac if not hit else max(h_free, h * fac)
        else:
            h *= max(0.2, 0.9 * (tol * h / err) ** 0.25)
    return u, v, logscale, steps


def shoot(a, b, p, y0, y1, tol=1e-11, max_steps=50_000_000):
    return _integrate(complex(a), complex(b), int(p), float(y0), float(y1), tol, max_steps=max_steps)


def shoot_record(a, b, p, y0, y1, grid, rec_psi, rec_dpsi, rec_log, tol=1e-11, max_steps=50_000_000):
    return _integrate(complex(a), complex(b), int(p), float(y0), float(y1), tol,
                      grid=list(grid), rec=(rec_psi, rec_dpsi, rec_log), max_steps=max_steps)
