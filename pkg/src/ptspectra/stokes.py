"""Stokes graphs of the mapped quadratic differential Q(y) dy^2.

Anti-Stokes lines are the horizontal trajectories: curves from a turning
point along which the action int sqrt(Q) dy stays real.  Each simple turning
point emits three of them.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .core.model import QFunction
from .core.paths import ComplexPath, action_integral
from .errors import DegenerateEnergy, TracingStalled, TurningPairUnavailable

R_MAX = 8.0
ARC_BUDGET = 50.0
H_MAX = 0.02
BOUNDARY_CAPTURE = 1e-6
MAX_STEPS = 200_000


@dataclass(frozen=True)
class TurningPoint:
    alpha: complex
    index: int


@dataclass(frozen=True)
class Terminus:
    kind: str            # turning_point | boundary_hit | escaped | arc_budget
    where: int = 0       # turning-point index, boundary sign, or asymptotic sector

    def label(self) -> str:
        return {"turning_point": "tp", "boundary_hit": "wall", "escaped": "inf", "arc_budget": "open"}[self.kind] + str(self.where)


@dataclass
class AntiStokesLine:
    origin: int
    direction: int
    polyline: np.ndarray
    terminus: Terminus
    topology: Terminus   # end of the untruncated trajectory in the plane


@dataclass
class StokesGraph:
    emapped: complex
    n: int
    turning_points: list
    lines: list = field(default_factory=list)

    @property
    def signature(self) -> str:
        """Canonical topology string: one ``origin.direction>end`` per line."""
        return ";".join(sorted(f"{ln.origin}.{ln.direction}>{ln.topology.label()}" for ln in self.lines))

    def points(self) -> list:
        return [ln.polyline for ln in self.lines]


def seed_radius(emapped: complex, n: int) -> float:
    return 1e-4 * abs(emapped) ** (1.0 / (2 * n + 1))


def turning_points(emapped: complex, n: int) -> list[TurningPoint]:
    """The 2n+1 roots of y^(2n+1) = i(-1)^n E, sorted by argument."""
    if abs(emapped) < 1e-12:
        raise DegenerateEnergy("mapped energy too close to zero")
    roots = sorted(QFunction(emapped, n).roots(), key=lambda z: cmath.phase(z))
    return [TurningPoint(complex(r), k) for k, r in enumerate(roots)]


def _sqrt_near(q: complex, ref: complex) -> complex:
    s = cmath.sqrt(q)
    return s if (s * ref.conjugate()).real >= 0 else -s


def _seg_dist(a: complex, b: complex, p: complex) -> float:
    d = b - a
    if d == 0:
        return abs(p - a)
    t = min(1.0, max(0.0, ((p - a) * d.conjugate()).real / abs(d) ** 2))
    return abs(a + t * d - p)


def _wall_on_step(y0: complex, y1: complex, s0: complex, wall: float, Q: QFunction) -> bool:
    """Whether the traced curve between y0 and y1 runs through the wall point.

    The chord between RK vertices bows away from the curve by O(h^2), so the
    test is made on the action: the wall is on the line when the action from
    y0 to it is real, to BOUNDARY_CAPTURE in units of |sqrt Q|.
    """
    d = y1 - y0
    t = ((wall - y0) * d.conjugate()).real / abs(d) ** 2
    if not (-0.05 <= t <= 1.05) or _seg_dist(y0, y1, wall) > 0.25 * abs(d):
        return False
    sm = _sqrt_near(Q(0.5 * (y0 + wall)), s0)
    sw = _sqrt_near(Q(wall), sm)
    im = ((s0 + 4 * sm + sw) / 6 * (wall - y0)).imag
    return abs(im) <= BOUNDARY_CAPTURE * max(abs(sw), 1e-300)


def _sector(y: complex, Q: QFunction) -> int:
    """Asymptotic anti-Stokes direction index for a point far out."""
    m = Q.power + 2
    # far out, int sqrt(Q) ~ c^(1/2) y^(m/2) (2/m); real along theta_k = (2 pi k - arg c) / m
    theta = cmath.phase(y) + cmath.phase(Q.c) / m
    return int(round(theta * m / (2 * math.pi))) % m


def trace_anti_stokes(tp: TurningPoint, direction_index: int, Q: QFunction, others=(), rho: float | None = None,
                      r_max: float = R_MAX, budget: float = ARC_BUDGET, stop_at_boundary: bool = True):
    """Trace one anti-Stokes line; returns (polyline, terminus, topology).

    The trajectory solves dy/ds = conj(sqrt Q)/|sqrt Q| on the sheet that
    makes the action grow away from the turning point, with a projection
    after every step that keeps Im(action) at zero.
    """
    a = tp.alpha
    n = Q.n
    if rho is None:
        rho = seed_radius(Q.e, n)
    capture = 2 * rho
    theta = (-cmath.phase(Q.derivative(a)) + 2 * math.pi * direction_index) / 3
    y = a + rho * cmath.exp(1j * theta)
    s = cmath.sqrt(Q(y))
    if (s * (y - a)).real < 0:
        s = -s
    action = ((2.0 / 3.0) * s * (y - a)).real
    pts = [a, y]
    length = rho
    all_tps = [(t.index, t.alpha) for t in others]
    tp_points = [al for _, al in all_tps] + [a]
    terminus = None
    cut = None

    def field_at(z, ref):
        sq = _sqrt_near(Q(z), ref)
        return sq.conjugate() / abs(sq), sq

    for _ in range(MAX_STEPS):
        d = min(abs(y - p) for p in tp_points)
        h = min(H_MAX, max(0.25 * d, 1e-9))
        k1, s1 = field_at(y, s)
        k2, sm = field_at(y + 0.5 * h * k1, s1)
        k3, _ = field_at(y + 0.5 * h * k2, sm)
        k4, s4 = field_at(y + h * k3, sm)
        y_new = y + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
        s_new = _sqrt_near(Q(y_new), s4)
        s_mid = _sqrt_near(Q(0.5 * (y + y_new)), s_new)
        inc = (s + 4 * s_mid + s_new) / 6 * (y_new - y)
        im = inc.imag
        if im != 0 and abs(s_new) > 0:
            y_new -= 1j * im / s_new
            s_new = _sqrt_near(Q(y_new), s_new)
        action += inc.real
        length += abs(y_new - y)
        y_old, s_old = y, s
        y, s = y_new, s_new
        pts.append(y)
        if cut is None:
            for sign in (-1, 1):
                if _wall_on_step(y_old, y, s_old, float(sign), Q):
                    cut = (len(pts), Terminus("boundary_hit", sign))
        hit = next((k for k, al in all_tps if abs(y - al) <= capture), None)
        if hit is not None:
            pts.append(dict(all_tps)[hit])
            terminus = Terminus("turning_point", hit)
            break
        if abs(y) > r_max:
            terminus = Terminus("escaped", _sector(y, Q))
            break
        if length > budget:
            terminus = Terminus("arc_budget", 0)
            break
    else:
        raise TracingStalled(f"no terminus after {MAX_STEPS} steps from turning point {tp.index}")
    poly = np.array(pts)
    if cut is not None and stop_at_boundary:
        idx, term = cut
        poly = np.append(poly[:idx - 1], complex(term.where))
        return poly, term, terminus
    return poly, terminus, terminus


def build_graph(emapped: complex, n: int, **kw) -> StokesGraph:
    """All 3(2n+1) anti-Stokes lines of Q for the given mapped energy."""
    tps = turning_points(emapped, n)
    Q = QFunction(emapped, n)
    g = StokesGraph(complex(emapped), n, tps)
    for tp in tps:
        others = [t for t in tps if t.index != tp.index]
        for k in range(3):
            poly, term, topo = trace_anti_stokes(tp, k, Q, others, **kw)
            g.lines.append(AntiStokesLine(tp.index, k, poly, term, topo))
    return g


def mirror(points: np.ndarray) -> np.ndarray:
    """Reflection y -> -conj(y) about the imaginary axis."""
    return -np.conj(points)


def _directed_hausdorff(A: list, B: list) -> float:
    segs = [(p[i], p[i + 1]) for p in B for i in range(len(p) - 1)]
    a0 = np.array([s[0] for s in segs])
    d = np.array([s[1] - s[0] for s in segs])
    dd = np.maximum(np.abs(d) ** 2, 1e-300)
    worst = 0.0
    for poly in A:
        for p in poly:
            t = np.clip(((p - a0) * np.conj(d)).real / dd, 0.0, 1.0)
            worst = max(worst, float(np.min(np.abs(a0 + t * d - p))))
    return worst


def hausdorff(A: list, B: list) -> float:
    """Hausdorff distance between two unions of polylines (points against segments)."""
    return max(_directed_hausdorff(A, B), _directed_hausdorff(B, A))


# --- boundary on the graph ----------------------------------------------------

def relevant_pair(emapped: complex, n: int) -> tuple[complex, complex]:
    """The mirror pair (left, right) nearest the real axis in the parity half-plane.

    Upper half-plane for even n, lower for odd n.  For a single root on the
    imaginary axis (n = 0) both entries coincide.
    """
    side = 1.0 if n % 2 == 0 else -1.0
    roots = [t.alpha for t in turning_points(emapped, n)]
    cand = [r for r in roots if side * r.imag > -1e-12]
    if not cand:
        raise TurningPairUnavailable("no turning point in the parity half-plane")
    cand.sort(key=lambda r: (abs(r.imag), r.real))
    left = min((r for r in cand if abs(abs(r.imag) - abs(cand[0].imag)) < 1e-9 * max(1.0, abs(r))),
               key=lambda r: r.real)
    right = -left.conjugate()
    if not any(abs(r - right) < 1e-8 * max(1.0, abs(r)) for r in roots):
        raise TurningPairUnavailable("turning points are not mirror-paired")
    return left, right


def boundary_on_graph_residual(emapped_real: float, n: int) -> float:
    """Im of the action from the relevant turning point to y = -1 (straight path).

    The sheet is fixed by Re(action) >= 0, so the sign is meaningful; the
    residual vanishes where an anti-Stokes line runs into the box wall.
    """
    e = float(emapped_real)
    if not e > 0:
        raise ValueError("mapped energy must be real and positive")
    alpha, _ = relevant_pair(e, n)
    val = action_integral(ComplexPath([alpha, -1.0], 1.0), QFunction(e, n))
    return (-val if val.real < 0 else val).imag


def critical_mapped_energy(n: int, lo: float = 0.05, hi: float = 2.0) -> float:
    """Root of boundary_on_graph_residual, bracketed by a coarse scan."""
    from scipy.optimize import brentq

    xs = np.linspace(lo, hi, 50)
    vals = [boundary_on_graph_residual(x, n) for x in xs]
    for a, b, fa, fb in zip(xs[:-1], xs[1:], vals[:-1], vals[1:]):
        if fa == 0:
            return float(a)
        if fa * fb < 0:
            return brentq(lambda x: boundary_on_graph_residual(x, n), a, b, xtol=1e-14, rtol=1e-14)
    raise TurningPairUnavailable(f"no sign change of the boundary residual on [{lo}, {hi}]")
