"""Polynomial roots, secant iteration and argument-principle zero counting.

Functions handed to the counting and search routines may return either a
complex number or a pair ``(mantissa, log_scale)`` meaning
``mantissa * exp(log_scale)``.  The pair form lets residuals whose magnitude
spans hundreds of decades be handled without overflow; only the phase of the
mantissa matters for counting.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateLeadingCoefficient, IncompleteSpectrum, NoConvergence

MAX_ITER = 100


def poly_roots(coeffs, polish: int = 3) -> np.ndarray:
    """All roots of a polynomial given highest-degree coefficient first.

    Companion-matrix eigenvalues followed by a few Newton steps.  Roots are
    assumed simple; clustered roots are returned unpolished where Newton stalls.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0 or c[0] == 0:
        raise DegenerateLeadingCoefficient("leading coefficient must be nonzero")
    if c.size - 1 > 32:
        raise ValueError("degree above 32 is not supported")
    if c.size == 1:
        return np.empty(0, dtype=complex)
    deg = c.size - 1
    comp = np.zeros((deg, deg), dtype=complex)
    comp[0, :] = -c[1:] / c[0]
    comp[1:, :-1] = np.eye(deg - 1)
    roots = np.linalg.eigvals(comp)
    dc = np.polyder(c)
    for _ in range(polish):
        p = np.polyval(c, roots)
        dp = np.polyval(dc, roots)
        step = np.where(dp != 0, p / np.where(dp != 0, dp, 1), 0)
        improved = roots - step
        better = np.abs(np.polyval(c, improved)) <= np.abs(p)
        roots = np.where(better, improved, roots)
    return roots


def _as_pair(v):
    if isinstance(v, tuple):
        return complex(v[0]), float(v[1])
    return complex(v), 0.0


def holomorphic(f, ref_log: float = 0.0):
    """Wrap a pair-valued function as a plain one, rescaled by exp(-ref_log)."""

    def g(z):
        m, ls = _as_pair(f(z))
        return m * math.exp(ls - ref_log) if ls - ref_log < 700 else m * math.exp(700)

    return g


def find_root_complex(f, seed, tol: float = 1e-12, step: complex | None = None,
                      max_iter: int = MAX_ITER, xtol: float = 1e-15, deflate=()):
    """Secant iteration from ``seed``.

    ``f`` may return pairs.  ``deflate`` lists known roots divided out of f.
    Convergence is declared when |f| <= tol or the step falls below
    xtol * max(1, |z|).  Raises NoConvergence with the best iterate otherwise.
    """
    seed = complex(seed)
    first = _as_pair(f(seed))
    ref = first[1]
    deflate = [complex(r) for r in deflate]

    def F(z):
        m, ls = _as_pair(f(z))
        v = m * math.exp(min(ls - ref, 700.0))
        for r in deflate:
            v /= (z - r)
        return v

    h = step if step is not None else (1e-4 * max(abs(seed), 1.0))
    z0, z1 = seed, seed + h
    f0 = first[0]
    for r in deflate:
        f0 /= (z0 - r)
    f1 = F(z1)
    best = (abs(f0), z0) if abs(f0) <= abs(f1) else (abs(f1), z1)
    for _ in range(max_iter):
        if f1 == f0:
            break
        z2 = z1 - f1 * (z1 - z0) / (f1 - f0)
        if not cmath.isfinite(z2):
            break
        f2 = F(z2)
        if abs(f2) < best[0]:
            best = (abs(f2), z2)
        if abs(f2) <= tol or abs(z2 - z1) <= xtol * max(1.0, abs(z2)):
            return z2
        z0, f0, z1, f1 = z1, f1, z2, f2
    raise NoConvergence(f"secant did not converge from {seed}", best=best[1], residual=best[0])


# ---------------------------------------------------------------------------
# argument principle on rectangles


class _ContourTooClose(Exception):
    pass


@dataclass
class _Memo:
    f: object
    cache: dict = field(default_factory=dict)
    evals: int = 0

    def phase(self, z: complex) -> float:
        v = self.cache.get(z)
        if v is None:
            m, _ = _as_pair(self.f(z))
            if m == 0 or not cmath.isfinite(m):
                raise _ContourTooClose(z)
            v = cmath.phase(m)
            self.cache[z] = v
            self.evals += 1
        return v


def _wrap(d: float) -> float:
    return (d + math.pi) % (2 * math.pi) - math.pi


def _edge_change(memo: _Memo, a: complex, b: complex, pa: float, pb: float, depth: int) -> float:
    d = _wrap(pb - pa)
    m = 0.5 * (a + b)
    pm = memo.phase(m)
    d1, d2 = _wrap(pm - pa), _wrap(pb - pm)
    if abs(d1) < 0.6 and abs(d2) < 0.6 and abs(d1 + d2 - d) < 1e-9:
        return d
    if depth > 40:
        raise _ContourTooClose(m)
    return (_edge_change(memo, a, m, pa, pm, depth + 1)
            + _edge_change(memo, m, b, pm, pb, depth + 1))


def _edge_points(a: complex, b: complex, per_edge: int, max_step):
    """Samples along [a, b]: at least per_edge intervals, none longer than max_step(z)."""
    if max_step is None:
        return [a + (b - a) * k / per_edge for k in range(per_edge)] + [b]
    length = abs(b - a)
    pts, t = [a], 0.0
    while True:
        h = min(max_step(pts[-1]), length / per_edge) / length
        t = t + h
        if t >= 1.0 - 1e-12:
            break
        pts.append(a + (b - a) * t)
    pts.append(b)
    return pts


def count_zeros(memo: _Memo, lo: complex, hi: complex, per_edge: int = 8, max_step=None) -> int:
    """Zeros of f inside the open rectangle [lo, hi] (corners), by winding.

    ``max_step(z)`` bounds the initial sample spacing near z; it should be a
    fraction of the distance over which the phase of f can turn by pi, or
    fast windings between samples may be aliased away.
    """
    corners = [lo, complex(hi.real, lo.imag), hi, complex(lo.real, hi.imag), lo]
    total = 0.0
    for a, b in zip(corners[:-1], corners[1:]):
        pts = _edge_points(a, b, per_edge, max_step)
        ph = [memo.phase(z) for z in pts]
        for k in range(len(pts) - 1):
            total += _edge_change(memo, pts[k], pts[k + 1], ph[k], ph[k + 1], 0)
    w = total / (2 * math.pi)
    n = int(round(w))
    if abs(w - n) > 1e-3:
        raise _ContourTooClose(lo)
    return n


def _inside(z, lo, hi):
    return lo.real < z.real < hi.real and lo.imag < z.imag < hi.imag


@dataclass
class ZeroSearch:
    """Locate every zero of an analytic function inside a rectangle.

    Known zeros (for example real ones found by a sign scan) and seed guesses
    are used first; the rectangle is then subdivided until the winding count
    of each cell is matched by zeros found inside it.
    """

    f: object
    tol: float = 1e-12
    max_depth: int = 14
    min_cell: float = 1e-9
    polish: object = None
    f_count: object = None  # cheaper, lower-accuracy f for winding counts only
    max_step: object = None  # callable z -> longest initial contour step near z
    memo: _Memo = field(init=False)

    def __post_init__(self):
        self.memo = _Memo(self.f_count or self.f)

    def _solve(self, seed, known, lo, hi):
        span = max(abs(hi - lo), 1e-300)
        try:
            z = find_root_complex(self.f, seed, tol=self.tol, step=1e-3 * span, deflate=known, xtol=1e-14)
        except NoConvergence:
            return None
        # polish without deflation so deflation error does not leak in
        try:
            z = find_root_complex(self.f, z, tol=self.tol, step=1e-7 * max(1.0, abs(z)), xtol=1e-15)
        except NoConvergence as exc:
            if exc.best is None:
                return None
            z = exc.best
        if self.polish is not None:
            z = self.polish(z)
        return z

    def _distinct(self, z, roots, scale):
        return all(abs(z - r) > 1e-8 * max(1.0, scale) for r in roots)

    def _count(self, lo, hi):
        return count_zeros(self.memo, lo, hi, max_step=self.max_step)

    def run(self, lo: complex, hi: complex, known=(), seeds=()):
        lo, hi = complex(lo), complex(hi)
        roots = [complex(r) for r in known]
        scale = max(abs(lo), abs(hi))
        total = self._count(lo, hi)
        for s in seeds:
            if sum(_inside(r, lo, hi) for r in roots) >= total:
                break
            if not _inside(complex(s), lo, hi):
                continue
            z = self._solve(complex(s), roots, lo, hi)
            if z is not None and _inside(z, lo, hi) and self._distinct(z, roots, scale):
                roots.append(z)
        found = self._refine(lo, hi, total, roots, 0, scale)
        inside = [r for r in found if _inside(r, lo, hi)]
        if len(inside) < total:
            raise IncompleteSpectrum(f"found {len(inside)} of {total} zeros", found=inside)
        return inside

    def _split(self, lo, hi, roots, horizontal):
        frac = 0.5137 if horizontal else 0.5
        for attempt in range(8):
            if horizontal:
                cut = lo.imag + (hi.imag - lo.imag) * (frac + 0.0731 * attempt)
                a = (lo, complex(hi.real, cut))
                b = (complex(lo.real, cut), hi)
                gap = min((abs(r.imag - cut) for r in roots), default=1.0)
                width = hi.imag - lo.imag
            else:
                cut = lo.real + (hi.real - lo.real) * (frac + 0.0731 * attempt)
                a = (lo, complex(cut, hi.imag))
                b = (complex(cut, lo.imag), hi)
                gap = min((abs(r.real - cut) for r in roots), default=1.0)
                width = hi.real - lo.real
            if gap < 1e-3 * width:
                continue
            try:
                return [(a, self._count(*a)), (b, self._count(*b))]
            except _ContourTooClose:
                continue
        raise IncompleteSpectrum("could not place a cut that avoids the zeros")

    def _refine(self, lo, hi, n, roots, depth, scale):
        have = [r for r in roots if _inside(r, lo, hi)]
        if len(have) >= n:
            return roots
        if depth > self.max_depth or abs(hi - lo) < self.min_cell * max(1.0, scale):
            return roots
        # one cheap attempt from the cell centre before splitting
        centre = 0.5 * (lo + hi)
        z = self._solve(centre, roots, lo, hi)
        if z is not None and _inside(z, lo, hi) and self._distinct(z, roots, scale):
            roots = roots + [z]
            if len([r for r in roots if _inside(r, lo, hi)]) >= n:
                return roots
        # split across the real axis by an off-centre cut so real zeros never sit on it
        horizontal = (hi.imag - lo.imag) > (hi.real - lo.real)
        for (clo, chi), cn in self._split(lo, hi, roots, horizontal):
            if cn > 0:
                roots = self._refine(clo, chi, cn, roots, depth + 1, scale)
        return roots


def _bracket(f, a, b, step, x_lo, x_hi):
    """A sign-changing bracket for f near [a, b], widened if a cheaper scan misplaced it."""
    fa, fb = f(a), f(b)
    for _ in range(4):
        if fa == 0 or fb == 0 or fa * fb < 0:
            return a, b, fa, fb
        a, b = max(x_lo, a - step), min(x_hi, b + step)
        fa, fb = f(a), f(b)
    return None


def real_sign_roots(f, x_lo: float, x_hi: float, spacing, per_mode: int = 40, xtol: float = 1e-14, f_scan=None):
    """Roots of a real-valued f on [x_lo, x_hi] from sign changes on a grid.

    ``spacing(x)`` estimates the local root spacing; the grid step is
    spacing / per_mode.  Each bracket is refined with Brent's method on f;
    the grid itself may be sampled with a cheaper ``f_scan``.
    """
    from scipy.optimize import brentq

    xs = [x_lo]
    while xs[-1] < x_hi:
        xs.append(min(x_hi, xs[-1] + spacing(xs[-1]) / per_mode))
    vals = [(f_scan or f)(x) for x in xs]
    roots = []
    for (a, fa), (b, fb) in zip(zip(xs[:-1], vals[:-1]), zip(xs[1:], vals[1:])):
        if fa == 0:
            roots.append(a)
        elif fa * fb < 0:
            if f_scan is not None:
                br = _bracket(f, a, b, 0.5 * (b - a), x_lo, x_hi)
                if br is None:
                    continue
                a, b, fa, fb = br
                if fa == 0 or fb == 0:
                    roots.append(a if fa == 0 else b)
                    continue
            roots.append(brentq(f, a, b, xtol=xtol * max(1.0, abs(a)), rtol=4 * np.finfo(float).eps, maxiter=200))
    roots.sort()
    roots = [r for k, r in enumerate(roots) if k == 0 or r - roots[k - 1] > 1e-12 * max(1.0, abs(r))]
    return roots, xs, vals
