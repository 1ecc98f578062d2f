"""Branch-continuous square roots and action integrals along polylines.

The branch of sqrt(Q) is carried along a path by continuity: each step is
bisected until Q changes phase by less than ``MAX_Q_PHASE_STEP``, so that the
sign choice nearest to the previous sample is never ambiguous.  Paths may
start or end exactly on a turning point; interior vertices may not.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from ..errors import BranchAmbiguity, QuadratureFailure, TurningPointOnPath
from .model import QFunction

TOL_TP = 1e-6
TOL_QUAD = 1e-10
MAX_Q_PHASE_STEP = math.pi / 4  # sqrt moves by at most pi/8 per accepted step
MAX_BISECT = 40


@dataclass
class ComplexPath:
    """Oriented polyline in the mapped y-plane.

    ``branch_seed`` selects the sheet: the first sample of sqrt(Q) away from
    the start is the square root nearest to it.  At a regular start vertex the
    natural choice is the value of sqrt(Q) there.
    """

    vertices: list
    branch_seed: complex = 1.0
    _v: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=complex)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("a path needs at least two vertices")
        if np.any(np.abs(np.diff(v)) == 0):
            raise ValueError("consecutive vertices must be distinct")
        if self.branch_seed == 0:
            raise ValueError("branch_seed must be nonzero")
        self._v = v
        self.branch_seed = complex(self.branch_seed)

    @property
    def points(self) -> np.ndarray:
        return self._v

    def reversed(self, end_value: complex) -> "ComplexPath":
        """Same polyline traversed backwards, on the sheet reached at the end."""
        return ComplexPath(self._v[::-1].tolist(), end_value)


def _nearest(root: complex, ref: complex) -> complex:
    return root if (root * ref.conjugate()).real >= 0 else -root


def _segment_distance(a: complex, b: complex, p: complex) -> float:
    d = b - a
    t = ((p - a) * d.conjugate()).real / (abs(d) ** 2)
    t = min(1.0, max(0.0, t))
    return abs(a + t * d - p)


def _check_path(path: ComplexPath, Q: QFunction):
    roots = Q.roots()
    v = path.points
    scale = max(1.0, float(np.max(np.abs(v))))
    tol = TOL_TP * scale
    for k in range(len(v) - 1):
        a, b = v[k], v[k + 1]
        for r in roots:
            if _segment_distance(a, b, r) < tol:
                at_start = k == 0 and abs(a - r) < tol
                at_end = k == len(v) - 2 and abs(b - r) < tol
                if not (at_start or at_end):
                    raise TurningPointOnPath(f"segment {a}->{b} passes within {tol:g} of turning point {r}")
                # an endpoint sitting on a root is fine unless the segment re-touches another root
    return roots


def _march(Q: QFunction, a: complex, b: complex, s_a: complex, qa: complex, end_on_root: bool = False):
    """Continue sqrt(Q) from a (value s_a, Q(a)=qa) to b.

    Returns the list of (t, y, Q(y), sqrtQ(y)) breakpoints, t in [0, 1].
    """
    out = [(0.0, a, qa, s_a)]
    stack = [1.0]
    t_prev, q_prev, s_prev = 0.0, qa, s_a
    depth_floor = 2.0 ** -MAX_BISECT
    while stack:
        t = stack[-1]
        y = b if t == 1.0 else a + t * (b - a)
        q = 0j if (t == 1.0 and end_on_root) else complex(Q(y))
        ok = True
        if q_prev == 0 and q == 0:
            ok = False  # root to root: need a regular sample in between
        elif q_prev == 0 or q == 0:
            ok = True
        else:
            jump = abs(cmath.phase(q / q_prev))
            ok = jump <= MAX_Q_PHASE_STEP
            if ok:
                # guard against a phase wiggle hidden between the two samples
                tm = 0.5 * (t_prev + t)
                qm = complex(Q(a + tm * (b - a)))
                if qm != 0:
                    ok = abs(cmath.phase(qm / q_prev)) <= MAX_Q_PHASE_STEP and abs(cmath.phase(q / qm)) <= MAX_Q_PHASE_STEP
        if not ok:
            if t - t_prev < depth_floor:
                raise BranchAmbiguity(f"cannot resolve sqrt(Q) branch near y={y}")
            stack.append(0.5 * (t_prev + t))
            continue
        stack.pop()
        if s_prev == 0:
            # leaving a turning point: the seed only fixes the sheet through its direction
            s = cmath.sqrt(q)
        else:
            s = _nearest(cmath.sqrt(q), s_prev)
        out.append((t, y, q, s))
        t_prev, q_prev, s_prev = t, q, s
    return out


def _on_root(y: complex, roots) -> bool:
    return any(abs(y - r) <= 1e-10 * max(1.0, abs(r)) for r in roots)


def continue_sqrt(path: ComplexPath, Q: QFunction):
    """All breakpoints of the continuation, as a list of (y, Q(y), sqrtQ(y)).

    End vertices lying on a turning point (to 1e-10 relative) are treated as
    exact zeros of Q, since the computed Q there is rounding noise.
    """
    roots = _check_path(path, Q)
    v = path.points
    from_root = _on_root(v[0], roots)
    end_root = _on_root(v[-1], roots)
    if from_root:
        qa, s = 0j, 0j
    else:
        qa = complex(Q(v[0]))
        s = _nearest(cmath.sqrt(qa), path.branch_seed)
    pts = [(v[0], qa, s)]
    for k in range(len(v) - 1):
        bps = _march(Q, v[k], v[k + 1], s, qa, end_on_root=end_root and k == len(v) - 2)
        if from_root and k == 0:
            # first sample off the root: pick the sheet nearest the seed, then re-march
            first = bps[1][3]
            sign = 1 if (first * path.branch_seed.conjugate()).real >= 0 else -1
            bps = [(t, y, q, sign * w) for (t, y, q, w) in bps]
        pts.extend((y, q, w) for (_, y, q, w) in bps[1:])
        qa, s = bps[-1][2], bps[-1][3]
    return pts


def sqrtq_continued(path: ComplexPath, Q: QFunction) -> np.ndarray:
    """sqrt(Q) at the path vertices, continued along the path."""
    pts = continue_sqrt(path, Q)
    v = path.points
    out = np.empty(len(v), dtype=complex)
    j = 0
    for y, _, s in pts:
        if j < len(v) and y == v[j]:
            out[j] = s
            j += 1
    if j != len(v):  # pragma: no cover - vertices are always breakpoints
        raise BranchAmbiguity("lost track of path vertices")
    return out


def action_integral(path: ComplexPath, Q: QFunction, tol: float = TOL_QUAD, return_end: bool = False):
    """Integral of sqrt(Q) dy along the path on the branch fixed by the seed.

    Each continuation sub-step is integrated with adaptive Gauss-Kronrod,
    using sqrt(Q) = s_k * sqrt(Q/Q_k) which is holomorphic on the sub-step.
    With ``return_end`` the transported end value of sqrt(Q) is also returned.
    """
    pts = continue_sqrt(path, Q)
    total = 0j
    for (y0, q0, s0), (y1, q1, s1) in zip(pts[:-1], pts[1:]):
        d = y1 - y0
        if q0 != 0:
            ref_q, ref_s = q0, s0
        else:
            ref_q, ref_s = q1, s1

        def f(t, y0=y0, d=d, ref_q=ref_q, ref_s=ref_s):
            return ref_s * cmath.sqrt(complex(Q(y0 + t * d)) / ref_q) * d

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(f, 0.0, 1.0, complex_func=True, epsabs=tol / len(pts),
                                      epsrel=1e-13, limit=200)
        err_tot = abs(err)
        if not np.isfinite(val) or err_tot > max(tol, 1e-12 * abs(val)):
            raise QuadratureFailure(f"quadrature error {err_tot:g} on sub-step {y0}->{y1}")
        total += val
    if return_end:
        end = next(w for (_, _, w) in reversed(pts) if w != 0)
        return total, end
    return total
