"""Reference spectra by bidirectional shooting.

Both Dirichlet solutions, psi_L from y = -1 and psi_R from y = +1, are
integrated to the midpoint y = 0 in the dimensionless coordinate y = x / L,
where the equation reads psi'' = -(a + b y^(2n+1)) psi with
a = L^2 E / hbar^2 and b = i (-1)^n g L^(2n+3) / hbar^2.  Their Wronskian
W(E) vanishes exactly at eigenvalues.

Two views of W are used:

* the normalized residual: the sine of the angle between (k psi, psi')
  vectors of the two sides, with k = max(1, |a|)^(1/2); bounded by 1 and the
  quantity reported as ``residual``;
* the holomorphic value ``mantissa * exp(log_scale)``, used for secant steps
  and for argument-principle counts.

For real E, PT symmetry gives psi_R(0) = -conj(psi_L(0)) and
psi_R'(0) = conj(psi_L'(0)), so real-axis scans integrate one side only and
W is real there.
"""
from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import linear_sum_assignment
from scipy.special import gamma

from .core.model import ModelParams, potential_sign
from .core.roots import ZeroSearch, real_sign_roots
from .errors import IncompleteSpectrum, NormalizationSingular, NumericalFailure
from .kernels import shoot, shoot_record
from .scaling import integrate_branch, mode_tau

TOL = 1e-11
TOL_REAL = 1e-8
TOL_SCAN = 1e-7  # winding counts and sign scans only
SCAN_PER_MODE = 8


class IntegrationFailure(NumericalFailure):
    pass


class Regime(str, Enum):
    BT = "BT"
    BS = "BS"
    CO = "CO"
    TRANSITION = "transition"


@dataclass
class EigenvalueRecord:
    j: int
    L: float
    E: complex
    E_mapped: complex
    regime: Regime
    residual: float = 0.0


@dataclass
class Eigenfunction:
    grid: np.ndarray
    psi: np.ndarray
    E: complex
    kappa_proj: float
    richardson_error: float = 0.0


def _coefficients(E: complex, params: ModelParams):
    L, hb = params.L, params.hbar
    a = L * L * complex(E) / (hb * hb)
    b = potential_sign(params.n) * params.g * L ** (2 * params.n + 3) / (hb * hb)
    return a, b, 2 * params.n + 1


def _side(a, b, p, y0, tol):
    try:
        return shoot(a, b, p, y0, 0.0, tol)
    except FloatingPointError as exc:  # kernel reports underflow or budget
        raise IntegrationFailure(str(exc)) from exc


def _combine(left, right, a):
    uL, vL, lL = left[0], left[1], left[2]
    uR, vR, lR = right[0], right[1], right[2]
    kw = math.sqrt(max(1.0, abs(a)))
    nL = math.hypot(kw * abs(uL), abs(vL))
    nR = math.hypot(kw * abs(uR), abs(vR))
    w = (uL * vR - uR * vL) * kw / (nL * nR)
    log_scale = lL + lR + math.log(nL) + math.log(nR) - math.log(kw)
    return w, log_scale


def shoot_pair(E: complex, params: ModelParams, tol: float = TOL):
    """(normalized Wronskian, log_scale); W = value * exp(log_scale) is holomorphic."""
    a, b, p = _coefficients(E, params)
    left = _side(a, b, p, -1.0, tol)
    right = _side(a, b, p, 1.0, tol)
    return _combine(left, right, a)


def shoot_residual(E: complex, params: ModelParams, tol: float = TOL) -> complex:
    """Normalized matching Wronskian at x = 0 (|value| <= 1, zero at eigenvalues)."""
    return shoot_pair(E, params, tol)[0]


def newton_residual(E: complex, params: ModelParams, tol: float = TOL) -> float:
    """Relative Newton step |W / (E W')|: an estimate of the relative error of E as an eigenvalue.

    Unlike the angle residual, this is not floored by the forward error of
    the two integrations, which grows with the non-normality of the mode.
    """
    E = complex(E)
    h = 1e-7 * max(abs(E), params.box_ground)
    w0, l0 = shoot_pair(E, params, tol)
    w1, l1 = shoot_pair(E + h, params, tol)
    w2, l2 = shoot_pair(E - h, params, tol)
    d = (w1 * math.exp(l1 - l0) - w2 * math.exp(l2 - l0)) / (2 * h)
    if d == 0:
        return math.inf
    return abs(w0 / d) / max(abs(E), params.box_ground)


def shoot_residual_real(E: float, params: ModelParams, tol: float = TOL) -> float:
    """Residual for real E from a single integration, using PT symmetry."""
    a, b, p = _coefficients(E, params)
    uL, vL, lL, _ = _side(a, b, p, -1.0, tol)
    right = (-uL.conjugate(), vL.conjugate(), lL)
    w, _ = _combine((uL, vL, lL), right, a)
    return w.real


# --- level spacing estimates --------------------------------------------------

def _bs_constant(N: int) -> float:
    return float(gamma(1.5 + 1.0 / N) * math.sqrt(math.pi) / (math.sin(math.pi / N) * gamma(1.0 + 1.0 / N)))


def level_spacing(E: float, params: ModelParams) -> float:
    """Local spacing of real levels near E: the smaller of box and free-line WKB estimates."""
    e = max(E, params.box_ground)
    box = math.pi * params.hbar * math.sqrt(e) / params.L
    N = 2 * params.n + 1
    if N < 3 or params.g == 0 or e > 1.5 * params.energy_unit:
        return box  # turning points outside the box: walls set the spacing
    unit = params.g ** (2 / (N + 2)) * params.hbar ** (2 * N / (N + 2))
    x = (e / unit) ** ((N + 2) / (2 * N)) * _bs_constant(N)  # j + 1/2
    bs = (2 * N / (N + 2)) * e / max(x, 0.5)
    return min(box, bs)


# --- spectrum -----------------------------------------------------------------------

@lru_cache(maxsize=32)
def _branch(n: int):
    return integrate_branch(n)


def critical_energy(n: int) -> float:
    return _branch(n).E_c


def classify(E: complex, params: ModelParams) -> Regime:
    if params.g == 0:
        return Regime.BT
    e = params.to_mapped(E)
    ec = critical_energy(params.n)
    if abs(e - ec) <= 0.1 * ec:
        return Regime.TRANSITION
    if abs(complex(E).imag) > TOL_REAL * abs(E):
        return Regime.CO
    return Regime.BT if e.real > ec else Regime.BS


def branch_seeds(params: ModelParams, e_hi: float):
    """Complex seeds E_j = g L^(2n+1) E(mode_tau(j)) and conjugates with |E| <= e_hi."""
    if params.g == 0:
        return []
    br = _branch(params.n)
    out = []
    j = 1
    while True:
        t = mode_tau(j, params)
        if t >= br.tau_c:
            break
        e = br.at(t) * params.energy_unit
        if abs(e) <= 1.5 * e_hi:
            out += [e, e.conjugate()]
        j += 1
        if j > 400:
            break
    return out


def _merge_seeds(reals, params):
    """Seeds around nearly coincident real levels (an exceptional point nearby)."""
    out = []
    for x0, x1 in zip(reals[:-1], reals[1:]):
        sp = level_spacing(0.5 * (x0 + x1), params)
        if x1 - x0 < 0.25 * sp:
            m = 0.5 * (x0 + x1)
            out += [complex(m, sp / 4), complex(m, -sp / 4)]
    return out


def _right_edge(reals, e_hi):
    below = [r for r in reals if r < e_hi]
    if len(below) >= 2 and e_hi - below[-1] < 0.25 * (below[-1] - below[-2]):
        return 0.5 * (below[-1] + below[-2])
    return e_hi


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PTSPECTRA_THREADS", "0")) or (os.cpu_count() or 1))
    except ValueError:
        return 1


def find_spectrum(params: ModelParams, count: int, tol: float = TOL, seeds=(), e_hi: float | None = None,
                  per_mode: int = SCAN_PER_MODE):
    """The ``count`` eigenvalues of smallest |E| as EigenvalueRecords.

    Completeness is certified by the argument principle on the rectangle
    Re E in [E0/2, E_hi], |Im E| <= min(1.1 g L^(2n+1), E_hi) + E0, with E0
    the empty-box ground level (a lower bound on Re E).
    """
    if count < 1 or count > 60:
        raise ValueError("count must lie in [1, 60]")
    e0 = params.box_ground
    if e_hi is None:
        e_hi = e0 * (count + 2) ** 2
        if params.g > 0 and params.n > 0:
            unit = params.g ** (2 / (params.n * 2 + 3)) * params.hbar ** (2 * (2 * params.n + 1) / (2 * params.n + 3))
            e_hi = min(e_hi, unit * (count + 2) ** 1.5 * 2)
        e_hi = max(e_hi, 2 * e0)
    spacing = lambda x: level_spacing(x, params)
    f_real = lambda x: shoot_residual_real(x, params, tol)
    f_scan = lambda x: shoot_residual_real(x, params, TOL_SCAN)
    reals_all: list[float] = []
    scanned_to = 0.5 * e0
    while True:
        new, _, _ = real_sign_roots(f_real, scanned_to, e_hi, spacing, per_mode, f_scan=f_scan)
        reals_all = sorted(set(reals_all + new))
        scanned_to = e_hi
        edge = _right_edge(reals_all, e_hi)
        reals = [r for r in reals_all if r < edge]
        im = min(1.1 * params.energy_unit, edge) + e0
        all_seeds = list(seeds) + branch_seeds(params, edge) + _merge_seeds(reals, params)
        if params.n == 0 and params.g > 0:
            from .linear import ssh_complex_eigenvalues
            all_seeds += [pt.E_phys for pair in ssh_complex_eigenvalues(params) for pt in pair]
        search = ZeroSearch(lambda E: shoot_pair(E, params, tol), tol=1e-14,
                            f_count=lambda E: shoot_pair(E, params, TOL_SCAN),
                            max_step=lambda E: 0.25 * spacing(abs(E)))
        roots = search.run(complex(0.5 * e0, -im), complex(edge, im), known=reals, seeds=all_seeds)
        roots = _clean(roots, params, tol)
        inside = sorted(roots, key=lambda z: (abs(z), -z.imag))
        if len(inside) > count and abs(inside[count]) <= edge:
            chosen = inside[:count]
            # a conjugate pair split by the cut is completed, giving count + 1
            last = chosen[-1]
            if last.imag > 0 and abs(inside[count] - last.conjugate()) <= 1e-8 * abs(last):
                chosen.append(inside[count])
            return _records(chosen, params, tol)
        e_hi = 1.6 * e_hi


def _clean(roots, params, tol):
    out = []
    for r in roots:
        if abs(r.imag) <= TOL_REAL * abs(r):
            out.append(complex(r.real, 0.0))
        else:
            out.append(r)
    return out


def _records(roots, params, tol):
    roots = sorted(roots, key=lambda z: (round(z.real, 9), 0 if z.imag >= 0 else 1, abs(z.imag)))
    recs = []
    for j, E in enumerate(roots, start=1):
        em = params.to_mapped(E) if params.g > 0 else complex("nan")
        res = newton_residual(E, params, tol)
        recs.append(EigenvalueRecord(j, params.L, E, em, classify(E, params), res))
    return recs


# --- eigenfunctions ---------------------------------------------------------------

def _side_profile(a, b, p, y0, nodes, tol):
    n = len(nodes)
    rp = np.zeros(n, dtype=complex)
    rd = np.zeros(n, dtype=complex)
    rl = np.zeros(n, dtype=float)
    try:
        u, v, lg, _ = shoot_record(a, b, p, y0, 0.0, np.ascontiguousarray(nodes, dtype=float), rp, rd, rl, tol)
    except FloatingPointError as exc:
        raise IntegrationFailure(str(exc)) from exc
    return rp, rd, rl


def _profile(E, params, m, tol):
    """psi on the uniform y-grid with 2m+1 points, unnormalized but finite."""
    a, b, p = _coefficients(E, params)
    y = np.linspace(-1.0, 1.0, 2 * m + 1)
    left_nodes = y[1:m + 1]            # -1 excluded, ends at 0
    right_nodes = y[m:-1][::-1]        # +1 excluded, ends at 0
    pl, dl, ll = _side_profile(a, b, p, -1.0, left_nodes, tol)
    pr, dr, lr = _side_profile(a, b, p, 1.0, right_nodes, tol)
    # match at y = 0 in the least-squares sense on (k psi, psi')
    kw = math.sqrt(max(1.0, abs(a)))
    uL, vL, uR, vR = pl[-1], dl[-1], pr[-1], dr[-1]
    c = (kw * kw * uL * uR.conjugate() + vL * vR.conjugate()) / (kw * kw * abs(uR) ** 2 + abs(vR) ** 2)
    log_c_shift = ll[-1] - lr[-1]      # right values carry a different accumulated scale
    ref = max(ll.max(), lr.max() + log_c_shift + math.log(max(abs(c), 1e-300)))
    psi = np.zeros(2 * m + 1, dtype=complex)
    psi[1:m + 1] = pl * np.exp(ll - ref)
    right = c * pr * np.exp(lr + log_c_shift - ref)
    psi[m:-1] = right[::-1]
    psi[m] = 0.5 * (psi[m] + pl[-1] * math.exp(ll[-1] - ref))
    return y, psi


def eigenfunction_and_kappa(E: complex, params: ModelParams, points: int = 4001, tol: float = TOL) -> Eigenfunction:
    """Normalized eigenfunction on a uniform x-grid and its projector norm.

    kappa = int |psi|^2 / |int psi^2|, both by composite Simpson.  The
    computation is repeated on a grid of half the resolution and the change
    in kappa is reported as ``richardson_error``.
    """
    m = max(1000, (points - 1) // 2)

    def build(mm):
        y, psi = _profile(E, params, mm, tol)
        x = y * params.L
        norm2 = simpson(np.abs(psi) ** 2, x=x)
        if not norm2 > 1e-300:
            raise NormalizationSingular("eigenfunction has vanishing norm")
        psi = psi / math.sqrt(norm2)
        # fix the global phase so that psi is PT-symmetric for real E: psi(0)-phase convention
        k = int(np.argmax(np.abs(psi)))
        psi = psi * cmath.exp(-1j * cmath.phase(psi[k]))
        bil = simpson(psi * psi, x=x)
        return x, psi, 1.0 / abs(bil)

    x, psi, kap = build(m)
    _, _, kap_half = build(m // 2)
    return Eigenfunction(x, psi, complex(E), float(kap), float(abs(kap - kap_half)))


# --- continuation in L -----------------------------------------------------------------

@dataclass
class BranchTable:
    L: np.ndarray
    E: np.ndarray                 # (len(L), width) complex, physical units; nan where absent
    E_mapped: np.ndarray
    regimes: list
    residual: np.ndarray = None
    transitions: list = field(default_factory=list)   # (L_before, L_after, branch indices)
    swap_suspected: list = field(default_factory=list)


def _predict(E: complex, regime: Regime, L0: float, L1: float, params: ModelParams) -> complex:
    """Where a level at L0 is expected at L1, from the scaling law of its regime."""
    N = 2 * params.n + 1
    if regime in (Regime.CO, Regime.TRANSITION) and params.g > 0:
        return E * (L1 / L0) ** N          # fixed mapped energy
    if regime is Regime.BS:
        return E                           # independent of the box
    return E * (L0 / L1) ** 2              # box levels


def track_branches(params_base: ModelParams, L_grid, count: int, tol: float = TOL) -> BranchTable:
    """Spectra over a grid of L with branch identity carried across neighbouring L.

    Each level is predicted at the next L by the scaling law of its regime
    and the assignment minimizing total relative mismatch is taken.  An
    assignment whose best cost is within 25% of the runner-up for the same
    branch is flagged as a suspected swap.
    """
    L_grid = [float(x) for x in L_grid]
    if len(L_grid) < 2 or any(b <= a for a, b in zip(L_grid[:-1], L_grid[1:])):
        raise ValueError("L_grid must be strictly increasing with at least two points")

    def solve(L):
        p = ModelParams(params_base.n, params_base.g, L, params_base.hbar)
        return find_spectrum(p, count, tol)

    with ThreadPoolExecutor(max_workers=min(_threads(), len(L_grid))) as pool:
        spectra = list(pool.map(solve, L_grid))

    width = count + 1
    nan = complex("nan")
    E = np.full((len(L_grid), width), nan, dtype=complex)
    EM = np.full_like(E, nan)
    RES = np.full((len(L_grid), width), np.nan)
    regimes = []
    transitions, swaps = [], []
    for i, recs in enumerate(spectra):
        p = ModelParams(params_base.n, params_base.g, L_grid[i], params_base.hbar)
        e = [r.E for r in recs]
        em = [r.E_mapped for r in recs]
        reg = [r.regime for r in recs]
        res = [r.residual for r in recs]
        if i == 0:
            order = list(range(len(recs)))
        else:
            prev = [(b, E[i - 1, b], regimes[-1][b]) for b in range(width) if regimes[-1][b] is not None]
            pred = np.array([_predict(x, rg, L_grid[i - 1], L_grid[i], p) for _, x, rg in prev])
            scale = np.maximum(np.abs(pred), p.box_ground)
            cost = np.abs(pred[:, None] - np.array(e)[None, :]) / scale[:, None]
            rows, cols = linear_sum_assignment(cost)
            order = [None] * width
            for r, c in zip(rows, cols):
                order[prev[r][0]] = c
                srt = np.sort(cost[r])
                if len(srt) > 1 and srt[1] > 0 and srt[0] / srt[1] > 0.8:
                    swaps.append((L_grid[i - 1], L_grid[i], prev[r][0]))
            # levels entering the window take the free slots
            free = [b for b in range(width) if order[b] is None]
            for c in sorted(set(range(len(recs))) - set(cols)):
                order[free.pop(0)] = c
        row_reg = [None] * width
        for b, c in enumerate(order):
            if c is None:
                continue
            E[i, b], EM[i, b], RES[i, b], row_reg[b] = e[c], em[c], res[c], reg[c]
        if i > 0:
            was_real = np.abs(E[i - 1].imag) <= TOL_REAL * np.abs(E[i - 1])
            now_complex = np.abs(E[i].imag) > TOL_REAL * np.abs(E[i])
            born = [b for b in range(width) if was_real[b] and now_complex[b]]
            if born:
                transitions.append((L_grid[i - 1], L_grid[i], born))
        regimes.append(row_reg)
    return BranchTable(np.array(L_grid), E, EM, regimes, RES, transitions, swaps)
