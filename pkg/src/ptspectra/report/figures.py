"""Figures built from a ResultBundle."""
from __future__ import annotations

import math
from collections import defaultdict
from pathlib import Path

import numpy as np

from ..errors import MissingTaskOutput
from .svg import Figure


def _branch_records(bundle):
    """Records grouped into curves over L: tracked branches if present, else by mode index."""
    recs = bundle.spectrum("branches") or bundle.spectrum("spectrum")
    if not recs:
        raise MissingTaskOutput("needs a 'branches' or 'spectrum' task")
    n = recs[0].n
    curves = defaultdict(list)
    for r in recs:
        if r.n == n:
            curves[r.branch if r.branch > 0 else r.rec.j].append(r.rec)
    for v in curves.values():
        v.sort(key=lambda e: e.L)
    return n, dict(sorted(curves.items()))


def fig1a(bundle) -> Figure:
    n, curves = _branch_records(bundle)
    f = Figure(title=f"Re E_j against L (n={n})", xlabel="L", ylabel="Re E_j", ylog=True)
    for j, pts in curves.items():
        f.line([e.L for e in pts], [e.E.real for e in pts], label=f"j={j}")
    return f


def fig1b(bundle) -> Figure:
    n, curves = _branch_records(bundle)
    f = Figure(title=f"Re E_j L^2 against L (n={n})", xlabel="L", ylabel="Re E_j L^2", ylog=True)
    Ls = sorted({e.L for pts in curves.values() for e in pts})
    for j, pts in curves.items():
        f.line([e.L for e in pts], [e.E.real * e.L ** 2 for e in pts], label=f"j={j}")
    for j in curves:
        f.reference([Ls[0], Ls[-1]], [math.pi ** 2 * j * j / 4] * 2)
    return f


def fig1c(bundle) -> Figure:
    recs = [r for r in (bundle.spectrum("branches") or bundle.spectrum("spectrum")) if r.g > 0]
    if not recs:
        raise MissingTaskOutput("needs a 'branches' or 'spectrum' task with g > 0")
    f = Figure(title="mapped eigenvalues", xlabel="Re E/(gL^(2n+1))", ylabel="Im E/(gL^(2n+1))")
    by_L = defaultdict(list)
    for r in recs:
        by_L[r.rec.L].append(r.rec.E_mapped)
    for L, em in sorted(by_L.items()):
        f.points([e.real for e in em], [e.imag for e in em], label=f"L={L:g}")
    return f


def fig2a(bundle) -> Figure:
    if not bundle.graphs:
        raise MissingTaskOutput("needs a 'stokes_graph' task")
    f = Figure(title="anti-Stokes lines", xlabel="Re y", ylabel="Im y", xlim=(-3, 3), ylim=(-3, 3), width=560, height=560)
    for k, g in enumerate(bundle.graphs):
        color = None
        for ln in g["lines"]:
            poly = np.asarray(ln["polyline"], dtype=complex)
            f.line(poly.real, poly.imag, color=color, label=f"E={g['emapped']} {ln['origin']}.{ln['direction']}")
            color = f.series[-1].color
        tps = np.asarray(g["turning_points"], dtype=complex)
        f.points(tps.real, tps.imag, color="#000000")
    f.reference([-1, 1], [0, 0], color="#000000")
    return f


def fig3a(bundle) -> Figure:
    if not bundle.branches:
        raise MissingTaskOutput("needs a 'scaling_graph' task")
    f = Figure(title="complex scaling-graph components", xlabel="Re E", ylabel="Im E", width=560, height=560)
    for br in sorted(bundle.branches, key=lambda b: b.n):
        e = np.asarray(br.E)
        f.line(e.real, e.imag, label=f"n={br.n}")
        f.line(e.real, -e.imag, color=f.series[-1].color, label=f"n={br.n} conjugate", dash="5,3")
    return f


def suppl_comparison(bundle) -> Figure:
    if not bundle.branches:
        raise MissingTaskOutput("needs a 'scaling_graph' task")
    f = fig3a(bundle)
    f.title = "shooting eigenvalues on the scaling graph"
    ns = {br.n for br in bundle.branches}
    recs = [r for r in (bundle.spectrum("branches") or bundle.spectrum("spectrum")) if r.n in ns and r.g > 0]
    if not recs:
        raise MissingTaskOutput("needs a 'spectrum' or 'branches' task for the plotted n")
    em = [r.rec.E_mapped for r in recs]
    f.points([e.real for e in em], [e.imag for e in em], color="#000000", label="shooting")
    return f


FIGURES = {
    "fig1a": fig1a, "fig1b": fig1b, "fig1c": fig1c, "fig2a": fig2a, "fig3a": fig3a,
    "suppl-comparison": suppl_comparison,
}


def emit_figures(bundle, which, out_dir) -> list[Path]:
    """Render the named figures to ``<out_dir>/<name>.svg``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in which:
        if name not in FIGURES:
            raise KeyError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
        p = out / f"{name}.svg"
        p.write_text(FIGURES[name](bundle).render(), encoding="utf-8", newline="\n")
        paths.append(p)
    return paths
