"""Task execution, the result bundle, and its JSON/CSV forms."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import __version__
from ..core.model import ModelParams
from ..errors import PTSpectraError
from ..scaling import ScalingBranch, integrate_branch
from ..shooting import TOL, EigenvalueRecord, Regime, classify, find_spectrum, track_branches
from .config import RunConfig, parse_complex

SPECTRUM_COLUMNS = ["n", "g", "L", "hbar", "j", "Re_E", "Im_E", "Re_Emapped", "Im_Emapped", "regime", "residual"]
SCALING_COLUMNS = ["n", "tau", "Re_E", "Im_E"]
SECULAR_COLUMNS = ["n", "g", "L", "hbar", "j", "kind", "E"]
CSV_SCHEMA_VERSION = 1


@dataclass
class Record:
    """An eigenvalue record tagged with the parameters and task that produced it."""
    task: str
    n: int
    g: float
    hbar: float
    rec: EigenvalueRecord
    branch: int = -1


@dataclass
class ResultBundle:
    config_digest: str
    config: dict
    records: list = field(default_factory=list)
    branches: list = field(default_factory=list)      # ScalingBranch
    graphs: list = field(default_factory=list)        # serialized StokesGraph dicts
    secular: list = field(default_factory=list)       # rows for secular.csv
    transitions: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def spectrum(self, task: str = "spectrum", n: int | None = None):
        return [r for r in self.records if r.task == task and (n is None or r.n == n)]


def _threads() -> int:
    try:
        v = int(os.environ.get("PTSPECTRA_THREADS", "0"))
    except ValueError:
        v = 0
    return v if v > 0 else (os.cpu_count() or 1)


# --- task units ----------------------------------------------------------------

def _params(cfg: RunConfig, n: int, L: float) -> ModelParams:
    return ModelParams(n, cfg.g, L, cfg.hbar)


def _seeds(cfg: RunConfig, n: int, L: float):
    return [parse_complex(s) for s in cfg.seed_overrides.get(f"{n}:{L!r}", cfg.seed_overrides.get(str(n), []))]


def _unit_spectrum(cfg, n, L):
    tol = cfg.tolerances.get("shoot", TOL)
    recs = find_spectrum(_params(cfg, n, L), cfg.count, tol=tol, seeds=_seeds(cfg, n, L))
    return [Record("spectrum", n, cfg.g, cfg.hbar, r) for r in recs]


def _unit_branches(cfg, n):
    table = track_branches(ModelParams(n, cfg.g, cfg.L[0], cfg.hbar), cfg.L, cfg.count,
                           tol=cfg.tolerances.get("shoot", TOL))
    out = []
    for i, L in enumerate(table.L):
        p = ModelParams(n, cfg.g, float(L), cfg.hbar)
        for b in range(table.E.shape[1]):
            if table.regimes[i][b] is None:
                continue
            E = complex(table.E[i, b])
            em = complex(table.E_mapped[i, b]) if cfg.g > 0 else complex("nan")
            rec = EigenvalueRecord(b + 1, float(L), E, em, table.regimes[i][b], float(table.residual[i, b]))
            out.append(Record("branches", n, cfg.g, cfg.hbar, rec, branch=b + 1))
    events = [{"n": n, "L_before": a, "L_after": c, "branches": [k + 1 for k in ks]} for a, c, ks in table.transitions]
    events += [{"n": n, "L_before": a, "L_after": c, "swap_suspected": k + 1} for a, c, k in table.swap_suspected]
    return out, events


def _unit_scaling(cfg, n):
    return integrate_branch(n, tol=cfg.tolerances.get("scaling", 1e-10))


def _graph_dict(g) -> dict:
    return {
        "n": g.n, "emapped": g.emapped, "signature": g.signature,
        "turning_points": [t.alpha for t in g.turning_points],
        "lines": [{"origin": ln.origin, "direction": ln.direction, "terminus": ln.terminus.label(),
                   "topology": ln.topology.label(), "polyline": ln.polyline.tolist()} for ln in g.lines],
    }


def _unit_stokes(cfg, n):
    from ..stokes import build_graph
    from ..shooting import critical_energy

    targets = [parse_complex(s) for s in cfg.emapped]
    if not targets:
        ec = critical_energy(n)
        targets = [ec / 10, ec, 10 * ec]
    return [_graph_dict(build_graph(e, n)) for e in targets]


def _unit_secular(cfg, n, L):
    from ..secular import bs_levels, bt_levels

    p = _params(cfg, n, L)
    k = max(1, cfg.count // 2)
    rows = [[n, cfg.g, L, cfg.hbar, j, "BT", E] for j, E in enumerate(bt_levels(p, k), start=1)]
    if n > 0:
        rows += [[n, cfg.g, L, cfg.hbar, j, "BS", E] for j, E in enumerate(bs_levels(p, k), start=1)]
    return rows


def _unit_linear(cfg, L):
    from ..linear import exact_spectrum

    p = _params(cfg, 0, L)
    roots = exact_spectrum(p, cfg.count)
    return [Record("linear_exact", 0, cfg.g, cfg.hbar,
                   EigenvalueRecord(j, L, E, p.to_mapped(E), classify(E, p), 0.0))
            for j, E in enumerate(roots, start=1)]


def _plan(cfg: RunConfig):
    """Independent work units in a fixed order: (task, key, callable)."""
    units = []
    for task in cfg.tasks:
        if task == "spectrum":
            units += [(task, (n, L), lambda n=n, L=L: _unit_spectrum(cfg, n, L)) for n in cfg.n for L in cfg.L]
        elif task == "branches":
            units += [(task, (n,), lambda n=n: _unit_branches(cfg, n)) for n in cfg.n]
        elif task == "scaling_graph":
            units += [(task, (n,), lambda n=n: _unit_scaling(cfg, n)) for n in cfg.n]
        elif task == "stokes_graph":
            units += [(task, (n,), lambda n=n: _unit_stokes(cfg, n)) for n in cfg.n]
        elif task == "secular_scan":
            units += [(task, (n, L), lambda n=n, L=L: _unit_secular(cfg, n, L)) for n in cfg.n for L in cfg.L]
        elif task == "linear_exact":
            units += [(task, (0, L), lambda L=L: _unit_linear(cfg, L)) for L in cfg.L]
    return units


def _guard(fn):
    try:
        return True, fn()
    except (PTSpectraError, ValueError, ArithmeticError) as exc:
        return False, f"{type(exc).__name__}: {exc}"


def run(cfg: RunConfig) -> ResultBundle:
    """Execute every task; a failing unit is recorded and the rest still run."""
    started = time.time()
    units = _plan(cfg)
    with ThreadPoolExecutor(max_workers=max(1, min(_threads(), len(units)))) as pool:
        outcomes = list(pool.map(lambda u: _guard(u[2]), units))
    b = ResultBundle(cfg.digest, cfg.canonical())
    # single-threaded assembly in plan order keeps outputs deterministic
    for (task, key, _), (ok, value) in zip(units, outcomes):
        if not ok:
            b.failures.append({"task": task, "key": list(key), "error": value})
        elif task in ("spectrum", "linear_exact"):
            b.records += value
        elif task == "branches":
            b.records += value[0]
            b.transitions += value[1]
        elif task == "scaling_graph":
            b.branches.append(value)
        elif task == "stokes_graph":
            b.graphs += value
        elif task == "secular_scan":
            b.secular += value
    b.provenance = {"tool": "ptspectra", "version": __version__, "started": started, "finished": time.time()}
    return b


# --- JSON ------------------------------------------------------------------------

def _enc(x):
    if isinstance(x, (complex, np.complexfloating)):
        return [_enc(float(x.real)), _enc(float(x.imag))]
    if isinstance(x, (float, np.floating)):
        return None if math.isnan(x) else (str(x) if math.isinf(x) else float(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return [_enc(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {k: _enc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_enc(v) for v in x]
    return x


def _f(v) -> float:
    return float("nan") if v is None else float(v)


def _c(v) -> complex:
    return complex(_f(v[0]), _f(v[1]))


def _record_json(r: Record) -> dict:
    e = r.rec
    return {"task": r.task, "n": r.n, "g": r.g, "hbar": r.hbar, "branch": r.branch, "j": e.j, "L": e.L,
            "E": _enc(e.E), "E_mapped": _enc(e.E_mapped), "regime": e.regime.value, "residual": e.residual}


def _branch_json(br: ScalingBranch) -> dict:
    return {"n": br.n, "tau": _enc(np.asarray(br.tau)), "E": _enc(np.asarray(br.E)), "tau_c": br.tau_c,
            "E_c": br.E_c, "monotone_im": bool(br.monotone_im)}


def bundle_to_json(b: ResultBundle) -> str:
    doc = {
        "config_digest": b.config_digest, "config": b.config,
        "records": [_record_json(r) for r in b.records],
        "branches": [_branch_json(br) for br in b.branches],
        "graphs": _enc(b.graphs), "secular": _enc(b.secular), "transitions": _enc(b.transitions),
        "failures": b.failures, "provenance": b.provenance,
    }
    return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"


def _graph_from(d: dict) -> dict:
    out = dict(d)
    out["emapped"] = _c(d["emapped"])
    out["turning_points"] = [_c(t) for t in d["turning_points"]]
    out["lines"] = [{**ln, "polyline": [_c(p) for p in ln["polyline"]]} for ln in d["lines"]]
    return out


def bundle_from_json(text: str) -> ResultBundle:
    d = json.loads(text)
    recs = [Record(r["task"], r["n"], r["g"], r["hbar"],
                   EigenvalueRecord(r["j"], r["L"], _c(r["E"]), _c(r["E_mapped"]), Regime(r["regime"]), r["residual"]),
                   r["branch"]) for r in d["records"]]
    branches = [ScalingBranch(br["n"], np.array(br["tau"], dtype=float), np.array([_c(e) for e in br["E"]]),
                              br["tau_c"], br["E_c"], br["monotone_im"], None) for br in d["branches"]]
    return ResultBundle(d["config_digest"], d["config"], recs, branches, [_graph_from(g) for g in d["graphs"]],
                        d["secular"], d["transitions"], d["failures"], d["provenance"])


# --- CSV -------------------------------------------------------------------------

def _num(x) -> str:
    return format(float(x), ".17g")


def spectrum_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SPECTRUM_COLUMNS)
    for r in records:
        e = r.rec
        w.writerow([r.n, _num(r.g), _num(e.L), _num(r.hbar), e.j, _num(e.E.real), _num(e.E.imag),
                    _num(e.E_mapped.real), _num(e.E_mapped.imag), e.regime.value, _num(e.residual)])
    return buf.getvalue()


def scaling_csv(branch: ScalingBranch) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCALING_COLUMNS)
    for t, e in zip(branch.tau, branch.E):
        w.writerow([branch.n, _num(t), _num(e.real), _num(e.imag)])
    w.writerow(["tau_c", "E_c", _num(branch.tau_c), _num(branch.E_c)])
    return buf.getvalue()


def secular_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SECULAR_COLUMNS)
    for n, g, L, hb, j, kind, E in rows:
        w.writerow([n, _num(g), _num(L), _num(hb), j, kind, _num(E)])
    return buf.getvalue()


def write_outputs(b: ResultBundle, out_dir) -> list[Path]:
    """bundle.json plus one CSV per table; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {"bundle.json": bundle_to_json(b)}
    for task in ("spectrum", "branches", "linear_exact"):
        recs = b.spectrum(task)
        if recs:
            files[f"{task}.csv"] = spectrum_csv(recs)
    for br in b.branches:
        files[f"scaling_n{br.n}.csv"] = scaling_csv(br)
    if b.secular:
        files["secular.csv"] = secular_csv(b.secular)
    paths = []
    for name, text in files.items():
        p = out / name
        p.write_text(text, encoding="utf-8", newline="\n")
        paths.append(p)
    return paths
