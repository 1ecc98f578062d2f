"""Command-line entry point: ``ptspectra <command> ...``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .core.model import ModelParams
from .errors import ConfigInvalid, NumericalFailure, PTSpectraError
from .report.config import load_config, parse_complex

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _n_range(text: str) -> list[int]:
    """'3', '0..5' or '0,2,4'."""
    try:
        if ".." in text:
            a, b = text.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n specification {text!r}") from None


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def cmd_run(args) -> int:
    from .report import emit_figures, run, write_outputs

    cfg = load_config(args.config)
    bundle = run(cfg)
    out = Path(args.out or cfg.output_dir)
    for p in write_outputs(bundle, out):
        print(p)
    if args.figures:
        for p in emit_figures(bundle, args.figures.split(","), out):
            print(p)
    for f in bundle.failures:
        print(f"failed: {f['task']} {f['key']}: {f['error']}", file=sys.stderr)
    return EXIT_NUMERIC if bundle.failures else EXIT_OK


def cmd_spectrum(args) -> int:
    from .report.bundle import Record, spectrum_csv
    from .shooting import find_spectrum

    p = ModelParams(args.n, args.g, args.L, args.hbar)
    recs = find_spectrum(p, args.count)
    sys.stdout.write(spectrum_csv([Record("spectrum", args.n, args.g, args.hbar, r) for r in recs]))
    return EXIT_OK


def cmd_scaling(args) -> int:
    from .report.bundle import scaling_csv
    from .scaling import integrate_branch

    for k, n in enumerate(args.n):
        text = scaling_csv(integrate_branch(n))
        sys.stdout.write(text if k == 0 else text.split("\n", 1)[1])
    return EXIT_OK


def cmd_stokes(args) -> int:
    from .stokes import build_graph

    g = build_graph(args.emapped, args.n)
    print(f"# signature {g.signature}")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["origin", "direction", "terminus", "topology", "Re_y", "Im_y"])
    for ln in g.lines:
        for y in ln.polyline:
            w.writerow([ln.origin, ln.direction, ln.terminus.label(), ln.topology.label(),
                        format(y.real, ".17g"), format(y.imag, ".17g")])
    return EXIT_OK


def cmd_linear(args) -> int:
    from .linear import exact_spectrum
    from .report.bundle import Record, spectrum_csv
    from .shooting import EigenvalueRecord, classify

    p = ModelParams(0, args.g, args.L, args.hbar)
    recs = [Record("linear_exact", 0, args.g, args.hbar, EigenvalueRecord(j, args.L, E, p.to_mapped(E), classify(E, p)))
            for j, E in enumerate(exact_spectrum(p, args.count), start=1)]
    sys.stdout.write(spectrum_csv(recs))
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    print(f"ok {cfg.digest}")
    return EXIT_OK


def cmd_figures(args) -> int:
    from .report import bundle_from_json, emit_figures

    bundle = bundle_from_json(Path(args.bundle).read_text(encoding="utf-8"))
    out = args.out or str(Path(args.bundle).parent)
    for p in emit_figures(bundle, args.which.split(","), out):
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ptspectra", description="Spectra of -d^2/dx^2 - g(ix)^(2n+1) in a box")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("run", help="execute a JSON run configuration")
    s.add_argument("config")
    s.add_argument("--out", help="output directory (default: the config's output_dir)")
    s.add_argument("--figures", help="comma-separated figures to render after the run")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("spectrum", help="lowest eigenvalues by shooting, as CSV")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-g", type=float, default=1.0)
    s.add_argument("-L", type=float, required=True)
    s.add_argument("--hbar", type=float, default=1.0)
    s.add_argument("--count", type=int, default=20)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("scaling-graph", help="complex scaling-graph branches, as CSV")
    s.add_argument("-n", type=_n_range, required=True, help="e.g. 1, 0..5 or 0,2")
    s.set_defaults(func=cmd_scaling)

    s = sub.add_parser("stokes", help="anti-Stokes lines for one mapped energy, as CSV")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--emapped", type=_complex_arg, required=True, help='e.g. "0.3-0.4i"')
    s.set_defaults(func=cmd_stokes)

    s = sub.add_parser("linear-exact", help="n = 0 eigenvalues from the Airy determinant, as CSV")
    s.add_argument("-g", type=float, default=1.0)
    s.add_argument("-L", type=float, required=True)
    s.add_argument("--hbar", type=float, default=1.0)
    s.add_argument("--count", type=int, default=12)
    s.set_defaults(func=cmd_linear)

    s = sub.add_parser("validate", help="check a configuration against the schema")
    s.add_argument("config")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("figures", help="render SVG figures from bundle.json")
    s.add_argument("bundle")
    s.add_argument("--which", default="fig1a,fig1b,fig1c")
    s.add_argument("--out")
    s.set_defaults(func=cmd_figures)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, PTSpectraError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
