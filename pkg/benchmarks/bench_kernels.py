"""Compiled vs pure-Python shooting kernel: wall time and agreement.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

from ptspectra import _kernels_py
from ptspectra.core.model import potential_sign

try:
    from ptspectra import _kernels
except ImportError:  # extension not built
    _kernels = None

CASES = [
    # (label, n, L, E)
    ("box-like, n=1 L=0.5", 1, 0.5, 40.0 + 0j),
    ("transition, n=1 L=3", 1, 3.0, 7.7 + 10.2j),
    ("deep BS, n=1 L=6", 1, 6.0, 7.3 + 0.2j),
    ("n=3 L=2", 3, 2.0, 15.0 + 0j),
]


def coefficients(n, L, E):
    return L * L * E, potential_sign(n) * L ** (2 * n + 3), 2 * n + 1


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--tol", type=float, default=1e-11)
    args = ap.parse_args()
    print(f"{'case':28s} {'steps':>7s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s} {'rel diff':>9s}")
    for label, n, L, E in CASES:
        a, b, p = coefficients(n, L, E)
        tp, rp = best_of(lambda: _kernels_py.shoot(a, b, p, -1.0, 0.0, args.tol), args.repeat)
        if _kernels is None:
            print(f"{label:28s} {rp[3]:7d} {tp:10.4f} {'n/a':>10s}")
            continue
        tc, rc = best_of(lambda: _kernels.shoot(a, b, p, -1.0, 0.0, args.tol), args.repeat)
        diff = abs(rp[0] - rc[0]) / max(abs(rc[0]), 1e-300)
        print(f"{label:28s} {rc[3]:7d} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f} {diff:9.1e}")


if __name__ == "__main__":
    main()
