"""Timing comparison of the two kernel backends on large point grids.

The package ships every hot kernel twice: a numba @njit build and a
pure-numpy build, selected per call through NORMFAM_BACKEND.  This
script times ratio_log, fk, and sphder_log on a uniform sample of the
disk |z| < 2 under both backends and prints the speedups.

Usage: python3 benchmarks/bench_backends.py [--n 4] [--points 500000]
"""

import argparse
import os
import time

import numpy as np

from normfam import kernels
from normfam.forge import construct


def sample_disk(count, radius, seed):
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(count))
    t = 2.0 * np.pi * rng.random(count)
    return r * np.exp(1j * t)


def run(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4, help="family order to evaluate")
    ap.add_argument("--points", type=int, default=500_000)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1729)
    args = ap.parse_args()

    F = construct(args.n)
    cen, cof = F.arrays
    zs = sample_disk(args.points, 2.0, args.seed)
    la = F.log_a

    cases = [
        ("ratio_log", kernels.ratio_log, (F.n, cen, cof, zs)),
        ("fk", kernels.fk, (F.n, cen, cof, la, zs)),
        ("sphder_log", kernels.sphder_log, (F.n, cen, cof, la, zs)),
    ]

    # first numba call pays JIT compilation; warm up outside the clock
    os.environ["NORMFAM_BACKEND"] = "numba"
    for _, fn, a in cases:
        fn(*(a[:-1] + (a[-1][:16],)))

    print(f"n={args.n}, {args.points} points, best of {args.repeats}")
    print(f"{'kernel':<12} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for name, fn, a in cases:
        os.environ["NORMFAM_BACKEND"] = "numpy"
        t_np, v_np = run(fn, a, args.repeats)
        os.environ["NORMFAM_BACKEND"] = "numba"
        t_nb, v_nb = run(fn, a, args.repeats)
        # the twins must agree wherever both are finite; summation order
        # differs, so allow a few amplified ulps but nothing structural
        both = np.isfinite(v_np) & np.isfinite(v_nb)
        scale = np.maximum(1.0, np.abs(v_np[both]))
        worst = float(np.max(np.abs(v_np[both] - v_nb[both]) / scale, initial=0.0))
        assert worst < 1e-6, f"{name}: backends disagree by {worst:.3e}"
        print(f"{name:<12} {t_np:>9.4f}s {t_nb:>9.4f}s {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
