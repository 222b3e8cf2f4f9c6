#!/usr/bin/env python3
"""Time the two chirp_sum backends against each other.

The chirp quadrature sum is the hot loop of every direct Fresnel
evaluation, so this is the number that decides whether the compiled
extension is worth shipping on a given platform. Workloads mimic the
analytic correlation engine: n_out detector points against n_in object
quadrature nodes, complex coefficients, alpha = k0 / (2 Z_eff).

Usage: python benchmarks/bench_chirp.py [--sizes 256x2048,1024x8192]
                                        [--repeats 5]
"""

import argparse
import time

import numpy as np

from wavecorr._kernels import BACKEND, _chirp_sum_numpy

try:
    from wavecorr._kernels._chirp_cy import chirp_sum as _compiled
except ImportError:
    _compiled = None

ALPHA = 1.066e7 / (2 * 0.057)  # k0 / (2 |Z_eff|) at a few-cm defocus


def _workload(n_out, n_in, rng):
    x_out = np.linspace(-2e-3, 2e-3, n_out)
    x_in = np.linspace(-2.125e-4, 2.125e-4, n_in)
    coeffs = rng.standard_normal(n_in) + 1j * rng.standard_normal(n_in)
    return x_out, x_in, coeffs * (x_in[1] - x_in[0])


def _best_of(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="256x2048,1024x8192,4096x16384",
                        help="comma list of n_outxn_in pairs")
    parser.add_argument("--repeats", type=int, default=5,
                        help="take the best of this many runs")
    args = parser.parse_args(argv)

    pairs = []
    for token in args.sizes.split(","):
        n_out, _, n_in = token.strip().partition("x")
        pairs.append((int(n_out), int(n_in)))

    print(f"active backend: {BACKEND}")
    if _compiled is None:
        print("compiled extension not importable; timing the numpy "
              "fallback only")
    rng = np.random.default_rng(20260816)
    header = f"{'n_out':>7} {'n_in':>7} {'numpy':>12} {'compiled':>12} " \
             f"{'speedup':>8} {'max|diff|':>10}"
    print(header)
    print("-" * len(header))
    for n_out, n_in in pairs:
        work = _workload(n_out, n_in, rng)
        t_np, ref = _best_of(_chirp_sum_numpy, (*work, ALPHA), args.repeats)
        if _compiled is None:
            print(f"{n_out:>7} {n_in:>7} {t_np * 1e3:>10.2f} ms "
                  f"{'-':>12} {'-':>8} {'-':>10}")
            continue
        t_cy, out = _best_of(_compiled, (*work, ALPHA), args.repeats)
        diff = np.abs(out - ref).max()
        print(f"{n_out:>7} {n_in:>7} {t_np * 1e3:>10.2f} ms "
              f"{t_cy * 1e3:>9.2f} ms {t_np / t_cy:>7.1f}x {diff:>10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
