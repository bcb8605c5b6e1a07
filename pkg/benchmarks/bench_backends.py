"""Compare the numba and numpy kernel backends on the hot paths.

    python3 benchmarks/bench_backends.py [--repeat 3]

Times Z(t) on a vector of heights and a batch of 16/8-point Z^2 panels
(the inner loop of every J(T) computation), and reports the largest
difference between the two backends.
"""
import argparse
import time

import numpy as np

from ladderlab import kernels

nb = kernels.load_backend("numba")
npk = kernels.load_backend("numpy")
RULES = (kernels.X16, kernels.W16, kernels.X8, kernels.W8)


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--points", type=int, default=20_000)
    ap.add_argument("--panels", type=int, default=2_000)
    args = ap.parse_args()

    rng = np.random.default_rng(7)
    t = np.sort(rng.uniform(2e3, 1e5, args.points))
    lo = np.sort(rng.uniform(5e4, 6e4, args.panels))
    hi = lo + 0.25

    # warm up (JIT compilation)
    nb.hardy_z(t[:10])
    nb.gl_panels(lo[:4], hi[:4], *RULES)

    print(f"--- Z(t) at {args.points:,} heights in [2e3, 1e5] ---")
    t_nb, z_nb = best_of(lambda: nb.hardy_z(t), args.repeat)
    t_np, z_np = best_of(lambda: npk.hardy_z(t), args.repeat)
    print(f"numba: {t_nb:.4f}s   numpy: {t_np:.4f}s   speedup {t_np / t_nb:.1f}x")
    print(f"max |diff| = {np.max(np.abs(z_nb - z_np)):.2e}")

    print(f"--- {args.panels:,} Gauss-Legendre panels near t = 5e4 ---")
    t_nb, g_nb = best_of(lambda: nb.gl_panels(lo, hi, *RULES), args.repeat)
    t_np, g_np = best_of(lambda: npk.gl_panels(lo, hi, *RULES), args.repeat)
    print(f"numba: {t_nb:.4f}s   numpy: {t_np:.4f}s   speedup {t_np / t_nb:.1f}x")
    print(f"max rel diff = {np.max(np.abs(g_nb[0] / g_np[0] - 1)):.2e}")


if __name__ == "__main__":
    main()
