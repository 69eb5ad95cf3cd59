"""Benchmark the jitted kernels against their pure-numpy fallbacks.

Runs both implementations of each hot kernel on representative workloads,
checks that they agree, and prints timings plus the speedup.  Run without
COOPBC_NO_NUMBA set, otherwise the jitted rows are skipped along with the
jit itself.

Usage:  python benchmarks/bench_accel.py [--quick]
"""

import argparse
import time

import numpy as np

from coopbc import _accel
from coopbc.channel import make_bec, make_bsc


def timeit(fn, *args, repeats=3):
    fn(*args)  # warm-up (and JIT compile for the numba path)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_corner_scan(steps):
    t1 = make_bec(0.1).transitions
    t2 = make_bsc(0.2).transitions
    axis = np.linspace(0.0, 1.0, steps + 1)
    g0, g1 = np.meshgrid(axis, axis, indexing="ij")
    t_combos = np.stack([g0.ravel(), g1.ravel()], axis=1)
    p_u = np.array([0.35, 0.65])
    rows = []
    t_np = timeit(_accel.corner_scan_numpy, p_u, t_combos, t1, t2)
    rows.append(("corner_scan", "numpy", t_np, t_combos.shape[0]))
    if _accel.HAVE_NUMBA:
        t_nb = timeit(_accel.corner_scan_numba, p_u, t_combos, t1, t2)
        rows.append(("corner_scan", "numba", t_nb, t_combos.shape[0]))
        a = _accel.corner_scan_numpy(p_u, t_combos, t1, t2)
        b = _accel.corner_scan_numba(p_u, t_combos, t1, t2)
        for x, y in zip(a, b):
            np.testing.assert_allclose(x, y, atol=1e-12)
    return rows


def bench_decode(n_codewords, n, trials):
    rng = np.random.default_rng(0)
    codebook = rng.integers(0, 2, size=(n_codewords, n)).astype(np.int8)
    ys = rng.integers(0, 3, size=(trials, n)).astype(np.int8)
    penalty = np.array([[0, 1, 0], [1, 0, 0]], dtype=np.int64)
    rows = []
    t_np = timeit(_accel.decode_map_int_numpy, codebook, penalty, ys)
    rows.append(("decode_map_int", "numpy", t_np, trials * n_codewords))
    if _accel.HAVE_NUMBA:
        t_nb = timeit(_accel.decode_map_int_numba, codebook, penalty, ys)
        rows.append(("decode_map_int", "numba", t_nb, trials * n_codewords))
        a = _accel.decode_map_int_numpy(codebook, penalty, ys)
        b = _accel.decode_map_int_numba(codebook, penalty, ys)
        np.testing.assert_array_equal(a, b)
    return rows


def bench_decode_sq(n_codewords, n, trials):
    rng = np.random.default_rng(1)
    codebook = rng.standard_normal((n_codewords, n))
    ys = rng.standard_normal((trials, n))
    rows = []
    t_np = timeit(_accel.decode_sq_numpy, codebook, 2.2, ys)
    rows.append(("decode_sq", "numpy", t_np, trials * n_codewords))
    if _accel.HAVE_NUMBA:
        t_nb = timeit(_accel.decode_sq_numba, codebook, 2.2, ys)
        rows.append(("decode_sq", "numba", t_nb, trials * n_codewords))
        a = _accel.decode_sq_numpy(codebook, 2.2, ys)
        b = _accel.decode_sq_numba(codebook, 2.2, ys)
        np.testing.assert_array_equal(a, b)
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()

    if args.quick:
        rows = bench_corner_scan(60) + bench_decode(512, 16, 400) + bench_decode_sq(512, 16, 400)
    else:
        rows = (
            bench_corner_scan(200)
            + bench_decode(4096, 16, 2000)
            + bench_decode_sq(4096, 16, 2000)
        )

    print(f"jitted path built: {_accel.HAVE_NUMBA} (package default: "
          f"{'numba' if _accel.USING_NUMBA else 'numpy'})")
    print(f"{'kernel':<16} {'path':<6} {'best time':>10} {'work items':>12}")
    by_kernel = {}
    for kernel, path, t, items in rows:
        print(f"{kernel:<16} {path:<6} {t:>9.4f}s {items:>12,}")
        by_kernel.setdefault(kernel, {})[path] = t
    for kernel, times in by_kernel.items():
        if "numba" in times and "numpy" in times:
            print(f"{kernel}: numba speedup {times['numpy'] / times['numba']:.1f}x")


if __name__ == "__main__":
    main()
