"""Timing comparison of the numba kernels against the pure-numpy fallbacks.

Run with `python3 benchmarks/bench_kernels.py`. Both paths are called
directly, so the NFS_DISABLE_NUMBA environment flag does not matter here;
it only changes which path the library dispatches to at import time.
"""

import time

import numpy as np

from nfs import _kernels


def bench(label, func, *args, repeats=5):
    func(*args)  # warm up (jit compilation)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - t0)
    print(f"  {label:<12} {best * 1e3:10.3f} ms")
    return best


def bench_poly_eval():
    print("poly_eval: degree-6 polynomial on 2**22 points")
    coeffs = np.array([0.5, 0.0, -1.2, 0.3, 0.0, 2.0, 0.0])
    x = np.linspace(-2.0, 2.0, 2**22)
    out = np.empty_like(x)
    t_jit = bench("numba", _kernels._poly_eval_jit, coeffs, x, out)
    t_np = bench("numpy", _kernels._poly_eval_np, coeffs, x, out)
    print(f"  speedup      {t_np / t_jit:10.2f}x\n")


def bench_wrapped_sq_dist():
    d, n = 5, 16
    print(f"wrapped_sq_dist: d = {d}, n = {n} ({n**d} points)")
    center = np.linspace(-0.5, 0.5, d)
    out = np.empty(n**d)
    t_jit = bench(
        "numba", _kernels._wrapped_sq_dist_jit, d, n, 0.25, 2.0, center, out
    )
    t_np = bench(
        "numpy", _kernels._wrapped_sq_dist_np, d, n, 0.25, 2.0, center, out
    )
    print(f"  speedup      {t_np / t_jit:10.2f}x\n")


if __name__ == "__main__":
    print(f"numba available: {_kernels.NUMBA_ENABLED}\n")
    bench_poly_eval()
    bench_wrapped_sq_dist()
