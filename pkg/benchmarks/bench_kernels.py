"""Compare the jit-compiled and pure-Python observation kernels.

Run twice to see both paths:
    python3 benchmarks/bench_kernels.py
    HEXSTRAT_NO_NUMBA=1 python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time

import numpy as np

from hexstrat.observation import kernels


def bench(fn, *args, repeat: int = 200) -> float:
    fn(*args)  # warm up (jit compile on the numba path)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def main() -> None:
    rng = np.random.default_rng(0)
    src = rng.random((18, 20, 20))
    perim_rows = np.arange(24) % 7
    perim_cols = (np.arange(24) * 5) % 7
    mode = "numba" if kernels.numba_enabled() else "pure python"
    print(f"kernel path: {mode}")
    t = bench(kernels.localized_kernel, src, 10, 10, perim_rows, perim_cols,
              3.0, 7.0, 100.0, 0.01)
    print(f"localized_kernel 18x20x20      {t * 1e6:10.1f} us/call")
    t = bench(kernels.coarse_proportional_kernel, src, 5, 5)
    print(f"coarse_proportional 18x20x20   {t * 1e6:10.1f} us/call")
    t = bench(kernels.coarse_nearest_kernel, src, 5, 5)
    print(f"coarse_nearest 18x20x20        {t * 1e6:10.1f} us/call")


if __name__ == "__main__":
    main()
