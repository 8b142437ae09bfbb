#!/usr/bin/env python3
"""Time the numba and numpy paths of the hot kernels side by side.

Usage: python benchmarks/bench_backends.py [--repeat 5]
The numba path is compiled (and disk-cached) during warmup, so the figures
measure steady-state throughput.

Typical pattern on a small box: the pairwise reductions (pair_mass,
defect_pair_sum, row_weighted_sumsq) run 3-7x faster under numba, while
eval_recurrence favors the numpy path, whose inner step is a BLAS gemv.
"""

import argparse
import time

import numpy as np

from cdlab import _backend


def make_inputs(m, n, seed=0):
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0, 2 * np.pi, size=m)
    z = np.exp(1j * theta)
    scale = np.ones(m)
    hess = np.zeros((n, n), dtype=complex)
    for j in range(n - 1):
        hess[: j + 1, j] = 0.01 * (rng.normal(size=j + 1) + 1j * rng.normal(size=j + 1))
        hess[j + 1, j] = 1.0
    kern = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    kern = kern + kern.conj().T
    w = rng.uniform(0.1, 1.0, size=m)
    f = rng.normal(size=m)
    g = rng.normal(size=m)
    idx = np.arange(m // 2, dtype=np.int64)
    return {
        "eval_recurrence": (z, scale, 1.0, hess),
        "pair_mass": (kern, w, idx, idx),
        "defect_pair_sum": (kern, w, f, g),
        "row_weighted_sumsq": (kern, w),
    }


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--m", type=int, default=1024, help="node count")
    parser.add_argument("--n", type=int, default=256, help="basis dimension")
    args = parser.parse_args()

    if not _backend.HAS_NUMBA:
        print("numba unavailable: nothing to compare (numpy path only)")
        return

    inputs = make_inputs(args.m, args.n)
    print(f"m={args.m} nodes, n={args.n} basis functions, "
          f"best of {args.repeat} runs\n")
    print(f"{'kernel':<22}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>9}")
    for name, call_args in inputs.items():
        impls = _backend.implementations(name)
        impls["numba"](*call_args)  # warm the JIT before timing
        t_np = best_of(impls["numpy"], call_args, args.repeat)
        t_nb = best_of(impls["numba"], call_args, args.repeat)
        print(f"{name:<22}{1e3 * t_np:>12.2f}{1e3 * t_nb:>12.2f}"
              f"{t_np / t_nb:>9.2f}x")


if __name__ == "__main__":
    main()
