"""Time the numba and pure-numpy RK4 kernels on the reduced flow.

    python benchmarks/bench_rk4.py [--steps 200000] [--repeat 5]

The numba kernel is compiled once before timing.  Both paths must agree to
the last bit since they perform the same floating point operations.
"""

import argparse
import time

import numpy as np

from g2lab import _kernels


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--a", type=float, default=2.0)
    args = ap.parse_args()
    h = 1.0 / args.steps

    results = {}
    backends = ["numpy"] + (["numba"] if _kernels._numba_loop is not None else [])
    for b in backends:
        if b == "numba":
            _kernels.rk4_trajectory(args.a, h, 10, backend=b)  # compile
        results[b] = _kernels.rk4_trajectory(args.a, h, args.steps, backend=b)
        dt = best_of(lambda: _kernels.rk4_trajectory(args.a, h, args.steps, backend=b), args.repeat)
        print(f"{b:6s} {args.steps:>9d} steps  {dt * 1e3:9.2f} ms  ({dt / args.steps * 1e9:7.1f} ns/step)")
    if len(results) == 2:
        same = all(np.array_equal(x, y) for x, y in zip(results["numpy"][:3], results["numba"][:3]))
        print("trajectories identical:", same)
    else:
        print("numba unavailable or disabled (G2LAB_DISABLE_NUMBA); numpy only")


if __name__ == "__main__":
    main()
