"""Benchmark the lattice max-min kernel: numba versus the pure-numpy path.

Run:  python benchmarks/bench_kernels.py [--n 400] [--repeat 5]
Both paths scan the identical lattice in the identical order, so the results
must agree bit-for-bit; the table reports wall time and speedup.
"""

import argparse
import time

import numpy as np

from marc_cap._kernels import HAS_NUMBA, lattice_maxmin

CASES = [
    ("two-user example", np.array([6.0, 4.0]), 4.0, 1.0, 2.0),
    ("two-user skewed", np.array([6.0, 0.4]), 4.0, 1.0, 2.0),
    ("three-user", np.array([6.0, 4.0, 2.0]), 5.0, 1.0, 2.5),
]


def bench(impl, P, P_r, N_r, N_d, n, repeat):
    times = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = lattice_maxmin(P, P_r, N_r, N_d, n, impl=impl)
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=400, help="lattice subdivisions per axis (default 400)")
    parser.add_argument("--repeat", type=int, default=5, help="timing repeats, best-of (default 5)")
    args = parser.parse_args()

    if not HAS_NUMBA:
        print("numba is not importable; only the numpy path will run")
    print(f"{'case':<20} {'n':>6} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8}  identical")
    for name, P, P_r, N_r, N_d in CASES:
        n = args.n if len(P) == 2 else max(40, args.n // 5)
        t_np, r_np = bench("numpy", P, P_r, N_r, N_d, n, args.repeat)
        if HAS_NUMBA:
            # First call compiles; time afterwards.
            lattice_maxmin(P, P_r, N_r, N_d, 8, impl="numba")
            t_nb, r_nb = bench("numba", P, P_r, N_r, N_d, n, args.repeat)
            same = r_np[0] == r_nb[0] and np.array_equal(r_np[1], r_nb[1])
            print(f"{name:<20} {n:>6} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.2f}  {same}")
        else:
            print(f"{name:<20} {n:>6} {t_np:>10.4f} {'-':>10} {'-':>8}  -")


if __name__ == "__main__":
    main()
