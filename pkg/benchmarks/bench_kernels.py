"""Benchmark the hot kernels: numba @njit path vs pure-numpy path.

Runs both implementations on the same seeded inputs, verifies they
agree bit-for-bit, and reports per-call times. The elimination inputs
mimic the package's workload: tall constraint stacks with a nontrivial
nullspace.

Usage: python benchmarks/bench_kernels.py [--sizes 128,256,512] [--repeats 5]
"""

import argparse
import time

import numpy as np

from equikit import kernels


def constraint_like(rng, cols):
    rows = 2 * cols
    rank = int(0.8 * cols)
    return rng.standard_normal((rows, rank)) @ rng.standard_normal((rank, cols))


def time_call(fn, *args, repeats):
    best = np.inf
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_row_echelon(cols, repeats, rng):
    a = constraint_like(rng, cols)
    tol = 1e-9 * np.abs(a).max()
    t_np, (p1, r1) = time_call(
        lambda: kernels.row_echelon_numpy(a.copy(), tol), repeats=repeats
    )
    row = {"kernel": "row_echelon", "n": cols, "numpy": t_np, "numba": None}
    if kernels.row_echelon_numba is not None:
        t_nb, (p2, r2) = time_call(
            lambda: kernels.row_echelon_numba(a.copy(), tol), repeats=repeats
        )
        assert r1 == r2 and np.array_equal(p1, p2), "paths disagree"
        a1, a2 = a.copy(), a.copy()
        kernels.row_echelon_numpy(a1, tol)
        kernels.row_echelon_numba(a2, tol)
        assert np.array_equal(a1, a2), "echelon forms differ"
        row["numba"] = t_nb
    return row


def bench_gram_schmidt(cols, repeats, rng):
    vt = rng.standard_normal((cols // 2, cols))
    drop = 1e-12 * np.sqrt((vt * vt).sum(axis=1)).max()
    t_np, (q1, k1) = time_call(
        lambda: kernels.orthonormal_rows_numpy(vt.copy(), drop), repeats=repeats
    )
    row = {"kernel": "gram_schmidt", "n": cols, "numpy": t_np, "numba": None}
    if kernels.orthonormal_rows_numba is not None:
        t_nb, (q2, k2) = time_call(
            lambda: kernels.orthonormal_rows_numba(vt.copy(), drop), repeats=repeats
        )
        assert k1 == k2 and np.array_equal(q1, q2), "paths disagree"
        row["numba"] = t_nb
    return row


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="128,256,512")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if kernels.row_echelon_numba is None:
        print("numba unavailable; timing the numpy path only")
    else:
        kernels.row_echelon_numba(np.eye(2), 1e-9)
        kernels.orthonormal_rows_numba(np.eye(2), 1e-12)

    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        rows.append(bench_row_echelon(n, args.repeats, rng))
        rows.append(bench_gram_schmidt(n, args.repeats, rng))

    print(f"{'kernel':<14}{'n':>6}{'numpy [ms]':>14}{'numba [ms]':>14}{'speedup':>10}")
    for row in rows:
        numpy_ms = row["numpy"] * 1e3
        if row["numba"] is None:
            print(f"{row['kernel']:<14}{row['n']:>6}{numpy_ms:>14.3f}{'-':>14}{'-':>10}")
        else:
            numba_ms = row["numba"] * 1e3
            print(f"{row['kernel']:<14}{row['n']:>6}{numpy_ms:>14.3f}"
                  f"{numba_ms:>14.3f}{numpy_ms / numba_ms:>10.2f}")
    print("outputs of both paths verified bit-identical")


if __name__ == "__main__":
    main()
