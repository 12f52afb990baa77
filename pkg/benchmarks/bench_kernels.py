"""Time the numba dd kernels against their numpy fallbacks.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --sizes 8 16 32 --repeat 5
"""
import argparse
import time

import numpy as np

from hecke_clifford import _kernels as kn


def random_dd(rng, *shape):
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return kn.from_complex(z)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 32, 64])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    rng = np.random.default_rng(0)

    if kn.has_numba:
        # compile once before timing
        a = random_dd(rng, 2, 2)
        kn.matmul(a, a)
        kn.lu_full(a)
    print(f"numba kernels enabled: {kn.has_numba}")
    print(f"{'size':>6} {'kernel':>8} {'numba s':>10} {'numpy s':>10} {'speedup':>8} {'max diff':>10}")
    for d in args.sizes:
        a = random_dd(rng, d, d)
        b = random_dd(rng, d, d)
        t_fast = best_of(lambda: kn.matmul(a, b), args.repeat)
        t_slow = best_of(lambda: kn._matmul_numpy(a, b), args.repeat)
        diff = kn.absmax(kn.sub(kn.matmul(a, b), kn._matmul_numpy(a, b)))
        print(f"{d:>6} {'matmul':>8} {t_fast:>10.4f} {t_slow:>10.4f} {t_slow / t_fast:>8.1f} {diff:>10.1e}")

        t_fast = best_of(lambda: kn.lu_full(a), args.repeat)
        t_slow = best_of(lambda: kn._lu_numpy(a, 1e-20), args.repeat)
        rank_fast = kn.lu_full(a)[3]
        rank_slow = kn._lu_numpy(a, 1e-20)[3]
        note = "" if rank_fast == rank_slow else "rank mismatch"
        print(f"{d:>6} {'lu':>8} {t_fast:>10.4f} {t_slow:>10.4f} {t_slow / t_fast:>8.1f} {note:>10}")


if __name__ == "__main__":
    main()
