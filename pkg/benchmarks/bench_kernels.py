"""Benchmark the numba kernels against the pure-numpy fallback.

Times the three hot paths (batched Jacobi eigensolver, Gaussian block
generation, matrix multiply) on representative workloads and prints the
speedup. If numba is unavailable only the numpy column runs.

Run:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from matconc import _kernels_numpy as knp
from matconc import kernels

try:
    from matconc import _kernels_numba as knb

    HAVE_NUMBA = True
except ImportError:
    knb = None
    HAVE_NUMBA = False

REPEATS = 5


def _rand_herm_stack(rng, b, d):
    g = rng.standard_normal((b, d, d)) + 1j * rng.standard_normal((b, d, d))
    return (g + np.conj(np.swapaxes(g, 1, 2))) / 2.0


def _time(fn, repeats=REPEATS):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    key = kernels.stream_key(0, 0)

    cases = []

    small = _rand_herm_stack(rng, 4096, 4)
    cases.append((
        "eigh_batch 4096 x d=4 (values)",
        lambda: knb.eigh_batch(small.copy(), False, 1e-13, 100),
        lambda: knp.eigh_batch(small.copy(), False, 1e-13, 100),
    ))

    big = _rand_herm_stack(rng, 8, 64)
    cases.append((
        "eigh_batch 8 x d=64 (vectors)",
        lambda: knb.eigh_batch(big.copy(), True, 1e-13, 100),
        lambda: knp.eigh_batch(big.copy(), True, 1e-13, 100),
    ))

    cases.append((
        "gaussian_block 10^6 draws",
        lambda: knb.gaussian_block(np.uint64(key), np.uint64(0), 10 ** 6),
        lambda: knp.gaussian_block(key, 0, 10 ** 6),
    ))

    x = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
    y = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
    cases.append((
        "matmul 64 x 64 complex",
        lambda: knb.matmul(x, y),
        lambda: knp.matmul(x, y),
    ))

    if HAVE_NUMBA:
        print("[warmup] compiling numba kernels (cached after first run)")
        knb.eigh_batch(small[:2].copy(), True, 1e-13, 100)
        knb.gaussian_block(np.uint64(key), np.uint64(0), 8)
        knb.matmul(x[:2, :2], y[:2, :2])
    else:
        print("[info] numba unavailable; timing the numpy path only")

    header = f"{'kernel':34s} {'numba (s)':>12s} {'numpy (s)':>12s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for name, nb_fn, np_fn in cases:
        t_np = _time(np_fn)
        if HAVE_NUMBA:
            t_nb = _time(nb_fn)
            print(f"{name:34s} {t_nb:12.5f} {t_np:12.5f} {t_np / t_nb:8.1f}x")
        else:
            print(f"{name:34s} {'-':>12s} {t_np:12.5f} {'-':>9s}")


if __name__ == "__main__":
    main()
