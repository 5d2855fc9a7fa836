"""Numba-compiled hot kernels.

Implements the same contracts as ``_kernels_numpy`` (see that module for the
algorithm notes); this variant runs the inner loops under ``@njit``. All
kernels are single-threaded so results do not depend on core count.
"""

import numpy as np
from numba import njit

U64_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
U64_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
U64_MIX2 = np.uint64(0x94D049BB133111EB)
U64_S30 = np.uint64(30)
U64_S27 = np.uint64(27)
U64_S31 = np.uint64(31)
U64_S11 = np.uint64(11)
U64_S63 = np.uint64(63)
U64_ONE = np.uint64(1)
U64_TWO = np.uint64(2)
INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True)
def _finalize(z):
    z = (z ^ (z >> U64_S30)) * U64_MIX1
    z = (z ^ (z >> U64_S27)) * U64_MIX2
    return z ^ (z >> U64_S31)


@njit(cache=True)
def _word(key, counter):
    return _finalize(key + counter * U64_GOLDEN)


@njit(cache=True)
def raw_block(key, start, n):
    out = np.empty(n, dtype=np.uint64)
    c = np.uint64(start)
    for i in range(n):
        out[i] = _word(np.uint64(key), c)
        c += U64_ONE
    return out


@njit(cache=True)
def gaussian_block(key, attempt_start, n):
    """Marsaglia polar draws; attempt j consumes uniform words (2j, 2j+1).

    Returns (values, attempts_consumed). An odd ``n`` discards the second
    variate of the final accepted attempt; the attempt still counts.
    """
    out = np.empty(n, dtype=np.float64)
    k = np.uint64(key)
    j = np.uint64(attempt_start)
    used = 0
    filled = 0
    while filled < n:
        c = j * U64_TWO
        u1 = np.float64(_word(k, c) >> U64_S11) * INV_2_53
        u2 = np.float64(_word(k, c + U64_ONE) >> U64_S11) * INV_2_53
        j += U64_ONE
        used += 1
        v1 = 2.0 * u1 - 1.0
        v2 = 2.0 * u2 - 1.0
        s = v1 * v1 + v2 * v2
        if s <= 0.0 or s >= 1.0:
            continue
        m = np.sqrt(-2.0 * np.log(s) / s)
        out[filled] = v1 * m
        filled += 1
        if filled < n:
            out[filled] = v2 * m
            filled += 1
    return out, used


@njit(cache=True)
def _jacobi_single(a, v, compute_vectors, rel_tol, max_sweeps):
    """Cyclic Jacobi on one Hermitian matrix, in place; returns (sweeps, ok)."""
    d = a.shape[0]
    fro2 = 0.0
    for i in range(d):
        for j in range(d):
            x = a[i, j]
            fro2 += x.real * x.real + x.imag * x.imag
    thresh = rel_tol * np.sqrt(fro2)
    sweeps = 0
    while True:
        off2 = 0.0
        for i in range(d):
            for j in range(i + 1, d):
                x = a[i, j]
                off2 += 2.0 * (x.real * x.real + x.imag * x.imag)
        if np.sqrt(off2) <= thresh:
            return sweeps, True
        if sweeps >= max_sweeps:
            return sweeps, False
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                u = apq / r
                uc = np.conj(u)
                alpha = a[p, p].real
                beta = a[q, q].real
                tau = (alpha - beta) / (2.0 * r)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = -sgn / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                su = s * u
                suc = s * uc
                for i in range(d):
                    if i == p or i == q:
                        continue
                    aip = a[i, p]
                    aiq = a[i, q]
                    nip = c * aip - suc * aiq
                    niq = su * aip + c * aiq
                    a[i, p] = nip
                    a[i, q] = niq
                    a[p, i] = np.conj(nip)
                    a[q, i] = np.conj(niq)
                a[p, p] = complex(alpha - t * r, 0.0)
                a[q, q] = complex(beta + t * r, 0.0)
                a[p, q] = 0.0j
                a[q, p] = 0.0j
                if compute_vectors:
                    for i in range(d):
                        vip = v[i, p]
                        viq = v[i, q]
                        v[i, p] = c * vip - suc * viq
                        v[i, q] = su * vip + c * viq
        sweeps += 1


@njit(cache=True)
def eigh_batch(stack, compute_vectors, rel_tol, max_sweeps):
    """Eigendecompose a (B, d, d) Hermitian stack. Mutates ``stack``.

    Returns (w, vecs, sweeps, ok): eigenvalues ascending per matrix,
    eigenvector columns (empty array when not requested), sweep counts and
    per-matrix convergence flags.
    """
    b = stack.shape[0]
    d = stack.shape[1]
    w = np.empty((b, d), dtype=np.float64)
    if compute_vectors:
        vecs = np.empty((b, d, d), dtype=np.complex128)
    else:
        vecs = np.empty((0, d, d), dtype=np.complex128)
    sweeps = np.empty(b, dtype=np.int64)
    ok = np.empty(b, dtype=np.bool_)
    v = np.empty((d, d), dtype=np.complex128)
    for m in range(b):
        a = stack[m]
        if compute_vectors:
            for i in range(d):
                for j in range(d):
                    v[i, j] = 1.0 + 0.0j if i == j else 0.0j
        sw, good = _jacobi_single(a, v, compute_vectors, rel_tol, max_sweeps)
        sweeps[m] = sw
        ok[m] = good
        raw = np.empty(d, dtype=np.float64)
        for i in range(d):
            raw[i] = a[i, i].real
        order = np.argsort(raw)
        for i in range(d):
            w[m, i] = raw[order[i]]
        if compute_vectors:
            for j in range(d):
                src = order[j]
                for i in range(d):
                    vecs[m, i, j] = v[i, src]
    return w, vecs, sweeps, ok


@njit(cache=True)
def matmul(x, y):
    n = x.shape[0]
    k = x.shape[1]
    m = y.shape[1]
    out = np.zeros((n, m), dtype=np.complex128)
    for i in range(n):
        for l in range(k):
            xv = x[i, l]
            if xv != 0.0:
                for j in range(m):
                    out[i, j] += xv * y[l, j]
    return out
