"""Backend dispatch for the hot kernels.

The numba backend is the default. Setting ``MATCONC_NO_NUMBA`` (to anything
but ``0``) or ``NUMBA_DISABLE_JIT`` selects the pure-numpy implementation,
as does a failing numba import. ``BACKEND`` records the active choice.
"""

import os

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STREAM_SALT = 0x6A09E667F3BCC909

JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def _want_numpy():
    if os.environ.get("MATCONC_NO_NUMBA", "0") not in ("", "0"):
        return True
    return "NUMBA_DISABLE_JIT" in os.environ


if _want_numpy():
    from . import _kernels_numpy as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _kernels_numba as _impl

        BACKEND = "numba"
    except ImportError:
        from . import _kernels_numpy as _impl

        BACKEND = "numpy"


def mix64(z):
    """SplitMix64 finalizer on plain ints (reference path, exact)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def stream_key(master_seed, stream_id):
    """Derive the substream key; pure arithmetic on the two identifiers."""
    a = mix64((master_seed ^ _GOLDEN) & _MASK64)
    b = mix64((stream_id ^ _STREAM_SALT) & _MASK64)
    return mix64((a + b) & _MASK64)


def raw_block(key, start, n):
    """``n`` 64-bit words of stream ``key`` starting at counter ``start``."""
    if n == 0:
        return np.empty(0, dtype=np.uint64)
    return _impl.raw_block(np.uint64(key), np.uint64(start), int(n))


def gaussian_block(key, attempt_start, n):
    """``n`` standard normals plus the number of polar attempts consumed."""
    if n == 0:
        return np.empty(0, dtype=np.float64), 0
    vals, used = _impl.gaussian_block(
        np.uint64(key), np.uint64(attempt_start), int(n))
    return vals, int(used)


def eigh_batch(stack, compute_vectors=True, rel_tol=JACOBI_REL_TOL,
               max_sweeps=JACOBI_MAX_SWEEPS):
    """Jacobi-eigendecompose a batch of Hermitian matrices.

    ``stack`` is copied; returns (w, vecs, sweeps, ok) with eigenvalues
    ascending. ``vecs`` is an empty array when vectors are not requested.
    """
    work = np.array(stack, dtype=np.complex128, copy=True, order="C")
    if work.ndim != 3 or work.shape[1] != work.shape[2]:
        raise ValueError("expected a (batch, d, d) stack")
    return _impl.eigh_batch(work, compute_vectors, rel_tol, max_sweeps)


def matmul(x, y):
    x = np.ascontiguousarray(x, dtype=np.complex128)
    y = np.ascontiguousarray(y, dtype=np.complex128)
    return _impl.matmul(x, y)
