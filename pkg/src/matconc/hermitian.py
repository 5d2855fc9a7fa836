"""Spectral calculus for complex Hermitian matrices.

Matrices are plain ``complex128`` ndarrays that are exactly conjugate
symmetric; ``hermitian_from_entries`` is the validating constructor and
every operation preserves exact symmetry by construction. The eigensolver
is the package's own cyclic Jacobi (see ``kernels``), so none of the trace
inequalities below depend on LAPACK.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    BadExponentError,
    DimMismatchError,
    NonSquareError,
    NotHermitianError,
    NotPsdError,
    NoConvergenceError,
    OverflowGuardError,
)

EXP_ARG_MAX = 700.0  # exp beyond this exceeds double range; error, not inf
DEFAULT_PSD_TOL = 1e-10
TRACE_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    vectors: np.ndarray


def hermitian_from_entries(grid, tol=1e-12):
    """Symmetrize a nearly Hermitian grid to (G + G*)/2, exactly Hermitian.

    Rejects non-square input and asymmetry above ``tol * (1 + max |entry|)``.
    """
    g = np.asarray(grid, dtype=np.complex128)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise NonSquareError(f"expected a square grid, got shape {g.shape}")
    scale = 1.0 + (np.max(np.abs(g)) if g.size else 0.0)
    defect = np.max(np.abs(g - g.conj().T)) if g.size else 0.0
    if defect > tol * scale:
        raise NotHermitianError(
            f"asymmetry {defect:.3e} exceeds {tol:.1e} * (1 + max entry)")
    return (g + g.conj().T) / 2.0


def _as_herm(a):
    return np.asarray(a, dtype=np.complex128)


def _check_same_dim(a, b):
    if a.shape != b.shape:
        raise DimMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")


def eigh(a, *, max_sweeps=kernels.JACOBI_MAX_SWEEPS):
    """Full eigendecomposition via cyclic Jacobi."""
    a = _as_herm(a)
    w, v, _, ok = kernels.eigh_batch(a[None], compute_vectors=True,
                                     max_sweeps=max_sweeps)
    if not ok[0]:
        raise NoConvergenceError(
            f"Jacobi sweep cap ({max_sweeps}) exceeded for d={a.shape[0]}")
    return EigenSystem(w[0], v[0])


def eigvalsh(a, *, max_sweeps=kernels.JACOBI_MAX_SWEEPS):
    """Eigenvalues only (ascending)."""
    a = _as_herm(a)
    w, _, _, ok = kernels.eigh_batch(a[None], compute_vectors=False,
                                     max_sweeps=max_sweeps)
    if not ok[0]:
        raise NoConvergenceError(
            f"Jacobi sweep cap ({max_sweeps}) exceeded for d={a.shape[0]}")
    return w[0]


def eigvalsh_batch(stack):
    """Eigenvalues of a (B, d, d) Hermitian stack."""
    w, _, _, ok = kernels.eigh_batch(stack, compute_vectors=False)
    if not ok.all():
        bad = int(np.nonzero(~ok)[0][0])
        raise NoConvergenceError(f"Jacobi sweep cap exceeded at batch index {bad}")
    return w


def spectral_apply(a, f):
    """Apply a real scalar function through the spectrum: V f(L) V*."""
    es = eigh(a)
    fw = np.array([float(f(x)) for x in es.eigenvalues], dtype=np.float64)
    x = kernels.matmul(es.vectors * fw, es.vectors.conj().T)
    return (x + x.conj().T) / 2.0


def matrix_exp(a):
    """exp(A) through the eigendecomposition; positive definite result."""
    es = eigh(a)
    if es.eigenvalues.size and es.eigenvalues[-1] > EXP_ARG_MAX:
        raise OverflowGuardError(
            f"eigenvalue {es.eigenvalues[-1]:.3g} exceeds exp range")
    fw = np.exp(es.eigenvalues)
    x = kernels.matmul(es.vectors * fw, es.vectors.conj().T)
    return (x + x.conj().T) / 2.0


def operator_norm(a):
    """max(|lambda_min|, |lambda_max|) for Hermitian input."""
    w = eigvalsh(a)
    if w.size == 0:
        return 0.0
    return float(max(abs(w[0]), abs(w[-1])))


def operator_norm_general(m):
    """Spectral norm of an arbitrary square matrix via sqrt(lmax(M* M))."""
    m = np.asarray(m, dtype=np.complex128)
    h = kernels.matmul(m.conj().T, m)
    w = eigvalsh((h + h.conj().T) / 2.0)
    return float(np.sqrt(max(w[-1], 0.0)))


def product_trace(a, b):
    """Tr(AB) for Hermitian A, B; verifies the imaginary residue is noise."""
    a = _as_herm(a)
    b = _as_herm(b)
    _check_same_dim(a, b)
    tr = complex(np.sum(a * b.T))
    if abs(tr.imag) > TRACE_IMAG_TOL * (1.0 + abs(tr)):
        raise ArithmeticError(
            f"trace imaginary residue {tr.imag:.3e} too large for Tr(AB)")
    return tr.real


def psd_order_holds(a, b, tol=DEFAULT_PSD_TOL):
    """True iff A <= B in the Loewner order, within a relative tolerance."""
    a = _as_herm(a)
    b = _as_herm(b)
    _check_same_dim(a, b)
    w = eigvalsh(b - a)
    if w.size == 0:
        return True
    norm = max(abs(w[0]), abs(w[-1]))
    return bool(w[0] >= -tol * (1.0 + norm))


def schatten_norm(a, p):
    """(sum |lambda_k|^p)^(1/p), p >= 1."""
    if p < 1:
        raise BadExponentError(f"Schatten exponent must be >= 1, got {p}")
    w = np.abs(eigvalsh(a))
    if w.size == 0:
        return 0.0
    m = w.max()
    if m == 0.0:
        return 0.0
    # factor out the max to avoid overflow for large p
    return float(m * np.sum((w / m) ** p) ** (1.0 / p))


def golden_thompson_terms(a, b):
    """(Tr e^{A+B}, Tr e^A e^B); raises on exponent overflow."""
    a = _as_herm(a)
    b = _as_herm(b)
    _check_same_dim(a, b)
    lhs = float(np.sum(np.exp(_guarded_eigvals(a + b))))
    rhs = product_trace(matrix_exp(a), matrix_exp(b))
    return lhs, rhs


def golden_thompson_gap(a, b):
    """Tr(e^A e^B) - Tr(e^{A+B}); non-negative up to rounding."""
    lhs, rhs = golden_thompson_terms(a, b)
    return rhs - lhs


def _guarded_eigvals(a):
    w = eigvalsh(a)
    if w.size and w[-1] > EXP_ARG_MAX:
        raise OverflowGuardError(f"eigenvalue {w[-1]:.3g} exceeds exp range")
    return w


def trotter_product(a, b, k):
    """(e^{A/k} e^{B/k})^k; converges to e^{A+B} at rate O(1/k).

    The k-th power is taken by binary squaring when k is a power of two,
    sequentially otherwise, to bound rounding growth for large k.
    """
    a = _as_herm(a)
    b = _as_herm(b)
    _check_same_dim(a, b)
    if k < 1:
        raise ValueError("k must be a positive integer")
    wa, wb = eigvalsh(a), eigvalsh(b)
    na = max(abs(wa[0]), abs(wa[-1]))
    nb = max(abs(wb[0]), abs(wb[-1]))
    if na + nb > EXP_ARG_MAX:
        raise OverflowGuardError("||A|| + ||B|| exceeds exp range")
    step = kernels.matmul(matrix_exp(a / k), matrix_exp(b / k))
    if k & (k - 1) == 0:
        out = step
        while k > 1:
            out = kernels.matmul(out, out)
            k >>= 1
        return out
    out = step
    for _ in range(k - 1):
        out = kernels.matmul(out, step)
    return out


def _require_psd(x, name):
    d = x.shape[0]
    if not psd_order_holds(np.zeros((d, d), dtype=np.complex128), x):
        raise NotPsdError(f"{name} must be positive semidefinite")


def trace_power_terms(x, y, k):
    """(Tr (XY)^{2^{k+1}}, Tr (X^2 Y^2)^{2^k}) for PSD X, Y."""
    x = _as_herm(x)
    y = _as_herm(y)
    _check_same_dim(x, y)
    if k < 0:
        raise ValueError("k must be a non-negative integer")
    _require_psd(x, "X")
    _require_psd(y, "Y")
    p = kernels.matmul(x, y)
    for _ in range(k + 1):
        p = kernels.matmul(p, p)
    q = kernels.matmul(kernels.matmul(x, x), kernels.matmul(y, y))
    for _ in range(k):
        q = kernels.matmul(q, q)
    return _real_trace(p), _real_trace(q)


def trace_power_gap(x, y, k):
    """Tr((X^2 Y^2)^{2^k}) - Tr((XY)^{2^{k+1}}); non-negative up to rounding."""
    lhs, rhs = trace_power_terms(x, y, k)
    return rhs - lhs


def _real_trace(m):
    tr = complex(np.trace(m))
    if abs(tr.imag) > TRACE_IMAG_TOL * (1.0 + abs(tr)):
        raise ArithmeticError(f"trace imaginary residue {tr.imag:.3e} too large")
    return tr.real
