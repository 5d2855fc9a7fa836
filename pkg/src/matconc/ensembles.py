"""Random objects: matrix families, coefficient sums, vector ensembles."""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDrawError,
    DimMismatchError,
    EmptyInputError,
    LengthMismatchError,
)
from .rng import gaussian_coeffs, rademacher_signs


class CoefficientKind(enum.Enum):
    RADEMACHER = "rademacher"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class MatrixFamily:
    """Ordered list of same-dimension Hermitian matrices, stacked (n, d, d)."""

    members: np.ndarray

    def __post_init__(self):
        m = self.members
        if m.ndim != 3 or m.shape[0] < 1 or m.shape[1] != m.shape[2]:
            raise DimMismatchError(
                f"family must stack n >= 1 square matrices, got shape {m.shape}")
        if not np.array_equal(m, np.conj(np.swapaxes(m, 1, 2))):
            raise DimMismatchError("family members must be exactly Hermitian")

    @property
    def dim(self):
        return self.members.shape[1]

    def __len__(self):
        return self.members.shape[0]


def matrix_family(members):
    """Build a family from a sequence of exactly Hermitian arrays."""
    stack = np.array([np.asarray(m, dtype=np.complex128) for m in members])
    return MatrixFamily(stack)


class EnsembleKind(enum.Enum):
    SCALED_BASIS = "scaledbasis"
    SPHERE = "sphere"


@dataclass(frozen=True)
class VectorEnsemble:
    """Bounded isotropic vectors: E[YY*] = I and |Y| = sqrt(d) = M."""

    kind: EnsembleKind
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise DimMismatchError("ensemble dimension must be >= 1")

    @property
    def bound(self):
        return float(np.sqrt(self.dim))


def sample_zn(family, kind, stream):
    """One draw of the random sum: sum_i eps_i A_i with fresh coefficients."""
    n = len(family)
    if kind is CoefficientKind.RADEMACHER:
        coeffs = rademacher_signs(stream, n)
    else:
        coeffs = gaussian_coeffs(stream, n)
    z = np.zeros((family.dim, family.dim), dtype=np.complex128)
    for c, a in zip(coeffs, family.members):
        z += c * a
    return z


def wigner_family(m):
    """The binom(m, 2) pair matrices, ones at (i, j) and (j, i), i < j."""
    if m < 2:
        raise DimMismatchError("wigner family needs m >= 2")
    members = []
    for i in range(m - 1):
        for j in range(i + 1, m):
            a = np.zeros((m, m), dtype=np.complex128)
            a[i, j] = 1.0
            a[j, i] = 1.0
            members.append(a)
    return MatrixFamily(np.array(members))


def random_hermitian(d, stream):
    """GUE-style draw: (G + G*)/2 with independent standard normal parts."""
    g = stream.gaussians(2 * d * d)
    re = g[:d * d].reshape(d, d)
    im = g[d * d:].reshape(d, d)
    full = re + 1j * im
    return (full + full.conj().T) / 2.0


def random_family(d, n, stream):
    """n seeded Hermitian members normalized to unit operator norm."""
    from .hermitian import operator_norm

    members = []
    for _ in range(n):
        h = random_hermitian(d, stream)
        nrm = operator_norm(h)
        if nrm == 0.0:
            h = np.eye(d, dtype=np.complex128)
            nrm = 1.0
        members.append(h / nrm)
    return MatrixFamily(np.array(members))


def sample_isotropic_bounded(ensemble, stream):
    """One vector draw from a built-in ensemble.

    ScaledBasis: sqrt(d) * e_J, J uniform on {0..d-1} (one uniform word).
    Sphere: sqrt(d) * g/|g| with g standard normal in R^d; a |g| below
    1e-150 is redrawn, erroring after 100 rejections.
    """
    d = ensemble.dim
    if ensemble.kind is EnsembleKind.SCALED_BASIS:
        u = stream.uniforms(1)[0]
        j = min(int(u * d), d - 1)
        y = np.zeros(d, dtype=np.complex128)
        y[j] = np.sqrt(d)
        return y
    for _ in range(100):
        g = stream.gaussians(d)
        norm = float(np.sqrt(np.sum(g * g)))
        if norm > 1e-150:
            return (np.sqrt(d) / norm) * g.astype(np.complex128)
    raise DegenerateDrawError("100 near-zero sphere draws in a row")


def empirical_covariance(samples):
    """(1/n) sum_i Y_i Y_i*; PSD by construction.

    The outer products are accumulated elementwise (no BLAS reduction) so
    the result is independent of thread count.
    """
    if len(samples) == 0:
        raise EmptyInputError("need at least one sample vector")
    try:
        ys = np.asarray(samples, dtype=np.complex128)
    except ValueError as exc:
        raise LengthMismatchError("sample vectors must share one length") from exc
    if ys.ndim != 2:
        raise LengthMismatchError("sample vectors must share one length")
    outer = ys[:, :, None] * np.conj(ys[:, None, :])
    cov = outer.sum(axis=0) / ys.shape[0]
    return (cov + cov.conj().T) / 2.0
