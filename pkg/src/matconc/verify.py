"""Verification engines.

Exhaustive Rademacher oracles (exact averages over all sign patterns),
deterministic checks of the proof-chain inequalities, and seeded Monte
Carlo experiments. Trial ``t`` of any experiment draws from substream
``stream_id = t``, so results are independent of execution order and the
trial-indexed reductions below are performed on fixed arrays.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .bounds import epsilon_threshold
from .ensembles import CoefficientKind, EnsembleKind, empirical_covariance
from .errors import DegenerateDrawError, OverflowGuardError, TooManyTermsError
from .hermitian import (
    EXP_ARG_MAX,
    eigh,
    eigvalsh,
    eigvalsh_batch,
    operator_norm,
    operator_norm_general,
    spectral_apply,
)
from .report import TrialRow
from .rng import RngStream

MAX_ENUM_TERMS = 20   # 2^n sign patterns
MAX_CHAIN_TERMS = 16  # the chain enumerates per step
_ENUM_BLOCK = 4096


@dataclass(frozen=True)
class TraceExp:
    """Statistic Tr e^{sZ}."""


@dataclass(frozen=True)
class NormPower:
    """Statistic ||Z||^p."""

    p: float


@dataclass(frozen=True)
class TailIndicator:
    """Statistic 1{||Z|| >= t}."""

    t: float


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    trials: int

    def __post_init__(self):
        if self.trials < 2:
            raise ValueError("Monte Carlo estimates need trials >= 2")


@dataclass(frozen=True)
class InterpolationState:
    """One step of the interpolation path for a fixed sign pattern."""

    j: int
    matrix: np.ndarray


def interpolation_state(family, s, signs, j):
    """D_j for the given sign pattern.

    D_0 is (s^2/2) sum_i A_i^2 and each step swaps the i-th quadratic
    compensator for its sign term: D_j = D_0 + sum_{i<=j} (s eps_i A_i
    - (s^2/2) A_i^2). Only the first j signs are read.
    """
    n = len(family)
    if not 0 <= j <= n:
        raise ValueError(f"j must lie in [0, {n}]")
    members = family.members
    d0 = 0.5 * s * s * np.sum(
        np.array([kernels.matmul(a, a) for a in members]), axis=0)
    m = d0.copy()
    for i in range(j):
        m += s * signs[i] * members[i] - 0.5 * s * s * kernels.matmul(
            members[i], members[i])
    return InterpolationState(j, (m + m.conj().T) / 2.0)


@dataclass(frozen=True)
class WignerSummary:
    m: int
    trials: int
    mean_norm: float
    stderr_norm: float
    ratio_to_edge: float     # mean ||Z|| / (2 sqrt(m))
    sigma_sq: float          # ||sum A_ij^2|| = m - 1
    naive_sum: float         # sum ||A_ij||^2 = binom(m, 2)
    tail_at_mean_sigma: float    # 2d exp(-t^2/(2 sigma^2)) at t = mean norm
    tail_at_mean_naive: float    # same with the naive scale


def _enum_mean(base, coefs, eig_stat):
    """Average eig_stat(eigenvalues) of base + sum_i (+-1) coefs_i over all signs.

    Sign pattern b maps bit i to +1 when clear, -1 when set; patterns are
    visited in increasing b so the accumulation order is fixed.
    """
    n = coefs.shape[0]
    d = base.shape[0]
    total = 0.0
    npat = 1 << n
    for lo in range(0, npat, _ENUM_BLOCK):
        hi = min(lo + _ENUM_BLOCK, npat)
        ks = np.arange(lo, hi, dtype=np.uint64)
        z = np.broadcast_to(base, (hi - lo, d, d)).copy()
        for i in range(n):
            sg = 1.0 - 2.0 * ((ks >> np.uint64(i)) & np.uint64(1)).astype(np.float64)
            z += sg[:, None, None] * coefs[i]
        w = eigvalsh_batch(z)
        total += float(np.sum(eig_stat(w)))
    return total / npat


def _trace_exp_stat(s):
    def stat(w):
        args = s * w
        if np.max(args) > EXP_ARG_MAX:
            raise OverflowGuardError("Tr e^{sZ} exceeds exp range")
        return np.sum(np.exp(args), axis=1)

    return stat


def _norms_of(w):
    return np.maximum(np.abs(w[:, 0]), np.abs(w[:, -1]))


def exact_rademacher_expectation(family, s, statistic):
    """Exact expectation over all 2^n sign vectors of the chosen statistic.

    TraceExp averages Tr e^{sZ}; NormPower and TailIndicator act on ||Z||
    itself and ignore ``s``.
    """
    n = len(family)
    if n > MAX_ENUM_TERMS:
        raise TooManyTermsError(f"n = {n} exceeds the 2^{MAX_ENUM_TERMS} cap")
    base = np.zeros((family.dim, family.dim), dtype=np.complex128)
    if isinstance(statistic, TraceExp):
        return _enum_mean(base, family.members, _trace_exp_stat(s))
    if isinstance(statistic, NormPower):
        p = statistic.p
        return _enum_mean(base, family.members, lambda w: _norms_of(w) ** p)
    if isinstance(statistic, TailIndicator):
        t = statistic.t
        return _enum_mean(
            base, family.members, lambda w: (_norms_of(w) >= t).astype(np.float64))
    raise TypeError(f"unknown statistic {statistic!r}")


def enumerate_sign_norms(family):
    """||Z|| for every sign pattern, in pattern order (see _enum_mean)."""
    n = len(family)
    if n > MAX_ENUM_TERMS:
        raise TooManyTermsError(f"n = {n} exceeds the 2^{MAX_ENUM_TERMS} cap")
    d = family.dim
    out = np.empty(1 << n, dtype=np.float64)
    for lo in range(0, 1 << n, _ENUM_BLOCK):
        hi = min(lo + _ENUM_BLOCK, 1 << n)
        ks = np.arange(lo, hi, dtype=np.uint64)
        z = np.zeros((hi - lo, d, d), dtype=np.complex128)
        for i in range(n):
            sg = 1.0 - 2.0 * ((ks >> np.uint64(i)) & np.uint64(1)).astype(np.float64)
            z += sg[:, None, None] * family.members[i]
        out[lo:hi] = _norms_of(eigvalsh_batch(z))
    return out


def _sum_squares(members):
    n, d, _ = members.shape
    stacked = members.reshape(n * d, d)
    s = stacked.conj().T @ stacked
    return (s + s.conj().T) / 2.0


def lemma2_terms(family, s):
    """(RHS, LHS) of the moment-generating bound:

    RHS = Tr e^{(s^2/2) sum A_i^2},  LHS = E Tr e^{sZ} (exact enumeration).
    """
    rhs_mat = 0.5 * s * s * _sum_squares(family.members)
    w = eigvalsh(rhs_mat)
    if w[-1] > EXP_ARG_MAX:
        raise OverflowGuardError("RHS exponent exceeds exp range")
    rhs = float(np.sum(np.exp(w)))
    lhs = exact_rademacher_expectation(family, s, TraceExp())
    return rhs, lhs


def lemma2_gap_exact(family, s):
    """RHS - LHS; non-negative up to rounding."""
    rhs, lhs = lemma2_terms(family, s)
    return rhs - lhs


def interpolation_chain_values(family, s):
    """E Tr e^{D_j} for j = 0..n along the interpolation path.

    D_j replaces the first j quadratic compensators by sign terms:
    D_j = (s^2/2) sum_{i>j} A_i^2 + s sum_{i<=j} eps_i A_i, so D_0 is the
    deterministic endpoint and D_n = sZ_n.
    """
    n = len(family)
    if n > MAX_CHAIN_TERMS:
        raise TooManyTermsError(f"chain cap is n <= {MAX_CHAIN_TERMS}, got {n}")
    squares = np.array([kernels.matmul(a, a) for a in family.members])
    values = np.empty(n + 1, dtype=np.float64)
    stat = _trace_exp_stat(1.0)
    for j in range(n + 1):
        base = 0.5 * s * s * np.sum(squares[j:], axis=0) if j < n else \
            np.zeros((family.dim, family.dim), dtype=np.complex128)
        if j == 0:
            w = eigvalsh(base)
            if w[-1] > EXP_ARG_MAX:
                raise OverflowGuardError("D_0 exponent exceeds exp range")
            values[0] = float(np.sum(np.exp(w)))
        else:
            values[j] = _enum_mean(base, s * family.members[:j], stat)
    return values


def interpolation_chain_check(family, s):
    """Per-step gaps E Tr e^{D_{j-1}} - E Tr e^{D_j}; each >= 0 up to rounding."""
    values = interpolation_chain_values(family, s)
    return [float(values[j - 1] - values[j]) for j in range(1, len(values))]


def mgf_dominance_check(a, s):
    """lambda_max of cosh(sA) e^{-s^2 A^2 / 2}; must be <= 1.

    The scalar map is evaluated in the overflow-safe form
    (e^{x - x^2/2} + e^{-x - x^2/2}) / 2 with x = s * lambda.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.size and abs(s) * float(np.max(np.abs(a))) > 1e150:
        raise OverflowGuardError("s*A too large for the squared exponent")

    def f(lam):
        x = s * lam
        return 0.5 * (math.exp(x - 0.5 * x * x) + math.exp(-x - 0.5 * x * x))

    m = spectral_apply(a, f)
    w = eigvalsh(m)
    return float(w[-1])


@lru_cache(maxsize=8)
def _hermgauss(nodes):
    x, w = np.polynomial.hermite.hermgauss(nodes)
    return x, w


def gaussian_mgf_residual(a, s, nodes=64):
    """|| E_g[e^{s g A}] - e^{s^2 A^2 / 2} || via Gauss-Hermite quadrature.

    g is a standard normal scalar; both sides share A's eigenbasis, so the
    quadrature acts on the scalar map lam -> E e^{s g lam}.
    """
    a = np.asarray(a, dtype=np.complex128)
    es = eigh(a)
    x, wts = _hermgauss(nodes)
    scale = math.sqrt(2.0)
    lam = es.eigenvalues
    args = s * scale * np.outer(lam, x)
    if args.size and np.max(args) > EXP_ARG_MAX:
        raise OverflowGuardError("quadrature exponent exceeds exp range")
    quad_diag = np.exp(args) @ wts / math.sqrt(math.pi)
    target_exp = 0.5 * s * s * lam * lam
    if target_exp.size and np.max(target_exp) > EXP_ARG_MAX:
        raise OverflowGuardError("identity exponent exceeds exp range")
    diff_diag = quad_diag - np.exp(target_exp)
    m = kernels.matmul(es.vectors * diff_diag, es.vectors.conj().T)
    return operator_norm_general(m)


def mc_norm_samples(family, kind, trials, seed):
    """||Z|| for ``trials`` independent draws; trial t uses substream t."""
    n = len(family)
    d = family.dim
    coeffs = np.empty((trials, n), dtype=np.float64)
    for t in range(trials):
        key = kernels.stream_key(seed, t)
        if kind is CoefficientKind.RADEMACHER:
            bits = (kernels.raw_block(key, 0, n) >> np.uint64(63)).astype(np.int64)
            coeffs[t] = (1 - 2 * bits).astype(np.float64)
        else:
            coeffs[t], _ = kernels.gaussian_block(key, 0, n)
    norms = np.empty(trials, dtype=np.float64)
    for lo in range(0, trials, _ENUM_BLOCK):
        hi = min(lo + _ENUM_BLOCK, trials)
        z = np.zeros((hi - lo, d, d), dtype=np.complex128)
        for i in range(n):
            z += coeffs[lo:hi, i][:, None, None] * family.members[i]
        norms[lo:hi] = _norms_of(eigvalsh_batch(z))
    return norms


def _mean_stderr(x):
    mean = float(np.mean(x))
    sd = float(np.std(x, ddof=1))
    return mean, sd / math.sqrt(len(x))


def mc_norm_moment(family, kind, p, trials, seed):
    """Monte Carlo (E ||Z||^p)^{1/p} with delta-method standard error."""
    norms = mc_norm_samples(family, kind, trials, seed)
    powers = norms ** p
    mean_p, se_p = _mean_stderr(powers)
    est = mean_p ** (1.0 / p)
    if se_p == 0.0 or est == 0.0:
        return McEstimate(est, 0.0, trials)
    return McEstimate(est, se_p / (p * est ** (p - 1.0)), trials)


def mc_tail_frequency(family, kind, t, trials, seed):
    """Monte Carlo P(||Z|| >= t) with binomial standard error."""
    norms = mc_norm_samples(family, kind, trials, seed)
    freq = float(np.mean(norms >= t))
    stderr = math.sqrt(freq * (1.0 - freq) / trials)
    return McEstimate(freq, stderr, trials)


def _sample_ensemble_block(ensemble, stream, n):
    """n vectors as rows, packed from the trial's variate stream."""
    d = ensemble.dim
    if ensemble.kind is EnsembleKind.SCALED_BASIS:
        idx = np.minimum((stream.uniforms(n) * d).astype(np.int64), d - 1)
        ys = np.zeros((n, d), dtype=np.complex128)
        ys[np.arange(n), idx] = math.sqrt(d)
        return ys
    g = stream.gaussians(n * d).reshape(n, d)
    norms = np.sqrt(np.sum(g * g, axis=1))
    bad = norms <= 1e-150
    tries = 0
    while bad.any():
        tries += 1
        if tries > 100:
            raise DegenerateDrawError("100 near-zero sphere draws in a row")
        k = int(bad.sum())
        g[bad] = stream.gaussians(k * d).reshape(k, d)
        norms = np.sqrt(np.sum(g * g, axis=1))
        bad = norms <= 1e-150
    return (math.sqrt(d) * g / norms[:, None]).astype(np.complex128)


def covariance_experiment(ensemble, n, trials, seed):
    """Empirical covariance concentration trials.

    Each trial draws n vectors, forms the empirical covariance, and records
    the deviation from the analytic covariance I alongside the epsilon
    threshold and whether the deviation beat it.
    """
    m_bound = ensemble.bound
    eps = epsilon_threshold(n, m_bound)
    eye = np.eye(ensemble.dim, dtype=np.complex128)
    rows = []
    for t in range(trials):
        stream = RngStream(seed, t)
        ys = _sample_ensemble_block(ensemble, stream, n)
        cov = empirical_covariance(ys)
        dev = operator_norm(cov - eye)
        rows.append(TrialRow(
            "covariance", t,
            (("trial", t), ("deviation", dev), ("epsilon", eps),
             ("within_epsilon", bool(dev < eps)))))
    return rows


def _wigner_scales(m):
    """sigma^2 and the naive scale for the pair family, streamed in chunks.

    Both quantities are additive over members, so this equals
    sigma(wigner_family(m))**2 and naive_aw_sum(wigner_family(m)) without
    materializing all binom(m, 2) matrices at once.
    """
    pairs = [(i, j) for i in range(m - 1) for j in range(i + 1, m)]
    chunk = max(1, (1 << 21) // (m * m))
    s_acc = np.zeros((m, m), dtype=np.complex128)
    naive = 0.0
    for lo in range(0, len(pairs), chunk):
        block = pairs[lo:lo + chunk]
        stack = np.zeros((len(block), m, m), dtype=np.complex128)
        for k, (i, j) in enumerate(block):
            stack[k, i, j] = 1.0
            stack[k, j, i] = 1.0
        s_acc += np.matmul(stack, stack).sum(axis=0)
        naive += float(np.sum(_norms_of(eigvalsh_batch(stack)) ** 2))
    sigma_sq = operator_norm((s_acc + s_acc.conj().T) / 2.0)
    return sigma_sq, naive


def wigner_experiment(m, trials, seed):
    """Gaussian Wigner sums: norm concentration and the two deviation scales."""
    if m < 2:
        raise ValueError("wigner experiment needs m >= 2")
    n_entries = m * (m - 1) // 2
    iu = np.triu_indices(m, 1)
    norms = np.empty(trials, dtype=np.float64)
    chunk = max(1, min(trials, (1 << 22) // (m * m)))
    z = np.zeros((chunk, m, m), dtype=np.complex128)
    for lo in range(0, trials, chunk):
        hi = min(lo + chunk, trials)
        z[:] = 0.0
        for t in range(lo, hi):
            g, _ = kernels.gaussian_block(kernels.stream_key(seed, t), 0, n_entries)
            zt = z[t - lo]
            zt[iu] = g
            zt += zt.T.copy()
        norms[lo:hi] = _norms_of(eigvalsh_batch(z[:hi - lo]))
    mean_norm, stderr = _mean_stderr(norms) if trials >= 2 else (float(norms[0]), 0.0)
    sigma_sq, naive = _wigner_scales(m)
    tail_sigma = 2.0 * m * math.exp(-mean_norm ** 2 / (2.0 * sigma_sq))
    tail_naive = 2.0 * m * math.exp(-mean_norm ** 2 / (2.0 * naive))
    return WignerSummary(
        m=m,
        trials=trials,
        mean_norm=mean_norm,
        stderr_norm=stderr,
        ratio_to_edge=mean_norm / (2.0 * math.sqrt(m)),
        sigma_sq=sigma_sq,
        naive_sum=naive,
        tail_at_mean_sigma=min(1.0, tail_sigma),
        tail_at_mean_naive=min(1.0, tail_naive),
    )
