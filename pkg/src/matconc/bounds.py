"""Closed-form bound evaluators.

The moment constant is computed two independent ways, a Lanczos-gamma
closed form and adaptive Simpson quadrature of the defining integral, and
the two must agree to 1e-10 relative. All logarithms are natural.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadBoundError,
    BadConstantError,
    BadExponentError,
    BadSigmaError,
    QuadratureMismatchError,
)
from .hermitian import eigvalsh

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_QUAD_UPPER = 40.0  # integrand below 1e-300 past here for p <= 64
_QUAD_ABS_TOL = 1e-13
_CP_REL_TOL = 1e-10


@dataclass(frozen=True)
class BoundReport:
    """One evaluated bound; clamped_value is min(1, value) when applicable."""

    bound_name: str
    inputs: tuple
    value: float
    clamped_value: float | None = None


def lanczos_gammaln(z):
    """ln Gamma(z) for real z >= 0.5."""
    if z < 0.5:
        raise ValueError("lanczos_gammaln requires z >= 0.5")
    acc = _LANCZOS_C[0]
    for i in range(1, 9):
        acc += _LANCZOS_C[i] / (z - 1.0 + i)
    t = z + _LANCZOS_G - 0.5
    return 0.5 * math.log(2.0 * math.pi) + (z - 0.5) * math.log(t) - t + math.log(acc)


def _adaptive_simpson(f, a, b, tol, max_depth=50):
    """Adaptive Simpson on [a, b], absolute tolerance ``tol``.

    The range is pre-split into unit-width panels before refining so a
    narrow interior peak cannot hide from the first probe points.
    """

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        err = left + right - whole
        if abs(err) <= 15.0 * tol or depth >= max_depth:
            return left + right + err / 15.0
        half = 0.5 * tol
        return (recurse(a, m, fa, flm, fm, left, half, depth + 1)
                + recurse(m, b, fm, frm, fb, right, half, depth + 1))

    panels = max(1, int(math.ceil(b - a)))
    edges = np.linspace(a, b, panels + 1)
    panel_tol = tol / panels
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        flo, fhi = f(lo), f(hi)
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
        total += recurse(lo, hi, flo, fmid, fhi, whole, panel_tol, 0)
    return total


def c_p(p):
    """Sub-Gaussian moment constant (p * int_0^inf t^{p-1} e^{-t^2/2} dt)^{1/p}.

    Closed form: (p 2^{p/2-1} Gamma(p/2))^{1/p}. The quadrature route
    integrates the peak-normalized integrand on [0, 40] so the absolute
    Simpson tolerance stays meaningful for large p.
    """
    if p < 1:
        raise BadExponentError(f"moment order must be >= 1, got {p}")
    z = 0.5 * p
    closed = math.exp(
        (math.log(p) + (z - 1.0) * math.log(2.0) + lanczos_gammaln(z)) / p)

    if p == 1.0:
        ln_peak = 0.0

        def g(t):
            return math.exp(-0.5 * t * t)
    else:
        t_peak = math.sqrt(p - 1.0)
        ln_peak = (p - 1.0) * math.log(t_peak) - 0.5 * (p - 1.0)

        def g(t):
            if t <= 0.0:
                return 0.0
            return math.exp((p - 1.0) * math.log(t) - 0.5 * t * t - ln_peak)

    q = _adaptive_simpson(g, 0.0, _QUAD_UPPER, _QUAD_ABS_TOL)
    quad = math.exp((math.log(p) + ln_peak + math.log(q)) / p)
    if abs(closed - quad) > _CP_REL_TOL * abs(closed):
        raise QuadratureMismatchError(
            f"c_p({p}): closed {closed!r} vs quadrature {quad!r}")
    return closed


def sigma(family):
    """sqrt of the operator norm of sum_i A_i^2 (the deviation scale)."""
    m = family.members
    n, d, _ = m.shape
    stacked = m.reshape(n * d, d)
    s = stacked.conj().T @ stacked  # sum A_i* A_i = sum A_i^2 for Hermitian A_i
    s = (s + s.conj().T) / 2.0
    w = eigvalsh(s)
    return float(np.sqrt(max(w[-1], 0.0)))


def khintchine_moment_bound(family, p):
    """(sqrt(2 ln(2d)) + C_p) * sigma for the family of dimension d."""
    d = family.dim
    return (math.sqrt(2.0 * math.log(2.0 * d)) + c_p(p)) * sigma(family)


def tail_bound(t, sigma_value, d):
    """2d exp(-t^2 / (2 sigma^2)), raw and clamped to [0, 1]."""
    if sigma_value <= 0:
        raise BadSigmaError(f"sigma must be positive, got {sigma_value}")
    if t < 0:
        raise ValueError("threshold t must be non-negative")
    value = 2.0 * d * math.exp(-t * t / (2.0 * sigma_value * sigma_value))
    return BoundReport(
        "tail",
        (("t", float(t)), ("sigma", float(sigma_value)), ("d", float(d))),
        value,
        min(1.0, value),
    )


def rank_one_tail_bound(t, n, m_bound):
    """(2n)^2 exp(-n t^2 / (16 M^2 + 8 M^2 t)), raw and clamped."""
    if m_bound <= 0:
        raise BadBoundError(f"vector bound M must be positive, got {m_bound}")
    if t < 0:
        raise ValueError("threshold t must be non-negative")
    m2 = m_bound * m_bound
    value = (2.0 * n) ** 2 * math.exp(-n * t * t / (16.0 * m2 + 8.0 * m2 * t))
    return BoundReport(
        "rank_one_tail",
        (("t", float(t)), ("n", float(n)), ("M", float(m_bound))),
        value,
        min(1.0, value),
    )


def epsilon_threshold(n, m_bound):
    """M sqrt((72 ln n + 48 ln 2) / n); informative only while <= 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return m_bound * math.sqrt((72.0 * math.log(n) + 48.0 * math.log(2.0)) / n)


def naive_aw_sum(family):
    """sum_i ||A_i||^2, the cruder deviation scale squared."""
    from .hermitian import eigvalsh_batch

    w = eigvalsh_batch(family.members)
    norms = np.maximum(np.abs(w[:, 0]), np.abs(w[:, -1]))
    return float(np.sum(norms ** 2))


def rudelson_rhs(moment, n, d, c):
    """C * moment * sqrt(ln d / n); the universal C is caller-supplied.

    ``moment`` is the caller's estimate of E[|Y_1|^{ln n}]^{1/ln n}. For
    d = 1 the bound degenerates to 0 (ln 1 = 0); callers should flag it.
    """
    if c <= 0:
        raise BadConstantError(f"constant C must be positive, got {c}")
    if n < 2:
        raise ValueError("n must be >= 2 so ln n > 0")
    if d < 1:
        raise ValueError("dimension d must be >= 1")
    if moment < 0:
        raise ValueError("moment estimate must be non-negative")
    return c * moment * math.sqrt(math.log(d) / n)
