"""Numerical verification of concentration inequalities for random
Hermitian matrix sums: spectral calculus, seeded ensembles, closed-form
bounds, exact sign-enumeration oracles, and Monte Carlo experiments."""

from .bounds import (
    BoundReport,
    c_p,
    epsilon_threshold,
    khintchine_moment_bound,
    naive_aw_sum,
    rank_one_tail_bound,
    rudelson_rhs,
    sigma,
    tail_bound,
)
from .ensembles import (
    CoefficientKind,
    EnsembleKind,
    MatrixFamily,
    VectorEnsemble,
    empirical_covariance,
    matrix_family,
    random_family,
    random_hermitian,
    sample_isotropic_bounded,
    sample_zn,
    wigner_family,
)
from .hermitian import (
    EigenSystem,
    eigh,
    eigvalsh,
    golden_thompson_gap,
    hermitian_from_entries,
    matrix_exp,
    operator_norm,
    product_trace,
    psd_order_holds,
    schatten_norm,
    spectral_apply,
    trace_power_gap,
    trotter_product,
)
from .kernels import BACKEND
from .rng import RngStream, gaussian_coeffs, rademacher_signs
from .verify import (
    InterpolationState,
    McEstimate,
    NormPower,
    TailIndicator,
    TraceExp,
    WignerSummary,
    covariance_experiment,
    exact_rademacher_expectation,
    gaussian_mgf_residual,
    interpolation_chain_check,
    lemma2_gap_exact,
    mc_norm_moment,
    mc_tail_frequency,
    mgf_dominance_check,
    wigner_experiment,
)

__version__ = "0.1.0"
