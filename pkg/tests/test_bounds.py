"""Bound evaluators: closed forms, dual-route agreement, monotonicity."""

import math

import numpy as np
import pytest

from matconc import bounds
from matconc.ensembles import matrix_family, random_family, wigner_family
from matconc.errors import (
    BadBoundError,
    BadConstantError,
    BadExponentError,
    BadSigmaError,
)
from matconc.rng import RngStream


class TestCp:
    def test_p2_sqrt2(self):
        assert abs(bounds.c_p(2.0) - math.sqrt(2.0)) < 1e-12

    def test_p1_sqrt_half_pi(self):
        assert abs(bounds.c_p(1.0) - math.sqrt(math.pi / 2.0)) < 1e-12

    def test_p4_closed_form(self):
        # p * 2^{p/2-1} * Gamma(p/2) = 4 * 2 * 1 = 8
        assert abs(bounds.c_p(4.0) - 8.0 ** 0.25) < 1e-12

    def test_routes_agree_on_grid(self):
        for p in np.linspace(1.0, 64.0, 64):
            bounds.c_p(float(p))  # raises QuadratureMismatchError on divergence

    def test_sqrt_p_envelope(self):
        for p in np.linspace(1.0, 64.0, 128):
            assert bounds.c_p(float(p)) <= 1.3 * math.sqrt(p)

    def test_monotone_in_p(self):
        grid = np.linspace(1.0, 32.0, 40)
        vals = [bounds.c_p(float(p)) for p in grid]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_bad_exponent(self):
        with pytest.raises(BadExponentError):
            bounds.c_p(0.99)


class TestLanczosGamma:
    def test_against_stdlib(self):
        for z in (0.5, 1.0, 1.5, 2.0, 7.25, 17.0, 32.0):
            assert abs(bounds.lanczos_gammaln(z) - math.lgamma(z)) < 1e-12 * (
                1.0 + abs(math.lgamma(z)))


class TestSigma:
    def test_single_member(self):
        fam = matrix_family([np.diag([3.0, -1.0]).astype(np.complex128)])
        assert bounds.sigma(fam) == 3.0

    def test_wigner5(self):
        assert bounds.sigma(wigner_family(5)) == 2.0

    def test_repeated_identity(self):
        fam = matrix_family([np.eye(3, dtype=np.complex128)] * 7)
        assert abs(bounds.sigma(fam) - math.sqrt(7.0)) < 1e-13


class TestMomentBound:
    def test_identity_family_p2(self):
        fam = matrix_family([np.eye(2, dtype=np.complex128)])
        want = math.sqrt(2.0 * math.log(4.0)) + math.sqrt(2.0)
        assert abs(bounds.khintchine_moment_bound(fam, 2) - want) < 1e-12

    def test_sign_family_p1_exceeds_true_moment(self):
        fam = matrix_family([np.diag([1.0, -1.0]).astype(np.complex128)])
        b = bounds.khintchine_moment_bound(fam, 1)
        assert abs(b - (math.sqrt(2.0 * math.log(4.0)) + math.sqrt(math.pi / 2.0))) < 1e-12
        assert 1.0 <= b  # true E||Z|| is exactly 1

    def test_scaling_homogeneity(self):
        fam = random_family(3, 4, RngStream(1, 0))
        scaled = matrix_family([2.5 * a for a in fam.members])
        assert abs(bounds.khintchine_moment_bound(scaled, 2)
                   - 2.5 * bounds.khintchine_moment_bound(fam, 2)) < 1e-10

    def test_nondecreasing_in_p(self):
        fam = random_family(2, 3, RngStream(2, 0))
        vals = [bounds.khintchine_moment_bound(fam, p)
                for p in np.linspace(1, 16, 16)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


class TestTailBound:
    def test_t0_clamps(self):
        rep = bounds.tail_bound(0.0, 1.0, 3)
        assert rep.value == 6.0 and rep.clamped_value == 1.0

    def test_two_sigma(self):
        rep = bounds.tail_bound(2.0, 1.0, 1)
        assert abs(rep.value - 2.0 * math.exp(-2.0)) < 1e-15

    def test_monotone_and_clamped_range(self):
        prev = math.inf
        for t in np.linspace(0.0, 8.0, 30):
            rep = bounds.tail_bound(float(t), 1.3, 4)
            assert rep.value <= prev + 1e-15
            assert 0.0 <= rep.clamped_value <= 1.0
            prev = rep.value

    def test_bad_sigma(self):
        with pytest.raises(BadSigmaError):
            bounds.tail_bound(1.0, 0.0, 2)


class TestRankOneTailBound:
    def test_t0(self):
        rep = bounds.rank_one_tail_bound(0.0, 5, 1.0)
        assert rep.value == 100.0 and rep.clamped_value == 1.0

    def test_formula_evaluation(self):
        rep = bounds.rank_one_tail_bound(1.0, 1000, 1.0)
        want = 4e6 * math.exp(-1000.0 / 24.0)
        assert abs(rep.value - want) < 1e-12 * want

    def test_monotone_in_t(self):
        vals = [bounds.rank_one_tail_bound(float(t), 50, 2.0).value
                for t in np.linspace(0, 10, 25)]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))

    def test_bad_bound(self):
        with pytest.raises(BadBoundError):
            bounds.rank_one_tail_bound(1.0, 5, 0.0)


class TestEpsilonThreshold:
    def test_n1(self):
        assert abs(bounds.epsilon_threshold(1, 1.0)
                   - math.sqrt(48.0 * math.log(2.0))) < 1e-13

    def test_n_million(self):
        want = math.sqrt((72.0 * math.log(1e6) + 48.0 * math.log(2.0)) / 1e6)
        assert abs(bounds.epsilon_threshold(10 ** 6, 1.0) - want) < 1e-15

    def test_linear_in_m(self):
        assert bounds.epsilon_threshold(100, 2.0) == 2.0 * bounds.epsilon_threshold(100, 1.0)


class TestNaiveSum:
    def test_wigner5(self):
        assert bounds.naive_aw_sum(wigner_family(5)) == 10.0

    def test_single_member(self):
        fam = matrix_family([np.diag([2.0, -3.0]).astype(np.complex128)])
        assert abs(bounds.naive_aw_sum(fam) - 9.0) < 1e-12

    def test_dominates_sigma_squared(self):
        meta = RngStream(99, 0)
        for f in range(500):
            u = meta.uniforms(2)
            d = 2 + int(u[0] * 3)
            n = 1 + int(u[1] * 6)
            fam = random_family(d, n, RngStream(100, f))
            s2 = bounds.sigma(fam) ** 2
            naive = bounds.naive_aw_sum(fam)
            assert s2 <= naive + 1e-9 * (1.0 + naive)


class TestRudelsonRhs:
    def test_formula(self):
        n = int(round(math.e ** 2))
        d = int(round(math.e))
        got = bounds.rudelson_rhs(1.0, n, d, 1.0)
        assert abs(got - math.sqrt(math.log(d) / n)) < 1e-15

    def test_degenerate_dimension(self):
        assert bounds.rudelson_rhs(1.0, 100, 1, 2.0) == 0.0

    def test_linear_in_c_and_moment(self):
        base = bounds.rudelson_rhs(1.5, 50, 4, 2.0)
        assert abs(bounds.rudelson_rhs(1.5, 50, 4, 4.0) - 2.0 * base) < 1e-15
        assert abs(bounds.rudelson_rhs(3.0, 50, 4, 2.0) - 2.0 * base) < 1e-15

    def test_bad_constant(self):
        with pytest.raises(BadConstantError):
            bounds.rudelson_rhs(1.0, 10, 2, 0.0)
