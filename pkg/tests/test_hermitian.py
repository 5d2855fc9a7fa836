"""Spectral calculus: spec examples and the trace-inequality properties."""

import math

import numpy as np
import pytest

from matconc import hermitian as hm
from matconc.errors import (
    BadExponentError,
    DimMismatchError,
    NonSquareError,
    NotHermitianError,
    NotPsdError,
    NoConvergenceError,
    OverflowGuardError,
)

SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.diag([1.0, -1.0]).astype(np.complex128)


def _rand_herm(rng, d, scale=1.0):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = (g + g.conj().T) / 2.0
    nrm = np.linalg.norm(h, 2)
    return h * (scale / nrm) if nrm else h


class TestConstruction:
    def test_already_hermitian_unchanged(self):
        g = np.diag([1.0, -1.0])
        np.testing.assert_array_equal(hm.hermitian_from_entries(g), g)

    def test_pauli_y_form_unchanged(self):
        np.testing.assert_array_equal(hm.hermitian_from_entries(SY), SY)

    def test_symmetrized_average(self):
        g = np.array([[0.0, 1.0 + 1e-15], [1.0, 0.0]])
        h = hm.hermitian_from_entries(g, tol=1e-12)
        np.testing.assert_array_equal(h, (g + g.conj().T) / 2.0)
        assert h[0, 1] == (1.0 + 1e-15 + 1.0) / 2.0

    def test_exact_hermitian_after_construction(self):
        rng = np.random.default_rng(0)
        g = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        g = (g + g.conj().T) / 2.0 + 1e-14 * rng.standard_normal((5, 5))
        h = hm.hermitian_from_entries(g, tol=1e-12)
        assert np.array_equal(h, h.conj().T)
        assert (h.diagonal().imag == 0).all()

    def test_rejects_non_square(self):
        with pytest.raises(NonSquareError):
            hm.hermitian_from_entries(np.zeros((2, 3)))

    def test_rejects_asymmetry_beyond_tol(self):
        with pytest.raises(NotHermitianError):
            hm.hermitian_from_entries(np.array([[0.0, 1.0], [2.0, 0.0]]), tol=1e-12)


class TestEigh:
    def test_diagonal(self):
        es = hm.eigh(np.diag([3.0, -5.0]))
        np.testing.assert_array_equal(es.eigenvalues, [-5.0, 3.0])

    def test_pauli_x_closed_form(self):
        np.testing.assert_allclose(hm.eigvalsh(SX), [-1.0, 1.0], atol=1e-15)

    def test_reconstruction_residual_d16(self):
        rng = np.random.default_rng(16)
        a = _rand_herm(rng, 16, scale=2.5)
        es = hm.eigh(a)
        recon = es.vectors @ np.diag(es.eigenvalues) @ es.vectors.conj().T
        assert np.linalg.norm(recon - a, 2) <= 1e-11 * np.linalg.norm(a, 2)
        assert np.linalg.norm(
            es.vectors.conj().T @ es.vectors - np.eye(16), 2) <= 1e-12

    def test_eigenvalues_sorted(self):
        rng = np.random.default_rng(3)
        w = hm.eigvalsh(_rand_herm(rng, 9))
        assert (np.diff(w) >= 0).all()

    def test_no_convergence_error(self):
        rng = np.random.default_rng(4)
        with pytest.raises(NoConvergenceError):
            hm.eigh(_rand_herm(rng, 6), max_sweeps=0)


class TestSpectralApply:
    def test_identity_function(self):
        rng = np.random.default_rng(7)
        a = _rand_herm(rng, 5)
        np.testing.assert_allclose(hm.spectral_apply(a, lambda x: x), a, atol=1e-13)

    def test_square_of_pauli_x_is_identity(self):
        np.testing.assert_allclose(
            hm.spectral_apply(SX, lambda x: x * x), np.eye(2), atol=1e-14)

    def test_exp_on_diagonal(self):
        a = np.diag([0.0, math.log(2.0)])
        np.testing.assert_allclose(
            hm.spectral_apply(a, math.exp), np.diag([1.0, 2.0]), atol=1e-14)

    def test_spectral_mapping_polynomial(self):
        rng = np.random.default_rng(12)
        a = _rand_herm(rng, 6, scale=1.5)
        f = lambda x: 0.3 * x ** 3 - x + 0.25
        w = hm.eigvalsh(a)
        got = np.sort(hm.eigvalsh(hm.spectral_apply(a, f)))
        want = np.sort(f(w))
        tol = 1e-9 * (1.0 + np.max(np.abs(want)))
        np.testing.assert_allclose(got, want, atol=tol)


class TestMatrixExp:
    def test_zero_matrix(self):
        np.testing.assert_allclose(hm.matrix_exp(np.zeros((3, 3))), np.eye(3), atol=0)

    def test_diagonal(self):
        np.testing.assert_allclose(
            hm.matrix_exp(SZ), np.diag([math.e, 1.0 / math.e]), atol=1e-14)

    def test_pauli_x_cosh_sinh(self):
        want = math.cosh(1.0) * np.eye(2) + math.sinh(1.0) * SX
        np.testing.assert_allclose(hm.matrix_exp(SX), want, atol=1e-14)

    def test_positive_definite(self):
        rng = np.random.default_rng(9)
        w = hm.eigvalsh(hm.matrix_exp(_rand_herm(rng, 5, scale=2.0)))
        assert (w > 0).all()

    def test_overflow_guard(self):
        with pytest.raises(OverflowGuardError):
            hm.matrix_exp(np.diag([701.0, 0.0]))


class TestNormsAndOrder:
    def test_operator_norm_examples(self):
        assert hm.operator_norm(np.diag([3.0, -5.0])) == 5.0
        assert hm.operator_norm(np.zeros((4, 4))) == 0.0
        assert abs(hm.operator_norm(SX + SZ) - math.sqrt(2.0)) < 1e-14

    def test_psd_order_examples(self):
        assert hm.psd_order_holds(np.eye(2), 2 * np.eye(2))
        a, b = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
        assert not hm.psd_order_holds(a, b)
        assert not hm.psd_order_holds(b, a)
        rng = np.random.default_rng(1)
        h = _rand_herm(rng, 4)
        assert hm.psd_order_holds(h, h)

    def test_square_is_psd(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            a = _rand_herm(rng, 5, scale=rng.uniform(0.1, 3.0))
            sq = hm.spectral_apply(a, lambda x: x * x)
            assert hm.psd_order_holds(np.zeros((5, 5)), sq)

    def test_order_additivity(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            a = _rand_herm(rng, 4)
            b = _rand_herm(rng, 4)
            wa, wb = _rand_herm(rng, 4), _rand_herm(rng, 4)
            a2 = a + wa @ wa
            b2 = b + wb @ wb
            assert hm.psd_order_holds(a, a2)
            assert hm.psd_order_holds(b, b2)
            assert hm.psd_order_holds(a + b, a2 + b2)

    def test_trace_monotone_under_order(self):
        rng = np.random.default_rng(14)
        for _ in range(20):
            a = _rand_herm(rng, 4)
            w = _rand_herm(rng, 4)
            b = a + w @ w
            cfac = _rand_herm(rng, 4)
            c = cfac @ cfac
            ta, tb = hm.product_trace(a, c), hm.product_trace(b, c)
            assert ta <= tb + 1e-9 * (1.0 + abs(tb))

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatchError):
            hm.product_trace(np.eye(2), np.eye(3))


class TestProductTrace:
    def test_orthogonal_paulis(self):
        assert hm.product_trace(SX, SZ) == 0.0

    def test_identity_gives_trace(self):
        rng = np.random.default_rng(21)
        b = _rand_herm(rng, 3)
        assert abs(hm.product_trace(np.eye(3), b) - np.trace(b).real) < 1e-14

    def test_diagonal_product(self):
        assert hm.product_trace(np.diag([2.0, 3.0]), np.diag([5.0, 7.0])) == 31.0


class TestSchatten:
    def test_frobenius_and_trace_norms(self):
        a = np.diag([3.0, -4.0])
        assert abs(hm.schatten_norm(a, 2) - 5.0) < 1e-14
        assert abs(hm.schatten_norm(a, 1) - 7.0) < 1e-14

    def test_identity(self):
        for p in (1.0, 2.0, 3.5, 17.0):
            assert abs(hm.schatten_norm(np.eye(4), p) - 4.0 ** (1.0 / p)) < 1e-13

    def test_bad_exponent(self):
        with pytest.raises(BadExponentError):
            hm.schatten_norm(np.eye(2), 0.5)


class TestGoldenThompson:
    def test_commuting_diagonal_gap_zero(self):
        a, b = np.diag([0.3, -0.7]), np.diag([1.1, 0.4])
        assert abs(hm.golden_thompson_gap(a, b)) < 1e-12

    def test_pauli_pair_closed_form(self):
        want = 2.0 * math.cosh(1.0) ** 2 - 2.0 * math.cosh(math.sqrt(2.0))
        assert abs(hm.golden_thompson_gap(SX, SZ) - want) < 1e-12

    def test_zero_summand(self):
        rng = np.random.default_rng(22)
        a = _rand_herm(rng, 3, scale=1.2)
        assert abs(hm.golden_thompson_gap(a, np.zeros((3, 3)))) < 1e-12

    def test_gap_nonnegative_random(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            a = _rand_herm(rng, 4, scale=rng.uniform(0.1, 3.0))
            b = _rand_herm(rng, 4, scale=rng.uniform(0.1, 3.0))
            lhs, rhs = hm.golden_thompson_terms(a, b)
            assert rhs - lhs >= -1e-8 * (1.0 + abs(rhs))


class TestTrotter:
    def test_k1_is_plain_product(self):
        rng = np.random.default_rng(31)
        a, b = _rand_herm(rng, 3), _rand_herm(rng, 3)
        want = hm.matrix_exp(a) @ hm.matrix_exp(b)
        np.testing.assert_allclose(hm.trotter_product(a, b, 1), want, atol=1e-13)

    def test_commuting_exact(self):
        a, b = np.diag([0.5, -0.2]), np.diag([0.1, 0.9])
        got = hm.trotter_product(a, b, 7)
        np.testing.assert_allclose(got, hm.matrix_exp(a + b), atol=1e-13)

    def test_pauli_pair_k64(self):
        err = hm.operator_norm_general(
            hm.trotter_product(SX, SZ, 64) - hm.matrix_exp(SX + SZ))
        assert err < 0.05

    def test_error_halves(self):
        rng = np.random.default_rng(32)
        a = _rand_herm(rng, 4, scale=2.0)
        b = _rand_herm(rng, 4, scale=2.0)
        exact = hm.matrix_exp(a + b)
        errs = {k: hm.operator_norm_general(hm.trotter_product(a, b, k) - exact)
                for k in (8, 16, 32, 64, 128)}
        for k in (8, 16, 32, 64):
            if 1e-8 <= errs[k] <= 0.1:
                assert errs[2 * k] <= 0.75 * errs[k]


class TestTracePower:
    def test_identity_pair(self):
        for k in range(4):
            assert hm.trace_power_gap(np.eye(3), np.eye(3), k) == 0.0

    def test_commuting_diagonal(self):
        gap = hm.trace_power_gap(np.diag([1.0, 2.0]), np.diag([3.0, 4.0]), 0)
        assert abs(gap) < 1e-10

    def test_exponential_pair_nonnegative(self):
        x = hm.matrix_exp(SX)
        y = hm.matrix_exp(SZ)
        assert hm.trace_power_gap(x, y, 1) >= 0.0

    def test_requires_psd(self):
        with pytest.raises(NotPsdError):
            hm.trace_power_gap(SZ, np.eye(2), 0)

    def test_iterated_inequality(self):
        # chaining the halving inequality k times: Tr((XY)^{2^k}) <= Tr(X^{2^k} Y^{2^k})
        rng = np.random.default_rng(33)
        for _ in range(5):
            wx, wy = _rand_herm(rng, 3), _rand_herm(rng, 3)
            x, y = wx @ wx, wy @ wy
            for k in range(1, 4):
                m = 2 ** k
                xy = np.linalg.matrix_power(x @ y, m)
                xk = np.linalg.matrix_power(x, m)
                yk = np.linalg.matrix_power(y, m)
                lhs = np.trace(xy).real
                rhs = np.trace(xk @ yk).real
                assert lhs <= rhs + 1e-8 * (1.0 + abs(rhs))
