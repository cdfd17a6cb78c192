import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from finitemi.errors import DomainError, UnsupportedOperationError
from finitemi.kernels import ExponentialKernel, SincKernel, TabulatedKernel
from finitemi.mercer import (
    default_truncation,
    eigenfunction_values,
    exponential_spectrum,
    normalization,
    nystrom_spectrum,
    omega_residual,
    reconstruct_kernel,
    solve_omega,
    trace,
    trace_of_square,
)

from oracles import (
    LAMBDA_1_T2_A1,
    OMEGA_1_T2_A1,
    TRACE_SQ_P1_A1_T2,
    gauss_legendre,
    omega_oracle,
)


class TestSolveOmega:
    def test_first_root_matches_bisection_oracle(self):
        assert solve_omega(1.0, 2.0, 1) == pytest.approx(OMEGA_1_T2_A1, abs=1e-14)
        assert solve_omega(1.0, 2.0, 1) == pytest.approx(0.86033, abs=5e-6)

    def test_fourth_root_bracket(self):
        w = solve_omega(1.0, 2.0, 4)
        assert 3 * math.pi / 2 < w < 2 * math.pi

    def test_large_alpha_limit(self):
        for k in (1, 2, 5):
            assert abs(solve_omega(1e8, 2.0, k) - k * math.pi / 2) < 1e-6

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.05, 20), st.floats(0.05, 20), st.integers(1, 200))
    def test_against_oracle(self, alpha, T, k):
        w = solve_omega(alpha, T, k)
        assert w == pytest.approx(omega_oracle(alpha, T, k), rel=1e-13, abs=1e-13)
        assert (k - 1) * math.pi / T < w < k * math.pi / T

    def test_vectorized_matches_scalar(self):
        ks = np.arange(1, 30)
        np.testing.assert_array_equal(solve_omega(0.7, 3.0, ks), [solve_omega(0.7, 3.0, int(k)) for k in ks])

    def test_residuals_and_brackets(self):
        k = np.arange(1, 1001)
        w = solve_omega(1.0, 2.0, k)
        assert np.max(np.abs(omega_residual(w, 1.0, 2.0, k))) < 1e-12
        assert np.all(np.diff(w) > 0)

    def test_residual_at_float64_resolution_for_large_k(self):
        # |g| cannot beat the spacing of doubles near k*pi once k is large
        k = np.arange(1, 10_001)
        w = solve_omega(1.0, 2.0, k)
        res = np.abs(omega_residual(w, 1.0, 2.0, k))
        assert np.all(res <= 8 * np.spacing(k * np.pi))
        assert np.all((w > (k - 1) * np.pi / 2) & (w < k * np.pi / 2))

    def test_invalid(self):
        with pytest.raises(DomainError):
            solve_omega(0.0, 1.0, 1)
        with pytest.raises(DomainError):
            solve_omega(1.0, 1.0, 0)


class TestExponentialSpectrum:
    def test_first_eigenvalue(self):
        s = exponential_spectrum(1, 1, 2, 3)
        assert s.lambdas[0] == pytest.approx(LAMBDA_1_T2_A1, rel=1e-14)

    def test_strictly_decreasing_and_bounded(self):
        s = exponential_spectrum(1.3, 0.8, 2.5, 500)
        assert np.all(np.diff(s.lambdas) < 0)
        assert np.all(s.lambdas > 0)
        assert np.all(s.lambdas < 2 * 1.3 / 0.8)
        assert np.all(s.lambdas < 1.3 * 2.5)

    def test_linear_in_power(self):
        a = exponential_spectrum(1, 1, 2, 50)
        b = exponential_spectrum(2, 1, 2, 50)
        np.testing.assert_array_equal(a.omegas, b.omegas)
        np.testing.assert_allclose(b.lambdas, 2 * a.lambdas, rtol=1e-15)

    def test_default_truncation_tail(self):
        K = default_truncation(1.0, 2.0)
        s = exponential_spectrum(1, 1, 2)
        assert s.K == K
        assert s.tail_mass / s.energy < 1e-4

    def test_zero_power(self):
        s = exponential_spectrum(0, 1, 2, 10)
        assert np.all(s.lambdas == 0)

    def test_normalization_against_quadrature(self):
        w = solve_omega(1.0, 2.0, np.arange(1, 6))
        for wk, Zk in zip(w, normalization(w, 1.0, 2.0)):
            val = quad(lambda t: (wk * math.cos(wk * t) + math.sin(wk * t)) ** 2, 0, 2, epsabs=1e-13)[0]
            assert Zk**2 == pytest.approx(val, rel=1e-12)


class TestTrace:
    def test_trace_identity(self):
        tr = trace(exponential_spectrum(1, 1, 2, 1000))
        assert 0.999 * 2 <= tr.partial_sum <= 2
        assert tr.PT == 2

    def test_partial_sums_increase_tail_decreases(self):
        tails = [exponential_spectrum(1, 1, 2, K).tail_mass for K in (10, 100, 1000)]
        assert tails[0] > tails[1] > tails[2] > 0

    def test_tail_matches_asymptotic_estimate(self):
        K = 1000
        tail = exponential_spectrum(1, 1, 2, K).tail_mass
        assert tail == pytest.approx(2 * 1 * 1 * 4 / (math.pi**2 * K), rel=0.01)

    def test_empty_spectrum(self):
        tr = trace(exponential_spectrum(1, 1, 2, 0))
        assert tr.partial_sum == 0 and tr.tail_mass == 2

    def test_nystrom_trace(self):
        tr = trace(nystrom_spectrum(ExponentialKernel(1, 1), 2, 800))
        assert tr.partial_sum == pytest.approx(2, rel=5e-3)


class TestTraceOfSquare:
    def test_closed_form_value(self):
        assert trace_of_square(1, 1, 2) == pytest.approx(TRACE_SQ_P1_A1_T2, rel=1e-15)

    def test_matches_series(self):
        s = exponential_spectrum(1, 1, 2, 10_000)
        assert abs(math.fsum(s.lambdas**2) - TRACE_SQ_P1_A1_T2) / TRACE_SQ_P1_A1_T2 < 1e-6

    def test_small_window(self):
        assert trace_of_square(1, 1, 1e-8) < 1e-15
        assert trace_of_square(1, 1, 0.0) == 0.0

    def test_power_scaling(self):
        assert trace_of_square(2, 0.7, 3) == pytest.approx(4 * trace_of_square(1, 0.7, 3), rel=1e-15)

    def test_diagonal_integral_oracle(self):
        # integral over the diagonal of the iterated kernel
        P, a, T = 1.5, 0.8, 2.2
        f = lambda t: P**2 / (2 * a) * (2 - np.exp(-2 * a * t) - np.exp(-2 * a * (T - t)))  # noqa: E731
        assert trace_of_square(P, a, T) == pytest.approx(gauss_legendre(f, 0, T), rel=1e-12)


class TestEigenfunctions:
    s = exponential_spectrum(1, 1, 2, 500)

    @pytest.mark.parametrize("k", [1, 2, 3, 7])
    def test_boundary_conditions(self, k):
        h = 1e-6
        phi = lambda t: eigenfunction_values(self.s, k, t)  # noqa: E731
        d0 = (-3 * phi(0) + 4 * phi(h) - phi(2 * h)) / (2 * h)
        dT = (3 * phi(2) - 4 * phi(2 - h) + phi(2 - 2 * h)) / (2 * h)
        assert d0 == pytest.approx(1.0 * phi(0), rel=1e-6, abs=1e-6)
        assert dT == pytest.approx(-1.0 * phi(2), rel=1e-6, abs=1e-6)

    def test_first_two_orthogonal(self):
        f = lambda t: eigenfunction_values(self.s, 1, t) * eigenfunction_values(self.s, 2, t)  # noqa: E731
        assert abs(gauss_legendre(f, 0, 2)) < 1e-12

    def test_gram_matrix(self):
        t = np.linspace(0, 2, 10_001)
        w = np.full(t.size, 2 / 10_000)
        w[[0, -1]] /= 2
        Phi = np.stack([eigenfunction_values(self.s, k, t) for k in range(1, 21)])
        G = (Phi * w) @ Phi.T
        # trapezoid error on smooth integrands, with high-order Gauss check below
        assert np.max(np.abs(G - np.eye(20))) < 1e-5
        x, gw = np.polynomial.legendre.leggauss(200)
        tt = 1 + x
        Phi = np.stack([eigenfunction_values(self.s, k, tt) for k in range(1, 21)])
        assert np.max(np.abs((Phi * gw) @ Phi.T - np.eye(20))) < 1e-8

    def test_satisfies_integral_equation(self):
        for k in (1, 4):
            lam = self.s.lambdas[k - 1]
            for s0 in (0.0, 0.6, 2.0):
                lhs = lam * eigenfunction_values(self.s, k, s0)
                integrand = lambda t: np.exp(-np.abs(s0 - t)) * eigenfunction_values(self.s, k, t)  # noqa: E731
                rhs = quad(integrand, 0, 2, points=[s0], epsabs=1e-13)[0]
                assert lhs == pytest.approx(rhs, abs=1e-10)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            eigenfunction_values(self.s, 1, 2.5)
        with pytest.raises(DomainError):
            eigenfunction_values(self.s, 501, 1.0)
        with pytest.raises(UnsupportedOperationError):
            eigenfunction_values(nystrom_spectrum(ExponentialKernel(1, 1), 2, 10), 1, 0.5)

    def test_reconstruction_improves_with_K(self):
        t = (np.arange(20) + 0.5) * 2 / 20
        R = np.exp(-np.abs(t[:, None] - t[None, :]))
        errs = [np.max(np.abs(R - reconstruct_kernel(self.s, t, t, K))) for K in (50, 100, 200, 500)]
        assert all(a > b for a, b in zip(errs, errs[1:]))
        assert errs[-1] < 1e-3


class TestNystrom:
    def test_matches_analytic(self):
        a = exponential_spectrum(1, 1, 2, 10).lambdas
        b = nystrom_spectrum(ExponentialKernel(1, 1), 2, 800).lambdas[:10]
        assert np.max(np.abs(b - a) / a) < 1e-3

    def test_error_shrinks_with_refinement(self):
        a = exponential_spectrum(1, 1, 2, 10).lambdas
        errs = []
        for n in (100, 200, 400):
            b = nystrom_spectrum(ExponentialKernel(1, 1), 2, n).lambdas[:10]
            errs.append(np.max(np.abs(b - a) / a))
        assert errs[1] < 0.5 * errs[0] and errs[2] < 0.5 * errs[1]

    def test_zero_kernel(self):
        s = nystrom_spectrum(TabulatedKernel([0.0, 3.0], [0.0, 0.0]), 2, 50)
        assert np.all(s.lambdas == 0)

    def test_sinc_knee_near_2WT(self):
        lam = nystrom_spectrum(SincKernel(1, 5), 1, 600).lambdas
        r = lam / lam[0]
        assert r[10] < r[8]
        # about 2WT = 10 eigenvalues near the top, then a sharp drop
        assert r[8] > 0.9 and r[12] < 0.02
        assert np.all(np.diff(lam) <= 0)
        assert np.all(lam >= 0)

    def test_clamped_count_reported(self):
        s = nystrom_spectrum(SincKernel(1, 5), 1, 300)
        raw = s.diagnostics["min_raw"]
        assert (s.diagnostics["n_clamped"] > 0) == (raw < 0)
        assert np.all(s.lambdas >= 0)

    def test_needs_two_points(self):
        with pytest.raises(DomainError):
            nystrom_spectrum(ExponentialKernel(1, 1), 2, 1)
