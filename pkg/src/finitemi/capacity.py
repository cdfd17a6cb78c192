"""
Finite-time mutual information from Mercer spectra, the average (Shannon)
rate of a colored-noise channel, and the exceed-average comparison between
the two for the exponential-kernel / white-noise channel.

All information quantities are in nats (rates in nats per second).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, QuadratureAccuracyError
from .grid_mi import MIReport
from .kernels import AWGN, KernelSpec
from .mercer import MercerSpectrum, exponential_spectrum

__all__ = [
    "psi",
    "finite_time_mi",
    "finite_time_mi_auto",
    "avg_capacity_quadrature",
    "avg_capacity_closed",
    "delta_threshold",
    "ExceedAverageReport",
    "exceed_average_analysis",
    "JensenChainReport",
    "jensen_chain_check",
]


def psi(x):
    """``(1 - exp(-x)) / x``, with ``psi(0) = 1``. Lies in ``(0, 1)`` for ``x > 0``."""
    x = float(x)
    if x == 0.0:
        return 1.0
    return -math.expm1(-x) / x


def finite_time_mi(spectrum: MercerSpectrum, n0):
    """Mutual information in the window for white noise of PSD ``n0 / 2``.

    Each Mercer mode is an independent scalar Gaussian channel with signal
    power ``lambda_k`` and noise variance ``n0 / 2``, so the total is
    ``1/2 sum_k log(1 + 2 lambda_k / n0)``. Only the ``K`` modes in
    ``spectrum`` are summed; since ``log(1 + x) <= x`` the missing modes add
    at most ``tail_mass / n0``, stored as ``diagnostics["tail_bound"]``.
    """
    n0 = float(n0)
    if not n0 > 0:
        raise DomainError(f"n0 must be > 0, got {n0!r}")
    value = 0.5 * math.fsum(np.log1p(2.0 * spectrum.lambdas / n0))
    tail_mass = spectrum.tail_mass
    diag = {
        "K": spectrum.K,
        "tail_mass": tail_mass,
        "tail_bound": max(tail_mass, 0.0) / n0,
        "spectrum_mode": spectrum.mode,
    }
    return MIReport(value, spectrum.T, "mercer-series", diag)


def finite_time_mi_auto(P, alpha, T, n0, tol=1e-8, rel_tol=1e-4, max_terms=2**20):
    """Series mutual information for the exponential kernel with automatic truncation.

    Grows ``K`` until ``tail_bound < min(tol, rel_tol * value)`` or ``K``
    reaches ``max_terms``. The tail is ``O(1/K)``, so tight absolute
    tolerances can need ~1e8 terms; when the cap is hit the report says so
    in ``diagnostics["target_met"]`` instead of failing.
    """
    T = float(T)
    if P == 0:
        return finite_time_mi(exponential_spectrum(P, alpha, T, 1), n0)
    # tail_mass ~ 2 alpha P T^2 / (pi^2 K) and tail_bound = tail_mass / n0
    guess_value = 0.5 * T * alpha * (math.sqrt(1.0 + 4.0 * P / (n0 * alpha)) - 1.0)
    target = min(tol, rel_tol * max(guess_value, 1e-300))
    K = math.ceil(2.0 * alpha * P * T * T / (np.pi**2 * n0 * target))
    K = int(min(max(K, 16), max_terms))
    while True:
        report = finite_time_mi(exponential_spectrum(P, alpha, T, K), n0)
        target = min(tol, rel_tol * report.value_nats)
        met = report.tail_bound < target
        if met or K >= max_terms:
            break
        K = min(2 * K, max_terms)
    report.diagnostics.update(target=target, target_met=bool(met), max_terms=max_terms)
    return report


def _log_snr(signal, noise):
    def h(f):
        sx = signal.psd(f)
        sn = noise.psd(f)
        if sx == 0.0:
            return 0.0
        return math.log1p(sx / sn)

    return h


def avg_capacity_quadrature(signal: KernelSpec, noise, epsabs=1e-9):
    """``1/2 integral log(1 + S_X(f) / S_N(f)) df`` over the real line, in nats/s.

    The integrand is even, so only ``[0, inf)`` is integrated. A finite
    signal band is integrated directly; otherwise ``f = u / (1 - u)`` maps
    the half line onto ``[0, 1)``.
    """
    W_sig = getattr(signal, "bandwidth", np.inf)
    W_noise = getattr(noise, "bandwidth", np.inf) if not isinstance(noise, AWGN) else np.inf
    if W_noise < W_sig:
        raise DomainError("noise PSD vanishes inside the signal band; the rate is infinite")
    if signal.power == 0.0:
        return 0.0
    h = _log_snr(signal, noise)

    if np.isfinite(W_sig):
        value, abserr, info = quad(h, 0.0, W_sig, epsabs=0.1 * epsabs, epsrel=1e-13,
                                   limit=200, full_output=1)[:3]
    else:
        def g(u):
            if u >= 1.0:
                return 0.0
            return h(u / (1.0 - u)) / (1.0 - u) ** 2

        value, abserr, info = quad(g, 0.0, 1.0, epsabs=0.1 * epsabs, epsrel=1e-13,
                                   limit=400, full_output=1)[:3]
    if abserr > epsabs or not np.isfinite(value):
        raise QuadratureAccuracyError(
            f"average-capacity quadrature reached abserr {abserr:.2e} > {epsabs:.1e}",
            value, abserr,
        )
    # 1/2 * (2 * half-line integral)
    return float(value)


def avg_capacity_closed(P, alpha, n0):
    """Average rate for ``P exp(-alpha |tau|)`` in white noise of PSD ``n0 / 2``.

    Equals ``(sqrt(alpha^2 + 4 P alpha / n0) - alpha) / 2``; evaluated in the
    rationalized form to avoid cancellation at small ``P``.
    """
    if not (P >= 0 and alpha > 0 and n0 > 0):
        raise DomainError("need P >= 0, alpha > 0, n0 > 0")
    s = 4.0 * P * alpha / n0
    return 0.5 * s / (math.sqrt(alpha * alpha + s) + alpha)


def delta_threshold(alpha, T, n0):
    """Power below which the window rate provably exceeds the average rate.

    ``delta = n0 alpha psi(2 alpha T) / (1 - psi(2 alpha T))^2``.
    """
    if not (alpha > 0 and T > 0 and n0 > 0):
        raise DomainError("alpha, T and n0 must be > 0")
    p = psi(2.0 * alpha * T)
    return n0 * alpha * p / (1.0 - p) ** 2


@dataclass
class ExceedAverageReport:
    """Window rate ``C_T`` against the average rate ``C_av`` (both nats/s).

    ``status`` is ``"theorem-verified"`` when ``0 < P < delta`` and the
    margin beats the truncation tail bound, ``"empirical"`` when the margin
    beats the tail bound outside that range, and ``"not-exceeded"``
    otherwise.
    """

    T: float
    P: float
    alpha: float
    n0: float
    C_T: float
    C_av: float
    delta: float
    tail_bound: float
    K: int
    diagnostics: dict = field(default_factory=dict)

    @property
    def margin(self):
        return self.C_T - self.C_av

    @property
    def within_delta(self):
        return 0.0 < self.P < self.delta

    @property
    def I_T(self):
        return self.C_T * self.T

    @property
    def T_times_Cav(self):
        return self.C_av * self.T

    @property
    def verified(self):
        return self.within_delta and self.margin > self.tail_bound

    @property
    def status(self):
        if self.verified:
            return "theorem-verified"
        if self.margin > self.tail_bound and self.P > 0:
            return "empirical"
        return "not-exceeded"


def exceed_average_analysis(P, alpha, n0, T, K=None):
    """Compare the finite-window rate with the average rate for the exponential kernel."""
    if not (P >= 0 and alpha > 0 and n0 > 0 and T > 0):
        raise DomainError("need P >= 0 and alpha, n0, T > 0")
    spectrum = exponential_spectrum(P, alpha, T, K)
    mi = finite_time_mi(spectrum, n0)
    return ExceedAverageReport(
        T=float(T), P=float(P), alpha=float(alpha), n0=float(n0),
        C_T=mi.rate_nats_per_s,
        C_av=avg_capacity_closed(P, alpha, n0),
        delta=delta_threshold(alpha, T, n0),
        tail_bound=mi.tail_bound / T,
        K=spectrum.K,
        diagnostics={"tail_mass": mi.diagnostics["tail_mass"], "I_T_nats": mi.value_nats},
    )


@dataclass
class JensenChainReport:
    """Both sides of each inequality in the small-power exceed-average argument.

    ``derivative``: d/dP of the window information vs. of ``T C_av``.
    ``jensen``: the bound left after Jensen's inequality, using
    ``sum lambda_k mu_k = sum lambda_k^2 / (P T)``.
    ``final``: ``sqrt(1 + 2x) > 1 + x (1 - psi(2 alpha T))`` with
    ``x = 2 P / (n0 alpha)``.
    """

    derivative: tuple
    jensen: tuple
    final: tuple
    mu_sum: float
    mu_tolerance: float
    jensen_gap: float

    @property
    def links(self):
        return {
            "derivative": self.derivative[0] > self.derivative[1],
            "jensen": self.jensen[0] > self.jensen[1],
            "final": self.final[0] > self.final[1],
        }

    @property
    def mu_sum_ok(self):
        return abs(self.mu_sum - 1.0) <= self.mu_tolerance

    @property
    def passed(self):
        return all(self.links.values()) and self.mu_sum_ok and self.jensen_gap >= 0

    def margin(self, link):
        lhs, rhs = getattr(self, link)
        return lhs - rhs


def jensen_chain_check(P, alpha, n0, T, K=None):
    """Evaluate each inequality of the small-power argument on a computed spectrum.

    Failures are reported in the returned record, never raised. The
    derivative link's left side is the truncated sum plus a rigorous lower
    bound on the missing modes, so a pass is conservative.
    """
    if not (P > 0 and alpha > 0 and n0 > 0 and T > 0):
        raise DomainError("need P, alpha, n0, T > 0")
    spectrum = exponential_spectrum(P, alpha, T, K)
    lam = spectrum.lambdas
    PT = P * T
    root = math.sqrt(1.0 + 4.0 * P / (n0 * alpha))

    shrink = 1.0 / (1.0 + 2.0 * lam / n0)
    # missing modes have lambda_k <= lambda_K and total mass P T - sum(lambda),
    # so they contribute at least tail_mass * shrink_K / (n0 P)
    tail = max(spectrum.tail_mass, 0.0)
    tail_floor = tail * shrink[-1] / (n0 * P) if spectrum.K else tail / (n0 * P)
    deriv_lhs = 0.5 * math.fsum(shrink * 2.0 * lam / (n0 * P)) + tail_floor
    deriv_rhs = T / (n0 * root)

    mu = lam / PT
    mu_sum = math.fsum(mu)
    lam_mu = math.fsum(lam * mu)
    jensen_lhs = 1.0 / (1.0 + 2.0 / n0 * lam_mu)
    jensen_rhs = 1.0 / root
    # Jensen itself: sum mu_k phi(lambda_k) >= phi(sum mu_k lambda_k) for the
    # normalized weights of the truncated spectrum
    jensen_gap = math.fsum(mu * shrink) / mu_sum - 1.0 / (1.0 + 2.0 / n0 * lam_mu / mu_sum)

    x = 2.0 * P / (n0 * alpha)
    final_lhs = root
    final_rhs = 1.0 + x * (1.0 - psi(2.0 * alpha * T))

    # a priori: lambda_k < 2 alpha P T^2 / (pi (k-1))^2, so the tail after K
    # terms is below 2 alpha P T^2 / (pi^2 (K-1))
    Kt = spectrum.K
    mu_tol = 2.0 * alpha * T / (np.pi**2 * (Kt - 1)) if Kt > 1 else 1.0
    return JensenChainReport(
        derivative=(deriv_lhs, deriv_rhs),
        jensen=(jensen_lhs, jensen_rhs),
        final=(final_lhs, final_rhs),
        mu_sum=mu_sum,
        mu_tolerance=mu_tol,
        jensen_gap=jensen_gap,
    )
