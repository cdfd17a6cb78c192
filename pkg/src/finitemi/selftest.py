"""Desk-scale invariant checks, runnable without pytest (``finitemi selftest``)."""

from __future__ import annotations

import math
import time

import numpy as np

from .capacity import (
    avg_capacity_closed,
    avg_capacity_quadrature,
    delta_threshold,
    exceed_average_analysis,
    jensen_chain_check,
)
from .grid_mi import build_covariance, discrete_mi, dyadic_grid, uniform_grid
from .kernels import AWGN, ExponentialKernel, SincKernel
from .mercer import (
    exponential_spectrum,
    nystrom_spectrum,
    omega_residual,
    trace,
    trace_of_square,
)


def _kernel_invariants():
    for k in (SincKernel(1, 5), ExponentialKernel(1, 1)):
        tau = np.linspace(-3, 3, 601)
        R = k(tau, 0.0)
        if not (np.all(np.abs(R) <= k.power) and np.array_equal(R, k(0.0, tau))):
            return False
    return True


def _trace_identity():
    tr = trace(exponential_spectrum(1, 1, 2, 1000))
    return 0.999 * tr.PT <= tr.partial_sum <= tr.PT


def _trace_of_square():
    s = exponential_spectrum(1, 1, 2, 10_000)
    ref = trace_of_square(1, 1, 2)
    return abs(math.fsum(s.lambdas**2) - ref) < 1e-6 * ref


def _roots():
    s = exponential_spectrum(1, 1, 2, 1000)
    k = np.arange(1, 1001)
    res = np.abs(omega_residual(s.omegas, 1.0, 2.0, k))
    inside = np.all(s.omegas > (k - 1) * np.pi / 2) and np.all(s.omegas < k * np.pi / 2)
    return res.max() < 1e-12 and inside


def _closed_vs_quadrature():
    worst = 0.0
    for P in (0.5, 1, 2):
        for a in (0.5, 1, 2):
            for n0 in (0.5, 1, 2):
                q = avg_capacity_quadrature(ExponentialKernel(P, a), AWGN(n0))
                worst = max(worst, abs(q - avg_capacity_closed(P, a, n0)))
    return worst < 1e-6


def _nystrom():
    a = exponential_spectrum(1, 1, 2, 10).lambdas
    b = nystrom_spectrum(ExponentialKernel(1, 1), 2, 800).lambdas[:10]
    return np.max(np.abs(b - a) / a) < 1e-3


def _grid_vs_series():
    from .capacity import finite_time_mi

    g = uniform_grid(2.0, 2000)
    grid = discrete_mi(build_covariance(ExponentialKernel(1, 1), g),
                       build_covariance(AWGN(1), g), 2.0).value_nats
    series = finite_time_mi(exponential_spectrum(1, 1, 2, 20_000), 1).value_nats
    return abs(grid - series) < 0.01 * series


def _theorem():
    return all(exceed_average_analysis(P, 1, 1, 2).verified for P in (0.1, 0.2, 0.3, 0.4))


def _jensen():
    return jensen_chain_check(0.2, 1, 1, 2).passed


def _fig1_monotone():
    sig, noi = SincKernel(1, 5), ExponentialKernel(1, 1)
    prev = -1.0
    for level in range(9):
        g = dyadic_grid(1.0, level)
        v = discrete_mi(build_covariance(sig, g), build_covariance(noi, g)).value_nats
        if v < prev:
            return False
        prev = v
    return True


def _delta():
    return abs(delta_threshold(1, 2, 1) - 0.4310251) < 1e-6


CHECKS = [
    ("kernel symmetry and |R| <= R(0)", _kernel_invariants),
    ("trace identity, K=1000", _trace_identity),
    ("trace of square, K=10^4", _trace_of_square),
    ("root residuals and brackets, k<=1000", _roots),
    ("closed-form vs quadrature average rate", _closed_vs_quadrature),
    ("Nystrom vs analytic, n=800", _nystrom),
    ("grid vs series mutual information, n=2000", _grid_vs_series),
    ("small-power exceedance verified", _theorem),
    ("inequality chain at P=0.2", _jensen),
    ("dyadic-grid monotonicity, T=1", _fig1_monotone),
    ("delta threshold", _delta),
]


def run_selftest(write=print):
    """Run every check; return True iff all pass."""
    ok = True
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            passed = bool(fn())
            note = ""
        except Exception as exc:  # a crash is a failed check
            passed, note = False, f" ({type(exc).__name__}: {exc})"
        ok &= passed
        write(f"{'PASS' if passed else 'FAIL'}  {name}  [{time.perf_counter() - t0:.2f}s]{note}")
    return ok
