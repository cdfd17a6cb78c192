"""
Mercer spectra of autocorrelation operators on a window ``[0, T]``.

For ``R(tau) = P exp(-alpha |tau|)`` the eigenpairs are known in closed form
up to a scalar root per index::

    2 arctan(omega_k / alpha) = k pi - omega_k T
    lambda_k = 2 alpha P / (alpha^2 + omega_k^2)
    phi_k(t) = (omega_k cos(omega_k t) + alpha sin(omega_k t)) / Z_k

Any other kernel is handled by the Nystrom method on trapezoid nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg as la

from .errors import DomainError, FiniteMIError, NumericalError, UnsupportedOperationError
from .kernels import ExponentialKernel, KernelSpec

__all__ = [
    "MercerSpectrum",
    "TraceReport",
    "omega_residual",
    "solve_omega",
    "default_truncation",
    "exponential_spectrum",
    "nystrom_spectrum",
    "trace",
    "trace_of_square",
    "normalization",
    "eigenfunction_values",
    "reconstruct_kernel",
]


@dataclass(eq=False)
class MercerSpectrum:
    """Leading eigenpairs of the integral operator with kernel ``R`` on ``[0, T]``.

    ``omegas`` and ``Z`` are populated only in ``"analytic-exponential"`` mode.
    """

    kernel: KernelSpec
    T: float
    lambdas: np.ndarray
    mode: str
    omegas: np.ndarray | None = None
    Z: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def K(self):
        return self.lambdas.size

    @property
    def energy(self):
        """Signal energy ``R(0) T``, the trace of the full operator."""
        return self.kernel.power * self.T

    @property
    def tail_mass(self):
        return self.energy - math.fsum(self.lambdas)

    @property
    def alpha(self):
        return getattr(self.kernel, "alpha", None)


class TraceReport(NamedTuple):
    partial_sum: float
    PT: float
    tail_mass: float


def omega_residual(omega, alpha, T, k):
    """``2 arctan(omega / alpha) + omega T - k pi``."""
    return 2.0 * np.arctan(omega / alpha) + omega * T - k * np.pi


def solve_omega(alpha, T, k):
    """Resonant frequency ``omega_k`` of the exponential kernel on ``[0, T]``.

    ``k`` may be an integer or an integer array (``k >= 1``). The residual
    is strictly increasing in ``omega`` and changes sign on
    ``((k-1) pi / T, k pi / T)``, so bisection always converges; a few
    Newton steps then polish to roundoff.
    """
    alpha = float(alpha)
    T = float(T)
    if not (alpha > 0 and T > 0):
        raise DomainError("alpha and T must be > 0")
    k_arr = np.asarray(k)
    if k_arr.size and (np.any(k_arr < 1) or np.any(k_arr != np.floor(k_arr))):
        raise DomainError("k must be a positive integer")
    k_arr = k_arr.astype(float)

    lo = (k_arr - 1.0) * np.pi / T
    hi = k_arr * np.pi / T
    for _ in range(200):
        # converged entries are frozen so each root is independent of the batch
        active = hi - lo > 1e-13 * np.maximum(1.0, hi)
        if not np.any(active):
            break
        mid = 0.5 * (lo + hi)
        pos = omega_residual(mid, alpha, T, k_arr) > 0
        hi = np.where(active & pos, mid, hi)
        lo = np.where(active & ~pos, mid, lo)
    omega = 0.5 * (lo + hi)
    lo0 = (k_arr - 1.0) * np.pi / T
    hi0 = k_arr * np.pi / T
    for _ in range(3):
        g = omega_residual(omega, alpha, T, k_arr)
        step = g / (2.0 * alpha / (alpha * alpha + omega * omega) + T)
        trial = omega - step
        # never let Newton leave the bracket
        omega = np.where((trial > lo0) & (trial < hi0), trial, omega)
    return float(omega) if omega.ndim == 0 else omega


def default_truncation(alpha, T, rel_tail=1e-4):
    """``K`` with ``tail_mass / (P T) < rel_tail`` for the exponential kernel.

    Since ``omega_k > (k-1) pi / T``, ``lambda_k < 2 alpha P T^2 / (pi (k-1))^2``
    and the tail after ``K`` terms is below ``2 alpha P T^2 / (pi^2 (K-1))``.
    """
    return math.ceil(2.0 * alpha * T / (np.pi**2 * rel_tail)) + 1


def normalization(omega, alpha, T):
    """``Z = sqrt(integral_0^T (omega cos(omega t) + alpha sin(omega t))^2 dt)``."""
    omega = np.asarray(omega, dtype=float)
    z2 = (
        0.5 * (omega**2 + alpha**2) * T
        + (omega**2 - alpha**2) * np.sin(2.0 * omega * T) / (4.0 * omega)
        + alpha * np.sin(omega * T) ** 2
    )
    return np.sqrt(z2)


def exponential_spectrum(P, alpha, T, K=None):
    """Closed-form Mercer spectrum of ``P exp(-alpha |tau|)`` on ``[0, T]``.

    ``K`` defaults to :func:`default_truncation`. Raises
    :class:`FiniteMIError` if the computed eigenvalues are not strictly
    decreasing or exceed the trace ``P T``; either would mean the root
    indexing is wrong.
    """
    kernel = ExponentialKernel(P, alpha)
    T = float(T)
    if not (T > 0 and np.isfinite(T)):
        raise DomainError(f"T must be > 0, got {T!r}")
    if K is None:
        K = default_truncation(kernel.alpha, T)
    K = int(K)
    if K < 0:
        raise DomainError(f"K must be >= 0, got {K}")

    k = np.arange(1, K + 1)
    omegas = solve_omega(kernel.alpha, T, k) if K else np.empty(0)
    omegas = np.atleast_1d(omegas)
    lambdas = 2.0 * kernel.alpha * kernel.P / (kernel.alpha**2 + omegas**2)
    Z = normalization(omegas, kernel.alpha, T)

    if kernel.P > 0 and K > 1 and np.any(np.diff(lambdas) >= 0):
        raise FiniteMIError("eigenvalues are not strictly decreasing; root indexing failed")
    spectrum = MercerSpectrum(kernel, T, lambdas, "analytic-exponential", omegas, Z)
    if spectrum.tail_mass < -1e-12 * max(spectrum.energy, 1.0):
        raise FiniteMIError("partial eigenvalue sum exceeds the operator trace P*T")
    spectrum.diagnostics["residual_max"] = (
        float(np.max(np.abs(omega_residual(omegas, kernel.alpha, T, k)))) if K else 0.0
    )
    return spectrum


def trapezoid_rule(T, n):
    """Nodes and weights of the composite trapezoid rule on ``[0, T]``."""
    t = np.linspace(0.0, T, n)
    w = np.full(n, T / (n - 1))
    w[[0, -1]] *= 0.5
    return t, w


def nystrom_spectrum(kernel: KernelSpec, T, n):
    """Nystrom approximation to the Mercer eigenvalues on ``n`` trapezoid nodes.

    Eigenvalues of the symmetric matrix ``W^1/2 K W^1/2``, in decreasing
    order. Negative values (roundoff on a PSD kernel) are clamped to zero;
    the count is kept in ``diagnostics["n_clamped"]``.
    """
    n = int(n)
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    T = float(T)
    t, w = trapezoid_rule(T, n)
    sw = np.sqrt(w)
    B = sw[:, None] * np.asarray(kernel(t[:, None], t[None, :]), dtype=float) * sw[None, :]
    try:
        ev = la.eigh(B, eigvals_only=True)
    except (la.LinAlgError, ValueError) as exc:
        raise NumericalError(f"symmetric eigensolver failed for n={n}, T={T}: {exc}") from exc
    ev = ev[::-1]
    neg = ev < 0
    diag = {
        "n": n,
        "n_clamped": int(np.count_nonzero(neg)),
        "min_raw": float(ev[-1]),
        "raw_trace": float(np.sum(ev)),
    }
    return MercerSpectrum(kernel, T, np.where(neg, 0.0, ev), "nystrom", diagnostics=diag)


def trace(spectrum: MercerSpectrum):
    """Partial eigenvalue sum compared with the full trace ``R(0) T``."""
    partial = math.fsum(spectrum.lambdas)
    PT = spectrum.energy
    return TraceReport(partial, PT, PT - partial)


def trace_of_square(P, alpha, T):
    """``sum_k lambda_k^2`` for the exponential kernel, in closed form.

    This is the integral over the diagonal of the iterated kernel,
    ``(P^2 / alpha) (T - (1 - exp(-2 alpha T)) / (2 alpha))``.
    """
    if not (P >= 0 and alpha > 0 and T >= 0):
        raise DomainError("need P >= 0, alpha > 0, T >= 0")
    return P * P / alpha * (T + math.expm1(-2.0 * alpha * T) / (2.0 * alpha))


def eigenfunction_values(spectrum: MercerSpectrum, k, t):
    """``phi_k(t)`` for the analytic exponential spectrum (``k`` is 1-based)."""
    if spectrum.mode != "analytic-exponential":
        raise UnsupportedOperationError("eigenfunctions are only available for the analytic spectrum")
    k = int(k)
    if not 1 <= k <= spectrum.K:
        raise DomainError(f"k must lie in [1, {spectrum.K}], got {k}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or np.any(t > spectrum.T):
        raise DomainError(f"t must lie in [0, {spectrum.T}]")
    w = spectrum.omegas[k - 1]
    a = spectrum.alpha
    out = (w * np.cos(w * t) + a * np.sin(w * t)) / spectrum.Z[k - 1]
    return float(out) if out.ndim == 0 else out


def _eigenfunction_matrix(spectrum, t, K):
    w = spectrum.omegas[:K]
    a = spectrum.alpha
    wt = np.multiply.outer(t, w)
    return (w * np.cos(wt) + a * np.sin(wt)) / spectrum.Z[:K]


def reconstruct_kernel(spectrum: MercerSpectrum, t1, t2, K=None):
    """Truncated Mercer sum ``sum_{k<=K} lambda_k phi_k(t1) phi_k(t2)`` on a grid.

    Returns the ``len(t1) x len(t2)`` matrix.
    """
    if spectrum.mode != "analytic-exponential":
        raise UnsupportedOperationError("reconstruction needs analytic eigenfunctions")
    K = spectrum.K if K is None else int(K)
    t1 = np.atleast_1d(np.asarray(t1, dtype=float))
    t2 = np.atleast_1d(np.asarray(t2, dtype=float))
    A = _eigenfunction_matrix(spectrum, t1, K)
    B = _eigenfunction_matrix(spectrum, t2, K)
    return (A * spectrum.lambdas[:K]) @ B.T
