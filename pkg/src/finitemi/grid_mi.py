"""
Covariance assembly on sampling grids and the Gaussian log-determinant
mutual information

    I(t_1^n) = 1/2 [log det(K_X + K_N) - log det(K_N)]     (nats).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la

from .errors import DomainError, NumericalSingularityError
from .kernels import AWGN, KernelSpec

__all__ = [
    "SamplingGrid",
    "uniform_grid",
    "dyadic_grid",
    "custom_grid",
    "CovarianceMatrix",
    "MIReport",
    "build_covariance",
    "cholesky_logdet",
    "discrete_mi",
    "mi_convergence_sweep",
    "to_bits",
    "JITTER_EPS",
]

JITTER_EPS = 1e-12


def to_bits(nats):
    return nats / math.log(2.0)


@dataclass(frozen=True, eq=False)
class SamplingGrid:
    """Sampling instants ``0 <= t_1 < ... < t_n <= T``.

    ``scheme`` is ``"uniform"``, ``"dyadic"`` or ``"custom"``; only the first
    two carry a constant ``spacing``.
    """

    T: float
    instants: np.ndarray
    scheme: str = "custom"
    spacing: float | None = None

    def __post_init__(self):
        t = np.asarray(self.instants, dtype=float).ravel()
        if not (np.isfinite(self.T) and self.T > 0):
            raise DomainError(f"window length T must be > 0, got {self.T!r}")
        if t.size == 0:
            raise DomainError("a sampling grid needs at least one instant")
        if t[0] < 0 or t[-1] > self.T or np.any(np.diff(t) <= 0):
            raise DomainError("instants must be strictly increasing inside [0, T]")
        t.flags.writeable = False
        object.__setattr__(self, "instants", t)

    @property
    def n(self):
        return self.instants.size

    def __len__(self):
        return self.n


def uniform_grid(T, n):
    """Left-endpoint grid ``t_i = (i - 1) T / n``, ``i = 1..n``."""
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return SamplingGrid(float(T), np.arange(n) * (T / n), "uniform", T / n)


def dyadic_grid(T, level):
    """Uniform left-endpoint grid with ``2**level`` points.

    Level ``L + 1`` contains level ``L`` as a subset.
    """
    level = int(level)
    if level < 0:
        raise DomainError(f"level must be >= 0, got {level}")
    n = 2**level
    return SamplingGrid(float(T), np.arange(n) * (T / n), "dyadic", T / n)


def custom_grid(T, instants):
    return SamplingGrid(float(T), np.asarray(instants, dtype=float), "custom", None)


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    matrix: np.ndarray
    source: str = "signal"

    @property
    def n(self):
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


@dataclass
class MIReport:
    """Mutual information over a window of length ``T``.

    ``value_nats`` is the computed value; for truncated series it excludes
    the tail, which is bounded above by ``diagnostics["tail_bound"]``.
    """

    value_nats: float
    T: float
    method: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def rate_nats_per_s(self):
        return self.value_nats / self.T

    @property
    def value_bits(self):
        return self.value_nats / math.log(2.0)

    @property
    def rate_bits_per_s(self):
        return self.rate_nats_per_s / math.log(2.0)

    @property
    def tail_bound(self):
        return self.diagnostics.get("tail_bound", 0.0)


def build_covariance(kernel, grid: SamplingGrid, source=None):
    """Covariance of a process sampled on ``grid``.

    Entry ``(i, j)`` is ``R(t_i - t_j)``. White noise has no point samples;
    on a grid of spacing ``d`` each sample is treated as the average over
    its cell, giving variance ``n0 / (2 d)`` and ``K_N = n0/(2d) I``.
    """
    if isinstance(kernel, AWGN):
        if grid.spacing is None:
            raise DomainError("white noise needs a uniform grid (constant spacing)")
        var = kernel.n0 / (2.0 * grid.spacing)
        return CovarianceMatrix(var * np.eye(grid.n), source or "noise")
    if not isinstance(kernel, KernelSpec):
        raise TypeError(f"expected a KernelSpec or AWGN, got {type(kernel).__name__}")
    t = grid.instants
    K = kernel(t[:, None], t[None, :])
    return CovarianceMatrix(np.asarray(K, dtype=float), source or "signal")


def cholesky_logdet(A, jitter_eps=JITTER_EPS):
    """``log det A`` via Cholesky, retrying once with diagonal jitter.

    Returns ``(logdet, jitter)`` where ``jitter`` is the absolute shift added
    to the diagonal (0.0 when none was needed).
    """
    A = np.asarray(A, dtype=float)
    try:
        L = la.cholesky(A, lower=True, check_finite=True)
        jitter = 0.0
    except la.LinAlgError:
        n = A.shape[0]
        jitter = jitter_eps * max(np.trace(A) / n, np.finfo(float).tiny)
        try:
            L = la.cholesky(A + jitter * np.eye(n), lower=True)
        except la.LinAlgError as exc:
            raise NumericalSingularityError(
                f"Cholesky failed for a {n}x{n} matrix even with jitter {jitter:.3e}", jitter
            ) from exc
    d = np.diag(L)
    if np.any(d <= 0):
        raise NumericalSingularityError("matrix is singular to working precision", jitter)
    return 2.0 * float(np.sum(np.log(d))), jitter


def discrete_mi(Kx, Kn, T=1.0):
    """Mutual information of ``Y = X + N`` for Gaussian vectors, in nats.

    Each log-determinant comes from its own Cholesky factor; determinants
    are never formed. Tiny negative results from roundoff are clipped to 0.
    """
    Kx = np.asarray(Kx, dtype=float)
    Kn = np.asarray(Kn, dtype=float)
    if Kx.shape != Kn.shape or Kx.ndim != 2 or Kx.shape[0] != Kx.shape[1]:
        raise DomainError(f"shape mismatch: {Kx.shape} vs {Kn.shape}")
    ld_n, jit_n = cholesky_logdet(Kn)
    ld_y, jit_y = cholesky_logdet(Kx + Kn)
    value = 0.5 * (ld_y - ld_n)
    diag = {"n": Kx.shape[0], "jitter_noise": jit_n, "jitter_received": jit_y, "raw": value}
    return MIReport(max(value, 0.0), float(T), "grid-logdet", diag)


def mi_convergence_sweep(signal, noise, T, n_values):
    """``[(n, MIReport), ...]`` on uniform left-endpoint grids of each size."""
    n_values = [int(n) for n in n_values]
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise DomainError("n_values must be strictly increasing")
    out = []
    for n in n_values:
        grid = uniform_grid(T, n)
        Kx = build_covariance(signal, grid, "signal")
        Kn = build_covariance(noise, grid, "noise")
        out.append((n, discrete_mi(Kx, Kn, T)))
    return out
