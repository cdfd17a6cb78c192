"""
Stationary autocorrelation kernels and their power spectral densities.

Every kernel is an immutable descriptor of ``R(t1, t2) = R(t1 - t2)``.
Spectral densities are two-sided, so ``integral S(f) df`` over the whole
real line equals ``R(0)``.

>>> from finitemi.kernels import ExponentialKernel, eval_kernel, eval_psd
>>> k = ExponentialKernel(P=1.0, alpha=1.0)
>>> round(float(eval_kernel(k, 1.0, 0.0)), 7)
0.3678794
>>> float(eval_psd(k, 0.0))
2.0
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, UnsupportedOperationError

__all__ = [
    "KernelSpec",
    "SincKernel",
    "ExponentialKernel",
    "TabulatedKernel",
    "AWGN",
    "eval_kernel",
    "eval_psd",
    "sinc",
]


def sinc(x):
    """Normalized sinc, ``sin(pi x) / (pi x)``."""
    return np.sinc(x)


def _check_finite(name, value, *, strict):
    value = float(value)
    if not np.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    if strict and value <= 0:
        raise DomainError(f"{name} must be > 0, got {value!r}")
    if not strict and value < 0:
        raise DomainError(f"{name} must be >= 0, got {value!r}")
    return value


class KernelSpec:
    """Base class for stationary autocorrelation kernels."""

    kind: str = "abstract"

    @property
    def power(self) -> float:
        """Power at zero lag, ``R(0)``."""
        return float(self.lag(0.0))

    def lag(self, tau):
        raise NotImplementedError

    def psd(self, f):
        raise UnsupportedOperationError(f"{self.kind} kernel has no closed-form PSD")

    def __call__(self, t1, t2):
        # |t1 - t2| is bitwise symmetric in IEEE arithmetic
        return self.lag(np.abs(np.subtract(t1, t2)))


@dataclass(frozen=True)
class SincKernel(KernelSpec):
    """Bandlimited kernel ``R(tau) = P sinc(2 W tau)`` with flat PSD on ``[-W, W]``."""

    P: float
    W: float
    kind = "sinc"

    def __post_init__(self):
        object.__setattr__(self, "P", _check_finite("P", self.P, strict=False))
        object.__setattr__(self, "W", _check_finite("W", self.W, strict=True))

    def lag(self, tau):
        return self.P * np.sinc(2.0 * self.W * np.asarray(tau, dtype=float))

    def psd(self, f):
        f = np.asarray(f, dtype=float)
        return np.where(np.abs(f) <= self.W, self.P / (2.0 * self.W), 0.0)

    @property
    def bandwidth(self):
        return self.W


@dataclass(frozen=True)
class ExponentialKernel(KernelSpec):
    """Ornstein-Uhlenbeck kernel ``R(tau) = P exp(-alpha |tau|)``."""

    P: float
    alpha: float
    kind = "exponential"

    def __post_init__(self):
        object.__setattr__(self, "P", _check_finite("P", self.P, strict=False))
        object.__setattr__(self, "alpha", _check_finite("alpha", self.alpha, strict=True))

    def lag(self, tau):
        return self.P * np.exp(-self.alpha * np.abs(np.asarray(tau, dtype=float)))

    def psd(self, f):
        f = np.asarray(f, dtype=float)
        return 2.0 * self.P * self.alpha / (self.alpha**2 + (2.0 * np.pi * f) ** 2)

    @property
    def bandwidth(self):
        return np.inf


@dataclass(frozen=True, eq=False)
class TabulatedKernel(KernelSpec):
    """Kernel given by samples ``(tau_i, R(tau_i))`` with ``tau_0 = 0``.

    Values between samples are monotone-cubic (PCHIP) in ``|tau|``, so the
    interpolant never overshoots the tabulated extremes. Lags beyond the
    last tabulated ``tau`` raise :class:`DomainError`.
    """

    tau: np.ndarray
    values: np.ndarray
    kind = "tabulated"
    _interp: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float).ravel()
        values = np.asarray(self.values, dtype=float).ravel()
        if tau.shape != values.shape or tau.size < 2:
            raise DomainError("tabulated kernel needs at least two (tau, R) pairs of equal length")
        if not (np.all(np.isfinite(tau)) and np.all(np.isfinite(values))):
            raise DomainError("tabulated kernel entries must be finite")
        if tau[0] != 0.0 or np.any(np.diff(tau) <= 0):
            raise DomainError("tabulated lags must start at 0 and be strictly increasing")
        if values[0] < 0 or np.any(np.abs(values) > values[0]):
            raise DomainError("tabulated values must satisfy |R(tau)| <= R(0)")
        tau.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_interp", PchipInterpolator(tau, values, extrapolate=False))

    @property
    def max_lag(self):
        return float(self.tau[-1])

    def lag(self, tau):
        tau = np.abs(np.asarray(tau, dtype=float))
        if np.any(tau > self.tau[-1]):
            raise DomainError(
                f"lag {float(np.max(tau))!r} outside tabulated range [0, {self.max_lag!r}]"
            )
        return self._interp(tau)

    @property
    def bandwidth(self):
        return np.inf


@dataclass(frozen=True)
class AWGN:
    """White noise with flat two-sided PSD ``n0 / 2``.

    It has no pointwise samples; see :func:`finitemi.grid_mi.build_covariance`
    for the discretization used on uniform grids.
    """

    n0: float
    kind = "awgn"

    def __post_init__(self):
        object.__setattr__(self, "n0", _check_finite("n0", self.n0, strict=True))

    def psd(self, f):
        return np.full_like(np.asarray(f, dtype=float), 0.5 * self.n0)


def eval_kernel(spec: KernelSpec, t1, t2):
    """Evaluate ``R(t1 - t2)``; broadcasts over array arguments."""
    if isinstance(spec, AWGN):
        raise UnsupportedOperationError("white noise has no pointwise autocorrelation")
    out = spec(t1, t2)
    return out[()] if isinstance(out, np.ndarray) and out.ndim == 0 else out


def eval_psd(spec, f):
    """Two-sided power spectral density of a kernel or noise descriptor at ``f`` Hz."""
    out = spec.psd(f)
    return out[()] if isinstance(out, np.ndarray) and out.ndim == 0 else out
