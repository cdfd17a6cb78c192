"""Finite-window mutual information of Gaussian process channels.

Submodules: :mod:`~finitemi.kernels` (autocorrelations and PSDs),
:mod:`~finitemi.grid_mi` (log-determinant information on sampling grids),
:mod:`~finitemi.mercer` (eigen-spectra on a window),
:mod:`~finitemi.capacity` (series information, average rate, exceedance).
"""

from .capacity import (
    ExceedAverageReport,
    avg_capacity_closed,
    avg_capacity_quadrature,
    delta_threshold,
    exceed_average_analysis,
    finite_time_mi,
    finite_time_mi_auto,
    jensen_chain_check,
)
from .errors import (
    ConfigError,
    DomainError,
    FiniteMIError,
    NumericalError,
    NumericalSingularityError,
    QuadratureAccuracyError,
    UnsupportedOperationError,
)
from .grid_mi import (
    MIReport,
    SamplingGrid,
    build_covariance,
    discrete_mi,
    dyadic_grid,
    mi_convergence_sweep,
    uniform_grid,
)
from .kernels import AWGN, ExponentialKernel, SincKernel, TabulatedKernel, eval_kernel, eval_psd
from .mercer import (
    MercerSpectrum,
    eigenfunction_values,
    exponential_spectrum,
    nystrom_spectrum,
    solve_omega,
    trace,
    trace_of_square,
)

__version__ = "0.1.0"

__all__ = [
    "ExceedAverageReport",
    "avg_capacity_closed",
    "avg_capacity_quadrature",
    "delta_threshold",
    "exceed_average_analysis",
    "finite_time_mi",
    "finite_time_mi_auto",
    "jensen_chain_check",
    "ConfigError",
    "DomainError",
    "FiniteMIError",
    "NumericalError",
    "NumericalSingularityError",
    "QuadratureAccuracyError",
    "UnsupportedOperationError",
    "MIReport",
    "SamplingGrid",
    "build_covariance",
    "discrete_mi",
    "dyadic_grid",
    "mi_convergence_sweep",
    "uniform_grid",
    "AWGN",
    "ExponentialKernel",
    "SincKernel",
    "TabulatedKernel",
    "eval_kernel",
    "eval_psd",
    "MercerSpectrum",
    "eigenfunction_values",
    "exponential_spectrum",
    "nystrom_spectrum",
    "solve_omega",
    "trace",
    "trace_of_square",
]
