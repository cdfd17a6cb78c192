"""
Mercer spectrum of the exponential kernel
=========================================

Each eigenvalue of P exp(-alpha |tau|) on [0, T] comes from one root of
2 arctan(w / alpha) = k pi - w T, bracketed in ((k-1) pi / T, k pi / T).
The eigenvalues sum to the window energy P T, and the Nystrom method on a
trapezoid grid reproduces them.
"""

import math

import numpy as np

from finitemi.kernels import ExponentialKernel, SincKernel
from finitemi.mercer import (
    exponential_spectrum,
    nystrom_spectrum,
    trace,
    trace_of_square,
)

P, alpha, T = 1.0, 1.0, 2.0
s = exponential_spectrum(P, alpha, T, K=4)
print(" k   omega_k    lambda_k   bracket")
for k, (w, lam) in enumerate(zip(s.omegas, s.lambdas), start=1):
    print(f"{k:2d}  {w:8.5f}  {lam:9.6f}   ({(k - 1) * math.pi / T:.4f}, {k * math.pi / T:.4f})")

for K in (10, 100, 1000, 10000):
    tr = trace(exponential_spectrum(P, alpha, T, K))
    print(f"K={K:6d}: sum lambda = {tr.partial_sum:.6f}  (P T = {tr.PT}), tail = {tr.tail_mass:.2e}")

lam = exponential_spectrum(P, alpha, T, 10_000).lambdas
print("sum lambda^2 =", math.fsum(lam**2), " closed form:", trace_of_square(P, alpha, T))

ny = nystrom_spectrum(ExponentialKernel(P, alpha), T, 800).lambdas[:4]
print("Nystrom (n=800):", np.round(ny, 6))
print("analytic       :", np.round(s.lambdas, 6))

# A bandlimited kernel has about 2WT significant eigenvalues.
sinc = nystrom_spectrum(SincKernel(1.0, 5.0), 1.0, 600).lambdas
print("sinc, W=5, T=1, lambda_k / lambda_1:", np.array2string(sinc[:14] / sinc[0], precision=3))
