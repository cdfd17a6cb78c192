"""
Autocorrelation kernels and their spectra
=========================================

The two stationary kernels used throughout: a bandlimited sinc and the
Ornstein-Uhlenbeck exponential. Power at zero lag equals the area under
the two-sided PSD.
"""

import numpy as np
from scipy.integrate import quad

from finitemi.kernels import AWGN, ExponentialKernel, SincKernel, eval_kernel, eval_psd

signal = SincKernel(P=1.0, W=5.0)          # R(tau) = sinc(10 tau)
noise = ExponentialKernel(P=1.0, alpha=1.0)  # R(tau) = exp(-|tau|)

tau = np.array([0.0, 0.05, 0.1, 0.5, 1.0])
print("tau      sinc       exp")
for t, a, b in zip(tau, eval_kernel(signal, tau, 0.0), eval_kernel(noise, tau, 0.0)):
    print(f"{t:4.2f}  {a: .6f}  {b: .6f}")

# flat 0.1 on [-5, 5] and 2 / (1 + (2 pi f)^2)
print("S_X(0) =", eval_psd(signal, 0.0), " S_N(0) =", eval_psd(noise, 0.0))
print("white noise n0 = 1 has PSD", eval_psd(AWGN(1.0), 3.0), "at every f")

# Parseval: the PSD integrates to R(0)
area = 2 * quad(lambda f: eval_psd(noise, f), 0, np.inf)[0]
print("integral of S_N =", area)
