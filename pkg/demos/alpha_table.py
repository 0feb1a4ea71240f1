"""
Structure constants of the self-dual waveform
=============================================

The waveform is built from the cosine coefficients of ``1/sqrt(theta4)``.
Normalized as ``alpha_n = e^{pi n} c_n / (2 c_0)`` they decay slowly, but
each enters the waveform multiplied by ``e^{-pi n}``, so a handful of terms
already reaches double precision.
"""
import math

import numpy as np

from thetaframe import compute_alpha
from thetaframe.theta import PUBLISHED_ALPHA

table = compute_alpha(12)
print(" n   alpha_n        published    alpha_n e^{-pi n}")
for n, a in enumerate(table.values, 1):
    ref = f"{PUBLISHED_ALPHA[n - 1]:.6f}" if n <= len(PUBLISHED_ALPHA) else "-"
    print(f"{n:2d}   {a:.9f}   {ref:<11}  {a * math.exp(-math.pi * n):.3e}")

# The series converges from the first term: the weights drop by ~e^{-pi} per step.
w = table.as_array() * np.exp(-np.pi * np.arange(1, 13))
print("\nratio of successive weights:", np.round(w[1:] / w[:-1], 4))
