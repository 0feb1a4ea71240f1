"""
Attenuation of the waveform
===========================

``20 log10 |a(t)/a(0)|`` against time, with the Gaussian parabola and two
truncated series for comparison.  The waveform falls off linearly in dB
(exponentially in amplitude), not quadratically like the Gaussian.  Its
zeros show up as gaps in the curve.

Writes ``attenuation.svg`` to the directory given on the command line
(default: current directory).
"""
import sys
from pathlib import Path

import numpy as np

from thetaframe import build_waveform, default_waveform, render_curve
from thetaframe.acceptance import slope_fit
from thetaframe.grid import LATTICE_STEP
from thetaframe.waveform import attenuation_db

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
w = default_waveform()
t = np.linspace(0, 10 * LATTICE_STEP, 2001)

curve = list(zip(t, attenuation_db(t, w)))
overlays = {
    "gaussian": list(zip(t, -20 * np.log10(np.e) * t * t / 2)),
    "approx3": list(zip(t, attenuation_db(t, build_waveform(w.alpha, 3)))),
    "approx5": list(zip(t, attenuation_db(t, build_waveform(w.alpha, 5)))),
}
(out / "attenuation.svg").write_text(render_curve(curve, overlays=overlays, y_min=-200))

slope, r_line, r_gauss = slope_fit()
print(f"envelope slope over [4, 8] sqrt(pi): {slope:.2f} dB per unit time")
print(f"RMS residual of a line fit: {r_line:.3f} dB (Gaussian parabola: {r_gauss:.2f} dB)")

# Truncating the series barely matters: the gap shrinks like e^{-pi k}.
for k in (2, 3, 5):
    gap = np.max(np.abs(build_waveform(w.alpha, k)(t) - w(t)))
    print(f"{k} terms: sup |a_k - a| = {gap:.2e}")
