"""Exponentially localized time-frequency expansions on the double-density lattice.

The base waveform a(t) equals its own Fourier transform.  Its translates and
modulates by multiples of sqrt(pi) split into four sublattices that are each
orthonormal.  Together they form a tight frame with bound 2.
"""
__version__ = "0.1.0"

from .theta import AlphaTable, ThetaConfig, compute_alpha, theta3, theta4  # noqa: E402
from .grid import LATTICE_STEP, QuadratureSpec, SampledSignal, default_grid  # noqa: E402
from .waveform import (  # noqa: E402
    LATTICE, LatticeConstants, Waveform, atom_mn, atom_raw, atom_raw_cosh,
    attenuation_db, build_waveform, default_waveform,
)
from .signals import (  # noqa: E402
    SignalSpec, displace, fourier_transform, hermite_fn, hermite_poly, modulate,
    parse_signal_spec, sample, translate,
)
from .frame import (  # noqa: E402
    CoeffGrid, FlatCorrelationError, GridTooSmallError, ambiguity, analyze, energy,
    estimate_displacement, reconstruction_error, synthesize,
)
from .render import RenderStyle, render_curve, render_grid  # noqa: E402
