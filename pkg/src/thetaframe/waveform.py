"""The self-dual base waveform a(t) and its lattice atoms a_{m,n}(t)."""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .grid import LATTICE_STEP, QuadratureSpec
from .theta import AlphaTable, compute_alpha, theta3

__all__ = [
    "LatticeConstants",
    "LATTICE",
    "Waveform",
    "atom_raw",
    "atom_raw_cosh",
    "build_waveform",
    "default_waveform",
    "atom_mn",
    "attenuation_db",
]

SQRT_PI = LATTICE_STEP
# beyond this |t| the cosh form overflows for the default series order
COSH_T_MAX = 20.0
TAIL_ENERGY = 1e-12


@dataclass(frozen=True)
class LatticeConstants:
    a_step: float = SQRT_PI
    b_step: float = SQRT_PI

    def __post_init__(self):
        if abs(self.a_step * self.b_step - math.pi) > 1e-12:
            raise ValueError("lattice steps must satisfy a*b = pi")


LATTICE = LatticeConstants()


def _check_terms(alpha: AlphaTable, n_terms: int):
    if n_terms < 0 or n_terms > alpha.count:
        raise ValueError(f"n_terms={n_terms} outside the alpha table (count {alpha.count})")


def atom_raw(t, alpha: AlphaTable, n_terms: int = 8):
    """Unnormalized waveform as a sum of Gaussian bumps over sqrt(theta3)."""
    _check_terms(alpha, n_terms)
    t = np.asarray(t, dtype=float)
    num = np.exp(-t * t / 2)
    for n in range(1, n_terms + 1):
        c = (-1) ** n * alpha[n] * math.exp(-math.pi * n)
        shift = 2 * n * SQRT_PI
        num = num + c * (np.exp(-(t - shift) ** 2 / 2) + np.exp(-(t + shift) ** 2 / 2))
    return num / np.sqrt(theta3(t * SQRT_PI, alpha.config))


def atom_raw_cosh(t, alpha: AlphaTable, n_terms: int = 8):
    """Same function as :func:`atom_raw`, written as a cosh series.

    Points with ``|t| > COSH_T_MAX`` are delegated to :func:`atom_raw`.
    """
    _check_terms(alpha, n_terms)
    t = np.asarray(t, dtype=float)
    far = np.abs(t) > COSH_T_MAX
    tn = np.where(far, 0.0, t)
    num = np.ones_like(tn)
    for n in range(1, n_terms + 1):
        c = (-1) ** n * alpha[n] * math.exp(-math.pi * n - 2 * math.pi * n * n)
        num = num + 2 * c * np.cosh(2 * n * tn * SQRT_PI)
    out = num / (np.exp(tn * tn / 2) * np.sqrt(theta3(tn * SQRT_PI, alpha.config)))
    if np.any(far):
        out = np.where(far, atom_raw(t, alpha, n_terms), out)
    return out


@dataclass(frozen=True)
class Waveform:
    """Unit-energy base waveform. Call it to evaluate a(t)."""

    alpha: AlphaTable
    n_terms: int
    norm_const: float
    tail_radius: float

    def __call__(self, t):
        return atom_raw(t, self.alpha, self.n_terms) / self.norm_const

    def atom(self, t, m: int, n: int):
        return atom_mn(t, m, n, self)

    def peak(self) -> float:
        return float(self(0.0))


def build_waveform(alpha: AlphaTable, n_terms: int = 8,
                   quad: QuadratureSpec | None = None) -> Waveform:
    """Normalize the truncated series to unit L2 energy.

    The default quadrature grid spans ``|t| <= 2*(n_terms+4)*sqrt(pi)`` with
    step ``sqrt(pi)/64``.  ``tail_radius`` is the smallest radius beyond which
    the one-sided energy of a(t) is below 1e-12; the frame module uses it to
    decide whether an analysis grid is wide enough.
    """
    _check_terms(alpha, n_terms)
    reach = 2 * (n_terms + 4) * SQRT_PI
    if quad is None:
        quad = QuadratureSpec.symmetric(2 * (n_terms + 4))
    elif quad.t_min > -reach + 1e-9 or quad.t_max < reach - 1e-9:
        raise ValueError(f"normalization grid must cover |t| <= {reach:.6g}")
    t = quad.t
    v = atom_raw(t, alpha, n_terms)
    e = float(quad.dt * np.sum(v * v))
    if not (math.isfinite(e) and e > 0):
        raise ValueError(f"waveform energy is not finite and positive: {e!r}")
    norm = math.sqrt(e)

    # one-sided tail energy on t >= 0; a(t) is even
    pos = t >= 0
    dens = (v[pos] / norm) ** 2 * quad.dt
    tail = np.cumsum(dens[::-1])[::-1]
    inside = np.nonzero(tail >= TAIL_ENERGY)[0]
    tail_radius = float(t[pos][inside[-1] + 1]) if inside.size and inside[-1] + 1 < tail.size else float(t[-1])
    return Waveform(alpha=alpha, n_terms=n_terms, norm_const=norm, tail_radius=tail_radius)


@functools.lru_cache(maxsize=8)
def default_waveform(n_terms: int = 8, alpha_count: int = 16) -> Waveform:
    return build_waveform(compute_alpha(alpha_count, 64 * max(alpha_count, 64)), n_terms)


def atom_mn(t, m: int, n: int, w: Waveform):
    """``exp(i n b (t + m a/2)) * a(t + m a)`` with a = b = sqrt(pi)."""
    t = np.asarray(t, dtype=float)
    return np.exp(1j * n * SQRT_PI * (t + m * SQRT_PI / 2)) * w(t + m * SQRT_PI)


def attenuation_db(t, w: Waveform):
    """Power level ``10 log10(a(t)^2 / a(0)^2)`` in dB; exact zeros give -inf."""
    v = np.asarray(w(t), dtype=float)
    with np.errstate(divide="ignore"):
        out = 20 * np.log10(np.abs(v) / abs(w.peak()))
    return float(out) if out.ndim == 0 else out
