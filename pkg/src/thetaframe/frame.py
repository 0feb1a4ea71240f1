"""Analysis and synthesis on the double-density lattice.

Coefficients are ``f_{m,n} = <f, a_{m,n}>`` for ``|m| <= M``, ``|n| <= N``.
The four parity sublattices each carry an orthonormal basis, so the full
lattice is a tight frame with bound 2: ``f = 1/2 sum f_{m,n} a_{m,n}`` and
``||f||^2 = 1/2 sum |f_{m,n}|^2`` in the limit of a large rectangle.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .grid import LATTICE_STEP, QuadratureSpec, SampledSignal, default_grid
from .signals import SignalSpec, sample
from .waveform import LATTICE, LatticeConstants, Waveform, default_waveform

__all__ = [
    "CoeffGrid",
    "GridTooSmallError",
    "FlatCorrelationError",
    "atom_matrix",
    "analyze",
    "synthesize",
    "energy",
    "ambiguity",
    "snap_to_grid",
    "estimate_displacement",
    "reconstruction_error",
    "sublattice_energies",
    "read_coeffs_json",
    "write_coeffs_json",
]

SQRT_PI = LATTICE_STEP


class GridTooSmallError(ValueError):
    """The analysis grid does not hold the outermost atoms."""


class FlatCorrelationError(ValueError):
    """No displaced atom correlates well with the input."""


@dataclass(frozen=True, eq=False)
class CoeffGrid:
    """Complex amplitudes over ``|m| <= M``, ``|n| <= N``.

    ``values[m + M, n + N]`` holds ``f_{m,n}``; ``grid[m, n]`` does the
    offset for you.
    """

    M: int
    N: int
    values: np.ndarray
    lattice: LatticeConstants = field(default=LATTICE)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (2 * self.M + 1, 2 * self.N + 1):
            raise ValueError(f"values must have shape {(2 * self.M + 1, 2 * self.N + 1)}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("coefficients must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, M: int, N: int) -> "CoeffGrid":
        return cls(M, N, np.zeros((2 * M + 1, 2 * N + 1), dtype=complex))

    def __getitem__(self, mn):
        m, n = mn
        if abs(m) > self.M or abs(n) > self.N:
            raise IndexError(f"site {(m, n)} outside |m|<={self.M}, |n|<={self.N}")
        return complex(self.values[m + self.M, n + self.N])

    @property
    def m_range(self) -> np.ndarray:
        return np.arange(-self.M, self.M + 1)

    @property
    def n_range(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    def energy(self) -> float:
        return energy(self)

    def sites(self):
        """Yield ``(m, n, value)`` in row-major order (m outer, n inner)."""
        for i, m in enumerate(self.m_range):
            for j, n in enumerate(self.n_range):
                yield int(m), int(n), complex(self.values[i, j])


def atom_matrix(t, M: int, N: int, w: Waveform) -> np.ndarray:
    """All atoms ``a_{m,n}(t)`` as an array of shape ``(2M+1, 2N+1, len(t))``."""
    t = np.asarray(t, dtype=float)
    m = np.arange(-M, M + 1)
    n = np.arange(-N, N + 1)
    env = w(t[None, :] + m[:, None] * SQRT_PI)
    phase = np.exp(1j * SQRT_PI * n[None, :, None]
                   * (t[None, None, :] + m[:, None, None] * SQRT_PI / 2))
    return phase * env[:, None, :]


def _check_coverage(f: SampledSignal, M: int, N: int, w: Waveform):
    reach = M * SQRT_PI + w.tail_radius
    t_lo, t_hi = f.t0, f.t0 + (len(f) - 1) * f.dt
    if t_lo > -reach + 1e-9 or t_hi < reach - 1e-9:
        raise GridTooSmallError(
            f"grid [{t_lo:.6g}, {t_hi:.6g}] does not cover atoms out to |m|={M}: "
            f"need [-{reach:.6g}, {reach:.6g}]")
    # a(t) is self-dual, so its spectrum has the same tail radius as in time
    if N * SQRT_PI + w.tail_radius > math.pi / f.dt:
        raise GridTooSmallError(f"grid step {f.dt:.6g} too coarse for modulations up to |n|={N}")


def analyze(f: SampledSignal, M: int = 8, N: int = 8, w: Waveform | None = None) -> CoeffGrid:
    """Lattice coefficients ``f_{m,n} = dt * sum_k f(t_k) conj(a_{m,n}(t_k))``.

    Raises
    ------
    GridTooSmallError
        If the atoms at ``|m| = M`` have more than 1e-12 of their energy off
        the grid, or ``dt`` cannot resolve modulation ``N*sqrt(pi)``.
    """
    w = w or default_waveform()
    _check_coverage(f, M, N, w)
    A = atom_matrix(f.t, M, N, w)
    values = f.dt * (A.conj() @ f.samples)
    return CoeffGrid(M, N, values)


def synthesize(g: CoeffGrid, quad: QuadratureSpec | None = None,
               w: Waveform | None = None) -> SampledSignal:
    """Truncated reconstruction ``1/2 sum_{m,n} f_{m,n} a_{m,n}(t)``."""
    w = w or default_waveform()
    quad = quad or default_grid(max(g.M, g.N))
    A = atom_matrix(quad.t, g.M, g.N, w)
    out = 0.5 * np.tensordot(g.values, A, axes=([0, 1], [0, 1]))
    return SampledSignal.on(quad, out)


def energy(g: CoeffGrid) -> float:
    """``1/2 sum |f_{m,n}|^2``."""
    return 0.5 * float(np.sum(np.abs(g.values) ** 2))


def sublattice_energies(g: CoeffGrid) -> dict[tuple[int, int], float]:
    """Half the squared coefficient mass on each parity class ``(m%2, n%2)``."""
    out = {}
    for pm in (0, 1):
        for pn in (0, 1):
            sel = g.values[(g.m_range % 2 == pm)][:, (g.n_range % 2 == pn)]
            out[(pm, pn)] = 0.5 * float(np.sum(np.abs(sel) ** 2))
    return out


def snap_to_grid(xi: float, dt: float) -> float:
    return round(xi / dt) * dt


def ambiguity(xi: float, eta: float, M: int = 8, N: int = 8, w: Waveform | None = None,
              quad: QuadratureSpec | None = None, snap: bool = True) -> tuple[CoeffGrid, float]:
    """Coefficients ``C_{m,n}(xi, eta)`` of the displaced waveform.

    The displaced waveform ``exp(i eta (t + xi/2)) a(t + xi)`` is evaluated
    directly from the series and then analyzed. With ``snap=True`` the time
    shift is first rounded to the grid.

    Returns
    -------
    grid : CoeffGrid
    xi_used : float
        The time shift actually applied.
    """
    w = w or default_waveform()
    quad = quad or default_grid(max(M, N))
    if snap:
        xi = snap_to_grid(xi, quad.dt)
    f = sample(SignalSpec("displaced", (xi, eta)), quad, w)
    return analyze(f, M, N, w), xi


def reconstruction_error(f: SampledSignal, M: int = 8, N: int = 8,
                         w: Waveform | None = None) -> float:
    """``||f - synthesize(analyze(f, M, N))||_2`` on the grid of ``f``."""
    w = w or default_waveform()
    g = analyze(f, M, N, w)
    return f.distance(synthesize(g, f.grid, w))


class _Correlator:
    # normalized |<g, C(xi, eta)>| with the atom matrix built once
    def __init__(self, g: CoeffGrid, w: Waveform):
        self.g = g
        self.w = w
        self.quad = default_grid(max(g.M, g.N))
        self.t = self.quad.t
        self.A_conj = atom_matrix(self.t, g.M, g.N, w).conj().reshape(-1, self.t.size)
        self.gv = g.values.ravel()
        self.g_energy = energy(g)

    def coeffs(self, xi, eta):
        d = np.exp(1j * eta * (self.t + xi / 2)) * self.w(self.t + xi)
        return self.quad.dt * (self.A_conj @ d)

    def __call__(self, xi, eta):
        c = self.coeffs(xi, eta)
        corr = 0.5 * np.vdot(c, self.gv)
        c_energy = 0.5 * float(np.vdot(c, c).real)
        return abs(corr) / math.sqrt(self.g_energy * c_energy)


def estimate_displacement(g: CoeffGrid, w: Waveform | None = None,
                          resolution: float = 1e-4, min_score: float = 0.5):
    """Find the displacement ``(xi, eta)`` whose waveform best matches ``g``.

    Maximizes the normalized correlation ``|1/2 sum g_{m,n} conj C_{m,n}|``
    over a coarse ``sqrt(pi)/8`` grid one lattice cell around the
    coefficient centroid, then refines each axis in turn.

    Returns
    -------
    xi, eta, score : float

    Raises
    ------
    FlatCorrelationError
        If the best score is below ``min_score``.
    """
    w = w or default_waveform()
    if energy(g) == 0:
        raise FlatCorrelationError("zero coefficient grid")
    corr = _Correlator(g, w)

    p = np.abs(g.values) ** 2
    p = p / p.sum()
    # the waveform a(t + xi) sits at t = -xi, i.e. at site m = xi/sqrt(pi)
    cm = float(np.sum(p.sum(axis=1) * g.m_range)) * SQRT_PI
    cn = float(np.sum(p.sum(axis=0) * g.n_range)) * SQRT_PI
    step = SQRT_PI / 8
    offs = np.arange(-8, 9) * step
    scores = np.array([[corr(cm + dx, cn + dy) for dy in offs] for dx in offs])
    i, j = np.unravel_index(np.argmax(scores), scores.shape)
    xi, eta, best = cm + offs[i], cn + offs[j], scores[i, j]

    for _ in range(20):
        r1 = minimize_scalar(lambda x: -corr(x, eta), bounds=(xi - step, xi + step),
                             method="bounded", options={"xatol": resolution / 4})
        r2 = minimize_scalar(lambda y: -corr(r1.x, y), bounds=(eta - step, eta + step),
                             method="bounded", options={"xatol": resolution / 4})
        moved = max(abs(r1.x - xi), abs(r2.x - eta))
        xi, eta, best = float(r1.x), float(r2.x), -float(r2.fun)
        if moved < resolution / 4:
            break
    if best < min_score:
        raise FlatCorrelationError(f"best correlation {best:.4f} < {min_score}: input is not atom-like")
    return xi, eta, best


# -- JSON interchange -----------------------------------------------------

def write_coeffs_json(path, g: CoeffGrid, metadata: dict | None = None) -> None:
    doc = {
        "M": g.M,
        "N": g.N,
        "lattice_step": LATTICE_STEP,
        "coefficients": [{"m": m, "n": n, "re": v.real, "im": v.imag} for m, n, v in g.sites()],
    }
    if metadata:
        doc["metadata"] = metadata
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_coeffs_json(path) -> CoeffGrid:
    """Parse the coefficient JSON format; every site of the rectangle must be present."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from None
    try:
        M, N, rows = int(doc["M"]), int(doc["N"]), doc["coefficients"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: missing or bad field {exc}") from None
    if M < 0 or N < 0:
        raise ValueError(f"{path}: M and N must be non-negative")
    step = doc.get("lattice_step", LATTICE_STEP)
    if abs(float(step) - LATTICE_STEP) > 1e-12:
        raise ValueError(f"{path}: lattice_step {step} is not sqrt(pi)")
    expected = (2 * M + 1) * (2 * N + 1)
    if len(rows) != expected:
        raise ValueError(f"{path}: expected {expected} coefficient rows for M={M}, N={N}, got {len(rows)}")
    values = np.zeros((2 * M + 1, 2 * N + 1), dtype=complex)
    seen = np.zeros(values.shape, dtype=bool)
    for r in rows:
        try:
            m, n = int(r["m"]), int(r["n"])
            v = complex(float(r["re"]), float(r["im"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}: bad coefficient row {r!r} ({exc})") from None
        if abs(m) > M or abs(n) > N or seen[m + M, n + N]:
            raise ValueError(f"{path}: site {(m, n)} out of range or repeated")
        seen[m + M, n + N] = True
        values[m + M, n + N] = v
    return CoeffGrid(M, N, values)
