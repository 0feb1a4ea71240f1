"""Test signals, elementary time-frequency operators and the signal CSV format."""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import QuadratureSpec, SampledSignal, default_grid
from .waveform import Waveform, default_waveform

__all__ = [
    "QuadratureSpec",
    "SampledSignal",
    "SignalSpec",
    "EdgeDecayWarning",
    "hermite_poly",
    "hermite_fn",
    "parse_signal_spec",
    "sample",
    "translate",
    "modulate",
    "displace",
    "fourier_transform",
    "read_signal_csv",
    "write_signal_csv",
]

MAX_HERMITE_ORDER = 60


class EdgeDecayWarning(UserWarning):
    """The signal has not decayed at the grid edges."""


def hermite_poly(l: int, t):
    """Physicists' Hermite polynomial H_l(t) by three-term recurrence."""
    _check_order(l)
    t = np.asarray(t, dtype=float)
    h_prev, h = np.ones_like(t), 2 * t
    if l == 0:
        return h_prev if t.ndim else float(h_prev)
    for k in range(1, l):
        h_prev, h = h, 2 * t * h - 2 * k * h_prev
    return h if t.ndim else float(h)


def hermite_fn(l: int, t):
    """Normalized Hermite function ``(l! 2^l sqrt(pi))^{-1/2} e^{-t^2/2} H_l(t)``.

    The normalization is folded into the recurrence so no factorial is formed.
    """
    _check_order(l)
    t = np.asarray(t, dtype=float)
    u_prev = math.pi ** -0.25 * np.exp(-t * t / 2)
    u = math.sqrt(2.0) * t * u_prev
    if l == 0:
        u = u_prev
    for k in range(1, l):
        u_prev, u = u, math.sqrt(2.0 / (k + 1)) * t * u - math.sqrt(k / (k + 1)) * u_prev
    return u if t.ndim else float(u)


def _check_order(l):
    if int(l) != l or l < 0 or l > MAX_HERMITE_ORDER:
        raise ValueError(f"Hermite order must be an integer in [0, {MAX_HERMITE_ORDER}], got {l!r}")


# -- signal specs -----------------------------------------------------------

_KINDS = ("atom", "gaussian", "monocycle", "hermite", "displaced", "file", "diff")


@dataclass(frozen=True)
class SignalSpec:
    """A named test signal.

    ``params`` is ``(l,)`` for hermite, ``(xi, eta)`` for displaced,
    ``(path,)`` for file and ``(spec_a, spec_b)`` for diff.
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown signal kind {self.kind!r}")
        if self.kind == "hermite":
            _check_order(self.params[0])
        if self.kind == "diff" and not all(isinstance(p, SignalSpec) for p in self.params):
            raise ValueError("diff needs two signal specs")

    def __str__(self):
        if self.kind == "hermite":
            return f"hermite:{self.params[0]}"
        if self.kind == "displaced":
            return f"displaced:{self.params[0]!r},{self.params[1]!r}"
        if self.kind == "file":
            return f"file:{self.params[0]}"
        if self.kind == "diff":
            return f"diff:{self.params[0]},{self.params[1]}"
        return self.kind


def parse_signal_spec(text: str) -> SignalSpec:
    """Parse ``atom``, ``gaussian``, ``monocycle``, ``hermite:L``,
    ``displaced:XI,ETA``, ``diff:A,B`` or ``file:PATH``."""
    text = text.strip()
    kind, _, arg = text.partition(":")
    if kind in ("atom", "gaussian", "monocycle") and not arg:
        return SignalSpec(kind)
    if kind == "hermite":
        try:
            return SignalSpec("hermite", (int(arg),))
        except ValueError:
            raise ValueError(f"bad hermite order in {text!r}") from None
    if kind == "displaced":
        try:
            xi, eta = (float(v) for v in arg.split(","))
        except ValueError:
            raise ValueError(f"expected displaced:XI,ETA, got {text!r}") from None
        return SignalSpec("displaced", (xi, eta))
    if kind == "file" and arg:
        return SignalSpec("file", (arg,))
    if kind == "diff":
        # the split point is the comma where both halves parse
        parts = arg.split(",")
        for i in range(1, len(parts)):
            try:
                a = parse_signal_spec(",".join(parts[:i]))
                b = parse_signal_spec(",".join(parts[i:]))
            except ValueError:
                continue
            return SignalSpec("diff", (a, b))
        raise ValueError(f"cannot split diff operands in {text!r}")
    raise ValueError(f"unknown signal spec {text!r}")


def sample(spec: SignalSpec | str, quad: QuadratureSpec | None = None,
           w: Waveform | None = None) -> SampledSignal:
    """Evaluate a signal spec on a grid.

    Analytic kinds are unit-energy by construction.  ``file`` signals keep
    their own grid and amplitude.  ``diff`` normalizes both operands,
    subtracts, and normalizes the difference.
    """
    if isinstance(spec, str):
        spec = parse_signal_spec(spec)
    quad = quad or default_grid()
    w = w or default_waveform()
    t = quad.t
    kind = spec.kind
    if kind == "atom":
        return SampledSignal.on(quad, w(t))
    if kind == "gaussian":
        return SampledSignal.on(quad, hermite_fn(0, t))
    if kind == "monocycle":
        return SampledSignal.on(quad, hermite_fn(1, t))
    if kind == "hermite":
        return SampledSignal.on(quad, hermite_fn(spec.params[0], t))
    if kind == "displaced":
        xi, eta = spec.params
        return SampledSignal.on(quad, np.exp(1j * eta * (t + xi / 2)) * w(t + xi))
    if kind == "file":
        return read_signal_csv(spec.params[0])
    a = sample(spec.params[0], quad, w).normalized()
    b = sample(spec.params[1], quad, w).normalized()
    return (a - b).normalized()


# -- operators --------------------------------------------------------------

def _steps(s: SampledSignal, shift: float) -> int:
    k = shift / s.dt
    if abs(k - round(k)) > 1e-9 * max(1.0, abs(k)):
        raise ValueError(f"shift {shift!r} is not a whole number of samples (dt={s.dt!r})")
    return int(round(k))


def translate(s: SampledSignal, shift: float) -> SampledSignal:
    """``f(t) -> f(t + shift)`` as an exact index shift, zero-filled."""
    k = _steps(s, shift)
    x = s.samples
    out = np.zeros_like(x)
    if abs(k) >= x.size:
        pass
    elif k >= 0:
        out[: x.size - k] = x[k:]
    else:
        out[-k:] = x[: x.size + k]
    return s.with_samples(out)


def modulate(s: SampledSignal, freq: float) -> SampledSignal:
    """``f(t) -> exp(i freq t) f(t)``."""
    return s.with_samples(np.exp(1j * freq * s.t) * s.samples)


def displace(s: SampledSignal, xi: float, eta: float) -> SampledSignal:
    """``f(t) -> exp(i eta (t + xi/2)) f(t + xi)``."""
    moved = translate(s, xi)
    return moved.with_samples(np.exp(1j * eta * (s.t + xi / 2)) * moved.samples)


def fourier_transform(s: SampledSignal, out_grid: QuadratureSpec | None = None,
                      edge_tol: float = 1e-12) -> SampledSignal:
    """Unitary Fourier transform ``(2 pi)^{-1/2} int f(t) exp(-i w t) dt``.

    Trapezoidal rule on the input grid, evaluated at every point of
    ``out_grid`` (default: the input grid).  Emits :class:`EdgeDecayWarning`
    if the input has not decayed below ``edge_tol`` at both edges.
    """
    out_grid = out_grid or s.grid
    x = s.samples
    if max(abs(x[0]), abs(x[-1])) > edge_tol:
        warnings.warn("signal does not decay at the grid edges; transform is truncated",
                      EdgeDecayWarning, stacklevel=2)
    wts = np.full(x.size, s.dt)
    wts[0] = wts[-1] = s.dt / 2
    fx = x * wts
    t = s.t
    omega = out_grid.t
    out = np.empty(omega.size, dtype=complex)
    chunk = max(1, 2 ** 22 // t.size)
    for i in range(0, omega.size, chunk):
        out[i:i + chunk] = np.exp(-1j * np.outer(omega[i:i + chunk], t)) @ fx
    return SampledSignal.on(out_grid, out / math.sqrt(2 * math.pi))


# -- CSV --------------------------------------------------------------------

def write_signal_csv(path, s: SampledSignal, header: list[str] | None = None) -> None:
    """Write ``t,re,im`` rows; ``header`` lines are written first as ``# ...`` comments."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in header or ():
            fh.write(f"# {line}\n")
        fh.write("t,re,im\n")
        for t, re, im in zip(s.t.tolist(), s.samples.real.tolist(), s.samples.imag.tolist()):
            fh.write(f"{t!r},{re!r},{im!r}\n")


def read_signal_csv(path) -> SampledSignal:
    """Read a ``t,re[,im]`` CSV. Lines starting with ``#`` are ignored.

    Raises
    ------
    FileNotFoundError
    ValueError
        Malformed header or rows, or a non-uniform time column.
    """
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(line for line in fh if not line.lstrip().startswith("#")) if r]
    if not rows:
        raise ValueError(f"{path}: empty signal file")
    head = [h.strip() for h in rows[0]]
    if head not in (["t", "re", "im"], ["t", "re"]):
        raise ValueError(f"{path}: expected header 't,re,im', got {','.join(head)!r}")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[0] < 2 or data.shape[1] != len(head):
        raise ValueError(f"{path}: need at least two rows of {len(head)} columns")
    t = data[:, 0]
    steps = np.diff(t)
    dt = (t[-1] - t[0]) / (t.size - 1)
    if dt <= 0 or np.max(np.abs(steps - dt)) > 1e-9 * dt:
        raise ValueError(f"{path}: time column is not uniformly spaced")
    im = data[:, 2] if data.shape[1] == 3 else 0.0
    return SampledSignal(float(t[0]), float(dt), data[:, 1] + 1j * im)
