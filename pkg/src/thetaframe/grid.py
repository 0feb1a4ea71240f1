"""Uniform time grids and the sampled-signal carrier."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["LATTICE_STEP", "QuadratureSpec", "SampledSignal", "default_grid"]

#: Lattice step in time and in frequency, sqrt(pi).
LATTICE_STEP = math.sqrt(math.pi)

DEFAULT_SUBDIVISION = 64
DEFAULT_MARGIN = 10


@dataclass(frozen=True)
class QuadratureSpec:
    """Grid ``t_k = t_min + k*dt`` covering ``[t_min, t_max]``.

    ``dt`` must be ``sqrt(pi)/K`` for an integer ``K >= 32`` so that lattice
    translations are whole-sample shifts.
    """

    t_min: float
    t_max: float
    dt: float

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if not self.t_max > self.t_min:
            raise ValueError("t_max must exceed t_min")
        k = LATTICE_STEP / self.dt
        if abs(k - round(k)) > 1e-9 * k or round(k) < 32:
            raise ValueError(f"dt must equal sqrt(pi)/K with integer K >= 32, got dt={self.dt!r}")

    @property
    def subdivision(self) -> int:
        return int(round(LATTICE_STEP / self.dt))

    @property
    def size(self) -> int:
        return int(math.floor((self.t_max - self.t_min) / self.dt + 1e-9)) + 1

    @property
    def t(self) -> np.ndarray:
        return self.t_min + np.arange(self.size) * self.dt

    @classmethod
    def symmetric(cls, half_cells: float, subdivision: int = DEFAULT_SUBDIVISION) -> "QuadratureSpec":
        """Grid over ``[-L, L]`` with ``L = half_cells*sqrt(pi)`` that contains t = 0."""
        dt = LATTICE_STEP / subdivision
        k = int(round(half_cells * subdivision))
        return cls(-k * dt, k * dt, dt)


def default_grid(M: int = 8) -> QuadratureSpec:
    """Default analysis grid for lattice truncation ``|m| <= M``."""
    return QuadratureSpec.symmetric(M + DEFAULT_MARGIN)


@dataclass(frozen=True, eq=False)
class SampledSignal:
    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("a sampled signal needs at least two samples")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def on(cls, quad: QuadratureSpec, samples) -> "SampledSignal":
        return cls(quad.t_min, quad.dt, samples)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def t(self) -> np.ndarray:
        return self.t0 + np.arange(self.samples.size) * self.dt

    @property
    def grid(self) -> QuadratureSpec:
        return QuadratureSpec(self.t0, self.t0 + (len(self) - 1) * self.dt, self.dt)

    def energy(self) -> float:
        return float(self.dt * np.sum(np.abs(self.samples) ** 2))

    def norm(self) -> float:
        return math.sqrt(self.energy())

    def inner(self, other: "SampledSignal") -> complex:
        """``<self, other>``, linear in the first argument."""
        self._check_same_grid(other)
        return complex(self.dt * np.vdot(other.samples, self.samples))

    def distance(self, other: "SampledSignal") -> float:
        self._check_same_grid(other)
        return float(math.sqrt(self.dt * np.sum(np.abs(self.samples - other.samples) ** 2)))

    def with_samples(self, samples) -> "SampledSignal":
        return SampledSignal(self.t0, self.dt, samples)

    def normalized(self) -> "SampledSignal":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize a zero signal")
        return self.with_samples(self.samples / n)

    def _check_same_grid(self, other):
        if (len(self) != len(other) or abs(self.dt - other.dt) > 1e-12 * self.dt
                or abs(self.t0 - other.t0) > 1e-9 * self.dt):
            raise ValueError("signals live on different grids")

    def __add__(self, other):
        self._check_same_grid(other)
        return self.with_samples(self.samples + other.samples)

    def __sub__(self, other):
        self._check_same_grid(other)
        return self.with_samples(self.samples - other.samples)

    def __mul__(self, c):
        return self.with_samples(self.samples * c)

    __rmul__ = __mul__
