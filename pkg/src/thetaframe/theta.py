"""Lemniscatic Jacobi theta functions and the structure constants alpha_n.

Only the nome ``q = exp(-pi)`` is supported.  ``theta3`` is summed directly;
``theta4(x) = theta3(x + pi/2)``.  The constants ``alpha_n`` are the scaled
cosine-Fourier coefficients of ``1/sqrt(theta4)``::

    1/sqrt(theta4(z)) = c_0 * (1 + 2 * sum_n alpha_n exp(-pi n) cos(2 n z))
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NOME",
    "ThetaConfig",
    "AlphaTable",
    "theta3",
    "theta4",
    "compute_alpha",
    "PUBLISHED_ALPHA",
]

NOME = math.exp(-math.pi)

#: The six structure constants quoted to six decimals in the literature.
PUBLISHED_ALPHA = (0.501052, 0.375586, 0.312961, 0.273833, 0.246446, 0.225907)


@dataclass(frozen=True)
class ThetaConfig:
    nome: float = NOME
    series_order: int = 8

    def __post_init__(self):
        if abs(self.nome - NOME) > 4 * np.finfo(float).eps * NOME:
            raise ValueError(f"only the lemniscatic nome exp(-pi) is supported, got {self.nome!r}")
        if int(self.series_order) != self.series_order or self.series_order < 4:
            raise ValueError(f"series_order must be an integer >= 4, got {self.series_order!r}")

    @property
    def weights(self) -> np.ndarray:
        n = np.arange(1, self.series_order + 1)
        return self.nome ** (n * n)


DEFAULT_CONFIG = ThetaConfig()


@dataclass(frozen=True)
class AlphaTable:
    """Structure constants ``alpha_1 .. alpha_K``.

    ``values[0]`` holds ``alpha_1``.  ``c0`` is the mean of ``1/sqrt(theta4)``
    over a period, i.e. the proportionality constant that makes the
    expansion an identity.
    """

    values: tuple[float, ...]
    quad_points: int
    c0: float
    config: ThetaConfig = field(default=DEFAULT_CONFIG)

    @property
    def count(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> float:
        """1-based access: ``table[1]`` is alpha_1."""
        if not 1 <= n <= self.count:
            raise IndexError(f"alpha_{n} not in table of {self.count}")
        return self.values[n - 1]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def inverse_sqrt_theta4(self, z):
        """Rebuild ``1/sqrt(theta4(z))`` from the table."""
        z = np.asarray(z, dtype=float)
        n = np.arange(1, self.count + 1)
        terms = self.as_array() * np.exp(-np.pi * n) * np.cos(2 * np.multiply.outer(z, n))
        return self.c0 * (1 + 2 * terms.sum(axis=-1))


def _theta3(x, config: ThetaConfig):
    # works for real or complex x
    n = np.arange(1, config.series_order + 1)
    return 1 + 2 * np.sum(config.weights * np.cos(2 * np.multiply.outer(x, n)), axis=-1)


def theta3(x, config: ThetaConfig = DEFAULT_CONFIG):
    """Jacobi theta_3(x, q) for the nome q = exp(-pi), real x.

    Parameters
    ----------
    x : float or array_like
    config : ThetaConfig, optional
        Series truncation; the default keeps 8 terms.

    Returns
    -------
    float or ndarray
        ``1 + 2 sum_{n=1}^{order} q^{n^2} cos(2 n x)``.
    """
    x = np.asarray(x, dtype=float)
    out = _theta3(x, config)
    return float(out) if out.ndim == 0 else out


def theta4(x, config: ThetaConfig = DEFAULT_CONFIG):
    """Jacobi theta_4(x) = theta_3(x + pi/2) for q = exp(-pi)."""
    return theta3(np.asarray(x, dtype=float) + np.pi / 2, config)


def compute_alpha(count: int, quad_points: int = 4096,
                  config: ThetaConfig = DEFAULT_CONFIG) -> AlphaTable:
    """Compute ``alpha_1 .. alpha_count`` by periodic trapezoidal quadrature.

    The mean ``c_0`` is taken on the real period ``[0, pi)``.  The harmonics
    ``c_n`` are taken on the same period shifted to ``Im z = -y``, which
    multiplies them by ``exp(2 n y)`` and so cancels most of the
    ``exp(pi n)`` rescaling.  Without the shift the harmonics sink below
    roundoff once ``n`` is around 10.  The nearest branch points of
    ``1/sqrt(theta4)`` are at ``Im z = +-pi/2``, so ``y`` stays a margin
    ``delta`` below that.

    Raises
    ------
    ValueError
        On bad arguments, or if theta4 is not positive on the real nodes.
    """
    count = int(count)
    quad_points = int(quad_points)
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if quad_points < 64 * count:
        raise ValueError(f"quad_points must be >= 64*count = {64 * count}, got {quad_points}")

    x = np.arange(quad_points) * (np.pi / quad_points)
    th = _theta3(x + np.pi / 2, config)
    if not np.all(th > 0):
        raise ValueError("theta4 is not positive on the quadrature nodes; check ThetaConfig")
    c0 = float(np.mean(1 / np.sqrt(th)))

    # amplification exp(2 delta n) <= e^8; quadrature error ~ exp(-2 delta Q)
    delta = min(0.25, 4.0 / count)
    y = np.pi / 2 - delta
    g = 1 / np.sqrt(_theta3(x - 1j * y + np.pi / 2, config))
    n = np.arange(1, count + 1)
    cn = 2 * (np.exp(-2j * np.outer(n, x)) @ g) / quad_points
    if np.max(np.abs(cn.imag)) > 1e-9 * np.max(np.abs(cn)):
        raise ValueError("shifted-contour harmonics are not real; sqrt branch crossed")
    alpha = np.exp((np.pi - 2 * y) * n) * cn.real / (2 * c0)
    return AlphaTable(values=tuple(float(v) for v in alpha), quad_points=quad_points,
                      c0=c0, config=config)
