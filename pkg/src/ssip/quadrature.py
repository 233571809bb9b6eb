"""Gauss-Legendre rules on composite and graded intervals."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    """Nodes and weights on [-1, 1]."""
    if n < 1:
        raise ValueError("need at least one Gauss point")
    x, w = roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_rule(breaks, n: int):
    """Gauss rule with ``n`` points on each interval between consecutive ``breaks``."""
    breaks = np.asarray(breaks, dtype=float)
    x, w = gauss_legendre(n)
    a, b = breaks[:-1, None], breaks[1:, None]
    half = 0.5 * (b - a)
    return (a + half * (x + 1.0)).ravel(), (half * w).ravel()


def geometric_breaks(a: float, b: float, n_sectors: int, ratio: float = 2.0, toward: str = "b"):
    """Breakpoints on [a, b] whose widths shrink by ``ratio`` toward one end."""
    if n_sectors < 1:
        raise ValueError("need at least one sector")
    widths = ratio ** -np.arange(n_sectors, dtype=float)
    widths[-1] = widths[-2] if n_sectors > 1 else 1.0
    widths /= widths.sum()
    breaks = a + (b - a) * np.concatenate([[0.0], np.cumsum(widths)])
    breaks[-1] = b
    if toward == "a":
        breaks = a + b - breaks[::-1]
    return breaks


def graded_breaks(a: float, b: float, smallest: float, ratio: float = 2.0):
    """Breakpoints from ``a`` growing geometrically until ``b``; first width ``smallest``."""
    breaks = [a]
    w = smallest
    while breaks[-1] + w < b:
        breaks.append(breaks[-1] + w)
        w *= ratio
    if b - breaks[-1] < 0.5 * w / ratio and len(breaks) > 1:
        breaks[-1] = b
    else:
        breaks.append(b)
    return np.asarray(breaks)


@dataclass(frozen=True)
class QuadratureRule:
    """Equal-width integration segments on [-1, 1], each with ``n_gp`` points."""

    n_segments: int
    n_gp: int
    points: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n_segments < 1 or self.n_gp < 1:
            raise ValueError("segment and Gauss-point counts must be positive")
        x, w = composite_rule(np.linspace(-1.0, 1.0, self.n_segments + 1), self.n_gp)
        object.__setattr__(self, "points", x)
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return self.n_segments * self.n_gp
