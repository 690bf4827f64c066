"""Clipped iterated logarithms and the decay scales built from them.

``iterlog(k, x)`` is the k-fold natural log of ``x`` when ``x`` exceeds the
exponential tower ``e^e^...^e`` of height ``k`` and 1 otherwise, so it is
continuous and never below 1. The tent of radius ``n`` peaks at
``1 / scale(n)`` with ``scale(n) = sqrt(n * iterlog(1, n) * ... * iterlog(k, n))``
and drops by ``slope(n) = 1 / (n * scale(n))`` per unit of distance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

__all__ = [
    "ScaleParams",
    "tower",
    "iterated_ln",
    "iterlog",
    "scale",
    "slope",
    "iterlog_array",
    "inverse_square_scale_array",
]


@lru_cache(maxsize=None)
def tower(k: int) -> float:
    """``exp`` applied ``k`` times to 1 (``tower(0) == 1``); ``inf`` once it overflows (k >= 4)."""
    if k < 0:
        raise DomainError(f"tower height must be >= 0, got {k}")
    t = 1.0
    for _ in range(k):
        try:
            t = math.exp(t)
        except OverflowError:
            return math.inf
    return t


def iterated_ln(x: float, k: int) -> float:
    """Unclipped ``ln(ln(...ln(x)))``, ``k`` times."""
    for _ in range(k):
        x = math.log(x)
    return x


@dataclass(frozen=True)
class ScaleParams:
    k: int = 1

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 0:
            raise DomainError(f"k must be a non-negative integer, got {self.k!r}")

    def tower(self, j: int | None = None) -> float:
        return tower(self.k if j is None else j)

    def iterlog(self, x: float, j: int | None = None) -> float:
        return iterlog(self, x) if j is None else iterlog(ScaleParams(j), x)

    def scale(self, n: int) -> float:
        return scale(self, n)

    def slope(self, n: int) -> float:
        return slope(self, n)


def _k(p) -> int:
    return p.k if isinstance(p, ScaleParams) else int(p)


def iterlog(p: ScaleParams | int, x: float) -> float:
    k = _k(p)
    if not x > 0:
        raise DomainError(f"iterlog needs x > 0, got {x}")
    if k == 0 or not x > tower(k):
        return 1.0
    return iterated_ln(x, k)


@lru_cache(maxsize=4096)
def _scale(k: int, n: int) -> float:
    prod = float(n)
    for j in range(1, k + 1):
        prod *= iterlog(j, n)
    return math.sqrt(prod)


def scale(p: ScaleParams | int, n: int) -> float:
    """``sqrt(n * prod_{j<=k} iterlog(j, n))``: the reciprocal of the tent's peak."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return _scale(_k(p), int(n))


def slope(p: ScaleParams | int, n: int) -> float:
    """``1 / (n * scale(n))``: the decay envelope and the tent's Lipschitz constant."""
    return 1.0 / (n * scale(p, n))


def iterlog_array(k: int, x: np.ndarray) -> np.ndarray:
    """Vectorised :func:`iterlog` for positive arrays."""
    x = np.asarray(x, dtype=float)
    if k == 0:
        return np.ones_like(x)
    out = np.ones_like(x)
    mask = x > tower(k)
    v = x[mask]
    for _ in range(k):
        v = np.log(v)
    out[mask] = v
    return out


def inverse_square_scale_array(k: int, n: np.ndarray) -> np.ndarray:
    """``1 / scale(n)^2 = 1 / (n * iterlog(1, n) * ... * iterlog(k, n))`` elementwise."""
    n = np.asarray(n, dtype=float)
    denom = n.copy()
    for j in range(1, k + 1):
        denom *= iterlog_array(j, n)
    return 1.0 / denom
