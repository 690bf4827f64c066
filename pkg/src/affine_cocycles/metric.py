"""Word length, the left-invariant metric ``d(g, h) = |g^-1 h|`` and ball growth."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from .errors import BudgetExceeded, DomainError
from .groups import Element, GroupModel

DEFAULT_BUDGET = 5_000_000

__all__ = [
    "DEFAULT_BUDGET",
    "LengthFunction",
    "Ball",
    "GrowthEstimate",
    "length",
    "distance",
    "ball",
    "growth_constant",
]


@dataclass(frozen=True)
class Ball:
    center: Element
    radius: int
    elements: frozenset

    @property
    def cardinality(self) -> int:
        return len(self.elements)

    def __contains__(self, g):
        return g in self.elements


@dataclass(frozen=True)
class GrowthEstimate:
    a: float
    per_radius: tuple[tuple[int, int], ...]
    max_radius: int

    def bound(self, radius: int) -> float:
        """``e^{a R}``; only certified for ``radius <= max_radius``."""
        return math.exp(self.a * radius)


class LengthFunction:
    """Word length with respect to the model's symmetric generating set.

    ``mode="closed"`` uses reduced-word length (free groups) or the l1 norm
    (Z^d); ``mode="bfs"`` reads lengths off a breadth-first search of the
    Cayley graph. ``"auto"`` picks closed form where available. Spheres of the
    search are cached and shared by :meth:`length` and :meth:`ball`.
    """

    def __init__(self, model: GroupModel, mode: str = "auto", budget: int = DEFAULT_BUDGET):
        if mode == "auto":
            mode = "closed" if model.kind in ("free", "zd") else "bfs"
        if mode not in ("closed", "bfs"):
            raise ValueError(f"unknown length mode {mode!r}")
        if mode == "closed" and model.kind not in ("free", "zd"):
            raise ValueError(f"no closed-form length for {model.name}")
        self.model = model
        self.mode = mode
        self.budget = int(budget)
        self._gens = model.symmetric_generators
        self._spheres: list[list[Element]] = [[model.identity]]
        self._dist: dict[Element, int] = {model.identity: 0}
        self._exhausted = False
        self._lock = threading.Lock()

    @property
    def cache(self) -> dict:
        return self._dist

    @property
    def searched_radius(self) -> int:
        return len(self._spheres) - 1

    def _grow(self) -> bool:
        """Add one sphere; False once the group is exhausted. Caller holds the lock."""
        if self._exhausted:
            return False
        r = len(self._spheres)
        mul = self.model.mul
        dist = self._dist
        new = []
        for g in self._spheres[-1]:
            for s in self._gens:
                h = mul(g, s)
                if h not in dist:
                    dist[h] = r
                    new.append(h)
                    if len(dist) > self.budget:
                        # roll back so the cache stays a union of complete spheres
                        for x in new:
                            del dist[x]
                        raise BudgetExceeded(
                            f"ball B(e, {r}) in {self.model.name} exceeds the budget of "
                            f"{self.budget} elements (partial count {len(dist) + len(new)})",
                            radius=r,
                            partial_count=len(dist) + len(new),
                        )
        if not new:
            self._exhausted = True
            return False
        self._spheres.append(new)
        return True

    def spheres(self, radius: int) -> list[list[Element]]:
        """Spheres ``S(e, 0) .. S(e, radius)`` (trailing ones empty for finite groups)."""
        if radius < 0:
            raise DomainError(f"radius must be >= 0, got {radius}")
        with self._lock:
            while len(self._spheres) <= radius and self._grow():
                pass
        out = self._spheres[: radius + 1]
        return out + [[] for _ in range(radius + 1 - len(out))]

    def __call__(self, g: Element) -> int:
        if self.mode == "closed":
            if self.model.kind == "free":
                return len(g)
            return sum(abs(x) for x in g)
        d = self._dist.get(g)
        if d is not None:
            return d
        with self._lock:
            while g not in self._dist:
                if not self._grow():
                    raise DomainError(
                        f"{g!r} not reachable from the identity in {self.model.name}"
                    )
        return self._dist[g]

    def dist(self, g: Element, h: Element) -> int:
        return self(self.model.mul(self.model.inv(g), h))


def length(L: LengthFunction, g: Element) -> int:
    L.model.check(g)
    return L(g)


def distance(L: LengthFunction, g: Element, h: Element) -> int:
    L.model.check(g)
    L.model.check(h)
    return L.dist(g, h)


def ball(L: LengthFunction, center: Element, radius: int) -> Ball:
    """All elements within ``radius`` of ``center``.

    The identity ball is enumerated by breadth-first search over right
    multiplication by generators; by left invariance the ball around
    ``center`` is its left translate.
    """
    L.model.check(center)
    spheres = L.spheres(radius)
    m = L.model
    if center == m.identity:
        elems = frozenset(g for s in spheres for g in s)
    else:
        elems = frozenset(m.mul(center, g) for s in spheres for g in s)
    return Ball(center, radius, elems)


def growth_constant(L: LengthFunction, max_radius: int) -> GrowthEstimate:
    """Smallest ``a`` with ``#B(e, R) <= e^{a R}`` for ``1 <= R <= max_radius``.

    Falls back to ``a = 1`` when every tabulated ball is a singleton.
    """
    if max_radius < 1:
        raise DomainError(f"max_radius must be >= 1, got {max_radius}")
    spheres = L.spheres(max_radius)
    rows = []
    total = 1
    a = 0.0
    for R in range(1, max_radius + 1):
        total += len(spheres[R])
        rows.append((R, total))
        a = max(a, math.log(total) / R)
    if a == 0.0:
        a = 1.0
    return GrowthEstimate(a, tuple(rows), max_radius)
