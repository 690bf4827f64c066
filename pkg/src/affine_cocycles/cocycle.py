"""Tent functions, the left regular representation and the cocycle ``b = (b_n)_n``.

For each ``n >= 1`` the tent ``phi_n`` is supported on the ball ``B(e, n - 1)``::

    phi_n(x) = 1/s(n) - d(e, x) / (n * s(n))        if d(e, x) < n
             = 0                                   otherwise

with ``s(n) = scaling.scale(k, n)``. The n-th cocycle block is
``b_n(gamma) = pi(gamma) phi_n - phi_n`` where ``(pi(gamma) f)(x) = f(gamma^-1 x)``,
measured in the l^{2n} norm. The direct sum over ``n`` is truncated at ``n_max``;
its squared mixed norm is a lower bound for the untruncated one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DomainError
from .groups import Element, GroupModel
from .metric import LengthFunction
from .scaling import ScaleParams

__all__ = [
    "SparseFunction",
    "CocycleBlock",
    "CocycleVector",
    "Construction",
    "lp_norm",
    "tent",
    "translate",
    "cocycle_block",
    "cocycle_vector",
    "affine_action",
]


class SparseFunction:
    """Finitely supported real function on a group; zero values are never stored."""

    __slots__ = ("model", "entries")

    def __init__(self, model: GroupModel, entries: Mapping[Element, float] | Iterable = ()):
        self.model = model
        items = entries.items() if isinstance(entries, Mapping) else entries
        self.entries: dict[Element, float] = {x: float(v) for x, v in items if v != 0.0}

    @classmethod
    def _wrap(cls, model, entries):
        f = cls.__new__(cls)
        f.model = model
        f.entries = entries
        return f

    def __getitem__(self, x) -> float:
        return self.entries.get(x, 0.0)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def items(self):
        return self.entries.items()

    def support(self) -> frozenset:
        return frozenset(self.entries)

    def sup_norm(self) -> float:
        return max(map(abs, self.entries.values()), default=0.0)

    def _check_model(self, other):
        if other.model is not self.model and other.model.name != self.model.name:
            raise DomainError(
                f"functions live on different groups: {self.model.name} vs {other.model.name}"
            )

    def _combine(self, other, sign):
        self._check_model(other)
        out = dict(self.entries)
        for x, v in other.entries.items():
            w = out.get(x)
            if w is None:
                out[x] = sign * v
            else:
                r = w + sign * v
                if r == 0.0:
                    del out[x]
                else:
                    out[x] = r
        return SparseFunction._wrap(self.model, out)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return SparseFunction._wrap(self.model, {x: -v for x, v in self.entries.items()})

    def max_abs_diff(self, other) -> float:
        """``sup_x |self(x) - other(x)|``."""
        self._check_model(other)
        keys = self.entries.keys() | other.entries.keys()
        return max((abs(self[x] - other[x]) for x in keys), default=0.0)

    def __eq__(self, other):
        if not isinstance(other, SparseFunction):
            return NotImplemented
        return self.model.name == other.model.name and self.entries == other.entries

    def __repr__(self):
        return f"SparseFunction({self.model.name}, support={len(self.entries)})"


def lp_norm(f: SparseFunction | Iterable[float], pexp: float) -> float:
    """``(sum |f(x)|^p)^(1/p)`` evaluated as ``M * (sum (|f(x)|/M)^p)^(1/p)``, ``M = sup |f|``.

    The renormalisation keeps every summand in ``[0, 1]`` with at least one equal
    to 1, so high exponents on tiny values neither underflow nor lose the leading factor.
    """
    if not pexp >= 1:
        raise DomainError(f"norm exponent must be >= 1, got {pexp}")
    values = f.entries.values() if isinstance(f, SparseFunction) else f
    absval = [abs(v) for v in values]
    m = max(absval, default=0.0)
    if m == 0.0:
        return 0.0
    if math.isinf(pexp):
        return m
    total = math.fsum((v / m) ** pexp for v in absval)
    return m * total ** (1.0 / pexp)


def translate(model: GroupModel, gamma: Element, f: SparseFunction) -> SparseFunction:
    """Left regular representation: ``(pi(gamma) f)(x) = f(gamma^-1 x)``."""
    if f.model is not model and f.model.name != model.name:
        raise DomainError(f"function lives on {f.model.name}, not {model.name}")
    mul = model.mul
    return SparseFunction._wrap(model, {mul(gamma, x): v for x, v in f.entries.items()})


@dataclass(frozen=True)
class CocycleBlock:
    n: int
    gamma: Element
    values: SparseFunction
    norm_2n: float

    @property
    def sup_norm(self) -> float:
        return self.values.sup_norm()


@dataclass(frozen=True)
class CocycleVector:
    gamma: Element
    k: int
    n_max: int
    blocks: tuple[CocycleBlock, ...]
    mixed_norm_sq: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "mixed_norm_sq", math.fsum(b.norm_2n ** 2 for b in self.blocks))

    @property
    def norms(self) -> list[float]:
        return [b.norm_2n for b in self.blocks]

    def block(self, n: int) -> CocycleBlock:
        return self.blocks[n - 1]


class Construction:
    """The cocycle on one group for one choice of ``k``; caches tent functions.

    ``slope_error`` deliberately steepens every tent by the factor
    ``1 + slope_error``. It exists so the verifier can be shown to fail.
    """

    def __init__(self, length: LengthFunction, params: ScaleParams | int,
                 slope_error: float = 0.0):
        if not isinstance(params, ScaleParams):
            params = ScaleParams(params)
        self.length = length
        self.model = length.model
        self.params = params
        self.slope_error = float(slope_error)
        self._tents: dict[int, SparseFunction] = {}

    @property
    def k(self) -> int:
        return self.params.k

    def tent_value(self, n: int, d: int) -> float:
        if d >= n:
            return 0.0
        s = self.params.scale(n)
        return 1.0 / s - d * (1.0 + self.slope_error) / (n * s)

    def tent(self, n: int) -> SparseFunction:
        if n < 1:
            raise DomainError(f"tent radius n must be >= 1, got {n}")
        f = self._tents.get(n)
        if f is None:
            entries = {}
            for d, sphere in enumerate(self.length.spheres(n - 1)):
                v = self.tent_value(n, d)
                if v != 0.0:
                    for x in sphere:
                        entries[x] = v
            f = self._tents[n] = SparseFunction._wrap(self.model, entries)
        return f

    def block(self, n: int, gamma: Element) -> CocycleBlock:
        phi = self.tent(n)
        mul = self.model.mul
        out = {mul(gamma, x): v for x, v in phi.entries.items()}
        for x, v in phi.entries.items():
            w = out.get(x)
            if w is None:
                out[x] = -v
            else:
                r = w - v
                if r == 0.0:
                    del out[x]
                else:
                    out[x] = r
        values = SparseFunction._wrap(self.model, out)
        return CocycleBlock(n, gamma, values, lp_norm(values, 2 * n))

    def vector(self, gamma: Element, n_max: int) -> CocycleVector:
        if n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {n_max}")
        blocks = tuple(self.block(n, gamma) for n in range(1, n_max + 1))
        return CocycleVector(gamma, self.k, n_max, blocks)

    def act(self, gamma: Element, xi: Sequence[SparseFunction] | CocycleVector,
            n_max: int | None = None) -> list[SparseFunction]:
        """Affine action ``alpha(gamma) xi = pi(gamma) xi + b(gamma)``, block by block."""
        if isinstance(xi, CocycleVector):
            xi = [b.values for b in xi.blocks]
        xi = list(xi)
        if n_max is None:
            n_max = len(xi)
        if len(xi) != n_max:
            raise DomainError(f"xi has {len(xi)} blocks, expected {n_max}")
        out = []
        for n, f in enumerate(xi, start=1):
            out.append(translate(self.model, gamma, f) + self.block(n, gamma).values)
        return out

    def zero_vector(self, n_max: int) -> list[SparseFunction]:
        return [SparseFunction(self.model) for _ in range(n_max)]


def tent(L: LengthFunction, p: ScaleParams | int, n: int) -> SparseFunction:
    return Construction(L, p).tent(n)


def cocycle_block(L: LengthFunction, p: ScaleParams | int, n: int, gamma: Element) -> CocycleBlock:
    L.model.check(gamma)
    return Construction(L, p).block(n, gamma)


def cocycle_vector(L: LengthFunction, p: ScaleParams | int, gamma: Element,
                   n_max: int) -> CocycleVector:
    L.model.check(gamma)
    return Construction(L, p).vector(gamma, n_max)


def affine_action(L: LengthFunction, p: ScaleParams | int, gamma: Element,
                  xi: Sequence[SparseFunction] | CocycleVector, n_max: int) -> list[SparseFunction]:
    L.model.check(gamma)
    return Construction(L, p).act(gamma, xi, n_max)
