"""Concrete countable discrete groups.

Elements are plain tuples of ints in a canonical normal form, so equality,
hashing and set membership are exact:

* free group of rank r: the reduced word, letter ``i`` coded as ``+i`` and its
  inverse as ``-i`` (1-based), e.g. ``a b a^-1`` is ``(1, 2, -1)``;
* Z^d: the coordinate tuple;
* integer Heisenberg group: ``(a, b, c)`` for the matrix
  ``[[1, a, c], [0, 1, b], [0, 0, 1]]``;
* finite groups: ``(i,)`` with ``i`` the row index in the multiplication table.

The group models are immutable after construction. Their ``mul``/``inv``
methods skip membership validation; the module-level :func:`mul`, :func:`inv`
and :func:`eval_word` validate their arguments first.
"""
from __future__ import annotations

import re
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DomainError, GroupAxiomError, GroupSpecError

Element = tuple

__all__ = [
    "Element",
    "Word",
    "GroupModel",
    "FreeGroup",
    "IntegerLattice",
    "HeisenbergGroup",
    "FiniteGroup",
    "parse_group_spec",
    "parse_word",
    "load_finite_group",
    "mul",
    "inv",
    "eval_word",
]


@dataclass(frozen=True)
class Word:
    """A formal product of generators: ``(generator index, sign)`` pairs, 0-based."""

    tokens: tuple[tuple[int, int], ...] = ()

    def __len__(self):
        return len(self.tokens)


class GroupModel:
    kind: str = ""
    name: str = ""
    identity: Element = ()
    generators: tuple[Element, ...] = ()

    def mul(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inv(self, g: Element) -> Element:
        raise NotImplementedError

    def contains(self, g) -> bool:
        raise NotImplementedError

    def format_element(self, g: Element) -> str:
        raise NotImplementedError

    def _parse_token(self, token: str) -> list[tuple[int, int]] | None:
        """Model-specific word sugar; ``None`` when the token is not recognised."""
        return None

    @property
    def symmetric_generators(self) -> tuple[Element, ...]:
        """Generators followed by their inverses, without repetition, in a fixed order."""
        out: list[Element] = []
        seen = set()
        for s in self.generators:
            for t in (s, self.inv(s)):
                if t not in seen:
                    seen.add(t)
                    out.append(t)
        return tuple(out)

    def encode(self, g: Element) -> bytes:
        return ",".join(map(str, g)).encode("ascii")

    def decode(self, data: bytes) -> Element:
        text = data.decode("ascii")
        g = tuple(int(t) for t in text.split(",")) if text else ()
        self.check(g)
        return g

    def check(self, g) -> None:
        if not self.contains(g):
            raise DomainError(f"{g!r} is not a canonical element of {self.name}")

    def generator_power(self, index: int, sign: int) -> Element:
        s = self.generators[index]
        return s if sign > 0 else self.inv(s)

    def product(self, elements: Iterable[Element]) -> Element:
        out = self.identity
        for g in elements:
            out = self.mul(out, g)
        return out

    def power(self, g: Element, exponent: int) -> Element:
        base = g if exponent >= 0 else self.inv(g)
        return self.product([base] * abs(exponent))

    def random_word(self, rng, length: int) -> Word:
        """Uniform random word of the given length over generators and their inverses."""
        r = len(self.generators)
        return Word(tuple((rng.randrange(r), rng.choice((1, -1))) for _ in range(length)))

    def random_element(self, rng, length: int) -> Element:
        return eval_word(self, self.random_word(rng, length))

    def parse_word(self, text: str) -> Word:
        return parse_word(self, text)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class FreeGroup(GroupModel):
    kind = "free"

    def __init__(self, rank: int):
        if rank < 1:
            raise GroupSpecError(f"free group rank must be >= 1, got {rank}")
        self.rank = rank
        self.name = f"free:{rank}"
        self.identity = ()
        self.generators = tuple((i,) for i in range(1, rank + 1))

    @property
    def symmetric_generators(self):
        return tuple(t for i in range(1, self.rank + 1) for t in ((i,), (-i,)))

    def mul(self, g, h):
        lg = len(g)
        i = 0
        m = min(lg, len(h))
        while i < m and g[lg - 1 - i] == -h[i]:
            i += 1
        if i == 0:
            return g + h
        return g[: lg - i] + h[i:]

    def inv(self, g):
        return tuple(-x for x in reversed(g))

    def contains(self, g):
        if not isinstance(g, tuple):
            return False
        prev = 0
        for x in g:
            if type(x) is not int or x == 0 or abs(x) > self.rank or x == -prev:
                return False
            prev = x
        return True

    def _letter(self, i):
        if self.rank <= 26:
            return string.ascii_lowercase[i - 1]
        return f"g{i}"

    def format_element(self, g):
        if not g:
            return "e"
        return " ".join(self._letter(x) if x > 0 else self._letter(-x) + "^-1" for x in g)

    def _parse_token(self, token):
        if self.rank > 26:
            return None
        m = re.fullmatch(r"([a-zA-Z])(?:\^(-?\d+))?", token)
        if not m:
            return None
        letter, exp = m.group(1), int(m.group(2) or 1)
        idx = string.ascii_lowercase.find(letter.lower())
        if idx >= self.rank:
            raise GroupSpecError(f"letter {letter!r} is not a generator of {self.name}")
        sign = 1 if letter.islower() else -1
        return _expand(idx, sign * exp)


class IntegerLattice(GroupModel):
    kind = "zd"

    def __init__(self, dim: int):
        if dim < 1:
            raise GroupSpecError(f"lattice dimension must be >= 1, got {dim}")
        self.dim = dim
        self.name = f"zd:{dim}"
        self.identity = (0,) * dim
        self.generators = tuple(
            tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim)
        )

    def mul(self, g, h):
        return tuple(x + y for x, y in zip(g, h))

    def inv(self, g):
        return tuple(-x for x in g)

    def contains(self, g):
        return (
            isinstance(g, tuple)
            and len(g) == self.dim
            and all(type(x) is int for x in g)
        )

    def format_element(self, g):
        return "(" + ",".join(map(str, g)) + ")"

    def _parse_token(self, token):
        if not re.fullmatch(r"\(?-?\d+(?:,-?\d+)*\)?", token):
            return None
        coords = [int(t) for t in token.strip("()").split(",")]
        if len(coords) != self.dim:
            raise GroupSpecError(
                f"tuple {token!r} has {len(coords)} coordinates, {self.name} needs {self.dim}"
            )
        out = []
        for i, c in enumerate(coords):
            out.extend(_expand(i, c))
        return out


class HeisenbergGroup(GroupModel):
    """Upper unitriangular 3x3 integer matrices, generated by ``x = (1,0,0)`` and ``y = (0,1,0)``."""

    kind = "heis3"

    def __init__(self):
        self.name = "heis3"
        self.identity = (0, 0, 0)
        self.generators = ((1, 0, 0), (0, 1, 0))

    def mul(self, g, h):
        a, b, c = g
        x, y, z = h
        return (a + x, b + y, c + z + a * y)

    def inv(self, g):
        a, b, c = g
        return (-a, -b, a * b - c)

    def contains(self, g):
        return isinstance(g, tuple) and len(g) == 3 and all(type(x) is int for x in g)

    def format_element(self, g):
        return "(" + ",".join(map(str, g)) + ")"

    def _parse_token(self, token):
        m = re.fullmatch(r"([xyXY])(?:\^(-?\d+))?", token)
        if not m:
            return None
        letter, exp = m.group(1), int(m.group(2) or 1)
        sign = 1 if letter.islower() else -1
        return _expand("xy".index(letter.lower()), sign * exp)


class FiniteGroup(GroupModel):
    """A finite group given by its Cayley table; validated on construction."""

    kind = "finite"

    def __init__(self, names: Sequence[str], table: Sequence[Sequence[int]],
                 generators: Sequence[int] | None = None, name: str = "finite"):
        self.names = tuple(names)
        self.order = len(self.names)
        if self.order == 0:
            raise GroupSpecError("finite group must have at least one element")
        if len(set(self.names)) != self.order:
            raise GroupSpecError("duplicate element names in finite group table")
        self.table = tuple(tuple(row) for row in table)
        self.name = name
        self.identity = (0,)
        self._index = {n: i for i, n in enumerate(self.names)}
        self._validate_table()
        self._inverse = tuple(row.index(0) for row in self.table)
        if generators is None:
            generators = range(1, self.order)
        self.generators = tuple((i,) for i in generators)
        self._validate_generation()

    def _validate_table(self):
        n = self.order
        t = self.table
        if len(t) != n or any(len(row) != n for row in t):
            raise GroupSpecError(f"multiplication table must be {n}x{n}")
        for i in range(n):
            if t[0][i] != i or t[i][0] != i:
                raise GroupAxiomError("identity", (self.names[0], self.names[i]))
        for i in range(n):
            if 0 not in t[i]:
                raise GroupAxiomError("inverse", (self.names[i],))
            j = t[i].index(0)
            if t[j][i] != 0:
                raise GroupAxiomError("inverse", (self.names[i], self.names[j]))
        for i in range(n):
            ti = t[i]
            for j in range(n):
                tij = t[ti[j]]
                tj = t[j]
                for k in range(n):
                    if tij[k] != ti[tj[k]]:
                        raise GroupAxiomError(
                            "associativity", (self.names[i], self.names[j], self.names[k])
                        )

    def _validate_generation(self):
        seen = {self.identity}
        frontier = [self.identity]
        gens = self.symmetric_generators
        while frontier:
            nxt = []
            for g in frontier:
                for s in gens:
                    h = self.mul(g, s)
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
            frontier = nxt
        if len(seen) != self.order:
            missing = next(self.names[i] for i in range(self.order) if (i,) not in seen)
            raise GroupAxiomError(
                "generation", (missing,),
                f"declared generators do not generate the group (e.g. {missing!r} unreachable)",
            )

    def mul(self, g, h):
        return (self.table[g[0]][h[0]],)

    def inv(self, g):
        return (self._inverse[g[0]],)

    def contains(self, g):
        return (
            isinstance(g, tuple) and len(g) == 1 and type(g[0]) is int
            and 0 <= g[0] < self.order
        )

    def format_element(self, g):
        return self.names[g[0]]

    def element(self, name: str) -> Element:
        try:
            return (self._index[name],)
        except KeyError:
            raise GroupSpecError(f"unknown element name {name!r}") from None

    def _parse_token(self, token):
        m = re.fullmatch(r"(.+?)(?:\^(-?\d+))?", token)
        name, exp = m.group(1), int(m.group(2) or 1)
        if name not in self._index:
            return None
        g = (self._index[name],)
        if g not in self.generators:
            raise GroupSpecError(f"element {name!r} is not a declared generator")
        return _expand(self.generators.index(g), exp)


def _expand(index: int, exponent: int) -> list[tuple[int, int]]:
    sign = 1 if exponent >= 0 else -1
    return [(index, sign)] * abs(exponent)


_GEN_TOKEN = re.compile(r"g(\d+)(?:\^(-?\d+))?")


def parse_word(model: GroupModel, text: str) -> Word:
    """Parse whitespace-separated tokens ``gK`` / ``gK^-1`` (K 1-based) plus model sugar.

    Sugar: letters ``a``, ``b``, ... (uppercase = inverse) for free groups,
    ``x``/``y`` for the Heisenberg group, integer tuples such as ``(1,-2)`` for
    Z^d, and generator names for finite groups. ``^m`` exponents are allowed.
    """
    tokens: list[tuple[int, int]] = []
    for tok in text.split():
        m = _GEN_TOKEN.fullmatch(tok)
        if m:
            k = int(m.group(1))
            if not 1 <= k <= len(model.generators):
                raise GroupSpecError(
                    f"generator index {k} out of range 1..{len(model.generators)} in {tok!r}"
                )
            tokens.extend(_expand(k - 1, int(m.group(2) or 1)))
            continue
        parsed = model._parse_token(tok)
        if parsed is None:
            raise GroupSpecError(f"unrecognised word token {tok!r} for {model.name}")
        tokens.extend(parsed)
    return Word(tuple(tokens))


def eval_word(model: GroupModel, word: Word) -> Element:
    """Left-to-right product of the word's tokens, in canonical form."""
    r = len(model.generators)
    out = model.identity
    for index, sign in word.tokens:
        if not 0 <= index < r or sign not in (1, -1):
            raise DomainError(f"word token {(index, sign)} invalid for {model.name}")
        out = model.mul(out, model.generator_power(index, sign))
    return out


def mul(model: GroupModel, g: Element, h: Element) -> Element:
    model.check(g)
    model.check(h)
    return model.mul(g, h)


def inv(model: GroupModel, g: Element) -> Element:
    model.check(g)
    return model.inv(g)


def load_finite_group(path, name: str | None = None) -> FiniteGroup:
    """Read a multiplication-table file.

    Format::

        order N
        <N element names, identity first>
        <N rows: row i lists the names of i*j for j = 1..N>
        generators: <names>        (optional)
    """
    path = Path(path)
    try:
        lines = [ln.strip() for ln in path.read_text().splitlines()]
    except OSError as exc:
        raise GroupSpecError(f"cannot read finite group file {str(path)!r}: {exc}") from exc
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GroupSpecError(f"{path}: empty file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "order" or not head[1].isdigit():
        raise GroupSpecError(f"{path}: line 1 must be 'order N', got {lines[0]!r}")
    n = int(head[1])
    if len(lines) < n + 2:
        raise GroupSpecError(f"{path}: expected {n} table rows after the name line")
    names = lines[1].split()
    if len(names) != n:
        raise GroupSpecError(f"{path}: expected {n} element names, got {len(names)}")
    index = {nm: i for i, nm in enumerate(names)}
    table = []
    for r, line in enumerate(lines[2 : n + 2]):
        row = line.split()
        if len(row) != n:
            raise GroupSpecError(f"{path}: table row {r + 1} has {len(row)} entries, expected {n}")
        try:
            table.append([index[x] for x in row])
        except KeyError as exc:
            raise GroupSpecError(f"{path}: unknown element {exc.args[0]!r} in row {r + 1}") from None
    gens = None
    rest = lines[n + 2 :]
    if rest:
        m = re.fullmatch(r"generators:\s*(.*)", rest[0])
        if not m or len(rest) > 1:
            raise GroupSpecError(f"{path}: unexpected trailing line {rest[0]!r}")
        try:
            gens = [index[x] for x in m.group(1).split()]
        except KeyError as exc:
            raise GroupSpecError(f"{path}: unknown generator {exc.args[0]!r}") from None
    return FiniteGroup(names, table, gens, name=name or f"finite:{path}")


def parse_group_spec(spec: str) -> GroupModel:
    """``free:<r>``, ``zd:<d>``, ``heis3`` or ``finite:<path>``."""
    spec = spec.strip()
    if spec == "heis3":
        return HeisenbergGroup()
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise GroupSpecError(f"malformed group spec {spec!r}: expected <kind>:<arg> or 'heis3'")
    if kind == "finite":
        if not arg:
            raise GroupSpecError("finite group spec needs a file path")
        return load_finite_group(arg, name=spec)
    if kind not in ("free", "zd"):
        raise GroupSpecError(f"unknown group kind {kind!r} in {spec!r}")
    if not re.fullmatch(r"\d+", arg):
        raise GroupSpecError(f"malformed parameter {arg!r} in {spec!r}: expected an integer")
    value = int(arg)
    if value < 1:
        raise GroupSpecError(f"parameter {value} in {spec!r} must be >= 1")
    return FreeGroup(value) if kind == "free" else IntegerLattice(value)
