"""Exact arithmetic on finite uniform probability spaces.

The ambient space is always ``{0, ..., n-1}`` with the uniform measure, so
every measure is a rational with denominator ``n`` and every injection is
automatically measure-preserving.  The building blocks are

* :class:`FiniteSpace` -- the space itself,
* :class:`Permutation` -- a bijection of the whole space,
* :class:`PartialInjection` -- a bijection between two subsets.

All values are immutable and hashable, all operations are pure, and no
floating point appears anywhere: measures and distances are
:class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping


class SpaceMismatchError(ValueError):
    """Raised when two operands live on spaces of different sizes."""


def _check_same_space(a, b) -> None:
    if a.n != b.n:
        raise SpaceMismatchError(f"space sizes differ: {a.n} != {b.n}")


@dataclass(frozen=True)
class FiniteSpace:
    """A probability space of ``n_points`` atoms, each of measure ``1/n_points``."""

    n_points: int

    def __post_init__(self) -> None:
        if not isinstance(self.n_points, int) or self.n_points < 1:
            raise ValueError(f"n_points must be a positive integer, got {self.n_points!r}")

    @property
    def atom_measure(self) -> Fraction:
        return Fraction(1, self.n_points)

    def points(self) -> range:
        return range(self.n_points)

    def measure(self, points: Iterable[int]) -> Fraction:
        """Measure of a set of points: ``|points| / n_points``."""
        pts = frozenset(points)
        bad = [x for x in pts if not (isinstance(x, int) and 0 <= x < self.n_points)]
        if bad:
            raise ValueError(f"points outside the space: {sorted(bad)!r}")
        return Fraction(len(pts), self.n_points)


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., n-1}``, stored as its image array.

    ``images[x]`` is the image of ``x``.  Composition is written
    multiplicatively: ``(T * U)(x) == T(U(x))``.
    """

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        n = len(images)
        seen = bytearray(n)
        for x in images:
            if not isinstance(x, int) or not 0 <= x < n or seen[x]:
                raise ValueError("images do not describe a bijection")
            seen[x] = 1

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Iterable[int]]) -> "Permutation":
        """Build a permutation from disjoint cycles, e.g. ``[(0, 1, 2), (4, 5)]``."""
        images = list(range(n))
        moved = set()
        for cycle in cycles:
            cyc = list(cycle)
            for x in cyc:
                if x in moved:
                    raise ValueError(f"cycles are not disjoint at point {x}")
                moved.add(x)
            for a, b in zip(cyc, cyc[1:]):
                images[a] = b
            if cyc:
                images[cyc[-1]] = cyc[0]
        return cls(tuple(images))

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition: apply ``other`` first, then ``self``."""
        if not isinstance(other, Permutation):
            return NotImplemented
        _check_same_space(self, other)
        mine = self.images
        return Permutation(tuple(mine[x] for x in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for x, y in enumerate(self.images):
            inv[y] = x
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.n)
        square = self
        while k:
            if k & 1:
                result = result * square
            square = square * square
            k >>= 1
        return result

    def support(self) -> frozenset[int]:
        """The set of points actually moved."""
        return frozenset(x for x, y in enumerate(self.images) if x != y)

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Nontrivial cycles, each starting at its least point, sorted by that point."""
        seen = bytearray(self.n)
        out = []
        for x in range(self.n):
            if seen[x] or self.images[x] == x:
                continue
            cycle = [x]
            y = self.images[x]
            while y != x:
                seen[y] = 1
                cycle.append(y)
                y = self.images[y]
            out.append(tuple(cycle))
        return tuple(out)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "images": list(self.images)}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Permutation":
        try:
            n = data["n"]
            images = data["images"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"permutation JSON needs 'n' and 'images': {exc}") from exc
        if not isinstance(images, list) or len(images) != n:
            raise ValueError("permutation 'images' must be a list of length n")
        return cls(tuple(images))


@dataclass(frozen=True)
class PartialInjection:
    """A bijection between two subsets of ``{0, ..., n-1}``.

    Stored as the sorted tuple of (source, target) pairs, so structural
    equality coincides with mathematical equality.  The domain measure is
    ``len(pairs) / n``; the range automatically has the same measure.
    """

    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple(sorted((int(s), int(t)) for s, t in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"space size must be a positive integer, got {self.n!r}")
        sources = set()
        targets = set()
        for s, t in pairs:
            if not (0 <= s < self.n and 0 <= t < self.n):
                raise ValueError(f"pair ({s}, {t}) outside the space of size {self.n}")
            if s in sources:
                raise ValueError(f"duplicate source {s}")
            if t in targets:
                raise ValueError(f"duplicate target {t}")
            sources.add(s)
            targets.add(t)
        object.__setattr__(self, "_forward", dict(pairs))

    @classmethod
    def empty(cls, n: int) -> "PartialInjection":
        return cls(n, ())

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[int, int]) -> "PartialInjection":
        return cls(n, tuple(mapping.items()))

    @classmethod
    def identity_on(cls, n: int, points: Iterable[int]) -> "PartialInjection":
        return cls(n, tuple((x, x) for x in points))

    @classmethod
    def from_permutation(cls, perm: Permutation) -> "PartialInjection":
        """The permutation viewed as a partial injection with full domain."""
        return cls(perm.n, tuple(enumerate(perm.images)))

    @property
    def dom(self) -> frozenset[int]:
        return frozenset(s for s, _ in self.pairs)

    @property
    def rng(self) -> frozenset[int]:
        return frozenset(t for _, t in self.pairs)

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def domain_measure(self) -> Fraction:
        return Fraction(len(self.pairs), self.n)

    def apply(self, x: int) -> int:
        try:
            return self._forward[x]
        except KeyError:
            raise ValueError(f"point {x} is not in the domain") from None

    def get(self, x: int) -> int | None:
        return self._forward.get(x)

    def inverse(self) -> "PartialInjection":
        return PartialInjection(self.n, tuple((t, s) for s, t in self.pairs))

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "pairs": [[s, t] for s, t in self.pairs]}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "PartialInjection":
        try:
            n = data["n"]
            pairs = data["pairs"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"partial injection JSON needs 'n' and 'pairs': {exc}") from exc
        return cls(n, tuple((s, t) for s, t in pairs))


def compose(outer: PartialInjection, inner: PartialInjection) -> PartialInjection:
    """Compose two partial injections: ``x -> outer(inner(x))``.

    The result is defined exactly where the chain is: on
    ``inner^{-1}(dom outer & rng inner)``.
    """
    _check_same_space(outer, inner)
    pairs = []
    for s, mid in inner.pairs:
        t = outer.get(mid)
        if t is not None:
            pairs.append((s, t))
    return PartialInjection(outer.n, tuple(pairs))


def inverse(phi: PartialInjection) -> PartialInjection:
    """Swap domain and range."""
    return phi.inverse()


def uniform_distance(t: Permutation, u: Permutation) -> Fraction:
    """The normalized count of points where the two permutations disagree.

    This is a bi-invariant metric on the permutations of the space.
    """
    _check_same_space(t, u)
    diff = sum(1 for a, b in zip(t.images, u.images) if a != b)
    return Fraction(diff, t.n)


def support(t: Permutation) -> frozenset[int]:
    """Points moved by ``t``; its measure equals the distance to the identity."""
    return t.support()


def support_measure(t: Permutation) -> Fraction:
    return Fraction(len(t.support()), t.n)
