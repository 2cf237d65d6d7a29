"""Exact permutation-group computations via stabilizer chains.

The construction is deterministic and seedless: base points are chosen as
the least moved points, orbits are scanned in increasing point order, and
transversals only ever extend, so identical generator lists (in identical
order) yield identical chains, orders, and certificates.

Internally permutations are raw image tuples; the dataclass wrapper from
:mod:`.core` appears only at the API boundary.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Sequence

from .core import Permutation, SpaceMismatchError
from .relations import (
    Partition,
    full_group_generators,
    full_group_order,
    in_full_group,
    join,
)


def _mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Raw composition: apply q first, then p."""
    return tuple(map(p.__getitem__, q))


def _inv(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


class _Chain:
    """Stabilizer chain with extend-only transversals.

    Level ``j`` holds the strong generators fixing the first ``j`` base
    points, the orbit of ``base[j]`` under them, and a transversal mapping
    each orbit point to a group element carrying ``base[j]`` there.  Every
    (orbit point, generator) pair is examined exactly once; pairs checked
    earlier stay valid because generator lists and transversals only grow,
    so membership of their Schreier elements in the deeper groups is
    preserved.
    """

    def __init__(self, n: int):
        self.n = n
        self.identity = tuple(range(n))
        self.base: list[int] = []
        self.gens: list[list[tuple[int, ...]]] = []
        self.transversals: list[dict[int, tuple[int, ...]]] = []
        self.trans_inv: list[dict[int, tuple[int, ...]]] = []
        self.pending: list[deque] = []

    def order(self) -> int:
        return math.prod(len(t) for t in self.transversals)

    def strip(self, p: tuple[int, ...], start: int = 0) -> tuple[tuple[int, ...], int]:
        """Sift through levels ``start..``; return (residue, drop level)."""
        for j in range(start, len(self.base)):
            u_inv = self.trans_inv[j].get(p[self.base[j]])
            if u_inv is None:
                return p, j
            p = _mul(u_inv, p)
        return p, len(self.base)

    def add(self, p: tuple[int, ...]) -> None:
        if p == self.identity:
            return
        residue, drop = self.strip(p)
        if residue == self.identity:
            return
        self._install(residue, drop)
        self._process_pending()

    def _install(self, residue: tuple[int, ...], drop: int) -> None:
        # The residue fixes base[0..drop-1]; it joins every level up to drop.
        if drop == len(self.base):
            b = min(x for x, y in enumerate(residue) if x != y)
            self.base.append(b)
            self.gens.append([])
            self.transversals.append({b: self.identity})
            self.trans_inv.append({b: self.identity})
            self.pending.append(deque())
        for j in range(drop + 1):
            self._add_gen_at(j, residue)

    def _add_gen_at(self, j: int, g: tuple[int, ...]) -> None:
        for pt in sorted(self.transversals[j]):
            self.pending[j].append((pt, g))
        self.gens[j].append(g)
        self._close_orbit(j)

    def _close_orbit(self, j: int) -> None:
        # Increasing-point scans; existing coset representatives are kept.
        trans = self.transversals[j]
        tinv = self.trans_inv[j]
        gens = self.gens[j]
        pend = self.pending[j]
        frontier = sorted(trans)
        while frontier:
            new_pts = []
            for pt in frontier:
                u = trans[pt]
                for g in gens:
                    img = g[pt]
                    if img not in trans:
                        rep = _mul(g, u)
                        trans[img] = rep
                        tinv[img] = _inv(rep)
                        new_pts.append(img)
                        for h in gens:
                            pend.append((img, h))
            frontier = sorted(new_pts)

    def _process_pending(self) -> None:
        while True:
            for j in range(len(self.base) - 1, -1, -1):
                if self.pending[j]:
                    break
            else:
                return
            pend = self.pending[j]
            trans = self.transversals[j]
            tinv = self.trans_inv[j]
            while pend:
                pt, g = pend.popleft()
                schreier = _mul(tinv[g[pt]], _mul(g, trans[pt]))
                if schreier == self.identity:
                    continue
                residue, drop = self.strip(schreier, j + 1)
                if residue == self.identity:
                    continue
                self._install(residue, drop)
                break  # re-select: the install may have queued deeper work
            # outer loop re-selects the deepest pending level


class PermGroup:
    """An immutable permutation group built from generators.

    ``base``, ``strong_generators``, and ``order`` are exact; ``contains``
    answers membership by sifting.  Instances are safe to share across
    threads once constructed.
    """

    __slots__ = ("n", "base", "strong_generators", "order", "_chain")

    def __init__(self, chain: _Chain):
        self._chain = chain
        self.n = chain.n
        self.base = tuple(chain.base)
        top = chain.gens[0] if chain.gens else []
        self.strong_generators = tuple(Permutation(g) for g in top)
        self.order = chain.order()

    def contains(self, perm: Permutation) -> bool:
        if perm.n != self.n:
            raise SpaceMismatchError(f"space sizes differ: {perm.n} != {self.n}")
        residue, _ = self._chain.strip(perm.images)
        return residue == self._chain.identity

    def __contains__(self, perm: Permutation) -> bool:
        return self.contains(perm)

    def __repr__(self) -> str:
        return f"PermGroup(n={self.n}, order={self.order})"


def group_from_generators(
    gens: Iterable[Permutation], n_points: int | None = None
) -> PermGroup:
    """Build the group generated by the given permutations.

    ``n_points`` is only required when the generator list is empty.
    Deterministic for a fixed input order.
    """
    gen_list = list(gens)
    if gen_list:
        n = gen_list[0].n
        for g in gen_list[1:]:
            if g.n != n:
                raise SpaceMismatchError(f"space sizes differ: {g.n} != {n}")
        if n_points is not None and n_points != n:
            raise SpaceMismatchError(f"space sizes differ: {n} != {n_points}")
    elif n_points is None:
        raise ValueError("an empty generator list needs an explicit n_points")
    else:
        n = n_points
    chain = _Chain(n)
    for g in gen_list:
        chain.add(g.images)
    return PermGroup(chain)


def _certificate(
    in_fg: bool, generated_order: int, target_order: int
) -> tuple[bool, dict]:
    ok = in_fg and generated_order == target_order
    cert = {
        "in_full_group": in_fg,
        "generated_order": str(generated_order),
        "full_group_order": str(target_order),
        "generates": ok,
    }
    return ok, cert


def generates_full_group(
    gens: Sequence[Permutation], relation: Partition
) -> tuple[bool, dict]:
    """Decide whether the permutations generate the full group of the relation.

    True iff every generator moves points only within their classes and the
    generated order equals the full-group order.  The certificate records
    both orders as decimal strings.
    """
    gen_list = list(gens)
    for g in gen_list:
        if g.n != relation.n:
            raise SpaceMismatchError(f"space sizes differ: {g.n} != {relation.n}")
    in_fg = all(in_full_group(g, relation) for g in gen_list)
    order = group_from_generators(gen_list, n_points=relation.n).order
    return _certificate(in_fg, order, full_group_order(relation))


def check_join_generation(relations: Sequence[Partition]) -> tuple[bool, dict]:
    """Check that the standard generators of each relation's full group,
    taken together, generate the full group of the join.
    """
    joined = join(relations)
    gens = [g for rel in relations for g in full_group_generators(rel)]
    return generates_full_group(gens, joined)
