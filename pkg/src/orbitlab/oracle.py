"""Brute-force ground truth at tiny sizes.

Everything here certifies optima by enumeration, independently of the
stabilizer-chain engine, so the two routes can be checked against each
other.  Hard size caps refuse rather than approximate: a result marked
exhaustive is a true optimum.

Search order and tie-breaking are fixed (lexicographic over image arrays,
first witness at the optimum), and the parallel path aggregates chunk
results by (value, candidate index) minimum, so parallel and serial runs
return identical results.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import PartialInjection, Permutation
from .group_engine import group_from_generators
from .relations import Graphing, Partition, cost_relation

MAX_COST_POINTS = 6
MAX_GROUP_POINTS = 5
MAX_SUPPORT_TUPLE = 2
_PARALLEL_CHUNK = 2048


class SearchSpaceTooLargeError(ValueError):
    """The requested exhaustive search exceeds the hard size caps."""


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one exhaustive search.

    ``optimum`` is None when no feasible configuration exists.  ``witness``
    is the first configuration attaining the optimum in enumeration order.
    ``search_space_size`` counts the candidates the search examined, and
    ``exhaustive`` is True only when that examination certifies the
    optimum: every candidate that could have beaten it was enumerated.
    """

    optimum: Fraction | int | None
    witness: object
    search_space_size: int
    exhaustive: bool
    comparison: dict | None = None

    def to_json_dict(self) -> dict:
        if self.optimum is None:
            opt = None
        elif isinstance(self.optimum, Fraction):
            opt = _frac_str(self.optimum)
        else:
            opt = self.optimum
        if self.witness is None:
            wit = None
        elif isinstance(self.witness, Graphing):
            wit = self.witness.to_json_dict()
        else:
            wit = [p.to_json_dict() for p in self.witness]
        return {
            "optimum": opt,
            "witness": wit,
            "search_space_size": self.search_space_size,
            "exhaustive": self.exhaustive,
            "comparison": self.comparison,
        }


@lru_cache(maxsize=None)
def _min_edge_table(n: int) -> dict[tuple[int, ...], tuple[int, tuple[tuple[int, int], ...]]]:
    """For every partition of n points: fewest edges whose components are
    exactly its classes, with the first such edge set in subset order.

    Built by one full scan of all 2^(n choose 2) edge subsets.
    """
    edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
    table: dict[tuple[int, ...], tuple[int, tuple[tuple[int, int], ...]]] = {}
    for mask in range(1 << len(edges)):
        chosen = [edges[i] for i in range(len(edges)) if mask >> i & 1]
        key = Partition.from_pairs(n, chosen).class_id
        count = len(chosen)
        best = table.get(key)
        if best is None or count < best[0]:
            table[key] = (count, tuple(chosen))
    return table


def brute_min_graphing_cost(relation: Partition) -> SearchResult:
    """Minimum cost over all single-edge-map graphings generating the relation.

    Fully enumerates every subset of the n(n-1)/2 possible edges, so the
    space size is 2^(n choose 2); refuses beyond n = 6.
    """
    n = relation.n
    if n > MAX_COST_POINTS:
        raise SearchSpaceTooLargeError(
            f"exhaustive edge-subset search is capped at {MAX_COST_POINTS} points, got {n}"
        )
    count, chosen = _min_edge_table(n)[relation.class_id]
    witness = Graphing(
        n, tuple(PartialInjection(n, (pair,)) for pair in chosen)
    )
    return SearchResult(
        optimum=Fraction(count, n),
        witness=witness,
        search_space_size=1 << (n * (n - 1) // 2),
        exhaustive=True,
    )


def full_group_elements(relation: Partition) -> tuple[Permutation, ...]:
    """All elements of the relation's full group, sorted by image array."""
    classes = relation.classes()
    per_class = [list(itertools.permutations(c)) for c in classes]
    out = []
    for combo in itertools.product(*per_class):
        images = list(range(relation.n))
        for cls_pts, targets in zip(classes, combo):
            for src, dst in zip(cls_pts, targets):
                images[src] = dst
        out.append(tuple(images))
    out.sort()
    return tuple(Permutation(img) for img in out)


def _conjugacy_representatives(elements: tuple[Permutation, ...]) -> list[Permutation]:
    """Lex-least representative of each orbit under conjugation by the group."""
    raw = [g.images for g in elements]
    inverses = {p: tuple(sorted(range(len(p)), key=p.__getitem__)) for p in raw}
    reps = []
    seen: set[tuple[int, ...]] = set()
    for g in raw:
        if g in seen:
            continue
        reps.append(Permutation(g))
        for h in raw:
            h_inv = inverses[h]
            conj = tuple(h[g[h_inv[x]]] for x in range(len(g)))
            seen.add(conj)
    return reps


def brute_min_generators(relation: Partition) -> SearchResult:
    """Least t such that some t-tuple from the full group generates it.

    The first tuple element ranges over conjugacy representatives only:
    conjugating a generating tuple by a group element yields another one,
    so this loses no candidates for the decision at each t.  Remaining
    positions range over the whole group in lexicographic order.
    """
    n = relation.n
    if n > MAX_GROUP_POINTS:
        raise SearchSpaceTooLargeError(
            f"full-group enumeration is capped at {MAX_GROUP_POINTS} points, got {n}"
        )
    elements = full_group_elements(relation)
    full_order = len(elements)
    examined = 1
    if full_order == 1:
        return SearchResult(
            optimum=0, witness=(), search_space_size=examined, exhaustive=True
        )
    reps = _conjugacy_representatives(elements)
    for t in range(1, 4):
        for first in reps:
            for rest in itertools.product(elements, repeat=t - 1):
                examined += 1
                tup = (first,) + rest
                if group_from_generators(tup).order == full_order:
                    return SearchResult(
                        optimum=t,
                        witness=tup,
                        search_space_size=examined,
                        exhaustive=True,
                    )
    raise RuntimeError(
        f"no generating tuple of size <= 3 found for a group of order {full_order}"
    )  # pragma: no cover - direct products of symmetric groups need at most 2


def _scan_support_range(args):
    """Evaluate candidate tuples [start, stop); return the chunk's best.

    Candidates are flat indices into the t-fold lexicographic product of
    the group elements.  Returns (support_sum, flat_index, images_tuple)
    or None when nothing in the chunk generates.
    """
    raw_elements, supports, t, full_order, start, stop = args
    length = len(raw_elements)
    perms = [Permutation(img) for img in raw_elements]
    best: tuple[int, int, tuple] | None = None
    for flat in range(start, stop):
        idx = flat
        total = 0
        picks = []
        for _ in range(t):
            idx, r = divmod(idx, length)
            picks.append(r)
        picks.reverse()
        for r in picks:
            total += supports[r]
        if best is not None and total >= best[0]:
            continue
        tup = tuple(perms[r] for r in picks)
        if group_from_generators(tup).order == full_order:
            best = (total, flat, tuple(raw_elements[r] for r in picks))
    return best


def _thread_cap() -> int:
    raw = os.environ.get("ORBITLAB_THREADS", "").strip()
    if raw:
        try:
            cap = int(raw)
        except ValueError as exc:
            raise ValueError(f"ORBITLAB_THREADS must be an integer, got {raw!r}") from exc
        return max(1, cap)
    return max(1, os.cpu_count() or 1)


def brute_min_generating_support(relation: Partition, t: int) -> SearchResult:
    """Minimum support-measure sum over generating t-tuples from the full group.

    Enumerates all |G|^t tuples.  The comparison block reports the
    relation's cost, the gap, and whether the optimum sits strictly above
    it; an infeasible search (no generating t-tuple) yields optimum None.
    """
    n = relation.n
    if n > MAX_GROUP_POINTS:
        raise SearchSpaceTooLargeError(
            f"full-group enumeration is capped at {MAX_GROUP_POINTS} points, got {n}"
        )
    if t < 0 or t > MAX_SUPPORT_TUPLE:
        raise SearchSpaceTooLargeError(
            f"tuple length must be between 0 and {MAX_SUPPORT_TUPLE}, got {t}"
        )
    elements = full_group_elements(relation)
    full_order = len(elements)
    rel_cost = cost_relation(relation)

    def result(best: tuple[int, int, tuple] | None, space: int) -> SearchResult:
        if best is None:
            comparison = {
                "relation_cost": _frac_str(rel_cost),
                "gap": None,
                "strictly_above_cost": None,
            }
            return SearchResult(
                optimum=None,
                witness=None,
                search_space_size=space,
                exhaustive=True,
                comparison=comparison,
            )
        total, _, images = best
        optimum = Fraction(total, n)
        comparison = {
            "relation_cost": _frac_str(rel_cost),
            "gap": _frac_str(optimum - rel_cost),
            "strictly_above_cost": optimum > rel_cost,
        }
        return SearchResult(
            optimum=optimum,
            witness=tuple(Permutation(img) for img in images),
            search_space_size=space,
            exhaustive=True,
            comparison=comparison,
        )

    if t == 0:
        best = (0, 0, ()) if full_order == 1 else None
        return result(best, 1)

    raw_elements = tuple(g.images for g in elements)
    supports = tuple(sum(1 for x, y in enumerate(img) if x != y) for img in raw_elements)
    space = len(elements) ** t
    chunks = [
        (raw_elements, supports, t, full_order, lo, min(lo + _PARALLEL_CHUNK, space))
        for lo in range(0, space, _PARALLEL_CHUNK)
    ]
    threads = _thread_cap()
    bests = None
    if threads > 1 and len(chunks) > 1:
        try:
            with ProcessPoolExecutor(max_workers=min(threads, len(chunks))) as pool:
                bests = list(pool.map(_scan_support_range, chunks))
        except (OSError, RuntimeError):
            bests = None  # fall back to the serial scan
    if bests is None:
        bests = [_scan_support_range(chunk) for chunk in chunks]
    best = None
    for candidate in bests:
        if candidate is None:
            continue
        if best is None or (candidate[0], candidate[1]) < (best[0], best[1]):
            best = candidate
    return result(best, space)


def naive_closure(gens, n_points: int | None = None, cap: int = 100_000) -> frozenset:
    """All products of the generators, as raw image tuples, by breadth-first
    closure.  Independent of the stabilizer-chain engine.
    """
    gen_list = [g.images for g in gens]
    if gen_list:
        n = len(gen_list[0])
    elif n_points is None:
        raise ValueError("an empty generator list needs an explicit n_points")
    else:
        n = n_points
    identity = tuple(range(n))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gen_list:
                q = tuple(map(g.__getitem__, p))
                if q not in seen:
                    if len(seen) >= cap:
                        raise SearchSpaceTooLargeError(
                            f"closure exceeded {cap} elements"
                        )
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return frozenset(seen)


def naive_group_order(gens, n_points: int | None = None) -> int:
    return len(naive_closure(gens, n_points))
