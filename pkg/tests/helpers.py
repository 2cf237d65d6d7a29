"""Shared deterministic generators for the test suites."""

from __future__ import annotations

import random

from orbitlab import Graphing, PartialInjection, Partition, Permutation, PrePCycle


def random_precycle(
    rng: random.Random, n_max: int = 64, p_max: int = 9, m_max: int | None = None
) -> PrePCycle:
    """A random valid chain: p-1 maps over p disjoint same-size stations."""
    p = rng.randint(2, p_max)
    cap = max(1, n_max // p)
    if m_max is not None:
        cap = min(cap, m_max)
    m = rng.randint(1, cap)
    need = p * m
    n = rng.randint(max(2, need), n_max)
    pts = rng.sample(range(n), need)
    stations = [pts[j * m : (j + 1) * m] for j in range(p)]
    maps = []
    for j in range(p - 1):
        dst = stations[j + 1][:]
        rng.shuffle(dst)
        maps.append(PartialInjection(n, tuple(zip(stations[j], dst))))
    return PrePCycle(n, tuple(maps))


def random_partition(rng: random.Random, n: int) -> Partition:
    """A uniform-ish random partition via random sequential class assignment."""
    ids: list[int] = []
    roots: list[int] = []
    for x in range(n):
        if not roots or rng.random() < 0.45:
            roots.append(x)
            ids.append(x)
        else:
            ids.append(rng.choice(roots))
    return Partition(tuple(ids))


def random_permutation(rng: random.Random, n: int) -> Permutation:
    images = list(range(n))
    rng.shuffle(images)
    return Permutation(tuple(images))


def random_graphing(rng: random.Random, n: int, n_maps: int, map_size: int) -> Graphing:
    maps = []
    for _ in range(n_maps):
        size = rng.randint(0, map_size)
        sources = rng.sample(range(n), min(size, n))
        targets = rng.sample(range(n), min(size, n))
        maps.append(PartialInjection(n, tuple(zip(sources, targets))))
    return Graphing(n, tuple(maps))


def all_partitions(n: int):
    """Every partition of {0..n-1}, by restricted-growth strings."""

    def grow(prefix: list[int]):
        if len(prefix) == n:
            yield Partition(tuple(prefix))
            return
        x = len(prefix)
        for root in sorted(set(prefix)):
            yield from grow(prefix + [root])
        yield from grow(prefix + [x])

    if n >= 1:
        yield from grow([0])
