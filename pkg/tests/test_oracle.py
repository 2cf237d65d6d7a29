"""Exhaustive-search ground truth: frozen optima, caps, and parallel parity."""

import itertools
from fractions import Fraction

import pytest

from helpers import all_partitions
from orbitlab import (
    Graphing,
    Partition,
    Permutation,
    SearchSpaceTooLargeError,
    brute_min_generating_support,
    brute_min_generators,
    brute_min_graphing_cost,
    cost_graphing,
    cost_relation,
    full_group_elements,
    full_group_order,
    generate_relation,
    group_from_generators,
    naive_closure,
    naive_group_order,
)


class TestBruteMinGraphingCost:
    def test_single_class_on_four_points(self):
        res = brute_min_graphing_cost(Partition.single_class(4))
        assert res.optimum == Fraction(3, 4)
        assert res.search_space_size == 64
        assert res.exhaustive
        # first witness in subset order is the star at point 0
        pairs = tuple(mp.pairs[0] for mp in res.witness.maps)
        assert pairs == ((0, 1), (0, 2), (0, 3))

    def test_two_pair_classes(self):
        rel = Partition.from_classes(4, [[0, 1], [2, 3]])
        res = brute_min_graphing_cost(rel)
        assert res.optimum == Fraction(1, 2)
        assert generate_relation(res.witness) == rel

    def test_singletons_cost_nothing(self):
        res = brute_min_graphing_cost(Partition.singletons(3))
        assert res.optimum == 0
        assert res.witness == Graphing(3, ())
        assert res.search_space_size == 8

    def test_optimum_equals_relation_cost_everywhere(self):
        # the brute-force route and the closed form agree on every
        # partition of up to 5 points
        for n in range(1, 6):
            for rel in all_partitions(n):
                res = brute_min_graphing_cost(rel)
                assert res.optimum == cost_relation(rel)
                assert generate_relation(res.witness) == rel
                assert cost_graphing(res.witness) == res.optimum

    def test_refuses_beyond_six_points(self):
        with pytest.raises(SearchSpaceTooLargeError):
            brute_min_graphing_cost(Partition.single_class(7))


class TestFullGroupElements:
    def test_counts_match_orders(self):
        for n in range(1, 5):
            for rel in all_partitions(n):
                elems = full_group_elements(rel)
                assert len(elems) == full_group_order(rel)
                assert len(set(elems)) == len(elems)

    def test_sorted_by_image_array(self):
        elems = full_group_elements(Partition.single_class(3))
        assert [e.images for e in elems] == sorted(e.images for e in elems)

    def test_elements_preserve_classes(self):
        rel = Partition.from_classes(4, [[0, 1], [2, 3]])
        for g in full_group_elements(rel):
            for x in range(4):
                assert rel.same(x, g(x))


class TestBruteMinGenerators:
    def test_trivial_relation(self):
        res = brute_min_generators(Partition.singletons(4))
        assert res.optimum == 0
        assert res.witness == ()
        assert res.search_space_size == 1
        assert res.exhaustive

    def test_two_point_class(self):
        res = brute_min_generators(Partition.from_classes(2, [[0, 1]]))
        assert res.optimum == 1
        assert res.witness == (Permutation((1, 0)),)

    def test_symmetric_group_on_four_points(self):
        res = brute_min_generators(Partition.single_class(4))
        assert res.optimum == 2
        assert tuple(p.images for p in res.witness) == ((0, 1, 3, 2), (1, 2, 0, 3))
        assert res.search_space_size == 39
        assert res.exhaustive

    def test_witness_generates_the_full_group(self):
        for n in range(1, 5):
            for rel in all_partitions(n):
                res = brute_min_generators(rel)
                order = group_from_generators(
                    res.witness, n_points=n
                ).order
                assert order == full_group_order(rel)

    def test_minimality_against_unreduced_scan(self):
        # independent check on 3 points: no shorter tuple generates
        for rel in all_partitions(3):
            res = brute_min_generators(rel)
            if res.optimum == 0:
                continue
            shorter = res.optimum - 1
            elems = full_group_elements(rel)
            for tup in itertools.product(elems, repeat=shorter):
                order = naive_group_order(tup) if tup else 1
                assert order < full_group_order(rel)

    def test_refuses_beyond_five_points(self):
        with pytest.raises(SearchSpaceTooLargeError):
            brute_min_generators(Partition.single_class(6))


class TestBruteMinGeneratingSupport:
    def test_symmetric_group_on_four_points_pairs(self):
        res = brute_min_generating_support(Partition.single_class(4), 2)
        assert res.optimum == Fraction(5, 4)
        assert tuple(p.images for p in res.witness) == ((0, 1, 3, 2), (1, 2, 0, 3))
        assert res.search_space_size == 24 ** 2
        assert res.comparison == {
            "relation_cost": "3/4",
            "gap": "1/2",
            "strictly_above_cost": True,
        }

    def test_single_generator_cannot_give_sym3(self):
        res = brute_min_generating_support(Partition.single_class(3), 1)
        assert res.optimum is None
        assert res.witness is None
        assert res.exhaustive
        assert res.comparison == {
            "relation_cost": "2/3",
            "gap": None,
            "strictly_above_cost": None,
        }

    def test_two_point_class_single_generator(self):
        res = brute_min_generating_support(Partition.from_classes(2, [[0, 1]]), 1)
        assert res.optimum == 1
        assert res.comparison["strictly_above_cost"] is True

    def test_zero_tuple_only_generates_trivial(self):
        res = brute_min_generating_support(Partition.singletons(3), 0)
        assert res.optimum == 0 and res.witness == ()
        assert res.comparison == {
            "relation_cost": "0/1",
            "gap": "0/1",
            "strictly_above_cost": False,
        }
        res = brute_min_generating_support(Partition.single_class(3), 0)
        assert res.optimum is None

    def test_optimum_strictly_above_cost_on_symmetric_groups(self):
        expected = {3: Fraction(4, 3), 4: Fraction(5, 4), 5: Fraction(6, 5)}
        for n, value in expected.items():
            res = brute_min_generating_support(Partition.single_class(n), 2)
            assert res.optimum == value
            assert res.comparison["strictly_above_cost"] is True
            assert res.optimum > cost_relation(Partition.single_class(n))

    def test_longer_tuples_never_cost_more(self):
        rel = Partition.single_class(4)
        one = brute_min_generating_support(rel, 1)
        two = brute_min_generating_support(rel, 2)
        assert one.optimum is None or two.optimum <= one.optimum

    def test_witnesses_generate(self):
        for n in range(2, 5):
            for rel in all_partitions(n):
                res = brute_min_generating_support(rel, 2)
                if res.optimum is None:
                    continue
                got = group_from_generators(res.witness, n_points=n).order
                assert got == full_group_order(rel)

    def test_caps(self):
        with pytest.raises(SearchSpaceTooLargeError):
            brute_min_generating_support(Partition.single_class(6), 1)
        with pytest.raises(SearchSpaceTooLargeError):
            brute_min_generating_support(Partition.single_class(3), 3)
        with pytest.raises(SearchSpaceTooLargeError):
            brute_min_generating_support(Partition.single_class(3), -1)

    def test_parallel_and_serial_agree(self, monkeypatch):
        rel = Partition.single_class(5)  # 120^2 tuples, several chunks
        monkeypatch.setenv("ORBITLAB_THREADS", "1")
        serial = brute_min_generating_support(rel, 2)
        monkeypatch.setenv("ORBITLAB_THREADS", "4")
        parallel = brute_min_generating_support(rel, 2)
        assert serial == parallel

    def test_thread_cap_must_be_integer(self, monkeypatch):
        monkeypatch.setenv("ORBITLAB_THREADS", "many")
        with pytest.raises(ValueError, match="ORBITLAB_THREADS"):
            brute_min_generating_support(Partition.single_class(3), 1)

    def test_json_serialization_of_results(self):
        res = brute_min_generating_support(Partition.single_class(3), 2)
        data = res.to_json_dict()
        assert data["optimum"] == "4/3"
        assert isinstance(data["witness"], list)
        assert data["comparison"]["relation_cost"] == "2/3"
        empty = brute_min_generating_support(Partition.single_class(3), 1)
        assert empty.to_json_dict()["optimum"] is None
        cost = brute_min_graphing_cost(Partition.single_class(3))
        assert cost.to_json_dict()["witness"] == {
            "n": 3,
            "maps": [
                {"n": 3, "pairs": [[0, 1]]},
                {"n": 3, "pairs": [[0, 2]]},
            ],
        }


class TestNaiveClosureCap:
    def test_cap_is_enforced(self):
        gens = (
            Permutation.from_cycles(6, [tuple(range(6))]),
            Permutation.from_cycles(6, [(0, 1)]),
        )
        with pytest.raises(SearchSpaceTooLargeError):
            naive_closure(gens, cap=10)

    def test_identity_closure_without_generators(self):
        assert naive_closure((), n_points=3) == {(0, 1, 2)}
