"""
Tests for the internally disjoint Steiner tree constructions.

Every constructed tree set is checked with the independent verifier.
"""
from collections import Counter
from itertools import combinations

import pytest

from dual_cube_toolkit.errors import (
    InvalidOrderError,
    InvalidTerminalsError,
    PreconditionError,
    ReservationExhaustedError,
    RoutingError,
    UnsupportedOrderError,
)
from dual_cube_toolkit.oracle import max_stree_packing
from dual_cube_toolkit.shared import build_tree_set_payload, render_tree_set_dot
from dual_cube_toolkit.streeforge import (
    FOUR_TERMINAL_FAMILIES,
    THREE_TERMINAL_FAMILIES,
    ClusterReservation,
    hypercube_strees4,
    prune_to_terminals,
    sample_terminal_sets,
    strees3,
    strees4,
    strees_four_clusters,
    strees_one_cluster,
    strees_three_clusters,
    strees_two_clusters,
    tree_vertices,
)
from dual_cube_toolkit.topology import ClusterRef, DualCube, Hypercube, cluster_of, outside_neighbor
from tests.conftest import test_vars
from tests.test_utils import assert_verified, labels, path_tree, terminal_set

ALL_FOUR_TERMINAL_CASES = {
    "one_cluster",
    "two_cluster.three_one.same_class",
    "two_cluster.three_one.cross_class.pivot_hits_terminal",
    "two_cluster.three_one.cross_class.pivot_in_terminal_cluster",
    "two_cluster.three_one.cross_class.terminal_adjacent",
    "two_cluster.three_one.cross_class.detour_via_terminal",
    "two_cluster.three_one.cross_class.outside_direct",
    "two_cluster.three_one.cross_class.outside_via_neighbor",
    "two_cluster.two_two.same_class.shared",
    "two_cluster.two_two.same_class.disjoint",
    "two_cluster.two_two.cross_class",
    "three_cluster.same_class",
    "three_cluster.one_opposite",
    "three_cluster.two_opposite.pivots",
    "three_cluster.two_opposite.direct_edge",
    "four_cluster.same_class",
    "four_cluster.one_opposite",
    "four_cluster.two_opposite",
}


class TestTerminalSet:
    def test_sorted_and_distinct(self, d4):
        ts = terminal_set(d4, ["1111111", "0000000", "0000010", "0000001"])
        assert [str(v) for v in ts] == ["0000000", "0000001", "0000010", "1111111"]

    def test_duplicate_rejected(self, d4):
        with pytest.raises(InvalidTerminalsError):
            terminal_set(d4, ["0000000", "0000000", "0000010", "1111111"])

    def test_wrong_size_rejected(self, d4):
        with pytest.raises(InvalidTerminalsError):
            terminal_set(d4, ["0000000", "0000010"])

    def test_wrong_width_rejected(self, d4):
        with pytest.raises(InvalidOrderError):
            terminal_set(d4, ["00000", "0000010", "1111111"])

    @pytest.mark.parametrize("texts, profile", [
        (["0000000", "1000000", "0100000", "0010000"], "4"),
        (["0000000", "1000000", "0100000", "0000010"], "3+1 same-class"),
        (["0000000", "1000000", "0100000", "0000001"], "3+1 cross-class"),
        (["0000000", "1000000", "0000010", "1000010"], "2+2 same-class"),
        (["0000000", "1000000", "0000001", "0000011"], "2+2 cross-class"),
        (["0000000", "1000000", "0000010", "0000100"], "2+1+1 same-class"),
        (["0000000", "1000000", "0000010", "0000001"], "2+1+1 one-opposite"),
        (["0000000", "1000000", "0000001", "0010001"], "2+1+1 two-opposite"),
        (["0000000", "0000010", "0000100", "0000110"], "1+1+1+1 same-class"),
    ])
    def test_profile(self, d4, texts, profile):
        assert terminal_set(d4, texts).profile == profile


class TestClusterReservation:
    def test_claims_smallest_free(self, d4):
        reservation = ClusterReservation(d4)
        reservation.block(ClusterRef(1, 0, 4))
        assert reservation.claim(1, 0) == ClusterRef(1, 1, 4)
        assert reservation.claim(1, 1) == ClusterRef(1, 2, 4)
        assert reservation.in_use == {0: {ClusterRef(1, 1, 4)}, 1: {ClusterRef(1, 2, 4)}}

    def test_reserve_conflicts(self, d4):
        reservation = ClusterReservation(d4)
        c = ClusterRef(0, 3, 4)
        reservation.reserve(c, 0)
        assert reservation.reserve(c, 0) == c
        with pytest.raises(RoutingError):
            reservation.reserve(c, 1)
        reservation.block(ClusterRef(0, 4, 4))
        with pytest.raises(RoutingError):
            reservation.reserve(ClusterRef(0, 4, 4), 2)

    def test_exhaustion(self, d4):
        reservation = ClusterReservation(d4)
        for owner in range(8):
            reservation.claim(0, owner)
        with pytest.raises(ReservationExhaustedError):
            reservation.claim(0, 8)


class TestPruning:
    def test_prunes_non_terminal_leaves(self):
        a, b, c, d, e = labels("000", "001", "011", "111", "010")
        tree = path_tree([a, b, c, d]) | path_tree([b, e])
        assert prune_to_terminals(tree, [a, c]) == path_tree([a, b, c])

    def test_keeps_terminal_leaves(self):
        a, b, c = labels("000", "001", "011")
        tree = path_tree([a, b, c])
        assert prune_to_terminals(tree, [a, c]) == tree


class TestHypercubeTrees:
    def test_every_q3_terminal_set(self, q3):
        for terminals in combinations(q3.vertices(), 4):
            tree_set = hypercube_strees4(q3, terminals)
            assert len(tree_set) == 2
            assert_verified(q3, tree_set, count=2)

    def test_q3_optimal_by_packing(self, q3):
        all_sets = list(combinations(q3.vertices(), 4))
        assert len(all_sets) == 70
        for terminals in all_sets:
            result = max_stree_packing(q3, terminals)
            assert result.exact
            assert result.count == 2

    def test_vertex_and_its_neighbours(self, q3):
        terminals = labels("000", "001", "010", "100")
        tree_set = hypercube_strees4(q3, terminals)
        assert_verified(q3, tree_set, count=2)
        assert max_stree_packing(q3, terminals).count == 2

    def test_q4_three_trees(self):
        q4 = Hypercube(4)
        for terminals in [
            labels("0000", "0001", "0010", "0100"),
            labels("0000", "1111", "0110", "1001"),
            labels("0011", "0101", "1010", "1100"),
        ]:
            tree_set = hypercube_strees4(q4, terminals)
            assert_verified(q4, tree_set, count=3)

    def test_rejects_q2(self):
        with pytest.raises(UnsupportedOrderError):
            hypercube_strees4(Hypercube(2), labels("00", "01", "10", "11"))

    def test_rejects_three_terminals(self, q3):
        with pytest.raises(InvalidTerminalsError):
            hypercube_strees4(q3, labels("000", "001", "010"))


class TestStrees4:
    def test_cli_example(self, d4, four_terminals):
        tree_set = strees4(d4, four_terminals)
        assert len(tree_set) == 3
        assert_verified(d4, tree_set)

    def test_requires_order_four(self, d3):
        with pytest.raises(UnsupportedOrderError):
            strees4(d3, ["00000", "00001", "00010", "11111"])

    def test_repeated_vertex(self, d4):
        with pytest.raises(InvalidTerminalsError):
            strees4(d4, ["0000000", "0000000", "0000010", "1111111"])

    def test_three_terminals_rejected(self, d4):
        with pytest.raises(InvalidTerminalsError):
            strees4(d4, ["0000000", "0000010", "1111111"])

    def test_deterministic(self, d4, four_terminals):
        assert strees4(d4, four_terminals) == strees4(d4, four_terminals)

    def test_never_more_than_n_minus_one(self, d5):
        tree_set = strees4(d5, ["000000000", "100000000", "000000010", "111111111"])
        assert len(tree_set) == 4
        assert_verified(d5, tree_set)


class TestOneCluster:
    def test_d4(self, d4):
        ts = terminal_set(d4, ["0000000", "1000000", "0100000", "0010000"])
        tree_set = strees_one_cluster(d4, ts)
        assert tree_set.case == "one_cluster"
        assert_verified(d4, tree_set)
        home = cluster_of(ts.vertices[0])
        # one tree leaves the cluster; its only vertices inside are terminals
        outer = [t for t in tree_set.trees if any(not home.contains(v) for v in tree_vertices(t))]
        assert len(outer) == 1
        inside = {v for v in tree_vertices(outer[0]) if home.contains(v)}
        assert inside == set(ts.vertices)

    def test_d5(self, d5):
        ts = terminal_set(d5, ["000000000", "100000000", "010000000", "111100000"])
        tree_set = strees_one_cluster(d5, ts)
        assert len(tree_set) == 4
        assert_verified(d5, tree_set)

    def test_wrong_shape(self, d4, four_terminals):
        with pytest.raises(PreconditionError):
            strees_one_cluster(d4, four_terminals)


class TestTwoClusters:
    def test_three_one_same_class(self, d4):
        ts = terminal_set(d4, ["0000000", "1000000", "0100000", "0000010"])
        tree_set = strees_two_clusters(d4, ts)
        assert tree_set.case == "two_cluster.three_one.same_class"
        assert_verified(d4, tree_set)

    def test_terminal_adjacent_subcase(self, d4):
        # w is the outside neighbour of a terminal in the other cluster
        ts = terminal_set(d4, ["0000000", "1000000", "0100000", "0000001"])
        tree_set = strees_two_clusters(d4, ts)
        assert tree_set.case == "two_cluster.three_one.cross_class.terminal_adjacent"
        assert_verified(d4, tree_set)

    def test_outside_direct_subcase(self, d4):
        ts = terminal_set(d4, ["1000000", "0100000", "1100000", "1111111"])
        tree_set = strees_two_clusters(d4, ts)
        assert tree_set.case == "two_cluster.three_one.cross_class.outside_direct"
        assert_verified(d4, tree_set)

    def test_two_two_same_class(self, d4):
        ts = terminal_set(d4, ["0000000", "1000000", "0000010", "1000010"])
        tree_set = strees_two_clusters(d4, ts)
        assert tree_set.case.startswith("two_cluster.two_two.same_class.")
        assert_verified(d4, tree_set)

    def test_two_two_cross_class_with_crossing(self, d4):
        # x's outside neighbour is a terminal of the other cluster
        ts = terminal_set(d4, ["0000000", "1000000", "0000001", "0000011"])
        tree_set = strees_two_clusters(d4, ts)
        assert tree_set.case == "two_cluster.two_two.cross_class"
        assert_verified(d4, tree_set)

    def test_d5_two_two(self, d5):
        ts = terminal_set(d5, ["000000000", "110000000", "000000010", "111100010"])
        tree_set = strees_two_clusters(d5, ts)
        assert len(tree_set) == 4
        assert_verified(d5, tree_set)


class TestThreeAndFourClusters:
    def test_three_clusters_same_class(self, d4):
        ts = terminal_set(d4, ["0000000", "1000000", "0000010", "0000100"])
        tree_set = strees_three_clusters(d4, ts)
        assert tree_set.case == "three_cluster.same_class"
        assert_verified(d4, tree_set)

    def test_three_clusters_one_opposite(self, d4):
        ts = terminal_set(d4, ["0000000", "1000000", "0000010", "0000001"])
        tree_set = strees_three_clusters(d4, ts)
        assert tree_set.case == "three_cluster.one_opposite"
        assert_verified(d4, tree_set)

    def test_three_clusters_adjacent_pair_into_terminal_clusters(self, d4):
        x, y = d4.parse("0000000"), d4.parse("1000000")
        z = cluster_of(outside_neighbor(x)).vertices()[3]
        w = cluster_of(outside_neighbor(y)).vertices()[5]
        tree_set = strees_three_clusters(d4, [x, y, z, w])
        assert tree_set.case.startswith("three_cluster.two_opposite.")
        assert_verified(d4, tree_set)

    @pytest.mark.parametrize("texts, case", [
        (["0000000", "0000010", "0000100", "0000110"], "four_cluster.same_class"),
        (["0000000", "0000010", "0000100", "1111111"], "four_cluster.one_opposite"),
        (["0000000", "0000010", "0000001", "1111111"], "four_cluster.two_opposite"),
    ])
    def test_four_clusters(self, d4, texts, case):
        tree_set = strees_four_clusters(d4, texts)
        assert tree_set.case == case
        assert_verified(d4, tree_set)

    def test_d5_two_two_split(self, d5):
        tree_set = strees4(d5, ["000000000", "000000010", "000000001", "111111111"])
        assert len(tree_set) == 4
        assert_verified(d5, tree_set)


class TestStrees3:
    def test_d4(self, d4, three_terminals):
        tree_set = strees3(d4, three_terminals)
        assert len(tree_set) == 3
        assert tree_set.case.startswith("reduced.")
        assert_verified(d4, tree_set)

    def test_auxiliary_vertex_is_not_a_leaf(self, d4, three_terminals):
        tree_set = strees3(d4, three_terminals)
        terminals = set(tree_set.terminals)
        for tree in tree_set.trees:
            degree = Counter(v for edge in tree for v in edge)
            assert all(v in terminals for v, d in degree.items() if d == 1)

    def test_d5_three_clusters(self, d5):
        tree_set = strees3(d5, ["000000000", "000000010", "111111111"])
        assert len(tree_set) == 4
        assert_verified(d5, tree_set)

    def test_requires_three(self, d4, four_terminals):
        with pytest.raises(InvalidTerminalsError):
            strees3(d4, four_terminals)


class TestSampledCensus:
    def test_d4_four_terminal_samples(self, d4):
        count = 2 * len(FOUR_TERMINAL_FAMILIES)
        cases = Counter()
        for ts in sample_terminal_sets(d4, count, size=4, seed=test_vars["seed"]):
            tree_set = strees4(d4, ts)
            assert_verified(d4, tree_set)
            cases[tree_set.case.split(".")[0]] += 1
        assert set(cases) == {"one_cluster", "two_cluster", "three_cluster", "four_cluster"}

    def test_d4_profiles_all_reached(self, d4):
        profiles = {
            ts.profile
            for ts in sample_terminal_sets(d4, 4 * len(FOUR_TERMINAL_FAMILIES), seed=1)
        }
        assert profiles >= {
            "4", "3+1 same-class", "3+1 cross-class", "2+2 same-class", "2+2 cross-class",
            "2+1+1 same-class", "2+1+1 one-opposite", "2+1+1 two-opposite",
            "1+1+1+1 same-class", "1+1+1+1 one-opposite", "1+1+1+1 two-opposite",
        }

    def test_d4_three_terminal_samples(self, d4):
        for ts in sample_terminal_sets(d4, 2 * len(THREE_TERMINAL_FAMILIES), size=3, seed=3):
            assert_verified(d4, strees3(d4, ts))

    def test_d5_samples(self, d5):
        for ts in sample_terminal_sets(d5, len(FOUR_TERMINAL_FAMILIES), seed=11):
            tree_set = strees4(d5, ts)
            assert len(tree_set) == 4
            assert_verified(d5, tree_set)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [4, 5])
    def test_full_census(self, n):
        cube = DualCube(n)
        cases = Counter()
        for ts in sample_terminal_sets(cube, 510, seed=n):
            tree_set = strees4(cube, ts)
            assert_verified(cube, tree_set)
            cases[tree_set.case] += 1
        assert sum(cases.values()) == 510
        assert set(cases) <= ALL_FOUR_TERMINAL_CASES

    @pytest.mark.slow
    def test_census_reaches_every_case(self):
        cases = Counter()
        for n in (4, 5):
            cube = DualCube(n)
            for seed in range(6):
                for ts in sample_terminal_sets(cube, 510, seed=seed):
                    cases[strees4(cube, ts).case] += 1
        assert set(cases) == ALL_FOUR_TERMINAL_CASES

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [4, 5])
    def test_three_terminal_census(self, n):
        cube = DualCube(n)
        samples = sample_terminal_sets(cube, 300, size=3, seed=n)
        for ts in samples:
            tree_set = strees3(cube, ts)
            assert len(tree_set) == n - 1
            assert tree_set.case.startswith("reduced.")
            assert_verified(cube, tree_set)
        assert {len(ts.vertices) for ts in samples} == {3}

    def test_sampling_is_deterministic(self, d4):
        assert sample_terminal_sets(d4, 20, seed=5) == sample_terminal_sets(d4, 20, seed=5)

    def test_sample_size_checked(self, d4):
        with pytest.raises(PreconditionError):
            sample_terminal_sets(d4, 3, size=5)


class TestTreeSetOutput:
    def test_payload(self, d4, four_terminals):
        payload = build_tree_set_payload(strees4(d4, four_terminals))
        assert payload["n"] == 4
        assert payload["terminals"] == list(four_terminals)
        assert len(payload["trees"]) == 3
        assert all(len(edge) == 2 for tree in payload["trees"] for edge in tree)

    def test_dot_colours_each_tree(self, d4, four_terminals):
        dot = render_tree_set_dot(strees4(d4, four_terminals))
        assert 'label="T1"' in dot and 'label="T3"' in dot
        assert dot.count("shape=box") == 4

    def test_client_build(self, client, four_terminals, three_terminals):
        assert len(client.trees.build(four_terminals)) == 3
        assert len(client.trees.build(three_terminals)) == 3
        with pytest.raises(InvalidTerminalsError):
            client.trees.build(four_terminals[:2])
