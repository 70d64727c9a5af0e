"""
Tests for the brute-force oracles.
"""
import pytest

from dual_cube_toolkit.errors import BudgetExceededError, PreconditionError
from dual_cube_toolkit.oracle import (
    Check,
    VerificationReport,
    component_sizes,
    exhaustive_cut_search,
    max_stree_packing,
    probe_packing,
    vertex_connectivity,
    verify_tree_set,
)
from dual_cube_toolkit.shared import build_report_payload
from dual_cube_toolkit.compcut import component_cut, cut_size_formula
from dual_cube_toolkit.streeforge import strees4
from dual_cube_toolkit.topology import AdjacencyGraph, DualCube, Hypercube
from tests.test_utils import LooseTreeSet, labels, path_tree, with_shared_vertex, without_terminal


class TestVertexConnectivity:
    @pytest.mark.parametrize("graph, expected", [
        (Hypercube(3), 3),
        (Hypercube(4), 4),
        (DualCube(2), 2),
        (DualCube(3), 3),
    ])
    def test_known_values(self, graph, expected):
        assert vertex_connectivity(graph) == expected

    @pytest.mark.slow
    def test_d4(self, d4):
        assert vertex_connectivity(d4) == 4

    def test_complete_graph(self):
        graph = AdjacencyGraph.from_edges([("00", "01"), ("00", "10"), ("01", "10")])
        assert vertex_connectivity(graph) == 2

    def test_disconnected(self):
        graph = AdjacencyGraph.from_edges([("00", "01"), ("10", "11")])
        with pytest.raises(PreconditionError):
            vertex_connectivity(graph)


class TestVerifyTreeSet:
    def test_constructed_set_passes(self, d4, four_terminals):
        report = verify_tree_set(d4, strees4(d4, four_terminals), expected_count=3)
        assert report.overall
        assert report.details["count"] == 3

    def test_shared_vertex_has_witness(self, d4, four_terminals):
        broken = with_shared_vertex(strees4(d4, four_terminals))
        report = verify_tree_set(d4, broken)
        failed = {c.name: c for c in report.failures()}
        assert "shared-vertex" in failed
        assert failed["shared-vertex"].scope == "trees 0,1"
        assert failed["shared-vertex"].witness not in broken.terminals

    def test_missing_terminal(self, d4, four_terminals):
        tree_set = strees4(d4, four_terminals)
        w = tree_set.terminals.vertices[-1]
        report = verify_tree_set(d4, without_terminal(tree_set, w))
        failed = {c.name: c for c in report.failures()}
        assert failed["terminal-missing"].witness == w

    def test_edge_not_in_graph(self, q3):
        a, b, c = labels("000", "011", "111")
        report = verify_tree_set(q3, LooseTreeSet([a, c], [path_tree([a, b, c])]))
        assert "edge-missing" in {c.name for c in report.failures()}

    def test_cycle_detected(self, q3):
        a, b, c, d = labels("000", "001", "011", "010")
        report = verify_tree_set(q3, LooseTreeSet([a, c], [path_tree([a, b, c, d, a])]))
        assert "cycle" in {c.name for c in report.failures()}

    def test_shared_edge_between_terminals(self, q3):
        a, b, c = labels("000", "001", "011")
        report = verify_tree_set(q3, LooseTreeSet([a, b, c], [path_tree([a, b, c]), path_tree([a, b, c])]))
        names = {c.name for c in report.failures()}
        assert "shared-edge" in names
        assert "shared-vertex" not in names

    def test_tree_count(self, q3):
        a, b = labels("000", "001")
        report = verify_tree_set(q3, LooseTreeSet([a, b], [path_tree([a, b])]), expected_count=2)
        assert [c.name for c in report.failures()] == ["tree-count"]

    def test_report_payload(self, d4, four_terminals):
        broken = with_shared_vertex(strees4(d4, four_terminals))
        payload = build_report_payload(verify_tree_set(d4, broken))
        assert payload["overall"] is False
        witnesses = [c["witness"] for c in payload["checks"] if not c["passed"]]
        assert all(isinstance(w, (str, list)) for w in witnesses)

    def test_overall_is_conjunction(self):
        report = VerificationReport("x", (Check("a", True), Check("b", False, "s", 1)))
        assert not report.overall
        assert report.failures() == [Check("b", False, "s", 1)]


class TestPacking:
    def test_q3_four_vertices(self, q3):
        terminals = labels("000", "011", "101", "110")
        result = max_stree_packing(q3, terminals)
        assert result.count == 2
        assert result.exact
        assert result.upper_bound == 3
        assert_packing(q3, terminals, result)

    def test_q2_all_vertices(self):
        q2 = Hypercube(2)
        result = max_stree_packing(q2, q2.vertices())
        assert result.count == 1
        assert result.exact

    def test_star_leaves(self):
        star = AdjacencyGraph.from_edges([("00", "01"), ("00", "10"), ("00", "11")])
        result = max_stree_packing(star, labels("01", "10", "11"))
        assert result.count == 1
        assert result.upper_bound == 1

    def test_d2_pair(self, d2):
        terminals = labels("000", "011")
        result = max_stree_packing(d2, terminals)
        assert result.count == 2
        assert_packing(d2, terminals, result)

    def test_greedy_above_limit(self, d3):
        terminals = labels("00000", "00001", "11110", "11111")
        result = max_stree_packing(d3, terminals)
        assert not result.exact
        assert 1 <= result.count <= result.upper_bound
        assert_packing(d3, terminals, result)

    def test_dense_terminals_fall_back_to_greedy(self):
        q4 = Hypercube(4)
        terminals = [v for v in q4.vertices() if str(v).startswith("0")]
        result = max_stree_packing(q4, terminals)
        assert not result.exact
        assert 1 <= result.count <= result.upper_bound == 4
        assert_packing(q4, terminals, result)

    def test_tiny_budget_falls_back_to_greedy(self, q3):
        terminals = labels("000", "011", "101", "110")
        result = max_stree_packing(q3, terminals, budget=1)
        assert not result.exact
        assert result.count >= 1
        assert_packing(q3, terminals, result)

    def test_d4_lower_bound_certified(self, d4, four_terminals):
        built = strees4(d4, four_terminals)
        result = max_stree_packing(d4, built.terminals)
        assert result.upper_bound >= len(built)
        assert result.count <= result.upper_bound

    def test_probe_five_terminals(self, d3):
        result = probe_packing(d3, labels("00000", "00011", "01100", "10101", "11111"))
        assert not result.exact
        assert result.count <= result.upper_bound

    def test_needs_two_terminals(self, q3):
        with pytest.raises(PreconditionError):
            max_stree_packing(q3, labels("000"))


def assert_packing(graph, terminals, result):
    report = verify_tree_set(graph, LooseTreeSet(terminals, result.trees))
    assert report.overall, [c.name for c in report.failures()]


class TestExhaustiveCutSearch:
    def test_d3_no_small_disconnecting_set(self, d3):
        assert exhaustive_cut_search(d3, 2, 1) is None

    @pytest.mark.slow
    def test_d3_no_three_way_split_with_three(self, d3):
        assert exhaustive_cut_search(d3, 3, 2) is None

    def test_d3_witness_at_formula(self, d3):
        witness = exhaustive_cut_search(d3, cut_size_formula(3, 2), 2)
        assert witness is not None
        assert len(component_sizes(d3, witness)) >= 3

    def test_d2_lower_bound(self, d2):
        assert exhaustive_cut_search(d2, 1, 1) is None
        assert exhaustive_cut_search(d2, 2, 1) is not None

    def test_constructed_cut_qualifies(self, d3):
        assert len(component_sizes(d3, component_cut(d3, 2).removed)) >= 3

    def test_budget_refusal(self, d4):
        with pytest.raises(BudgetExceededError):
            exhaustive_cut_search(d4, 5, 2, budget=1000)


class TestOracleClient:
    def test_client(self, client, four_terminals):
        tree_set = client.trees.strees4(four_terminals)
        assert client.oracle.verify_tree_set(tree_set).overall
        payload = client.oracle.to_payload(client.oracle.verify_tree_set(tree_set))
        assert payload["overall"] is True

    def test_client_probe_accepts_bit_strings(self, client):
        result = client.oracle.probe_packing(["0000000", "0000011", "0110000", "1010101", "1111111"])
        assert not result.exact
        assert result.count <= result.upper_bound
