"""
Brute-force ground truth.

Everything here is computed with networkx and plain enumeration, never with
the routing code it is used to check. Exhaustive searches carry explicit
size guards and refuse (or degrade to a flagged lower bound) rather than run
unbounded.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .errors import BudgetExceededError, PreconditionError
from .topology import DualCube, Edge, Graph, Label, normalize_edge

logger = logging.getLogger(__name__)

EXHAUSTIVE_PACKING_VERTICES = 16
DEFAULT_PACKING_BUDGET = 20_000
DEFAULT_CUT_BUDGET = 100_000


@dataclass(frozen=True)
class Check:
    """
    One verification check.

    ``name`` is the failure mode being ruled out (``"terminal-missing"``,
    ``"shared-vertex"``, ...); ``witness`` holds the offending vertex, edge
    or set when the check fails.
    """

    name: str
    passed: bool
    scope: str = ""
    witness: Any = None


@dataclass(frozen=True)
class VerificationReport:
    subject: str
    checks: Tuple[Check, ...]
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> List[Check]:
        return [check for check in self.checks if not check.passed]


def vertex_connectivity(graph: Graph) -> int:
    """
    Exact vertex connectivity by networkx's flow-based Menger computation.

    A complete graph on p vertices gets p - 1.

    Raises:
        PreconditionError: If the graph is disconnected
    """
    g = graph.to_networkx()
    if g.number_of_nodes() > 1 and not nx.is_connected(g):
        raise PreconditionError("vertex connectivity needs a connected graph")
    return nx.node_connectivity(g)


def verify_tree_set(graph: Graph, tree_set, expected_count: Optional[int] = None) -> VerificationReport:
    """
    Check a tree set against the definition of internally disjoint S-trees.

    Per tree: every edge exists, the tree is connected and acyclic, and every
    terminal is present. Per pair of trees: the shared vertices are exactly
    the terminals and no edge is shared. Failures are report entries with
    witnesses, never exceptions.

    Args:
        graph: Host graph
        tree_set: Object with ``terminals`` and ``trees`` (edge collections)
        expected_count: Number of trees claimed, checked when given

    Returns:
        VerificationReport
    """
    terminals = frozenset(tree_set.terminals)
    checks: List[Check] = []
    vertex_sets = []

    for index, tree in enumerate(tree_set.trees):
        scope = f"tree {index}"
        edges = [normalize_edge(u, v) for u, v in tree]
        missing_edge = next((e for e in edges if not graph.has_edge(*e)), None)
        checks.append(Check("edge-missing", missing_edge is None, scope, missing_edge))

        g = nx.Graph()
        g.add_edges_from(edges)
        vertices = frozenset(g.nodes)
        vertex_sets.append(vertices)

        absent = sorted(terminals - vertices)
        checks.append(Check("terminal-missing", not absent, scope, absent[0] if absent else None))

        connected = g.number_of_nodes() > 0 and nx.is_connected(g)
        stray = None
        if not connected and g.number_of_nodes() > 0:
            components = sorted(nx.connected_components(g), key=min)
            stray = min(components[1])
        checks.append(Check("disconnected", connected, scope, stray))

        cycle = None
        if not nx.is_forest(g):
            cycle = [u for u, _ in nx.find_cycle(g)]
        checks.append(Check("cycle", cycle is None, scope, cycle))

    trees = list(tree_set.trees)
    for i, j in combinations(range(len(trees)), 2):
        scope = f"trees {i},{j}"
        shared = sorted((vertex_sets[i] & vertex_sets[j]) - terminals)
        checks.append(Check("shared-vertex", not shared, scope, shared[0] if shared else None))
        common_edges = sorted(
            {normalize_edge(u, v) for u, v in trees[i]}
            & {normalize_edge(u, v) for u, v in trees[j]}
        )
        checks.append(
            Check("shared-edge", not common_edges, scope, common_edges[0] if common_edges else None)
        )

    if expected_count is not None:
        checks.append(
            Check("tree-count", len(trees) == expected_count, "tree set",
                  None if len(trees) == expected_count else len(trees))
        )

    subject = "trees for " + ",".join(str(t) for t in sorted(terminals))
    return VerificationReport(subject, tuple(checks), {"count": len(trees)})


@dataclass(frozen=True)
class PackingResult:
    """
    Number of internally disjoint S-trees found.

    ``exact`` is False when the count is only a lower bound from greedy
    search. ``upper_bound`` is the smallest terminal degree.
    """

    count: int
    exact: bool
    upper_bound: int
    trees: Tuple[FrozenSet[Edge], ...] = ()


def _spanning_candidate(g: nx.Graph, terminals: FrozenSet[Label], inner: FrozenSet[Label], pairs: FrozenSet[Edge]) -> bool:
    nodes = terminals | inner
    h = nx.Graph()
    h.add_nodes_from(nodes)
    for u, v in g.subgraph(nodes).edges:
        edge = normalize_edge(u, v)
        if u in terminals and v in terminals and edge not in pairs:
            continue
        h.add_edge(*edge)
    return nx.is_connected(h)


def _minimal_candidates(
    g: nx.Graph,
    terminals: FrozenSet[Label],
    budget: int
) -> List[Tuple[FrozenSet[Label], FrozenSet[Edge]]]:
    """
    Every minimal (inner vertices, terminal-pair edges) choice that spans the terminals.

    Raises:
        BudgetExceededError: Once more than ``budget`` distinct choices have been tested
    """
    inner_pool = sorted(set(g.nodes) - terminals)
    pair_pool = sorted(
        normalize_edge(u, v)
        for u, v in g.subgraph(terminals).edges
    )
    feasible: Dict[Tuple[FrozenSet[Label], FrozenSet[Edge]], bool] = {}

    def ok(inner, pairs) -> bool:
        key = (inner, pairs)
        if key not in feasible:
            if len(feasible) >= budget:
                raise BudgetExceededError(f"more than {budget} candidate checks")
            feasible[key] = _spanning_candidate(g, terminals, inner, pairs)
        return feasible[key]

    found = []
    for size in range(len(inner_pool) + 1):
        for inner in combinations(inner_pool, size):
            inner = frozenset(inner)
            for pair_count in range(len(pair_pool) + 1):
                for pairs in combinations(pair_pool, pair_count):
                    pairs = frozenset(pairs)
                    if not ok(inner, pairs):
                        continue
                    if any(ok(inner - {v}, pairs) for v in inner):
                        continue
                    if any(ok(inner, pairs - {e}) for e in pairs):
                        continue
                    found.append((inner, pairs))
    return found


def _candidate_tree(g: nx.Graph, terminals, inner, pairs) -> FrozenSet[Edge]:
    nodes = terminals | inner
    h = nx.Graph()
    for u, v in g.subgraph(nodes).edges:
        edge = normalize_edge(u, v)
        if u in terminals and v in terminals and edge not in pairs:
            continue
        h.add_edge(*edge)
    return frozenset(normalize_edge(u, v) for u, v in nx.minimum_spanning_tree(h).edges)


def _best_packing(candidates, upper_bound: int, budget: int) -> List[int]:
    """Largest set of pairwise compatible candidates, stopping at the upper bound."""
    best: List[int] = []
    visited = 0

    def extend(chosen: List[int], start: int, used_inner: FrozenSet, used_pairs: FrozenSet):
        nonlocal best, visited
        visited += 1
        if visited > budget:
            raise BudgetExceededError(f"more than {budget} packing search nodes")
        if len(chosen) > len(best):
            best = list(chosen)
        if len(best) >= upper_bound:
            return
        if len(chosen) + (len(candidates) - start) <= len(best):
            return
        for position in range(start, len(candidates)):
            inner, pairs = candidates[position]
            if inner & used_inner or pairs & used_pairs:
                continue
            chosen.append(position)
            extend(chosen, position + 1, used_inner | inner, used_pairs | pairs)
            chosen.pop()
            if len(best) >= upper_bound:
                return

    extend([], 0, frozenset(), frozenset())
    return best


def _greedy_packing(g: nx.Graph, terminals: FrozenSet[Label]) -> List[FrozenSet[Edge]]:
    """Repeatedly take a shortest-path Steiner tree and delete what it used."""
    h = g.copy()
    order = sorted(terminals)
    trees = []
    while True:
        edges = set()
        reached = {order[0]}
        try:
            for t in order[1:]:
                if t in reached:
                    continue
                allowed = {v for v in h if v == t or v not in terminals or v in reached}
                # nearest vertex of the partial tree, so the path only touches it at one end
                _, path = nx.multi_source_dijkstra(h.subgraph(allowed), reached, target=t)
                edges.update(normalize_edge(u, v) for u, v in zip(path, path[1:]))
                reached.update(path)
        except nx.NetworkXNoPath:
            break
        tree = frozenset(edges)
        trees.append(tree)
        inner = {v for e in tree for v in e} - terminals
        h.remove_nodes_from(inner)
        h.remove_edges_from(e for e in tree if e[0] in terminals and e[1] in terminals)
    return trees


def max_stree_packing(
    graph: Graph,
    terminals: Iterable[Label],
    exhaustive_limit: int = EXHAUSTIVE_PACKING_VERTICES,
    budget: int = DEFAULT_PACKING_BUDGET
) -> PackingResult:
    """
    Maximum number of internally disjoint S-trees.

    Graphs with at most ``exhaustive_limit`` vertices are solved exactly by
    packing minimal Steiner candidates (non-terminal vertex set plus the
    terminal-terminal edges used). Larger graphs, and small ones whose
    candidate enumeration or packing search runs past ``budget`` steps, get
    a greedy lower bound with ``exact=False``.

    Raises:
        PreconditionError: If fewer than two terminals are given or a terminal
            is not a vertex
    """
    g = graph.to_networkx()
    s = frozenset(terminals)
    if len(s) < 2:
        raise PreconditionError("packing needs at least two terminals")
    for t in s:
        if t not in g:
            raise PreconditionError(f"{t} is not a vertex of the graph")
    upper_bound = min(g.degree(t) for t in s)

    if g.number_of_nodes() <= exhaustive_limit:
        try:
            candidates = _minimal_candidates(g, s, budget)
            chosen = _best_packing(candidates, upper_bound, budget)
        except BudgetExceededError as e:
            logger.info("exact packing gave up (%s), falling back to greedy", e)
        else:
            trees = tuple(_candidate_tree(g, s, *candidates[i]) for i in chosen)
            return PackingResult(len(trees), True, upper_bound, trees)

    trees = _greedy_packing(g, s)
    logger.debug("greedy packing found %d trees (bound %d)", len(trees), upper_bound)
    return PackingResult(len(trees), False, upper_bound, tuple(trees))


def probe_packing(graph: Graph, terminals: Iterable[Label]) -> PackingResult:
    """
    Packing count for terminal sets of any size.

    No count is promised; small graphs are solved exactly, larger ones give a
    flagged lower bound.
    """
    return max_stree_packing(graph, terminals)


def component_sizes(graph: Graph, removed: Iterable[Label]) -> List[int]:
    """Sizes of the components left after deleting ``removed``, ascending."""
    g = graph.to_networkx()
    g.remove_nodes_from(set(removed))
    return sorted(len(c) for c in nx.connected_components(g))


def exhaustive_cut_search(
    graph: Graph,
    size: int,
    r: int,
    budget: int = DEFAULT_CUT_BUDGET
) -> Optional[FrozenSet[Label]]:
    """
    Look for a vertex set of ``size`` whose deletion leaves at least r+1 components.

    Args:
        graph: Host graph
        size: Number of vertices to delete
        r: Extra components required (r+1 in total)
        budget: Largest number of subsets the search may enumerate

    Returns:
        The first witness in lexicographic order, or None if none exists

    Raises:
        BudgetExceededError: If C(|V|, size) exceeds the budget
    """
    g = graph.to_networkx()
    nodes = sorted(g.nodes)
    total = comb(len(nodes), size)
    if total > budget:
        raise BudgetExceededError(
            f"C({len(nodes)}, {size}) = {total} subsets exceed the budget of {budget}"
        )
    for removed in combinations(nodes, size):
        view = nx.restricted_view(g, removed, [])
        if nx.number_connected_components(view) >= r + 1:
            return frozenset(removed)
    return None


class OracleClient:
    """Independent checks bound to one dual cube."""

    def __init__(self, cube: DualCube):
        """
        Initialize the oracle client.

        Args:
            cube: The dual cube shared by all sub-clients
        """
        self._cube = cube

    def vertex_connectivity(self) -> int:
        return vertex_connectivity(self._cube)

    def verify_tree_set(self, tree_set) -> VerificationReport:
        return verify_tree_set(self._cube, tree_set, expected_count=self._cube.n - 1)

    def exhaustive_cut_search(self, size: int, r: int, budget: int = DEFAULT_CUT_BUDGET):
        return exhaustive_cut_search(self._cube, size, r, budget)

    def probe_packing(self, terminals: Sequence[Union[Label, str]]) -> PackingResult:
        vertices = [self._cube.parse(t) if isinstance(t, str) else t for t in terminals]
        return probe_packing(self._cube, vertices)

    def to_payload(self, report: VerificationReport):
        from .shared import build_report_payload
        return build_report_payload(report)
