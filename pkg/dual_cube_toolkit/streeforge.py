"""
Internally disjoint Steiner trees in the dual cube.

For a terminal set S of three or four vertices of D_n (n >= 4) the
constructors return n-1 trees that each contain S, pairwise share no vertex
outside S and share no edge. The four-terminal constructor dispatches on how
S is spread over the clusters; the three-terminal constructor adds an
auxiliary vertex, builds four-terminal trees and prunes them back to S.

Clusters that host the joining part of one tree are taken from a
ClusterReservation, smallest label first, so no two trees ever route
through the same connector cluster.
"""
import logging
import random
from collections import defaultdict, deque
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from .errors import (
    ConnectivityError,
    IncompleteSearchError,
    InvalidTerminalsError,
    PreconditionError,
    ReservationExhaustedError,
    RoutingError,
    UnsupportedOrderError,
)
from .menger import (
    Path,
    cluster_path,
    disjoint_paths,
    fan,
    grow_tree,
    path_in_cluster_union,
    shortest_path_within,
    tree_in_cluster_union,
)
from .topology import (
    ClusterRef,
    DualCube,
    Edge,
    Hypercube,
    Label,
    cluster_graph,
    cluster_of,
    exit_vertex,
    normalize_edge,
    outside_neighbor,
)

logger = logging.getLogger(__name__)

EXHAUSTIVE_HYPERCUBE_LIMIT = 4

TreeEdges = FrozenSet[Edge]


@dataclass(frozen=True)
class TerminalSet:
    """Three or four distinct vertices, kept in sorted order."""

    vertices: Tuple[Label, ...]

    def __post_init__(self):
        if len(self.vertices) not in (3, 4):
            raise InvalidTerminalsError(
                f"a terminal set holds 3 or 4 vertices, got {len(self.vertices)}"
            )
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidTerminalsError("terminals must be distinct")
        if len({v.width for v in self.vertices}) != 1:
            raise InvalidTerminalsError("terminals must have the same width")
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))

    @classmethod
    def of(cls, cube: DualCube, vertices: Iterable[Union[Label, str]]) -> "TerminalSet":
        """
        Build a terminal set of ``cube`` from labels or bit strings.

        Raises:
            InvalidTerminalsError: For duplicates or a wrong number of vertices
            InvalidOrderError: For labels of another width
        """
        if isinstance(vertices, TerminalSet):
            vertices = vertices.vertices
        labels = []
        for v in vertices:
            label = cube.parse(v) if isinstance(v, str) else v
            cube.check_vertex(label)
            labels.append(label)
        return cls(tuple(labels))

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[Label]:
        return iter(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self.vertices

    def by_cluster(self) -> Dict[ClusterRef, List[Label]]:
        groups: Dict[ClusterRef, List[Label]] = defaultdict(list)
        for v in self.vertices:
            groups[cluster_of(v)].append(v)
        return dict(groups)

    @property
    def profile(self) -> str:
        """
        Occupancy pattern, e.g. ``"3+1 cross-class"`` or ``"2+1+1 two-opposite"``.

        Classes are compared with the reference class: the class of the
        largest group, or the majority class when all groups have one vertex
        (ties go to the class of the smallest terminal).
        """
        groups = self.by_cluster()
        if len(groups) == 1:
            return str(len(self))
        sizes = sorted((len(members) for members in groups.values()), reverse=True)
        shape = "+".join(str(size) for size in sizes)
        reference = _reference_class(groups, self.vertices[0])
        opposite = sum(1 for c in groups if c.class_bit != reference)
        if len(groups) == 2:
            return f"{shape} {'same-class' if opposite == 0 else 'cross-class'}"
        names = {0: "same-class", 1: "one-opposite", 2: "two-opposite"}
        return f"{shape} {names[opposite]}"


def _reference_class(groups: Dict[ClusterRef, List[Label]], smallest: Label) -> int:
    largest = max(len(members) for members in groups.values())
    if largest > 1:
        big = [c for c, members in groups.items() if len(members) == largest]
        if len(big) == 1:
            return big[0].class_bit
        return cluster_of(smallest).class_bit
    counts = defaultdict(int)
    for c in groups:
        counts[c.class_bit] += 1
    if counts[0] != counts[1]:
        return 0 if counts[0] > counts[1] else 1
    return cluster_of(smallest).class_bit


@dataclass(frozen=True)
class TreeSet:
    """
    Trees over a common terminal set.

    Each tree is a frozenset of (smaller, larger) edges. ``case`` names the
    branch of the construction that produced the set.
    """

    terminals: TerminalSet
    trees: Tuple[TreeEdges, ...]
    order: int
    case: str = "unspecified"

    def __len__(self) -> int:
        return len(self.trees)


def tree_vertices(tree: Iterable[Edge]) -> FrozenSet[Label]:
    return frozenset(v for edge in tree for v in edge)


class ClusterReservation:
    """
    Per-construction registry of connector clusters.

    Blocked clusters (the terminal clusters) are never handed out; every other
    cluster belongs to at most one tree index.
    """

    def __init__(self, cube: DualCube):
        self._cube = cube
        self._blocked: Set[ClusterRef] = set()
        self._owner: Dict[ClusterRef, int] = {}

    def block(self, *clusters: ClusterRef) -> None:
        self._blocked.update(clusters)

    def is_free(self, cluster: ClusterRef) -> bool:
        return cluster not in self._blocked and cluster not in self._owner

    def reserve(self, cluster: ClusterRef, owner: int) -> ClusterRef:
        """
        Reserve a specific cluster for a tree.

        Raises:
            RoutingError: If the cluster is blocked or held by another tree
        """
        if cluster in self._blocked:
            raise RoutingError(f"cluster {cluster} is a terminal cluster")
        held_by = self._owner.get(cluster)
        if held_by is not None and held_by != owner:
            raise RoutingError(f"cluster {cluster} already belongs to tree {held_by}")
        self._owner[cluster] = owner
        logger.debug("reserved %s for tree %d", cluster, owner)
        return cluster

    def claim(self, class_bit: int, owner: int) -> ClusterRef:
        """
        Claim the smallest free cluster of a class.

        Raises:
            ReservationExhaustedError: If every cluster of the class is taken
        """
        for cluster in self._cube.clusters(class_bit):
            if self.is_free(cluster):
                self._owner[cluster] = owner
                logger.debug("claimed %s for tree %d", cluster, owner)
                return cluster
        raise ReservationExhaustedError(
            f"no free class-{class_bit} cluster left for tree {owner} in D_{self._cube.n}"
        )

    @property
    def in_use(self) -> Dict[int, Set[ClusterRef]]:
        result: Dict[int, Set[ClusterRef]] = defaultdict(set)
        for cluster, owner in self._owner.items():
            result[owner].add(cluster)
        return dict(result)

    def blocked(self) -> Set[ClusterRef]:
        return set(self._blocked)


class PivotAssignmentError(RoutingError):
    """A set of pair paths cannot all be given a usable pivot."""


def _assign_pivots(paths: Sequence[Path], excluded: Iterable[Label] = ()) -> List[Label]:
    """
    Pick one pivot per path.

    A path takes its smallest internal vertex outside ``excluded``. Paths
    without one take an unexcluded endpoint; each endpoint serves at most
    once because its outside neighbour is unique.
    """
    excluded = set(excluded)
    pivots: List[Optional[Label]] = []
    stuck = []
    for index, path in enumerate(paths):
        candidates = [v for v in path.internal if v not in excluded]
        if candidates:
            pivots.append(min(candidates))
        else:
            pivots.append(None)
            stuck.append(index)
    if stuck:
        ends = sorted({paths[0].start, paths[0].end} - excluded)
        if len(stuck) > len(ends):
            raise PivotAssignmentError(
                f"{len(stuck)} paths need an endpoint pivot, {len(ends)} available"
            )
        for index, end in zip(stuck, ends):
            pivots[index] = end
    return pivots


def _members(*clusters: ClusterRef) -> Set[Label]:
    members: Set[Label] = set()
    for c in clusters:
        members.update(c.vertices())
    return members


def _outside_of(cube: DualCube, excluded: Iterable[ClusterRef]) -> Set[Label]:
    """Every vertex of the cube that is not in an excluded cluster."""
    excluded = set(excluded)
    return {v for v in cube.vertices() if cluster_of(v) not in excluded}


def _cross(v: Label) -> Edge:
    return normalize_edge(v, outside_neighbor(v))


def _cluster_position(cluster: ClusterRef, coordinate: int) -> int:
    """The dual cube bit position carrying a cluster's hypercube coordinate."""
    if cluster.class_bit == 0:
        return coordinate
    return cluster.order - 1 + coordinate


def _neighbors_in(cube: DualCube, v: Label, cluster: ClusterRef) -> List[Label]:
    return [u for u in cube.neighbors(v) if cluster.contains(u)]


def _spanning_tree(edges: Iterable[Edge], root: Label) -> Set[Edge]:
    g = nx.Graph()
    g.add_node(root)
    g.add_edges_from(sorted(set(edges)))
    return {normalize_edge(u, v) for u, v in nx.bfs_edges(g, root, sort_neighbors=sorted)}


def prune_to_terminals(tree: Iterable[Edge], terminals: Iterable[Label]) -> TreeEdges:
    """
    Remove non-terminal leaves until every leaf is a terminal.

    On a tree this leaves the unique minimal subtree spanning the terminals.
    """
    keep = set(terminals)
    edges = {normalize_edge(u, v) for u, v in tree}
    degree: Dict[Label, int] = defaultdict(int)
    incident: Dict[Label, Set[Edge]] = defaultdict(set)
    for edge in edges:
        for v in edge:
            degree[v] += 1
            incident[v].add(edge)
    leaves = deque(sorted(v for v, d in degree.items() if d == 1 and v not in keep))
    while leaves:
        leaf = leaves.popleft()
        if degree[leaf] != 1:
            continue
        (edge,) = incident[leaf]
        edges.discard(edge)
        for v in edge:
            incident[v].discard(edge)
            degree[v] -= 1
            if v != leaf and degree[v] == 1 and v not in keep:
                leaves.append(v)
    return frozenset(edges)


def _finalize_tree(edges: Iterable[Edge], terminals: Sequence[Label]) -> TreeEdges:
    spanning = _spanning_tree(edges, terminals[0])
    tree = prune_to_terminals(spanning, terminals)
    missing = [t for t in terminals if t not in tree_vertices(tree)]
    if missing:
        raise RoutingError(f"tree misses terminal {missing[0]}")
    return tree


def _check_disjoint(trees: Sequence[TreeEdges], terminals: Iterable[Label]) -> None:
    shared_allowed = set(terminals)
    owner: Dict[Label, int] = {}
    edge_owner: Dict[Edge, int] = {}
    for index, tree in enumerate(trees):
        for v in tree_vertices(tree):
            if v in shared_allowed:
                continue
            if v in owner:
                raise RoutingError(f"trees {owner[v]} and {index} share vertex {v}")
            owner[v] = index
        for edge in tree:
            if edge in edge_owner:
                raise RoutingError(
                    f"trees {edge_owner[edge]} and {index} share edge {edge[0]}-{edge[1]}"
                )
            edge_owner[edge] = index


def _assemble(
    cube: DualCube,
    terminals: TerminalSet,
    parts: Sequence[Set[Edge]],
    case: str
) -> TreeSet:
    trees = tuple(_finalize_tree(edges, terminals.vertices) for edges in parts)
    _check_disjoint(trees, terminals.vertices)
    if len(trees) != cube.n - 1:
        raise RoutingError(f"{case} produced {len(trees)} trees, expected {cube.n - 1}")
    logger.debug("built %d trees for %s via %s", len(trees), terminals.profile, case)
    return TreeSet(terminals, trees, cube.n, case)


def _require(cube: DualCube, terminals, size: int, clusters: Optional[int] = None) -> TerminalSet:
    if cube.n < 4:
        raise UnsupportedOrderError(
            f"tree constructors need n >= 4, got D_{cube.n}"
        )
    ts = TerminalSet.of(cube, terminals)
    if len(ts) != size:
        raise InvalidTerminalsError(f"expected {size} terminals, got {len(ts)}")
    if clusters is not None and len(ts.by_cluster()) != clusters:
        raise PreconditionError(
            f"terminals occupy {len(ts.by_cluster())} clusters, expected {clusters}"
        )
    return ts


# Hypercube subroutine


def _greedy_hypercube_trees(
    q: Hypercube,
    terminals: Sequence[Label],
    seed: Tuple[Label, Label],
    rest: Sequence[Label]
) -> Optional[List[Set[Edge]]]:
    k = q.m - 1
    a, b = seed
    try:
        paths = disjoint_paths(q, a, b, q.m)
    except ConnectivityError:
        return None
    seeds = sorted(paths, key=lambda p: (p.length, p.vertices))[:k]
    terminal_set = set(terminals)
    tree_vertex_sets = [set(p.vertices) for p in seeds]
    tree_edges = [set(p.edges) for p in seeds]
    owner: Dict[Label, int] = {}
    edge_owner: Dict[Edge, int] = {}
    for index, path in enumerate(seeds):
        for v in path.vertices:
            if v not in terminal_set:
                owner[v] = index
        for edge in path.edges:
            edge_owner[edge] = index

    for c in rest:
        for index in range(k):
            if c in tree_vertex_sets[index]:
                continue
            free = {
                v for v in q.vertices()
                if v not in terminal_set and v not in owner
            }
            path = _hypercube_link(
                q, c, tree_vertex_sets[index], free, terminal_set, edge_owner, index
            )
            if path is None:
                return None
            for v in path.vertices:
                tree_vertex_sets[index].add(v)
                if v not in terminal_set:
                    owner[v] = index
            for edge in path.edges:
                tree_edges[index].add(edge)
                edge_owner[edge] = index
    return tree_edges


def _hypercube_link(
    q: Hypercube,
    source: Label,
    goals: Set[Label],
    free: Set[Label],
    terminals: Set[Label],
    edge_owner: Dict[Edge, int],
    index: int
) -> Optional[Path]:
    """
    Shortest path from ``source`` into tree ``index`` through free vertices.

    A single terminal-terminal step is refused when another tree holds it.
    """
    held = [
        normalize_edge(source, u)
        for u in q.neighbors(source)
        if u in goals and u in terminals
        and edge_owner.get(normalize_edge(source, u)) not in (None, index)
    ]
    return shortest_path_within(q, source, goals, free, forbidden_edges=held)


def _exhaustive_hypercube_trees(
    q: Hypercube,
    terminals: Sequence[Label],
    k: int
) -> Optional[List[Set[Edge]]]:
    """
    Exact packing by bitmask search over minimal candidates.

    A candidate is a pair (non-terminal set U, terminal-terminal edge set E)
    whose graph spans S; only candidates where no single vertex or edge can be
    dropped are kept. Candidates are packed by depth-first search with a
    memo of failed states.
    """
    vertices = q.vertices()
    index = {v: i for i, v in enumerate(vertices)}
    terminal_bits = [index[t] for t in terminals]
    terminal_mask = 0
    for bit in terminal_bits:
        terminal_mask |= 1 << bit
    others = [index[v] for v in vertices if index[v] not in terminal_bits]
    neighbor_mask = [0] * len(vertices)
    for v in vertices:
        for u in q.neighbors(v):
            neighbor_mask[index[v]] |= 1 << index[u]
    pair_edges = [
        (index[s], index[t])
        for s, t in combinations(sorted(terminals), 2)
        if q.has_edge(s, t)
    ]

    def spans(vertex_mask: int, edge_mask: int) -> bool:
        start = terminal_bits[0]
        seen = 1 << start
        stack = [start]
        while stack:
            v = stack.pop()
            reach = neighbor_mask[v] & vertex_mask
            if (terminal_mask >> v) & 1:
                reach &= ~terminal_mask
                for j, (s, t) in enumerate(pair_edges):
                    if (edge_mask >> j) & 1 and v in (s, t):
                        reach |= 1 << (t if v == s else s)
            reach &= ~seen
            while reach:
                low = reach & -reach
                seen |= low
                stack.append(low.bit_length() - 1)
                reach ^= low
        return seen == vertex_mask

    def expand(subset: int) -> int:
        mask = terminal_mask
        for j, bit in enumerate(others):
            if (subset >> j) & 1:
                mask |= 1 << bit
        return mask

    edge_options = 1 << len(pair_edges)
    feasible: Dict[Tuple[int, int], bool] = {}
    for subset in range(1 << len(others)):
        mask = expand(subset)
        for edge_mask in range(edge_options):
            feasible[(subset, edge_mask)] = spans(mask, edge_mask)

    candidates = []
    for (subset, edge_mask), ok in feasible.items():
        if not ok:
            continue
        if any(
            feasible[(subset & ~(1 << j), edge_mask)]
            for j in range(len(others))
            if (subset >> j) & 1
        ):
            continue
        if any(
            feasible[(subset, edge_mask & ~(1 << j))]
            for j in range(len(pair_edges))
            if (edge_mask >> j) & 1
        ):
            continue
        candidates.append((bin(subset).count("1"), subset, edge_mask))
    candidates.sort()
    logger.debug("exhaustive packing over %d minimal candidates", len(candidates))

    failed: Set[Tuple[int, int, int, int]] = set()

    def search(start: int, used: int, used_edges: int, need: int) -> Optional[List[int]]:
        if need == 0:
            return []
        state = (start, used, used_edges, need)
        if state in failed:
            return None
        for position in range(start, len(candidates)):
            _, subset, edge_mask = candidates[position]
            if subset & used or edge_mask & used_edges:
                continue
            rest = search(position + 1, used | subset, used_edges | edge_mask, need - 1)
            if rest is not None:
                return [position] + rest
        failed.add(state)
        return None

    chosen = search(0, 0, 0, k)
    if chosen is None:
        return None

    trees = []
    for position in chosen:
        _, subset, edge_mask = candidates[position]
        mask = expand(subset)
        members = [v for v in vertices if (mask >> index[v]) & 1]
        member_set = set(members)
        kept_pairs = {
            normalize_edge(vertices[s], vertices[t])
            for j, (s, t) in enumerate(pair_edges)
            if (edge_mask >> j) & 1
        }
        edges = set()
        for u in members:
            for v in q.neighbors(u):
                if v in member_set and u < v:
                    both_terminal = u in terminals and v in terminals
                    if not both_terminal or (u, v) in kept_pairs:
                        edges.add((u, v))
        trees.append(edges)
    return trees


def hypercube_strees4(q: Hypercube, terminals: Iterable[Label]) -> TreeSet:
    """
    Find m-1 internally disjoint trees for four terminals of Q_m.

    Tries flow-seeded greedy growth from each terminal pair first. For
    m <= 4 an exact packing search backs it up; above that a greedy failure
    is reported.

    Args:
        q: The hypercube Q_m, m >= 3
        terminals: Four distinct vertices of q

    Returns:
        A TreeSet of m-1 trees over hypercube labels

    Raises:
        UnsupportedOrderError: If m < 3
        InvalidTerminalsError: If the terminals are not four distinct vertices
        IncompleteSearchError: If no packing was found
    """
    if q.m < 3:
        raise UnsupportedOrderError(f"hypercube trees need m >= 3, got Q_{q.m}")
    ts = TerminalSet(tuple(terminals))
    if len(ts) != 4:
        raise InvalidTerminalsError(f"expected 4 terminals, got {len(ts)}")
    for t in ts:
        if not q.has_vertex(t):
            raise InvalidTerminalsError(f"{t} is not a vertex of Q_{q.m}")
    k = q.m - 1
    ordered = list(ts.vertices)

    for a, b in combinations(ordered, 2):
        remaining = [t for t in ordered if t not in (a, b)]
        for rest in (remaining, remaining[::-1]):
            parts = _greedy_hypercube_trees(q, ordered, (a, b), rest)
            if parts is None:
                continue
            try:
                trees = tuple(_finalize_tree(edges, ordered) for edges in parts)
                _check_disjoint(trees, ordered)
            except RoutingError:
                continue
            return TreeSet(ts, trees, q.m, "hypercube.greedy")

    if q.m > EXHAUSTIVE_HYPERCUBE_LIMIT:
        raise IncompleteSearchError(
            f"greedy search found no {k} trees in Q_{q.m} for {[str(t) for t in ordered]}"
        )
    logger.debug("greedy hypercube search failed, falling back to exhaustive packing")
    parts = _exhaustive_hypercube_trees(q, ordered, k)
    if parts is None:
        raise IncompleteSearchError(
            f"no {k} disjoint trees in Q_{q.m} for {[str(t) for t in ordered]}"
        )
    trees = tuple(_finalize_tree(edges, ordered) for edges in parts)
    _check_disjoint(trees, ordered)
    return TreeSet(ts, trees, q.m, "hypercube.exhaustive")


# Four terminals in one cluster


def strees_one_cluster(cube: DualCube, terminals) -> TreeSet:
    """n-2 trees inside the cluster plus one tree through the rest of D_n."""
    ts = _require(cube, terminals, 4, clusters=1)
    (home,) = ts.by_cluster()
    q = cluster_graph(home)
    inner = hypercube_strees4(q, [q.project(t) for t in ts])
    parts: List[Set[Edge]] = [
        {normalize_edge(q.embed(u), q.embed(v)) for u, v in tree}
        for tree in inner.trees
    ]

    outer = {_cross(t) for t in ts}
    outer |= grow_tree(
        cube,
        [outside_neighbor(t) for t in ts],
        _outside_of(cube, [home]),
    )
    parts.append(outer)
    return _assemble(cube, ts, parts, "one_cluster")


# Two clusters


def _split_three(cube: DualCube, home: ClusterRef, trio: Sequence[Label]):
    """
    Trees for three terminals of one cluster, each with a free exit vertex.

    The cluster is split along the first coordinate where the two smallest
    terminals differ. Disjoint x-z paths in the half holding x and z get one
    pivot each; the pivots' images across the split are reached from y by a
    fan inside the other half.

    Returns:
        (partial trees, exit vertices, (x, y, z))
    """
    k = cube.n - 1
    x, y, z = sorted(trio)
    coordinate = next(
        d for d in range(1, k + 1)
        if x.bit(_cluster_position(home, d)) != y.bit(_cluster_position(home, d))
    )
    position = _cluster_position(home, coordinate)
    if z.bit(position) == y.bit(position):
        x, y = y, x
    side = x.bit(position)
    members = home.vertices()
    near = {v for v in members if v.bit(position) == side}
    far = {v for v in members if v.bit(position) != side}

    paths = disjoint_paths(cube, x, z, k - 1, within=near)
    pivots = _assign_pivots(paths, {y.flip(position)})
    exits = [p.flip(position) for p in pivots]
    spread = fan(cube, y, exits, k - 1, within=far)

    parts = []
    for path, pivot, exit_ in zip(paths, pivots, exits):
        edges = set(path.edges)
        edges.add(normalize_edge(pivot, exit_))
        edges.update(spread.path_to(exit_).edges)
        parts.append(edges)
    return parts, exits, (x, y, z)


def _three_one_same_class(cube, ts, home, away, trio, w) -> TreeSet:
    k = cube.n - 1
    parts, exits, (x, y, z) = _split_three(cube, home, trio)
    reservation = ClusterReservation(cube)
    reservation.block(home, away)
    hosts = [
        reservation.reserve(cluster_of(outside_neighbor(e)), index)
        for index, e in enumerate(exits)
    ]
    last = reservation.claim(1 - home.class_bit, k - 1)
    landing = [exit_vertex(away, c) for c in hosts + [last]]
    spread = fan(cube, w, landing, k, within=away.vertices())

    for index, (e, host) in enumerate(zip(exits, hosts)):
        entry = exit_vertex(host, away)
        parts[index].add(_cross(e))
        parts[index].update(cluster_path(cube, host, outside_neighbor(e), entry).edges)
        parts[index].add(_cross(landing[index]))
        parts[index].update(spread.path_to(landing[index]).edges)

    final = {_cross(t) for t in (x, y, z)}
    final.add(_cross(landing[-1]))
    final.update(spread.path_to(landing[-1]).edges)
    region = _outside_of(cube, reservation.blocked() | set(hosts))
    final |= grow_tree(
        cube,
        [outside_neighbor(t) for t in (x, y, z)] + [outside_neighbor(landing[-1])],
        region,
    )
    parts.append(final)
    return _assemble(cube, ts, parts, "two_cluster.three_one.same_class")


def _three_one_cross_class(cube, ts, home, away, trio, w) -> TreeSet:
    k = cube.n - 1
    parts, exits, (x, y, z) = _split_three(cube, home, trio)
    trio = (x, y, z)
    reservation = ClusterReservation(cube)
    reservation.block(home, away)

    back_door = exit_vertex(away, home)
    around_w = _neighbors_in(cube, w, away)
    spokes = [u for u in around_w if u != back_door][:k - 1]
    spare = next(u for u in around_w if u not in spokes)
    detour_space = set(away.vertices()) - set(spokes)

    hosts = [cluster_of(outside_neighbor(e)) for e in exits]
    direct = next((j for j, host in enumerate(hosts) if host == away), None)
    others = [i for i in range(k - 1) if i != direct]
    used_spokes = dict(zip(others, spokes))

    connector_clusters: Set[ClusterRef] = set()
    for index in others:
        host = reservation.reserve(hosts[index], index)
        spoke = used_spokes[index]
        partner = reservation.reserve(cluster_of(outside_neighbor(spoke)), index)
        connector_clusters.update((host, partner))
        e = exits[index]
        parts[index].add(_cross(e))
        parts[index].update(
            path_in_cluster_union(
                cube, {host, partner}, outside_neighbor(e), outside_neighbor(spoke)
            ).edges
        )
        parts[index].add(_cross(spoke))
        parts[index].add(normalize_edge(spoke, w))

    region = _outside_of(cube, reservation.blocked() | connector_clusters)
    final: Set[Edge] = set()
    points: List[Label]

    if direct is not None:
        e = exits[direct]
        if outside_neighbor(e) == w:
            subcase = "pivot_hits_terminal"
            parts[direct].add(_cross(e))
            final.update({normalize_edge(w, spare), _cross(spare)})
            target = outside_neighbor(spare)
        else:
            subcase = "pivot_in_terminal_cluster"
            detour = shortest_path_within(cube, outside_neighbor(e), {w}, detour_space)
            parts[direct].add(_cross(e))
            parts[direct].update(detour.edges)
            final.add(_cross(w))
            target = outside_neighbor(w)
        final.update(_cross(t) for t in trio)
        points = [outside_neighbor(t) for t in trio] + [target]
    else:
        gate = exit_vertex(home, away)
        if gate in trio:
            rest = [t for t in trio if t != gate]
            final.update(_cross(t) for t in rest)
            if outside_neighbor(gate) == w:
                subcase = "terminal_adjacent"
                final.add(normalize_edge(gate, w))
                final.update({normalize_edge(w, spare), _cross(spare)})
                target = outside_neighbor(spare)
            else:
                subcase = "detour_via_terminal"
                detour = shortest_path_within(cube, outside_neighbor(gate), {w}, detour_space)
                final.add(_cross(gate))
                final.update(detour.edges)
                final.add(_cross(w))
                target = outside_neighbor(w)
            points = [outside_neighbor(t) for t in rest] + [target]
        else:
            final.update(_cross(t) for t in trio)
            if not home.contains(outside_neighbor(w)):
                subcase = "outside_direct"
                final.add(_cross(w))
                target = outside_neighbor(w)
            else:
                subcase = "outside_via_neighbor"
                final.update({normalize_edge(w, spare), _cross(spare)})
                target = outside_neighbor(spare)
            points = [outside_neighbor(t) for t in trio] + [target]

    final |= grow_tree(cube, points, region)
    parts.append(final)
    return _assemble(cube, ts, parts, f"two_cluster.three_one.cross_class.{subcase}")


def _pair_matching(first: Sequence[ClusterRef], second: Sequence[ClusterRef]) -> List[int]:
    """Match indices of ``first`` to ``second``: equal clusters first, the rest in order."""
    matching: Dict[int, int] = {}
    for i, c in enumerate(first):
        for j, d in enumerate(second):
            if c == d:
                matching[i] = j
    loose_first = [i for i in range(len(first)) if i not in matching]
    loose_second = [j for j in range(len(second)) if j not in matching.values()]
    matching.update(zip(loose_first, loose_second))
    return [matching[i] for i in range(len(first))]


def _two_two_same_class(cube, ts, home, away, pair, other) -> TreeSet:
    k = cube.n - 1
    x, y = pair
    z, w = other
    left = disjoint_paths(cube, x, y, k, within=home.vertices())
    right = disjoint_paths(cube, z, w, k, within=away.vertices())
    left_pivots = _assign_pivots(left)
    right_pivots = _assign_pivots(right)
    left_hosts = [cluster_of(outside_neighbor(p)) for p in left_pivots]
    right_hosts = [cluster_of(outside_neighbor(p)) for p in right_pivots]
    sigma = _pair_matching(left_hosts, right_hosts)

    reservation = ClusterReservation(cube)
    reservation.block(home, away)
    for i, j in enumerate(sigma):
        reservation.reserve(left_hosts[i], i)
        reservation.reserve(right_hosts[j], i)

    shared = False
    parts = []
    for i, j in enumerate(sigma):
        start = outside_neighbor(left_pivots[i])
        end = outside_neighbor(right_pivots[j])
        if left_hosts[i] == right_hosts[j]:
            shared = True
            route = cluster_path(cube, left_hosts[i], start, end)
        else:
            bridge = reservation.claim(home.class_bit, i)
            route = path_in_cluster_union(
                cube, {left_hosts[i], right_hosts[j], bridge}, start, end
            )
        edges = set(left[i].edges) | set(right[j].edges) | set(route.edges)
        edges.add(_cross(left_pivots[i]))
        edges.add(_cross(right_pivots[j]))
        parts.append(edges)
    subcase = "shared" if shared else "disjoint"
    return _assemble(cube, ts, parts, f"two_cluster.two_two.same_class.{subcase}")


def _two_two_cross_class(cube, ts, home, away, pair, other) -> TreeSet:
    k = cube.n - 1
    x, y = pair
    z, w = other
    left = disjoint_paths(cube, x, y, k, within=home.vertices())
    right = disjoint_paths(cube, z, w, k, within=away.vertices())
    left_pivots = _assign_pivots(left, {exit_vertex(home, away)})
    right_pivots = _assign_pivots(right, {exit_vertex(away, home)})

    reservation = ClusterReservation(cube)
    reservation.block(home, away)
    parts = []
    for i in range(k):
        start = outside_neighbor(left_pivots[i])
        end = outside_neighbor(right_pivots[i])
        first = reservation.reserve(cluster_of(start), i)
        second = reservation.reserve(cluster_of(end), i)
        route = path_in_cluster_union(cube, {first, second}, start, end)
        edges = set(left[i].edges) | set(right[i].edges) | set(route.edges)
        edges.add(_cross(left_pivots[i]))
        edges.add(_cross(right_pivots[i]))
        parts.append(edges)
    return _assemble(cube, ts, parts, "two_cluster.two_two.cross_class")


def strees_two_clusters(cube: DualCube, terminals) -> TreeSet:
    """
    Trees for four terminals spread over exactly two clusters.

    Raises:
        PreconditionError: If the terminals do not occupy two clusters
    """
    ts = _require(cube, terminals, 4, clusters=2)
    groups = ts.by_cluster()
    (c1, g1), (c2, g2) = sorted(groups.items(), key=lambda item: (-len(item[1]), item[0]))
    if len(g1) == 3:
        trio, (w,) = g1, g2
        if c1.class_bit == c2.class_bit:
            return _three_one_same_class(cube, ts, c1, c2, trio, w)
        return _three_one_cross_class(cube, ts, c1, c2, trio, w)

    if ts.vertices[0] in g2:
        (c1, g1), (c2, g2) = (c2, g2), (c1, g1)
    if c1.class_bit == c2.class_bit:
        return _two_two_same_class(cube, ts, c1, c2, tuple(g1), tuple(g2))
    return _two_two_cross_class(cube, ts, c1, c2, tuple(g1), tuple(g2))


# Three clusters


def _fan_into(cube: DualCube, source: Label, home: ClusterRef, hosts: Sequence[ClusterRef]):
    """Fan from a terminal to the exits of its cluster toward each host."""
    exits = [exit_vertex(home, host) for host in hosts]
    return exits, fan(cube, source, exits, len(exits), within=home.vertices())


def _three_clusters_one_class(cube, ts, pair_cluster, pair, singles) -> TreeSet:
    k = cube.n - 1
    x, y = pair
    paths = disjoint_paths(cube, x, y, k, within=pair_cluster.vertices())
    pivots = _assign_pivots(paths)
    reservation = ClusterReservation(cube)
    reservation.block(pair_cluster, *(cluster_of(t) for t in singles))
    hosts = [reservation.reserve(cluster_of(outside_neighbor(p)), i) for i, p in enumerate(pivots)]

    parts = [set(path.edges) | {_cross(p)} for path, p in zip(paths, pivots)]
    points = [[outside_neighbor(p)] for p in pivots]
    for t in singles:
        exits, spread = _fan_into(cube, t, cluster_of(t), hosts)
        for i, e in enumerate(exits):
            parts[i].update(spread.path_to(e).edges)
            parts[i].add(_cross(e))
            points[i].append(outside_neighbor(e))
    for i, host in enumerate(hosts):
        parts[i] |= tree_in_cluster_union(cube, {host}, points[i])
    return _assemble(cube, ts, parts, "three_cluster.same_class")


def _three_clusters_one_opposite(cube, ts, pair_cluster, pair, z, w) -> TreeSet:
    k = cube.n - 1
    x, y = pair
    near, far = cluster_of(z), cluster_of(w)
    paths = disjoint_paths(cube, x, y, k, within=pair_cluster.vertices())
    pivots = _assign_pivots(paths, {exit_vertex(pair_cluster, far)})
    reservation = ClusterReservation(cube)
    reservation.block(pair_cluster, near, far)
    hosts = [reservation.reserve(cluster_of(outside_neighbor(p)), i) for i, p in enumerate(pivots)]
    partners = [reservation.claim(pair_cluster.class_bit, i) for i in range(k)]

    near_exits, near_fan = _fan_into(cube, z, near, hosts)
    far_exits, far_fan = _fan_into(cube, w, far, partners)
    parts = []
    for i in range(k):
        edges = set(paths[i].edges) | {_cross(pivots[i])}
        edges.update(near_fan.path_to(near_exits[i]).edges)
        edges.add(_cross(near_exits[i]))
        edges.update(far_fan.path_to(far_exits[i]).edges)
        edges.add(_cross(far_exits[i]))
        edges |= tree_in_cluster_union(
            cube,
            {hosts[i], partners[i]},
            [outside_neighbor(pivots[i]), outside_neighbor(near_exits[i]), outside_neighbor(far_exits[i])],
        )
        parts.append(edges)
    return _assemble(cube, ts, parts, "three_cluster.one_opposite")


def _three_clusters_two_opposite(cube, ts, pair_cluster, pair, z, w) -> TreeSet:
    k = cube.n - 1
    x, y = pair
    cz, cw = cluster_of(z), cluster_of(w)
    paths = disjoint_paths(cube, x, y, k, within=pair_cluster.vertices())
    to_z, to_w = exit_vertex(pair_cluster, cz), exit_vertex(pair_cluster, cw)
    try:
        pivots = _assign_pivots(paths, {to_z, to_w})
    except PivotAssignmentError:
        return _three_clusters_direct_edge(cube, ts, pair_cluster, paths, z, w)

    reservation = ClusterReservation(cube)
    reservation.block(pair_cluster, cz, cw)
    hosts = [reservation.reserve(cluster_of(outside_neighbor(p)), i) for i, p in enumerate(pivots)]
    partners = [reservation.claim(pair_cluster.class_bit, i) for i in range(k)]
    z_exits, z_fan = _fan_into(cube, z, cz, partners)
    w_exits, w_fan = _fan_into(cube, w, cw, partners)
    parts = []
    for i in range(k):
        edges = set(paths[i].edges) | {_cross(pivots[i])}
        edges.update(z_fan.path_to(z_exits[i]).edges)
        edges.add(_cross(z_exits[i]))
        edges.update(w_fan.path_to(w_exits[i]).edges)
        edges.add(_cross(w_exits[i]))
        edges |= tree_in_cluster_union(
            cube,
            {hosts[i], partners[i]},
            [outside_neighbor(pivots[i]), outside_neighbor(z_exits[i]), outside_neighbor(w_exits[i])],
        )
        parts.append(edges)
    return _assemble(cube, ts, parts, "three_cluster.two_opposite.pivots")


def _three_clusters_direct_edge(cube, ts, pair_cluster, paths, z, w) -> TreeSet:
    """
    The pair is joined by an edge whose ends lead straight into the clusters
    of z and w, so the edge path has no usable pivot.
    """
    k = cube.n - 1
    direct = next(path for path in paths if path.length == 1)
    x, y = direct.start, direct.end
    if cluster_of(outside_neighbor(x)) != cluster_of(z):
        x, y = y, x
    cz, cw = cluster_of(z), cluster_of(w)
    x1, y1 = outside_neighbor(x), outside_neighbor(y)

    z_spokes = [u for u in _neighbors_in(cube, z, cz) if u != x1][:k - 1]
    w_spokes = [u for u in _neighbors_in(cube, w, cw) if u != y1][:k - 1]
    z_detour = shortest_path_within(cube, x1, {z}, set(cz.vertices()) - set(z_spokes))
    w_detour = shortest_path_within(cube, y1, {w}, set(cw.vertices()) - set(w_spokes))
    if z_detour is None or w_detour is None:
        raise RoutingError("terminal cluster lost its connectivity")
    through = {normalize_edge(x, y), _cross(x), _cross(y)}
    through.update(z_detour.edges)
    through.update(w_detour.edges)

    rest = [path for path in paths if path is not direct]
    pivots = _assign_pivots(rest, {x, y})
    reservation = ClusterReservation(cube)
    reservation.block(pair_cluster, cz, cw)
    hosts = [reservation.reserve(cluster_of(outside_neighbor(p)), i) for i, p in enumerate(pivots)]
    z_hosts = [cluster_of(outside_neighbor(u)) for u in z_spokes]
    w_hosts = [cluster_of(outside_neighbor(u)) for u in w_spokes]
    sigma = _pair_matching(z_hosts, w_hosts)

    parts = [through]
    for i, j in enumerate(sigma):
        region = {hosts[i], reservation.reserve(z_hosts[i], i), reservation.reserve(w_hosts[j], i)}
        edges = set(rest[i].edges) | {_cross(pivots[i])}
        edges.update({normalize_edge(z, z_spokes[i]), _cross(z_spokes[i])})
        edges.update({normalize_edge(w, w_spokes[j]), _cross(w_spokes[j])})
        edges |= tree_in_cluster_union(
            cube,
            region,
            [outside_neighbor(pivots[i]), outside_neighbor(z_spokes[i]), outside_neighbor(w_spokes[j])],
        )
        parts.append(edges)
    return _assemble(cube, ts, parts, "three_cluster.two_opposite.direct_edge")


def strees_three_clusters(cube: DualCube, terminals) -> TreeSet:
    """
    Trees for four terminals spread over exactly three clusters.

    Raises:
        PreconditionError: If the terminals do not occupy three clusters
    """
    ts = _require(cube, terminals, 4, clusters=3)
    groups = ts.by_cluster()
    pair_cluster = next(c for c, members in groups.items() if len(members) == 2)
    pair = tuple(groups[pair_cluster])
    singles = sorted(members[0] for c, members in groups.items() if c != pair_cluster)
    same = [t for t in singles if cluster_of(t).class_bit == pair_cluster.class_bit]
    opposite = [t for t in singles if t not in same]

    if not opposite:
        return _three_clusters_one_class(cube, ts, pair_cluster, pair, singles)
    if len(opposite) == 1:
        return _three_clusters_one_opposite(cube, ts, pair_cluster, pair, same[0], opposite[0])
    return _three_clusters_two_opposite(cube, ts, pair_cluster, pair, opposite[0], opposite[1])


# Four clusters


def strees_four_clusters(cube: DualCube, terminals) -> TreeSet:
    """
    Trees for four terminals in four distinct clusters.

    Each terminal fans out to exits toward the connector clusters of every
    tree; tree i then joins its four arrivals inside its own connector
    cluster (one class) or cluster pair (mixed classes).

    Raises:
        PreconditionError: If two terminals share a cluster
    """
    ts = _require(cube, terminals, 4, clusters=4)
    k = cube.n - 1
    groups = ts.by_cluster()
    reference = _reference_class(groups, ts.vertices[0])
    majority = [t for t in ts if cluster_of(t).class_bit == reference]
    minority = [t for t in ts if cluster_of(t).class_bit != reference]

    reservation = ClusterReservation(cube)
    reservation.block(*groups)
    hosts = [reservation.claim(1 - reference, i) for i in range(k)]
    if minority:
        partners = [reservation.claim(reference, i) for i in range(k)]
        regions = [{host, partner} for host, partner in zip(hosts, partners)]
    else:
        partners = hosts
        regions = [{host} for host in hosts]

    parts: List[Set[Edge]] = [set() for _ in range(k)]
    points: List[List[Label]] = [[] for _ in range(k)]
    for t in ts:
        targets = hosts if t in majority else partners
        exits, spread = _fan_into(cube, t, cluster_of(t), targets)
        for i, e in enumerate(exits):
            parts[i].update(spread.path_to(e).edges)
            parts[i].add(_cross(e))
            points[i].append(outside_neighbor(e))
    for i in range(k):
        parts[i] |= tree_in_cluster_union(cube, regions[i], points[i])

    subcase = {0: "same_class", 1: "one_opposite", 2: "two_opposite"}[len(minority)]
    return _assemble(cube, ts, parts, f"four_cluster.{subcase}")


# Entry points


def strees4(cube: DualCube, terminals) -> TreeSet:
    """
    Build n-1 internally disjoint trees for four terminals of D_n.

    Args:
        cube: The dual cube, n >= 4
        terminals: Four distinct vertices (labels or bit strings)

    Returns:
        A TreeSet of exactly n-1 trees

    Raises:
        UnsupportedOrderError: If n < 4
        InvalidTerminalsError: If the terminals are not four distinct vertices
    """
    ts = _require(cube, terminals, 4)
    occupied = len(ts.by_cluster())
    logger.debug("dispatching %s (%s)", [str(t) for t in ts], ts.profile)
    if occupied == 1:
        return strees_one_cluster(cube, ts)
    if occupied == 2:
        return strees_two_clusters(cube, ts)
    if occupied == 3:
        return strees_three_clusters(cube, ts)
    return strees_four_clusters(cube, ts)


def _auxiliary_candidates(cube: DualCube, ts: TerminalSet) -> Iterator[Label]:
    seen = set(ts.vertices)
    for t in ts:
        for u in cube.neighbors(t):
            if u not in seen:
                seen.add(u)
                yield u


def strees3(cube: DualCube, terminals) -> TreeSet:
    """
    Build n-1 internally disjoint trees for three terminals of D_n.

    An auxiliary fourth terminal (first choice: the smallest neighbour of the
    smallest terminal) is added, four-terminal trees are built, and each tree
    is pruned back to the three real terminals.

    Raises:
        UnsupportedOrderError: If n < 4
        InvalidTerminalsError: If the terminals are not three distinct vertices
        RoutingError: If no auxiliary vertex gives disjoint pruned trees
    """
    ts = _require(cube, terminals, 3)
    for auxiliary in _auxiliary_candidates(cube, ts):
        widened = strees4(cube, ts.vertices + (auxiliary,))
        pruned = tuple(prune_to_terminals(tree, ts.vertices) for tree in widened.trees)
        try:
            _check_disjoint(pruned, ts.vertices)
        except RoutingError as error:
            logger.debug("auxiliary %s rejected: %s", auxiliary, error)
            continue
        return TreeSet(ts, pruned, cube.n, f"reduced.{widened.case}")
    raise RoutingError(f"no auxiliary vertex works for {[str(t) for t in ts]}")


# Terminal sampling


Family = Callable[[DualCube, random.Random], List[Label]]


def _pick_clusters(cube: DualCube, rng: random.Random, classes: Sequence[int]) -> List[ClusterRef]:
    chosen: List[ClusterRef] = []
    for class_bit in classes:
        pool = [c for c in cube.clusters(class_bit) if c not in chosen]
        chosen.append(rng.choice(pool))
    return chosen


def _pick(rng: random.Random, cluster: ClusterRef, count: int, avoid: Iterable[Label] = ()) -> List[Label]:
    avoid = set(avoid)
    return rng.sample([v for v in cluster.vertices() if v not in avoid], count)


def _spread(*pattern: Tuple[int, int]) -> Family:
    """A family placing ``count`` random vertices in a cluster of each relative class."""
    def draw(cube: DualCube, rng: random.Random) -> List[Label]:
        c = rng.randrange(2)
        clusters = _pick_clusters(cube, rng, [c ^ relative for relative, _ in pattern])
        vertices: List[Label] = []
        for cluster, (_, count) in zip(clusters, pattern):
            vertices.extend(_pick(rng, cluster, count))
        return vertices
    return draw


def _trio_with_terminal_exit(adjacent: bool) -> Family:
    def draw(cube: DualCube, rng: random.Random) -> List[Label]:
        (home,) = _pick_clusters(cube, rng, [rng.randrange(2)])
        trio = _pick(rng, home, 3)
        gate = outside_neighbor(rng.choice(trio))
        if adjacent:
            return trio + [gate]
        return trio + _pick(rng, cluster_of(gate), 1, avoid=[gate])
    return draw


def _trio_with_free_exit(on_exit: bool) -> Family:
    def draw(cube: DualCube, rng: random.Random) -> List[Label]:
        (home,) = _pick_clusters(cube, rng, [rng.randrange(2)])
        trio = _pick(rng, home, 3)
        gate = outside_neighbor(_pick(rng, home, 1, avoid=trio)[0])
        if on_exit:
            return trio + [gate]
        return trio + _pick(rng, cluster_of(gate), 1, avoid=[gate])
    return draw


def _pair_with_crossing(extra: int) -> Family:
    """A pair in one cluster whose first vertex's outside neighbour is a terminal."""
    def draw(cube: DualCube, rng: random.Random) -> List[Label]:
        (home,) = _pick_clusters(cube, rng, [rng.randrange(2)])
        x, y = _pick(rng, home, 2)
        partner = outside_neighbor(x)
        return [x, y, partner] + _pick(rng, cluster_of(partner), extra, avoid=[partner])
    return draw


def _adjacent_pair_into_clusters(cube: DualCube, rng: random.Random) -> List[Label]:
    (home,) = _pick_clusters(cube, rng, [rng.randrange(2)])
    x = _pick(rng, home, 1)[0]
    coordinate = rng.randrange(1, cube.n)
    y = x.flip(_cluster_position(home, coordinate))
    z = _pick(rng, cluster_of(outside_neighbor(x)), 1)[0]
    w = _pick(rng, cluster_of(outside_neighbor(y)), 1)[0]
    return [x, y, z, w]


FOUR_TERMINAL_FAMILIES: Tuple[Tuple[str, Family], ...] = (
    ("one_cluster", _spread((0, 4))),
    ("three_one_same", _spread((0, 3), (0, 1))),
    ("three_one_cross", _spread((0, 3), (1, 1))),
    ("three_one_terminal_exit", _trio_with_terminal_exit(adjacent=False)),
    ("three_one_terminal_adjacent", _trio_with_terminal_exit(adjacent=True)),
    ("three_one_free_exit", _trio_with_free_exit(on_exit=True)),
    ("three_one_free_exit_cluster", _trio_with_free_exit(on_exit=False)),
    ("two_two_same", _spread((0, 2), (0, 2))),
    ("two_two_cross", _spread((0, 2), (1, 2))),
    ("two_two_cross_adjacent", _pair_with_crossing(1)),
    ("three_cluster_same", _spread((0, 2), (0, 1), (0, 1))),
    ("three_cluster_one_opposite", _spread((0, 2), (0, 1), (1, 1))),
    ("three_cluster_two_opposite", _spread((0, 2), (1, 1), (1, 1))),
    ("three_cluster_direct_edge", _adjacent_pair_into_clusters),
    ("four_cluster_same", _spread((0, 1), (0, 1), (0, 1), (0, 1))),
    ("four_cluster_one_opposite", _spread((0, 1), (0, 1), (0, 1), (1, 1))),
    ("four_cluster_two_opposite", _spread((0, 1), (0, 1), (1, 1), (1, 1))),
)

THREE_TERMINAL_FAMILIES: Tuple[Tuple[str, Family], ...] = (
    ("one_cluster", _spread((0, 3))),
    ("two_one_same", _spread((0, 2), (0, 1))),
    ("two_one_cross", _spread((0, 2), (1, 1))),
    ("two_one_adjacent", _pair_with_crossing(0)),
    ("three_cluster_same", _spread((0, 1), (0, 1), (0, 1))),
    ("three_cluster_mixed", _spread((0, 1), (0, 1), (1, 1))),
)


def sample_terminal_sets(cube: DualCube, count: int, size: int = 4, seed: int = 0) -> List[TerminalSet]:
    """
    Draw terminal sets cycling through every occupancy family.

    Families include forced degenerate positions (a terminal's outside
    neighbour being another terminal, an adjacent pair leading straight into
    the other terminals' clusters). The result depends only on the arguments.

    Raises:
        PreconditionError: If size is not 3 or 4, or count is negative
    """
    if size not in (3, 4):
        raise PreconditionError(f"terminal sets have size 3 or 4, got {size}")
    if count < 0:
        raise PreconditionError(f"count must be non-negative, got {count}")
    families = FOUR_TERMINAL_FAMILIES if size == 4 else THREE_TERMINAL_FAMILIES
    rng = random.Random(seed)
    samples = []
    for index in range(count):
        _, draw = families[index % len(families)]
        samples.append(TerminalSet.of(cube, draw(cube, rng)))
    return samples


class TreesClient:
    """Tree constructions bound to one dual cube."""

    def __init__(self, cube: DualCube):
        """
        Initialize the trees client.

        Args:
            cube: The dual cube shared by all sub-clients
        """
        self._cube = cube

    def strees4(self, terminals) -> TreeSet:
        return strees4(self._cube, terminals)

    def strees3(self, terminals) -> TreeSet:
        return strees3(self._cube, terminals)

    def build(self, terminals) -> TreeSet:
        """
        Build trees for three or four terminals.

        Args:
            terminals: Labels or bit strings

        Returns:
            n-1 internally disjoint trees

        Raises:
            InvalidTerminalsError: If the terminal count is not 3 or 4
        """
        terminals = list(terminals)
        if len(terminals) == 3:
            return self.strees3(terminals)
        if len(terminals) == 4:
            return self.strees4(terminals)
        raise InvalidTerminalsError(f"expected 3 or 4 terminals, got {len(terminals)}")

    def sample(self, count: int, size: int = 4, seed: int = 0) -> List[TerminalSet]:
        return sample_terminal_sets(self._cube, count, size, seed)

    def to_payload(self, tree_set: TreeSet):
        from .shared import build_tree_set_payload
        return build_tree_set_payload(tree_set)

    def to_dot(self, tree_set: TreeSet) -> str:
        from .shared import render_tree_set_dot
        return render_tree_set_dot(tree_set)
