"""
Vertex-disjoint routing.

Every disjoint-path question is answered by one max-flow on a vertex-split
network: each vertex v becomes ``(v, IN) -> (v, OUT)`` with capacity 1, and
each edge uv becomes the uncapacitated arcs ``(u, OUT) -> (v, IN)`` and
``(v, OUT) -> (u, IN)``. A minimum cut therefore crosses only vertex arcs,
except for a direct x-y arc, which is capped at 1. Flow is decomposed into
paths by walking from the source and always taking the smallest successor
first.
"""
import logging
from dataclasses import dataclass
from typing import Collection, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from .errors import ConnectivityError, PreconditionError, RoutingError
from .topology import (
    ClusterRef,
    DualCube,
    Edge,
    Graph,
    Hypercube,
    Label,
    cluster_of,
    exit_vertex,
    normalize_edge,
)

logger = logging.getLogger(__name__)

IN = 0
OUT = 1
_SOURCE = ("source",)
_SINK = ("sink",)


@dataclass(frozen=True)
class Path:
    """A simple path; a single vertex is a path of length zero."""

    vertices: Tuple[Label, ...]

    def __post_init__(self):
        if not self.vertices:
            raise PreconditionError("a path needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise PreconditionError("a path may not repeat a vertex")

    @property
    def start(self) -> Label:
        return self.vertices[0]

    @property
    def end(self) -> Label:
        return self.vertices[-1]

    @property
    def internal(self) -> Tuple[Label, ...]:
        return self.vertices[1:-1]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(
            normalize_edge(u, v) for u, v in zip(self.vertices, self.vertices[1:])
        )

    def is_valid_in(self, graph: Graph) -> bool:
        return all(graph.has_vertex(v) for v in self.vertices) and all(
            graph.has_edge(u, v) for u, v in zip(self.vertices, self.vertices[1:])
        )

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class Fan:
    """Paths from one source to distinct targets, sharing only the source."""

    source: Label
    targets: FrozenSet[Label]
    paths: Tuple[Path, ...]

    def path_to(self, target: Label) -> Path:
        for path in self.paths:
            if path.end == target:
                return path
        raise KeyError(target)

    @property
    def ends(self) -> Tuple[Label, ...]:
        return tuple(path.end for path in self.paths)


def _region(graph: Graph, within: Optional[Iterable[Label]], *required: Label) -> Set[Label]:
    if within is None:
        region = set(graph.vertices())
    else:
        region = set(within)
    for v in required:
        if not graph.has_vertex(v):
            raise PreconditionError(f"{v} is not a vertex of the graph")
        region.add(v)
    return region


def _split_network(graph: Graph, region: Set[Label]) -> nx.DiGraph:
    network = nx.DiGraph()
    for v in sorted(region):
        network.add_edge((v, IN), (v, OUT), capacity=1)
        for u in graph.neighbors(v):
            if u in region:
                network.add_edge((v, OUT), (u, IN))
    return network


def _separator(network: nx.DiGraph, source, sink) -> FrozenSet[Label]:
    _, (reachable, _) = nx.minimum_cut(network, source, sink, flow_func=edmonds_karp)
    return frozenset(
        node[0]
        for node in reachable
        if len(node) == 2 and node[1] == IN and (node[0], OUT) not in reachable
    )


def _walk(flow: Dict, start, stop) -> List[Label]:
    """Follow one unit of flow from ``start``; consumes the arcs it uses."""
    vertices = [start[0]]
    node = start
    while node != stop:
        successors = sorted(
            (nxt for nxt, amount in flow[node].items() if amount > 0),
            key=lambda item: (item == _SINK, item),
        )
        if not successors:
            raise RoutingError(f"flow decomposition stalled at {node}")
        nxt = successors[0]
        flow[node][nxt] -= 1
        node = nxt
        if node != _SINK and node[1] == IN:
            vertices.append(node[0])
    return vertices


def disjoint_paths(
    graph: Graph,
    x: Label,
    y: Label,
    k: int,
    within: Optional[Collection[Label]] = None
) -> List[Path]:
    """
    Find k internally disjoint x-y paths.

    Args:
        graph: Host graph
        x: First endpoint
        y: Second endpoint
        k: Number of paths requested
        within: Optional vertex set the paths must stay inside (x and y are added)

    Returns:
        k paths from x to y whose pairwise intersection is exactly {x, y}

    Raises:
        PreconditionError: If x == y or k < 1
        ConnectivityError: If fewer than k such paths exist; carries the
            achieved count and a separating vertex set
    """
    if x == y:
        raise PreconditionError("disjoint_paths needs two distinct endpoints")
    if k < 1:
        raise PreconditionError(f"k must be at least 1, got {k}")

    region = _region(graph, within, x, y)
    network = _split_network(graph, region)
    network.remove_node((x, IN))
    network.remove_node((y, OUT))
    if network.has_edge((x, OUT), (y, IN)):
        network[(x, OUT)][(y, IN)]["capacity"] = 1
    network.add_edge(_SOURCE, (x, OUT), capacity=k)

    value, flow = nx.maximum_flow(network, _SOURCE, (y, IN), flow_func=edmonds_karp)
    if value < k:
        separator = _separator(network, (x, OUT), (y, IN))
        raise ConnectivityError(
            f"only {value} internally disjoint paths between {x} and {y}, {k} requested",
            requested=k,
            achieved=value,
            separator=separator,
        )

    paths = [Path(tuple(_walk(flow, (x, OUT), (y, IN)))) for _ in range(k)]
    for path in paths:
        assert path.is_valid_in(graph)
    return paths


def fan(
    graph: Graph,
    x: Label,
    targets: Iterable[Label],
    k: int,
    within: Optional[Collection[Label]] = None
) -> Fan:
    """
    Find a k-fan from x to the target set.

    A source that is itself a target contributes the zero-length path, and
    only k-1 further paths are routed.

    Args:
        graph: Host graph
        x: Source vertex
        targets: Candidate end vertices
        k: Number of paths requested
        within: Optional vertex set the fan must stay inside

    Returns:
        A Fan whose paths end at k distinct targets and whose internal
        vertices avoid every target

    Raises:
        PreconditionError: If k < 1 or fewer than k targets are given
        ConnectivityError: If the fan does not exist
    """
    target_set = frozenset(targets)
    if k < 1:
        raise PreconditionError(f"k must be at least 1, got {k}")
    if len(target_set) < k:
        raise PreconditionError(f"{len(target_set)} targets cannot end {k} fan paths")

    paths: List[Path] = []
    need = k
    if x in target_set:
        paths.append(Path((x,)))
        need -= 1
    if need == 0:
        return Fan(x, target_set, tuple(paths))

    region = _region(graph, within, x, *target_set)
    network = nx.DiGraph()
    for v in sorted(region):
        if v == x:
            continue
        network.add_edge((v, IN), (v, OUT), capacity=1)
        if v in target_set:
            network.add_edge((v, OUT), _SINK, capacity=1)
    for v in sorted(region):
        if v in target_set and v != x:
            continue
        tail = (v, OUT)
        for u in graph.neighbors(v):
            if u in region and u != x:
                network.add_edge(tail, (u, IN))
    network.add_edge(_SOURCE, (x, OUT), capacity=need)

    value, flow = nx.maximum_flow(network, _SOURCE, _SINK, flow_func=edmonds_karp)
    if value < need:
        separator = _separator(network, (x, OUT), _SINK)
        raise ConnectivityError(
            f"fan from {x} reaches only {value + k - need} of {k} targets",
            requested=k,
            achieved=value + k - need,
            separator=separator,
        )

    for _ in range(need):
        paths.append(Path(tuple(_walk(flow, (x, OUT), _SINK))))
    for path in paths:
        assert path.is_valid_in(graph)
    return Fan(x, target_set, tuple(paths))


def hypercube_pair_paths(q: Hypercube, x: Label, y: Label) -> List[Path]:
    """The m internally disjoint x-y paths of Q_m."""
    if q.m < 2:
        raise PreconditionError(f"pair paths need m >= 2, got Q_{q.m}")
    return disjoint_paths(q, x, y, q.m)


def shortest_path_within(
    graph: Graph,
    source: Label,
    goals: Collection[Label],
    allowed: Collection[Label],
    forbidden_edges: Iterable[Edge] = ()
) -> Optional[Path]:
    """
    Shortest path from ``source`` to the nearest goal.

    Intermediate vertices are taken from ``allowed``; goals are accepted even
    when they are not in ``allowed``, and no goal is ever passed through.
    Edges in ``forbidden_edges`` are not used. Returns None when no goal is
    reachable.
    """
    goals = set(goals)
    if source in goals:
        return Path((source,))
    if not goals:
        return None
    nodes = {source} | goals | set(allowed)
    forbidden = {normalize_edge(u, v) for u, v in forbidden_edges}
    region = nx.Graph()
    region.add_nodes_from(sorted(nodes))
    for v in sorted(nodes):
        for u in graph.neighbors(v):
            # goals are endpoints only
            if u in nodes and not (u in goals and v in goals) and normalize_edge(u, v) not in forbidden:
                region.add_edge(v, u)
    try:
        _, found = nx.multi_source_dijkstra(region, sorted(goals), target=source)
    except nx.NetworkXNoPath:
        return None
    return Path(tuple(reversed(found)))


def grow_tree(
    graph: Graph,
    points: Sequence[Label],
    region: Collection[Label]
) -> FrozenSet[Edge]:
    """
    Connect the points by a tree inside ``region``.

    The tree starts at the first point; each further point is joined by a
    shortest path to the tree built so far.

    Raises:
        RoutingError: If some point cannot reach the tree inside the region
    """
    if not points:
        return frozenset()
    allowed = set(region)
    tree_vertices = {points[0]}
    edges: Set[Edge] = set()
    for point in points[1:]:
        if point in tree_vertices:
            continue
        path = shortest_path_within(graph, point, tree_vertices, allowed - tree_vertices)
        if path is None:
            raise RoutingError(f"{point} cannot reach {points[0]} inside the region")
        edges.update(path.edges)
        tree_vertices.update(path.vertices)
    return frozenset(edges)


def cluster_path(cube: DualCube, cluster: ClusterRef, x: Label, y: Label) -> Path:
    """A shortest x-y path inside one cluster."""
    members = set(cluster.vertices())
    if x not in members or y not in members:
        raise PreconditionError(f"{x} and {y} must both lie in {cluster}")
    path = shortest_path_within(cube, x, {y}, members)
    if path is None:
        raise RoutingError(f"cluster {cluster} is disconnected")
    return path


def _check_union(clusters: Collection[ClusterRef], *points: Label) -> Tuple[Set[ClusterRef], Set[Label]]:
    chosen = set(clusters)
    if not {c.class_bit for c in chosen} >= {0, 1}:
        raise PreconditionError("the cluster union needs clusters of both classes")
    for v in points:
        if cluster_of(v) not in chosen:
            raise PreconditionError(f"{v} is outside the cluster union")
    members: Set[Label] = set()
    for c in chosen:
        members.update(c.vertices())
    return chosen, members


def path_in_cluster_union(
    cube: DualCube,
    clusters: Collection[ClusterRef],
    x: Label,
    y: Label
) -> Path:
    """
    Route from x to y inside a union of clusters.

    Same cluster: route inside it. Different classes: cross the unique edge
    between the two clusters. Same class, different clusters: pass through
    the smallest opposite-class cluster of the union.

    Raises:
        PreconditionError: If the union lacks a class or misses x or y
    """
    chosen, members = _check_union(clusters, x, y)
    cx, cy = cluster_of(x), cluster_of(y)

    if cx == cy:
        path = cluster_path(cube, cx, x, y)
    elif cx.class_bit != cy.class_bit:
        u, v = exit_vertex(cx, cy), exit_vertex(cy, cx)
        path = _join(cluster_path(cube, cx, x, u), cluster_path(cube, cy, v, y))
    else:
        middle = min(c for c in chosen if c.class_bit != cx.class_bit)
        u, u1 = exit_vertex(cx, middle), exit_vertex(middle, cx)
        v1, v = exit_vertex(middle, cy), exit_vertex(cy, middle)
        path = _join(
            cluster_path(cube, cx, x, u),
            cluster_path(cube, middle, u1, v1),
            cluster_path(cube, cy, v, y),
        )
        logger.debug("routed %s to %s through %s", x, y, middle)

    assert set(path.vertices) <= members
    assert path.is_valid_in(cube)
    return path


def _join(*pieces: Path) -> Path:
    vertices: List[Label] = []
    for piece in pieces:
        vertices.extend(piece.vertices)
    return Path(tuple(vertices))


def tree_in_cluster_union(
    cube: DualCube,
    clusters: Collection[ClusterRef],
    points: Sequence[Label]
) -> FrozenSet[Edge]:
    """
    A tree inside a union of clusters that contains every point.

    A single cluster is accepted here; with more than one, the union must
    hold both classes.
    """
    chosen = set(clusters)
    if len(chosen) == 1:
        members = set(next(iter(chosen)).vertices())
        for v in points:
            if v not in members:
                raise PreconditionError(f"{v} is outside the cluster union")
    else:
        chosen, members = _check_union(chosen, *points)
    edges = grow_tree(cube, list(points), members)
    for u, v in edges:
        assert u in members and v in members
    return edges
