"""
Dual cube and hypercube topology.

Vertices are fixed-width bit strings. Position 1 is the leftmost bit, so the
label ``u_1 u_2 ... u_{2n-1}`` is stored as an integer whose most significant
bit is ``u_1``. Graphs compute adjacency on demand; ``materialize`` builds a
plain adjacency dict, which is what ``to_networkx`` hands to networkx.
"""
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import networkx as nx

from .errors import InvalidOrderError, PreconditionError


@dataclass(frozen=True, order=True)
class Label:
    """A vertex label: ``width`` bits, position 1 being the most significant."""

    width: int
    bits: int

    def __post_init__(self):
        if self.width < 1:
            raise PreconditionError(f"label width must be positive, got {self.width}")
        if not 0 <= self.bits < (1 << self.width):
            raise PreconditionError(
                f"bits {self.bits} do not fit in a label of width {self.width}"
            )

    @classmethod
    def from_string(cls, text: str) -> "Label":
        """
        Parse a bit string such as ``"01100"``.

        Raises:
            PreconditionError: If the text is empty or has characters other than 0/1
        """
        if not text or any(ch not in "01" for ch in text):
            raise PreconditionError(f"not a bit string: {text!r}")
        return cls(len(text), int(text, 2))

    def bit(self, position: int) -> int:
        return (self.bits >> (self.width - position)) & 1

    def flip(self, position: int) -> "Label":
        if not 1 <= position <= self.width:
            raise PreconditionError(
                f"position {position} outside 1..{self.width}"
            )
        return Label(self.width, self.bits ^ (1 << (self.width - position)))

    def __str__(self) -> str:
        return format(self.bits, f"0{self.width}b")


Edge = Tuple[Label, Label]


def normalize_edge(u: Label, v: Label) -> Edge:
    return (u, v) if u <= v else (v, u)


class Graph:
    """
    Base class for the graphs in this package.

    Subclasses implement ``vertices`` and ``neighbors``; both must return
    sorted lists so every traversal is deterministic.
    """

    def vertices(self) -> List[Label]:
        raise NotImplementedError

    def neighbors(self, v: Label) -> List[Label]:
        raise NotImplementedError

    def has_vertex(self, v: Label) -> bool:
        return v in self.vertex_set

    @cached_property
    def vertex_set(self) -> FrozenSet[Label]:
        return frozenset(self.vertices())

    def has_edge(self, u: Label, v: Label) -> bool:
        return self.has_vertex(u) and v in self.neighbors(u)

    def degree(self, v: Label) -> int:
        return len(self.neighbors(v))

    def edges(self) -> List[Edge]:
        """Every edge once, as (smaller, larger) pairs in sorted order."""
        return [
            (u, v)
            for u in self.vertices()
            for v in self.neighbors(u)
            if u < v
        ]

    def materialize(self) -> Dict[Label, Tuple[Label, ...]]:
        return {v: tuple(self.neighbors(v)) for v in self.vertices()}

    def to_networkx(self) -> nx.Graph:
        return nx.from_dict_of_lists(self.materialize())


class AdjacencyGraph(Graph):
    """A small explicit graph, used for oracle examples such as stars."""

    def __init__(self, adjacency: Dict[Label, Iterable[Label]]):
        table: Dict[Label, set] = {v: set() for v in adjacency}
        for v, nbrs in adjacency.items():
            for u in nbrs:
                table.setdefault(u, set())
                table[v].add(u)
                table[u].add(v)
        self._table = {v: sorted(nbrs) for v, nbrs in table.items()}

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[str, str]]) -> "AdjacencyGraph":
        adjacency: Dict[Label, List[Label]] = {}
        for a, b in edges:
            u, v = Label.from_string(a), Label.from_string(b)
            adjacency.setdefault(u, []).append(v)
            adjacency.setdefault(v, [])
        return cls(adjacency)

    def vertices(self) -> List[Label]:
        return sorted(self._table)

    def neighbors(self, v: Label) -> List[Label]:
        return list(self._table.get(v, ()))


@dataclass(frozen=True, order=True)
class ClusterRef:
    """
    One cluster of D_n.

    ``fixed`` holds the n-1 fixed bits: positions n..2n-2 for class 0,
    positions 1..n-1 for class 1.
    """

    class_bit: int
    fixed: int
    order: int

    def __post_init__(self):
        if self.class_bit not in (0, 1):
            raise PreconditionError(f"class bit must be 0 or 1, got {self.class_bit}")
        if self.order < 2:
            raise InvalidOrderError(f"order must be at least 2, got {self.order}")
        if not 0 <= self.fixed < (1 << (self.order - 1)):
            raise PreconditionError(
                f"fixed pattern {self.fixed} does not fit in {self.order - 1} bits"
            )

    @property
    def fixed_bits(self) -> str:
        return format(self.fixed, f"0{self.order - 1}b")

    def contains(self, v: Label) -> bool:
        return v.width == 2 * self.order - 1 and cluster_of(v) == self

    def vertices(self) -> List[Label]:
        return list(_cluster_vertices(self))

    def __str__(self) -> str:
        return f"D{self.class_bit}[{self.fixed_bits}]"


class Hypercube(Graph):
    """
    Q_m on m-bit labels, optionally embedded into one cluster of a dual cube.

    The embedding writes hypercube coordinate i into the i-th free position of
    the cluster: positions 1..n-1 for class 0, positions n..2n-2 for class 1.
    """

    def __init__(self, m: int, cluster: Optional[ClusterRef] = None):
        if m < 1:
            raise InvalidOrderError(f"hypercube dimension must be positive, got {m}")
        if cluster is not None and cluster.order - 1 != m:
            raise InvalidOrderError(
                f"cluster {cluster} holds Q_{cluster.order - 1}, not Q_{m}"
            )
        self.m = m
        self.cluster = cluster

    def vertices(self) -> List[Label]:
        return [Label(self.m, bits) for bits in range(1 << self.m)]

    def has_vertex(self, v: Label) -> bool:
        return v.width == self.m

    def neighbors(self, v: Label) -> List[Label]:
        return sorted(v.flip(i) for i in range(1, self.m + 1))

    def embed(self, h: Label) -> Label:
        if self.cluster is None:
            raise PreconditionError("hypercube has no cluster embedding")
        n = self.cluster.order
        if self.cluster.class_bit == 0:
            bits = (h.bits << n) | (self.cluster.fixed << 1)
        else:
            bits = (self.cluster.fixed << n) | (h.bits << 1) | 1
        return Label(2 * n - 1, bits)

    def project(self, v: Label) -> Label:
        if self.cluster is None:
            raise PreconditionError("hypercube has no cluster embedding")
        if not self.cluster.contains(v):
            raise PreconditionError(f"{v} is not in cluster {self.cluster}")
        n = self.cluster.order
        mask = (1 << (n - 1)) - 1
        if self.cluster.class_bit == 0:
            return Label(self.m, v.bits >> n)
        return Label(self.m, (v.bits >> 1) & mask)

    def __repr__(self) -> str:
        if self.cluster is None:
            return f"Hypercube(m={self.m})"
        return f"Hypercube(m={self.m}, cluster={self.cluster})"


class DualCube(Graph):
    """The dual cube D_n on (2n-1)-bit labels."""

    def __init__(self, n: int):
        if not isinstance(n, int) or isinstance(n, bool) or n < 2:
            raise InvalidOrderError(f"dual cube order must be an integer >= 2, got {n!r}")
        self.n = n
        self.width = 2 * n - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, DualCube) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("DualCube", self.n))

    def __repr__(self) -> str:
        return f"DualCube(n={self.n})"

    @property
    def vertex_count(self) -> int:
        return 1 << self.width

    def label(self, bits: int) -> Label:
        return Label(self.width, bits)

    def parse(self, text: str) -> Label:
        """
        Parse a vertex bit string of this dual cube.

        Raises:
            PreconditionError: If the text is not a bit string
            InvalidOrderError: If the bit string has the wrong width
        """
        v = Label.from_string(text)
        self.check_vertex(v)
        return v

    def check_vertex(self, v: Label) -> None:
        if v.width != self.width:
            raise InvalidOrderError(
                f"{v} has width {v.width}, D_{self.n} labels have width {self.width}"
            )

    @cached_property
    def _vertex_list(self) -> Tuple[Label, ...]:
        return tuple(Label(self.width, bits) for bits in range(1 << self.width))

    def vertices(self) -> List[Label]:
        return list(self._vertex_list)

    def has_vertex(self, v: Label) -> bool:
        return v.width == self.width

    def neighbors(self, v: Label) -> List[Label]:
        n = self.n
        if v.bit(self.width) == 0:
            positions = range(1, n)
        else:
            positions = range(n, 2 * n - 1)
        result = [v.flip(p) for p in positions]
        result.append(v.flip(self.width))
        return sorted(result)

    def clusters(self, class_bit: int) -> List[ClusterRef]:
        return [ClusterRef(class_bit, fixed, self.n) for fixed in range(1 << (self.n - 1))]

    def all_clusters(self) -> Iterator[ClusterRef]:
        yield from self.clusters(0)
        yield from self.clusters(1)


def build_dual_cube(n: int) -> DualCube:
    """
    Build D_n.

    Args:
        n: Order of the dual cube, at least 2

    Returns:
        The dual cube with 2^(2n-1) vertices

    Raises:
        InvalidOrderError: If n < 2
    """
    return DualCube(n)


def outside_neighbor(v: Label) -> Label:
    """The endpoint of the cross edge at ``v``: ``v`` with its last bit flipped."""
    return v.flip(v.width)


def cluster_of(v: Label) -> ClusterRef:
    if v.width < 3 or v.width % 2 == 0:
        raise InvalidOrderError(f"{v} is not a dual cube label")
    n = (v.width + 1) // 2
    mask = (1 << (n - 1)) - 1
    class_bit = v.bits & 1
    if class_bit == 0:
        return ClusterRef(0, (v.bits >> 1) & mask, n)
    return ClusterRef(1, v.bits >> n, n)


def cross_edge(c0: ClusterRef, c1: ClusterRef) -> Edge:
    """
    The unique edge between a class-0 and a class-1 cluster.

    Raises:
        PreconditionError: If the clusters are not of class 0 and 1
        InvalidOrderError: If the clusters belong to different orders
    """
    if c0.class_bit != 0 or c1.class_bit != 1:
        raise PreconditionError(
            f"cross_edge needs a class-0 and a class-1 cluster, got {c0} and {c1}"
        )
    if c0.order != c1.order:
        raise InvalidOrderError(
            f"clusters come from D_{c0.order} and D_{c1.order}"
        )
    n = c0.order
    bits = (c1.fixed << n) | (c0.fixed << 1)
    return Label(2 * n - 1, bits), Label(2 * n - 1, bits | 1)


def exit_vertex(source: ClusterRef, toward: ClusterRef) -> Label:
    """The vertex of ``source`` whose outside neighbour lies in ``toward``."""
    if source.class_bit == toward.class_bit:
        raise PreconditionError(
            f"clusters {source} and {toward} are of the same class"
        )
    if source.class_bit == 0:
        return cross_edge(source, toward)[0]
    return cross_edge(toward, source)[1]


def cluster_graph(c: ClusterRef) -> Hypercube:
    """The hypercube Q_{n-1} carried by cluster ``c``, with its embedding."""
    return Hypercube(c.order - 1, cluster=c)


@lru_cache(maxsize=None)
def _cluster_vertices(c: ClusterRef) -> Tuple[Label, ...]:
    q = cluster_graph(c)
    return tuple(sorted(q.embed(h) for h in q.vertices()))


class TopologyClient:
    """Topology queries bound to one dual cube."""

    def __init__(self, cube: DualCube):
        """
        Initialize the topology client.

        Args:
            cube: The dual cube shared by all sub-clients
        """
        self._cube = cube

    @property
    def cube(self) -> DualCube:
        return self._cube

    def vertex(self, text: str) -> Label:
        return self._cube.parse(text)

    def outside_neighbor(self, v: Label) -> Label:
        self._cube.check_vertex(v)
        return outside_neighbor(v)

    def cluster_of(self, v: Label) -> ClusterRef:
        self._cube.check_vertex(v)
        return cluster_of(v)

    def cross_edge(self, c0: ClusterRef, c1: ClusterRef) -> Edge:
        for c in (c0, c1):
            if c.order != self._cube.n:
                raise InvalidOrderError(f"{c} does not belong to D_{self._cube.n}")
        return cross_edge(c0, c1)

    def cluster_graph(self, c: ClusterRef) -> Hypercube:
        if c.order != self._cube.n:
            raise InvalidOrderError(f"{c} does not belong to D_{self._cube.n}")
        return cluster_graph(c)

    def clusters(self, class_bit: int) -> List[ClusterRef]:
        return self._cube.clusters(class_bit)

    def to_payload(self):
        from .shared import build_graph_payload
        return build_graph_payload(self._cube)

    def to_dot(self) -> str:
        from .shared import render_graph_dot
        return render_graph_dot(self._cube)
