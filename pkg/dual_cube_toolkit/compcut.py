"""
Component connectivity of the dual cube.

The smallest vertex set whose deletion leaves at least r+1 components has
r*n - r(r+1)/2 + 1 vertices. ``component_cut`` builds one such set as the
neighbourhood of r vertices adjacent to the all-zero label; the verifiers
recount components independently.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Tuple

import networkx as nx

from .errors import InvalidOrderError, PreconditionError
from .oracle import Check, VerificationReport
from .topology import DualCube, Graph, Hypercube, Label

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CutSet:
    """
    A vertex set claimed to split the cube into at least r+1 components.

    ``census`` lists the component sizes after deletion in ascending order.
    """

    removed: FrozenSet[Label]
    r: int
    census: Tuple[int, ...]
    order: int

    def __len__(self) -> int:
        return len(self.removed)

    @property
    def components(self) -> int:
        return len(self.census)

    @property
    def singletons(self) -> int:
        return sum(1 for size in self.census if size == 1)


@dataclass(frozen=True)
class CutCensus:
    census: Tuple[int, ...]
    report: VerificationReport


@dataclass(frozen=True)
class StructureReport:
    """
    Census of the cube after deleting T.

    ``holds`` is True when every component but the largest has, in total,
    at most k-1 vertices.
    """

    census: Tuple[int, ...]
    small_total: int
    k: int

    @property
    def holds(self) -> bool:
        return self.small_total <= self.k - 1

    @property
    def connected(self) -> bool:
        return len(self.census) <= 1


def _check_order(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InvalidOrderError(f"dual cube order must be an integer >= 2, got {n!r}")


def _check_r(n: int, r: int, name: str = "r") -> None:
    if not isinstance(r, int) or isinstance(r, bool) or not 1 <= r <= n - 1:
        raise PreconditionError(f"{name} must be in 1..{n - 1} for n={n}, got {r!r}")


def cut_size_formula(n: int, r: int) -> int:
    """
    Size of a minimum (r+1)-component cut of D_n.

    Raises:
        InvalidOrderError: If n < 2
        PreconditionError: If r is outside 1..n-1
    """
    _check_order(n)
    _check_r(n, r)
    return r * n - r * (r + 1) // 2 + 1


def threshold(n: int, k: int) -> int:
    """Largest deletion size the structure check accepts for k."""
    _check_r(n, k, name="k")
    return k * n - k * (k + 1) // 2


def component_census(graph: Graph, removed: Iterable[Label]) -> Tuple[int, ...]:
    """
    Component sizes of ``graph`` minus ``removed``, ascending.

    Walks the graph's own adjacency breadth first.
    """
    gone = set(removed)
    seen = set(gone)
    sizes: List[int] = []
    for start in graph.vertices():
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        size = 0
        while queue:
            v = queue.popleft()
            size += 1
            for w in graph.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        sizes.append(size)
    return tuple(sorted(sizes))


def base_vertices(cube: DualCube) -> Tuple[Label, List[Label]]:
    """The all-zero label u and its in-cluster neighbours u_1..u_{n-1}, by flipped position."""
    u = cube.label(0)
    return u, [u.flip(i) for i in range(1, cube.n)]


def component_cut(cube: DualCube, r: int) -> CutSet:
    """
    Build a minimum (r+1)-component cut.

    The cut is the union of the neighbourhoods of u_1..u_r; it contains u and
    isolates each u_i.

    Args:
        cube: The dual cube
        r: Number of extra components, 1..n-1

    Returns:
        CutSet with the census already counted

    Raises:
        PreconditionError: If r is outside 1..n-1
    """
    _check_r(cube.n, r)
    _, spokes = base_vertices(cube)
    isolated = spokes[:r]
    removed = set()
    for v in isolated:
        removed.update(cube.neighbors(v))
    removed -= set(isolated)
    census = component_census(cube, removed)
    logger.debug("component cut n=%d r=%d: %d removed, census %s", cube.n, r, len(removed), census)
    return CutSet(frozenset(removed), r, census, cube.n)


def verify_cut(cube: DualCube, cut: CutSet) -> CutCensus:
    """
    Recount the components left by a cut with networkx and check its claims.

    Args:
        cube: The dual cube
        cut: A cut set, produced here or elsewhere

    Returns:
        CutCensus with the exact census and a report whose failed checks carry
        witnesses
    """
    outside = sorted(v for v in cut.removed if not cube.has_vertex(v))
    g = cube.to_networkx()
    g.remove_nodes_from(v for v in cut.removed if v in g)
    components = sorted(nx.connected_components(g), key=lambda c: (len(c), min(c)))
    census = tuple(len(c) for c in components)
    singles = [next(iter(c)) for c in components if len(c) == 1]

    checks = (
        Check("removed-outside", not outside, "cut", outside[0] if outside else None),
        Check("component-count", len(census) >= cut.r + 1, "cut",
              None if len(census) >= cut.r + 1 else len(census)),
        Check("singletons", len(singles) >= cut.r, "cut",
              None if len(singles) >= cut.r else singles),
        Check("census-match", census == tuple(cut.census), "cut",
              None if census == tuple(cut.census) else list(census)),
    )
    report = VerificationReport(
        f"cut n={cut.order} r={cut.r}", checks, {"census": list(census)}
    )
    return CutCensus(census, report)


def structure_check(cube: DualCube, removed: Iterable[Label], k: int) -> StructureReport:
    """
    Census of the cube after deleting a set of at most k*n - k(k+1)/2 vertices.

    Raises:
        PreconditionError: If k is out of range or the set is too large
    """
    gone = frozenset(removed)
    limit = threshold(cube.n, k)
    if len(gone) > limit:
        raise PreconditionError(f"|T|={len(gone)} exceeds {limit} for k={k}")
    for v in gone:
        cube.check_vertex(v)
    census = component_census(cube, gone)
    small_total = sum(census) - max(census) if census else 0
    return StructureReport(census, small_total, k)


def common_neighbors(q: Hypercube, u: Label, v: Label) -> FrozenSet[Label]:
    """
    N(u) and N(v) intersected in a hypercube; two vertices or none when m >= 3.

    Raises:
        PreconditionError: If u equals v or either is not a vertex of q
    """
    for w in (u, v):
        if not q.has_vertex(w):
            raise PreconditionError(f"{w} is not a vertex of Q_{q.m}")
    if u == v:
        raise PreconditionError("common neighbours need two distinct vertices")
    return frozenset(q.neighbors(u)) & frozenset(q.neighbors(v))


class CutsClient:
    """Component cuts bound to one dual cube."""

    def __init__(self, cube: DualCube):
        self._cube = cube

    def cut_size(self, r: int) -> int:
        return cut_size_formula(self._cube.n, r)

    def component_cut(self, r: int) -> CutSet:
        return component_cut(self._cube, r)

    def verify_cut(self, cut: CutSet) -> CutCensus:
        return verify_cut(self._cube, cut)

    def structure_check(self, removed: Iterable[Label], k: int) -> StructureReport:
        return structure_check(self._cube, removed, k)

    def to_payload(self, cut: CutSet):
        from .shared import build_cut_set_payload
        return build_cut_set_payload(cut)

    def to_dot(self, cut: CutSet) -> str:
        from .shared import render_cut_set_dot
        return render_cut_set_dot(self._cube, cut)
