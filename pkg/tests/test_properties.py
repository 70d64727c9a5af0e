"""
Property-based tests over randomly drawn vertices, pairs and terminal sets.
"""
from itertools import combinations

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dual_cube_toolkit.compcut import component_census, component_cut, cut_size_formula
from dual_cube_toolkit.menger import disjoint_paths
from dual_cube_toolkit.streeforge import sample_terminal_sets, strees3, strees4
from dual_cube_toolkit.topology import (
    DualCube,
    Hypercube,
    Label,
    cluster_graph,
    cluster_of,
    outside_neighbor,
)
from tests.test_utils import assert_verified

CUBES = {n: DualCube(n) for n in range(2, 7)}
D4 = CUBES[4]


@st.composite
def dual_cube_vertex(draw, orders=range(2, 7)):
    n = draw(st.sampled_from(list(orders)))
    cube = CUBES[n]
    return cube, cube.label(draw(st.integers(0, cube.vertex_count - 1)))


@st.composite
def hypercube_pair(draw):
    m = draw(st.integers(2, 5))
    x = draw(st.integers(0, (1 << m) - 1))
    y = draw(st.integers(0, (1 << m) - 1))
    assume(x != y)
    return Hypercube(m), Label(m, x), Label(m, y)


def parity(v: Label) -> int:
    return bin(v.bits).count("1") % 2


@settings(deadline=None)
@given(dual_cube_vertex())
def test_degree_is_n_and_neighbours_flip_one_bit(drawn):
    cube, v = drawn
    neighbours = cube.neighbors(v)
    assert len(set(neighbours)) == cube.n
    for w in neighbours:
        assert bin(v.bits ^ w.bits).count("1") == 1
        assert parity(w) != parity(v)
        assert v in cube.neighbors(w)


@settings(deadline=None)
@given(dual_cube_vertex())
def test_outside_neighbour_is_an_involution_across_classes(drawn):
    cube, v = drawn
    w = outside_neighbor(v)
    assert outside_neighbor(w) == v
    assert cube.has_edge(v, w)
    assert cluster_of(v).class_bit != cluster_of(w).class_bit


@settings(deadline=None)
@given(dual_cube_vertex())
def test_cluster_embedding_round_trips(drawn):
    _, v = drawn
    c = cluster_of(v)
    q = cluster_graph(c)
    assert q.m == c.order - 1
    assert q.embed(q.project(v)) == v
    assert all(c.contains(q.embed(h)) for h in q.neighbors(q.project(v)))


@settings(deadline=None)
@given(hypercube_pair())
def test_hypercube_pairs_have_m_disjoint_paths(drawn):
    q, x, y = drawn
    paths = disjoint_paths(q, x, y, q.m)
    assert len(paths) == q.m
    assert all(p.start == x and p.end == y and p.is_valid_in(q) for p in paths)
    for p, r in combinations(paths, 2):
        assert set(p.vertices) & set(r.vertices) == {x, y}


@settings(deadline=None, max_examples=30)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))))
def test_component_cut_matches_formula(nr):
    n, r = nr
    cube = CUBES[n]
    cut = component_cut(cube, r)
    assert len(cut) == cut_size_formula(n, r)
    assert cut.census == component_census(cube, cut.removed)
    assert len(cut.census) >= r + 1


@settings(deadline=None, max_examples=25)
@given(st.integers(0, 2 ** 16), st.integers(0, 16))
def test_sampled_four_terminal_sets_verify(seed, family):
    ts = sample_terminal_sets(D4, family + 1, size=4, seed=seed)[family]
    assert_verified(D4, strees4(D4, ts))


@settings(deadline=None, max_examples=15)
@given(st.integers(0, 2 ** 16), st.integers(0, 5))
def test_sampled_three_terminal_sets_verify(seed, family):
    ts = sample_terminal_sets(D4, family + 1, size=3, seed=seed)[family]
    assert_verified(D4, strees3(D4, ts))
