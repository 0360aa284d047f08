import random
from fractions import Fraction

import mpmath
import networkx as nx
import pytest
from hypothesis import given

from _support import brute_degeneracy, graphs, to_nx
from inducedsub.graph import Graph, complete_graph, cycle_graph, heawood_graph, path_graph, petersen_graph, star_graph
from inducedsub.invariants import (
    INFINITY,
    average_degree,
    avg_core,
    bfs_forest,
    decimal_digits,
    degeneracy,
    degeneracy_order,
    girth,
    graph_stats,
    greedy_color,
    is_proper_coloring,
    moore_lower_bound,
)


def nx_girth(g: Graph):
    gi = nx.girth(to_nx(g))
    return INFINITY if gi == float("inf") else gi


def test_girth_examples():
    assert girth(cycle_graph(5)) == 5
    assert girth(petersen_graph()) == 5
    assert girth(path_graph(7)) is INFINITY
    assert girth(star_graph(4)) is INFINITY
    assert girth(heawood_graph()) == 6


@given(graphs(max_n=11))
def test_girth_matches_networkx(g):
    assert girth(g) == nx_girth(g)


@given(graphs(min_n=2, max_n=10))
def test_edge_deletion_never_decreases_girth(g):
    gi = girth(g)
    assert gi is INFINITY or gi >= 3
    for e in list(g.edges())[:5]:
        h = Graph(g.n, [f for f in g.edges() if f != e])
        assert girth(h) >= gi


def test_degeneracy_examples():
    assert degeneracy(complete_graph(5)) == 4
    assert degeneracy(path_graph(6)) == 1
    assert degeneracy(petersen_graph()) == 3


@given(graphs(max_n=9))
def test_degeneracy_matches_exhaustive_definition(g):
    if g.n == 0:
        return
    order = degeneracy_order(g)
    assert order.degeneracy == brute_degeneracy(g)
    assert max(order.right_degree) <= order.degeneracy
    assert sorted(order.order) == list(range(g.n))


@given(graphs(max_n=12))
def test_degeneracy_matches_networkx_cores(g):
    if g.n == 0:
        return
    assert degeneracy(g) == max(nx.core_number(to_nx(g)).values())


def test_coloring_examples():
    assert len(set(greedy_color(cycle_graph(4)))) == 2
    assert len(set(greedy_color(complete_graph(4)))) == 4
    c = greedy_color(petersen_graph())
    assert is_proper_coloring(petersen_graph(), c) and len(set(c)) <= 4


@given(graphs(max_n=14))
def test_coloring_proper_and_bounded(g):
    c = greedy_color(g)
    assert is_proper_coloring(g, c)
    if g.n:
        assert max(c) + 1 <= degeneracy(g) + 1


def test_avg_core_examples():
    assert avg_core(complete_graph(5), 1) == frozenset(range(5))
    assert avg_core(path_graph(6), 1) is None
    assert avg_core(petersen_graph(), 2) == frozenset(range(10))


@given(graphs(max_n=8))
def test_avg_core_contract(g):
    for d in range(0, 4):
        core = avg_core(g, d)
        if g.n and 2 * g.m > 2 * d * g.n:
            assert core
        if core is not None:
            assert core
            assert all(sum(1 for u in g.adj[v] if u in core) >= d + 1 for v in core)
        else:
            assert degeneracy(g) <= d if g.n else True


def test_moore_bound_examples():
    assert moore_lower_bound(3, 2) == 14
    h = heawood_graph()
    assert h.n == 14 and girth(h) == 6
    for m in range(6):
        assert moore_lower_bound(2, m) == 2 * (m + 1)


def test_moore_bound_full_scale_digit_count():
    # girth 8*10^6 with min degree 3: m = 3,999,999
    x = moore_lower_bound(3, 3_999_999)
    assert x == 2 * (2**4_000_000 - 1)
    # 2^4000001 - 2 has floor(4000001 log10 2) + 1 digits
    expected = int(mpmath.floor(4_000_001 * mpmath.log10(2))) + 1
    assert decimal_digits(x) == expected == 1_204_121


def test_moore_bound_rejects_bad_input():
    with pytest.raises(ValueError):
        moore_lower_bound(1, 3)


@given(graphs(max_n=10))
def test_moore_bound_holds_on_random_graphs(g):
    stats = graph_stats(g)
    if g.n == 0 or stats.min_degree < 2 or stats.girth is INFINITY:
        return
    m = (stats.girth - 2) // 2
    assert g.n >= moore_lower_bound(stats.min_degree, m)


def test_bfs_forest_examples():
    f = bfs_forest(path_graph(3), [0, 2])
    assert f.root[1] == 0 and f.parent[1] == 0
    f = bfs_forest(petersen_graph(), [0])
    dist = nx.single_source_shortest_path_length(nx.petersen_graph(), 0)
    assert list(f.depth) == [dist[v] for v in range(10)]
    f = bfs_forest(cycle_graph(6), [0, 3])
    assert sorted(f.tree(0)) == [0, 1, 5] and sorted(f.tree(3)) == [2, 3, 4]


def test_bfs_forest_unassigned():
    g = Graph(4, [(0, 1)])
    f = bfs_forest(g, [0])
    assert f.unassigned == [2, 3]


@given(graphs(min_n=1, max_n=12))
def test_bfs_forest_depth_is_distance_to_nearest_root(g):
    rng = random.Random(g.m)
    roots = rng.sample(range(g.n), max(1, g.n // 4))
    f = bfs_forest(g, roots)
    h = to_nx(g)
    for v in range(g.n):
        dists = [nx.shortest_path_length(h, r, v) for r in roots if nx.has_path(h, r, v)]
        if not dists:
            assert f.root[v] is None
            continue
        assert f.depth[v] == min(dists)
        if f.parent[v] is not None:
            assert g.has_edge(v, f.parent[v]) and f.root[f.parent[v]] == f.root[v]


def test_stats_average_degree_is_exact():
    s = graph_stats(petersen_graph())
    assert s.average_degree == Fraction(3) and s.min_degree <= s.average_degree <= s.max_degree
    assert average_degree(path_graph(3)) == Fraction(4, 3)
