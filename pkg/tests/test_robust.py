import random
from fractions import Fraction
from itertools import combinations

import pytest

from inducedsub.graph import Graph, complete_graph, disjoint_union, path_graph
from inducedsub.invariants import bfs_distances
from inducedsub.pipeline import (
    PreconditionError,
    branch_witnesses,
    build_path_system,
    check_witness,
    core_with_retained_degrees,
    induced_mader,
    mader_parameters,
    sample_aux_graph,
    separated_roots,
)
from inducedsub.pipeline.robust import StructuralError, minimal_dense_subgraph
from inducedsub.planted import planted_mader
from inducedsub.subdivision import is_induced_path, verify


def two_stars() -> Graph:
    # centres 0 and 4, leaves 1,2,3 and 5,6,7; the single bridge joins leaves 1 and 5
    edges = [(0, 1), (0, 2), (0, 3), (4, 5), (4, 6), (4, 7), (1, 5)]
    return Graph(8, edges)


def test_core_on_disjoint_cliques():
    h = disjoint_union(complete_graph(30), complete_graph(30))
    sel = core_with_retained_degrees(h, 1, 29, 1, range(60))
    assert sel.block is not None and len(sel.block.vertices) == 30
    assert sel.retained == sel.block.vertices


def test_core_on_bridged_cliques():
    edges = set(disjoint_union(complete_graph(30), complete_graph(30)).edges()) | {(0, 30), (1, 31)}
    h = Graph(60, edges)
    D = max(h.degrees())
    sel = core_with_retained_degrees(h, 2, D, 1, range(60))
    assert sel.block is not None
    assert len(sel.retained & sel.block.vertices) >= len(sel.block.vertices) / (2 * D)
    # recomputed from degrees: d_block(x) >= d_h(x) - 2k^2
    for x in sel.retained:
        assert sum(1 for u in h.adj[x] if u in sel.block.vertices) >= h.degree(x) - 8


def test_separated_roots_examples():
    g = path_graph(10)
    S, _ = separated_roots(g, 1)
    assert S == frozenset({0, 3, 6, 9})
    S, _ = separated_roots(g, 0)
    assert S == frozenset(range(10))
    S, U1 = separated_roots(g, 2, U=[7])
    assert 7 in S and U1 == frozenset({7})


def test_separated_roots_pairwise_far_and_maximal():
    rng = random.Random(1)
    for _ in range(20):
        n = 40
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.06])
        ell = rng.randint(1, 2)
        S, _ = separated_roots(g, ell, rng.sample(range(n), 5))
        for u, v in combinations(sorted(S), 2):
            assert bfs_distances(g, u, radius=2 * ell).get(v) is None
        for v in range(n):
            if v not in S:
                near = bfs_distances(g, v, radius=2 * ell)
                assert any(s in near for s in S)


def test_path_system_two_stars():
    ps = build_path_system(two_stars(), [0, 4], 5)
    assert ps.paths == {(0, 4): (0, 1, 5, 4)}
    assert ps.conflicts[(0, 4)] == frozenset({0, 4})
    aux = sample_aux_graph(ps, 1, seed=0)
    assert aux.S == frozenset({0, 4}) and list(aux.edges) == [(0, 4)]


def test_path_system_single_root_and_length_filter():
    ps = build_path_system(two_stars(), [0], 5)
    assert not ps.paths and not ps.conflicts
    ps = build_path_system(two_stars(), [0, 4], 2)
    assert not ps.paths


def test_path_system_rejects_double_edge_between_trees():
    g = Graph(8, list(two_stars().edges()) + [(2, 6)])
    with pytest.raises(StructuralError) as exc:
        build_path_system(g, [0, 4], 5)
    assert "0" in str(exc.value) and "4" in str(exc.value)


def _planted_system(s=3, t=2, N=20, seed=0):
    P = planted_mader(N=N, t=t, s=s, seed=seed)
    main, labels = P.graph.induced(P.main)
    index = {v: i for i, v in enumerate(labels)}
    roots = [index[r] for r in P.roots]
    return P, main, build_path_system(main, roots, 5)


def test_path_system_paths_are_short_induced_and_conflicts_bounded():
    P, g, ps = _planted_system()
    D = max(g.degrees())
    for e, path in ps.paths.items():
        assert path[0] == e[0] and path[-1] == e[1]
        assert len(path) - 1 <= ps.L and is_induced_path(g, path)
        assert len(ps.conflicts[e]) <= (ps.L + 1) * (D + 1)


def test_sample_rule_and_empty_sample():
    P, g, ps = _planted_system()
    aux = sample_aux_graph(ps, 1, seed=0)
    for e in ps.paths:
        assert (e in aux.edges) == (ps.conflicts[e] == frozenset(e))
    tiny = sample_aux_graph(ps, Fraction(1, 10**9), seed=0)
    assert not tiny.S and not tiny.edges
    with pytest.raises(ValueError):
        sample_aux_graph(ps, 0)


def test_branch_witness_planted_branching():
    # every aux path leaves a root through one of its two children
    P, g, ps = _planted_system(s=3, t=2)
    aux = sample_aux_graph(ps, 1, seed=0)
    w2 = branch_witnesses(ps, aux, 2, 2)
    assert w2
    for w in w2.values():
        assert check_witness(ps, aux, w, 2) == []
    assert not branch_witnesses(ps, aux, 3, 1)


def test_branch_witness_trivial_case():
    P, g, ps = _planted_system()
    aux = sample_aux_graph(ps, 1, seed=0)
    nbrs = aux.neighbors()
    w1 = branch_witnesses(ps, aux, 1, 1)
    assert set(w1) == {y for y in aux.S if nbrs[y]}


def test_check_witness_catches_tampering():
    P, g, ps = _planted_system(s=3, t=2)
    aux = sample_aux_graph(ps, 1, seed=0)
    w = next(iter(branch_witnesses(ps, aux, 2, 2).values()))
    bad = type(w)(w.y, w.z, (w.M[0] | w.M[1], w.M[1]))
    assert check_witness(ps, aux, bad, 2)
    bad = type(w)(w.y, (w.z[0], w.z[0]), w.M)
    assert check_witness(ps, aux, bad, 2)


def _desk_params(P, t):
    return mader_parameters(P.s, P.eta, P.D, 1, 1, {"q": 1, "Q": t, "p": 1, "D0": 1, "girth_threshold": 5})


@pytest.mark.parametrize("s,t,N,seed", [(3, 2, 20, 0), (3, 3, 30, 1), (4, 2, 40, 2)])
def test_induced_mader_planted(s, t, N, seed):
    P = planted_mader(N=N, t=t, s=s, seed=seed)
    res = induced_mader(P.graph, _desk_params(P, t), seed=seed, retries=3, relax_girth=True)
    assert res.ok, (res.failed_stage, res.reason)
    r = verify(res.certificate)
    assert r.is_induced and r.is_proper and res.certificate.pattern.n == s


def test_induced_mader_preconditions():
    P = planted_mader(N=20, t=2, s=3)
    params = mader_parameters(3, P.eta, P.D - 1, 1, 1, {"q": 1, "Q": 2, "p": 1, "D0": 1, "girth_threshold": 5})
    with pytest.raises(PreconditionError):
        induced_mader(P.graph, params, relax_girth=True)
    with pytest.raises(PreconditionError):
        induced_mader(P.graph, _desk_params(P, 2), relax_girth=False)
    # a perfect matching has average degree 1, below 2 * alpha
    sparse = Graph(10, [(i, i + 1) for i in range(0, 10, 2)])
    with pytest.raises(PreconditionError):
        induced_mader(sparse, mader_parameters(3, Fraction(1, 20), 4, 1, 1, {"q": 1}), relax_girth=True)


def test_minimal_reduction_strips_ballast():
    P = planted_mader(N=20, t=2, s=3)
    params = _desk_params(P, 2)
    keep = minimal_dense_subgraph(P.graph, params.alpha)
    assert set(keep) == set(P.main)
