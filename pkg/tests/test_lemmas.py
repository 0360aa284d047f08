import random
from fractions import Fraction

import networkx as nx
import pytest

from _support import gnp, is_cycle_walk, lift_cycle, to_nx
from inducedsub.graph import Graph
from inducedsub.invariants import degeneracy_order, girth
from inducedsub.pipeline import DuplicateAuxEdge, PreconditionError, cleaning_step, unbalanced_step
from inducedsub.pipeline.lemmas import build_aux_graph, is_independent, sample_independent_right_filter
from inducedsub.planted import hub_instance, planted_unbalanced, subdivide_edges
from inducedsub.subdivision import verify


def test_right_filter_is_independent():
    rng = random.Random(0)
    for _ in range(100):
        g = gnp(30, rng.uniform(0.05, 0.5), rng)
        B = rng.sample(range(30), 20)
        chosen, R = sample_independent_right_filter(g, B, rng.uniform(0.1, 0.9), rng)
        assert R <= chosen <= set(B)
        assert is_independent(g, R)
        order = degeneracy_order(g, within=B)
        for b in R:
            assert not any(u in chosen for u in order.right_neighbors(g, b))


@pytest.mark.parametrize("N,d,seed", [(72, 2, 0), (72, 2, 1), (150, 3, 2)])
def test_unbalanced_recovers_planted_instance(N, d, seed):
    P = planted_unbalanced(N=N, d=d)
    res = unbalanced_step(P.graph, P.A, P.B, d, seed=seed, retries=30, girth_floor=0)
    assert res.ok, res.reason
    r = verify(res.certificate)
    assert r.is_induced and r.is_proper
    assert res.certificate.pattern.n == d + 1
    for st in res.trace.stages:
        if "R_independent" in st.flags:
            assert st.flags["R_independent"]
    assert res.trace.check_subsets() == []


def test_unbalanced_preconditions():
    P = planted_unbalanced(N=20, d=2)
    with pytest.raises(PreconditionError):
        unbalanced_step(P.graph, P.A + [P.B[0]], P.B, 2, girth_floor=0)
    with pytest.raises(PreconditionError):
        unbalanced_step(P.graph, P.A, P.B, 1, girth_floor=0)
    # a vertex of A with only one neighbour in B
    with pytest.raises(PreconditionError):
        unbalanced_step(P.graph, P.A, P.B[1:], 2, girth_floor=0)
    # girth 6 host against the default floor
    with pytest.raises(PreconditionError):
        unbalanced_step(P.graph, P.A, P.B, 2)


def test_duplicate_detector_fires_on_crafted_four_cycle():
    with pytest.raises(DuplicateAuxEdge) as exc:
        build_aux_graph([1, 2, 3], {10: (1, 2), 11: (2, 3), 12: (2, 1)})
    assert exc.value.edge == (1, 2) and exc.value.witness == (10, 12)


def test_duplicate_detector_inside_unbalanced_step():
    # every edge of K_12 subdivided twice in parallel: each pair of B-vertices lies on a 4-cycle
    N = 12
    edges, A = [], []
    nxt = N
    for u in range(N):
        for v in range(u + 1, N):
            for _ in range(2):
                edges += [(u, nxt), (nxt, v)]
                A.append(nxt)
                nxt += 1
    g = Graph(nxt, edges)
    assert girth(g) == 4
    res = unbalanced_step(g, A, list(range(N)), 2, seed=0, retries=10, girth_floor=0, rate=Fraction(1, 2))
    assert not res.ok
    fired = [st for st in res.trace.stages if st.flags.get("duplicate_aux_edge")]
    assert fired
    a, b = fired[0].values["duplicate_witness"]
    assert set(g.adj[a]) == set(g.adj[b])


def test_no_duplicates_when_girth_holds():
    P = planted_unbalanced(N=72, d=2)
    for seed in range(10):
        res = unbalanced_step(P.graph, P.A, P.B, 2, seed=seed, retries=5, girth_floor=6)
        assert not any(st.flags.get("duplicate_aux_edge") for st in res.trace.stages)


def test_girth_lift_factor_two():
    rng = random.Random(4)
    P = planted_unbalanced(N=30, d=2)
    nb = {a: tuple(sorted(P.graph.adj[a])) for a in P.A}
    for _ in range(20):
        R = sorted(rng.sample(P.B, 15))
        Rs = set(R)
        pairs = {a: nb[a] for a in P.A if set(nb[a]) <= Rs}
        H, labels, owner = build_aux_graph(R, pairs)
        for cyc in nx.cycle_basis(to_nx(H))[:10]:
            walk = lift_cycle(cyc, labels, owner, lambda u, v, w: (u, w, v))
            assert len(walk) == 2 * len(cyc) and is_cycle_walk(P.graph, walk)
        assert girth(P.graph) == 2 * girth(H) or girth(H) > 3


def test_girth_lift_factor_four():
    rng = random.Random(5)
    for _ in range(10):
        base = gnp(12, 0.4, rng)
        host = subdivide_edges(base, 4)
        # subdivide_edges numbers the three inner vertices of the i-th edge consecutively
        pairs, conn = {}, {}
        for i, (u, v) in enumerate(base.edges()):
            x1, y, x2 = base.n + 3 * i, base.n + 3 * i + 1, base.n + 3 * i + 2
            pairs[y] = (u, v)
            conn[y] = (u, x1, y, x2, v)

        def connector(u, v, y):
            p = conn[y]
            return p if p[0] == u else tuple(reversed(p))

        H, labels, owner = build_aux_graph(range(base.n), pairs)
        for cyc in nx.cycle_basis(to_nx(H)):
            walk = lift_cycle(cyc, labels, owner, connector)
            assert len(walk) == 4 * len(cyc) and is_cycle_walk(host, walk)
        if isinstance(girth(base), int):
            assert girth(host) == 4 * girth(base)


def _bipartite_cleaning_instance(k: int = 40, hubs: int = 10):
    """X = k vertices of degree 4, each joined to 4 of the hubs; the hubs form B0."""
    edges = [(hubs + i, (i + j * 3) % hubs) for i in range(k) for j in range(4)]
    return Graph(hubs + k, set((min(a, b), max(a, b)) for a, b in edges)), list(range(hubs, hubs + k)), list(range(hubs))


def test_cleaning_bipartite_instance():
    g, X, B0 = _bipartite_cleaning_instance()
    res = cleaning_step(g, X, B0, 4, seed=0, retries=20, girth_floor=0, fraction=Fraction(1, 2),
                        delta0_factor=8, kappa_factor=2, beta=Fraction(1, 1000))
    assert res.ok, res.reason
    Z1, Y = res.value
    assert Y and Y <= set(B0) and Z1 <= set(X)
    assert is_independent(g, Y)
    assert all(2 <= sum(1 for u in g.adj[y] if u in Z1) <= 2 * 4**4 for y in Y)
    st = res.trace.stages[-1]
    assert st.flags["ii_independent"] and st.flags["iii_window"] and st.flags["iv_degree_cap"]


def test_cleaning_hub_instance_conclusions():
    h = hub_instance(hubs=6)
    X = list(range(120))
    B0 = list(range(120, 126))
    for seed in range(5):
        res = cleaning_step(h, X, B0, 4, seed=seed, retries=20, girth_floor=0, fraction=Fraction(1, 2),
                            delta0_factor=8, kappa_factor=2)
        assert res.ok
        Z1, Y = res.value
        assert is_independent(h, Y) and not (Y & Z1)
        assert all(h.degree(x) <= 32 for x in Z1)


def test_cleaning_preconditions():
    g, X, B0 = _bipartite_cleaning_instance()
    kw = dict(girth_floor=0, fraction=Fraction(1, 2))
    with pytest.raises(PreconditionError):
        cleaning_step(g, X + [0], B0, 4, **kw)
    g2 = Graph(g.n + 1, list(g.edges()) + [(g.n, X[0]), (g.n, X[1]), (g.n, X[2]), (g.n, X[3])])
    with pytest.raises(PreconditionError):
        cleaning_step(g2, X + [g.n], B0, 4, **kw)
    with pytest.raises(PreconditionError):
        cleaning_step(g, X, B0, 3, **kw)
    with pytest.raises(PreconditionError):
        cleaning_step(g, X[:10], B0, 4, **kw)
