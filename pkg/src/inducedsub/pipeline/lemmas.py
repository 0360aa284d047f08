"""Sampling arguments for very unbalanced bipartite structure and the one-sided cleaning step."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from ..graph import Graph
from ..invariants import avg_core, degeneracy, degeneracy_order, girth, greedy_color
from ..rng import stream
from ..subdivision import SearchStatus, SubdivisionCertificate, complete_pattern, find_subdivision, verify
from .trace import DuplicateAuxEdge, PipelineResult, PipelineTrace, PreconditionError


def sample_independent_right_filter(g: Graph, B: Sequence[int], rate: float, rng) -> tuple[frozenset, frozenset]:
    """Choose each vertex of B with probability ``rate``; keep chosen vertices with no chosen
    right-neighbour in a fixed degeneracy order of ``g[B]``. Returns ``(chosen, R)``."""
    order = degeneracy_order(g, within=B)
    chosen = frozenset(b for b in sorted(B) if rng.random() < rate)
    R = frozenset(
        b for b in chosen
        if not any(u in chosen for u in order.right_neighbors(g, b) if order.position[u] >= 0)
    )
    return chosen, R


def is_independent(g: Graph, xs: Iterable[int]) -> bool:
    s = set(xs)
    return all(u not in s for v in s for u in g.adj[v])


def independent_set(vertices: Sequence[int], edges: Sequence[tuple[int, int]]) -> list[int]:
    """Larger of a min-degree greedy independent set and the "delete one endpoint per edge" set.

    The second has size at least ``|V| - |E|``, which is what the counting argument needs.
    """
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    # endpoint deletion
    removed = set()
    for u, v in sorted(edges):
        if u not in removed and v not in removed:
            removed.add(max(u, v))
    by_deletion = sorted(v for v in vertices if v not in removed)
    # min-degree greedy
    alive = set(vertices)
    greedy = []
    while alive:
        v = min(alive, key=lambda x: (len(adj[x] & alive), x))
        greedy.append(v)
        alive -= adj[v] | {v}
    greedy.sort()
    return greedy if len(greedy) > len(by_deletion) else by_deletion


def build_aux_graph(R: Sequence[int], pairs: dict[int, tuple[int, int]]) -> tuple[Graph, list[int], dict]:
    """Graph on ``R`` (relabelled ``0..|R|-1`` in sorted order) with one edge per witness.

    ``pairs`` maps a witness vertex to its two endpoints in R. Raises
    :class:`DuplicateAuxEdge` when two witnesses give the same edge.
    """
    labels = sorted(R)
    index = {r: i for i, r in enumerate(labels)}
    owner: dict[tuple[int, int], int] = {}
    for w in sorted(pairs):
        u, v = pairs[w]
        e = (min(index[u], index[v]), max(index[u], index[v]))
        if e in owner:
            raise DuplicateAuxEdge((labels[e[0]], labels[e[1]]), owner[e], w)
        owner[e] = w
    return Graph(len(labels), owner), labels, owner


def lift_certificate(
    g: Graph,
    cert: SubdivisionCertificate,
    labels: Sequence[int],
    owner: dict[tuple[int, int], int],
    connector,
) -> SubdivisionCertificate:
    """Replace each aux edge on the certificate's paths by its host connector.

    ``connector(u, v, w)`` returns the host path from label u to label v
    through witness w (both ends included).
    """
    paths = {}
    for e, p in cert.paths.items():
        out = [labels[p[0]]]
        for x, y in zip(p, p[1:]):
            w = owner[(min(x, y), max(x, y))]
            seg = connector(labels[x], labels[y], w)
            out.extend(seg[1:])
        paths[e] = tuple(out)
    return SubdivisionCertificate(g, cert.pattern, tuple(labels[b] for b in cert.branch), paths)


def _search_in_core(H: Graph, d: int, budget: int):
    """Subdivision of K_{d+1} inside the d-core of H, or the reason it failed."""
    core = avg_core(H, d - 1)
    if core is None:
        return None, "empty core", None
    sub, sub_labels = H.induced(core)
    res = find_subdivision(sub, complete_pattern(d + 1), budget)
    if res.status is not SearchStatus.FOUND:
        return None, f"subdivision search: {res.status.value}", core
    return res.certificate.relabel(H, sub_labels), "", core


def unbalanced_step(
    g: Graph,
    A: Iterable[int],
    B: Iterable[int],
    d: int,
    seed: int = 0,
    retries: int = 50,
    girth_floor: int = 54,
    rate: Optional[Fraction] = None,
    size_factor: int = 60,
    budget: int = 200_000,
) -> PipelineResult:
    """Induced K_{d+1}-subdivision from many vertices of A with two neighbours in B.

    Samples B, keeps right-filtered vertices R, takes an independent set I of
    witnesses whose R-neighbourhood is exactly their fixed pair, and searches
    for a subdivision in the auxiliary graph on R. Every aux edge becomes a
    path of length 2 in g, so the lifted certificate is induced and proper.
    """
    A = sorted(set(A))
    B = sorted(set(B))
    Bset = set(B)
    if Bset & set(A):
        raise PreconditionError("unbalanced", "A and B must be disjoint")
    if d < 2:
        raise PreconditionError("unbalanced", "need d >= 2")
    if degeneracy(g) > d:
        raise PreconditionError("unbalanced", f"graph is not {d}-degenerate")
    if girth_floor > 3 and girth(g) < girth_floor:
        raise PreconditionError("unbalanced", f"girth below {girth_floor}")
    nb = {a: sorted(u for u in g.adj[a] if u in Bset) for a in A}
    for a in A:
        if len(nb[a]) < 2:
            raise PreconditionError("unbalanced", f"vertex {a} has fewer than 2 neighbours in B")
    rate = Fraction(1, 6 * d) if rate is None else Fraction(rate)

    trace = PipelineTrace()
    st = trace.stage("unbalanced/setup", g.n)
    A0 = [a for a in A if len(nb[a]) <= 4 * d]
    pi = {a: (nb[a][0], nb[a][1]) for a in A0}
    st.sets.update(A=frozenset(A), B=frozenset(B), A0=frozenset(A0))
    st.flags["size_ratio"] = len(A) > size_factor * d * d * len(B)
    st.values["pairs"] = len(pi)

    reason = "no attempts"
    for attempt in range(retries):
        rng = stream(seed, "unbalanced", attempt)
        st = trace.stage(f"unbalanced/attempt-{attempt}", g.n)
        _, R = sample_independent_right_filter(g, B, float(rate), rng)
        st.sets["R"] = R
        st.flags["R_independent"] = is_independent(g, R)
        assert st.flags["R_independent"], "right-filtered sample is not independent"
        good = [a for a in A0 if frozenset(u for u in g.adj[a] if u in R) == frozenset(pi[a])]
        good_set = set(good)
        f_edges = [(a, b) for a in good for b in g.adj[a] if b in good_set and a < b]
        I = independent_set(good, f_edges)
        st.sets.update(good=frozenset(good), I=frozenset(I))
        st.values.update(X=len(good), Y=len(f_edges), R=len(R))
        st.flags["X_minus_Y_exceeds_dR"] = len(good) - len(f_edges) > d * len(R)
        st.flags["I_exceeds_dR"] = len(I) > d * len(R)
        if not st.flags["I_exceeds_dR"]:
            reason = "independent set too small"
            continue
        try:
            H, labels, owner = build_aux_graph(R, {a: pi[a] for a in I})
        except DuplicateAuxEdge as exc:
            st.flags["duplicate_aux_edge"] = True
            st.values["duplicate_witness"] = list(exc.witness)
            reason = "duplicate auxiliary edge"
            continue
        st.flags["duplicate_aux_edge"] = False
        st.values["H_edges"] = H.m
        cert, why, core = _search_in_core(H, d, budget)
        if core is not None:
            st.sets["H_core"] = frozenset(labels[i] for i in core)
        if cert is None:
            reason = why
            continue
        lifted = lift_certificate(g, cert, labels, owner, lambda u, v, w: (u, w, v))
        report = verify(lifted)
        st.flags["verified"] = report.is_induced and report.is_proper
        if not st.flags["verified"]:
            trace.close()
            return PipelineResult(trace, failed_stage="unbalanced/verify", reason=str(report.violations), attempts=attempt + 1)
        trace.close()
        return PipelineResult(trace, certificate=lifted, attempts=attempt + 1)
    trace.close()
    return PipelineResult(trace, failed_stage="unbalanced/retries", reason=reason, attempts=retries)


def cleaning_step(
    g: Graph,
    X: Iterable[int],
    B0: Iterable[int],
    d: int,
    seed: int = 0,
    retries: int = 50,
    girth_floor: int = 54,
    fraction: Fraction = Fraction(81, 100),
    delta0_factor: int = 800,
    kappa_factor: int = 3 * 10**7,
    beta: Fraction = Fraction(1, 10**12),
) -> PipelineResult:
    """Find X' in X and an independent Y whose members each see between 2 and kappa vertices of X'.

    On success ``value`` is ``(X', Y)``. Conclusions (ii)-(iv) are re-checked
    exactly; the size bound (i) is recorded as a flag.
    """
    X = sorted(set(X))
    B0 = set(B0)
    Xset = set(X)
    n = g.n
    if d < 4:
        raise PreconditionError("cleaning", "need d >= 4")
    if B0 & Xset:
        raise PreconditionError("cleaning", "B0 must avoid X")
    if degeneracy(g) > d:
        raise PreconditionError("cleaning", f"graph is not {d}-degenerate")
    if girth_floor > 3 and girth(g) < girth_floor:
        raise PreconditionError("cleaning", f"girth below {girth_floor}")
    if len(X) < Fraction(fraction) * n:
        raise PreconditionError("cleaning", "X is too small")
    for x in X:
        if not any(u in B0 for u in g.adj[x]):
            raise PreconditionError("cleaning", f"vertex {x} has no neighbour in B0")
        if g.degree(x) < d:
            raise PreconditionError("cleaning", f"vertex {x} has degree below {d}")

    delta0 = delta0_factor * d
    kappa = kappa_factor * d**4
    trace = PipelineTrace()
    st = trace.stage("cleaning/setup", n)
    Z = [x for x in X if g.degree(x) <= delta0]
    st.sets.update(X=frozenset(X), B0=frozenset(B0), Z=frozenset(Z))
    st.values.update(delta0=delta0, kappa=kappa)

    reason = "no attempts"
    for attempt in range(retries):
        rng = stream(seed, "cleaning", attempt)
        st = trace.stage(f"cleaning/attempt-{attempt}", n)
        Z1 = frozenset(z for z in Z if rng.random() < 0.5)
        cut = sum(1 for z in Z1 for u in g.adj[z] if u not in Z1)
        st.sets["Z1"] = Z1
        st.values["cut"] = cut
        if 4 * cut < (d + 1) * len(Z):
            reason = "halving cut too small"
            continue
        into = {}
        for z in Z1:
            for u in g.adj[z]:
                if u not in Z1:
                    into[u] = into.get(u, 0) + 1
        U = frozenset(u for u, c in into.items() if c >= 2)
        U1 = frozenset(u for u in U if into[u] > kappa)
        W = U - U1
        st.sets.update(U=U, U_heavy=U1)
        if not W:
            reason = "no light vertices with two neighbours in the half"
            continue
        colour = greedy_color(g, degeneracy_order(g, within=W))
        classes: dict[int, list[int]] = {}
        for v in W:
            classes.setdefault(colour[v], []).append(v)
        best = min(classes, key=lambda c: (-len(classes[c]), c))
        Y = frozenset(classes[best])
        st.sets["Y"] = Y
        st.values["colours"] = len(classes)
        st.flags["ii_independent"] = is_independent(g, Y)
        st.flags["iii_window"] = all(2 <= sum(1 for u in g.adj[y] if u in Z1) <= kappa for y in Y)
        st.flags["iv_degree_cap"] = all(g.degree(x) <= delta0 for x in Z1)
        st.flags["i_size"] = len(Y) * d**3 * (d + 1) >= beta * n
        st.flags["disjoint"] = not (Y & Z1)
        if not (st.flags["ii_independent"] and st.flags["iii_window"] and st.flags["iv_degree_cap"] and st.flags["disjoint"]):
            trace.close()
            return PipelineResult(trace, failed_stage="cleaning/check", reason="conclusion check failed", attempts=attempt + 1)
        trace.close()
        return PipelineResult(trace, value=(Z1, Y), attempts=attempt + 1)
    trace.close()
    return PipelineResult(trace, failed_stage="cleaning/retries", reason=reason, attempts=retries)
