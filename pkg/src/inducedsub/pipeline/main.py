"""Induced K_{k+1}-subdivisions in graphs of minimum degree k and large girth."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from ..graph import Graph
from ..invariants import avg_core, girth, max_min_degree_core
from ..rng import derive_seed, stream
from ..subdivision import SearchStatus, SubdivisionCertificate, complete_pattern, find_induced_subdivision, find_subdivision, verify
from .lemmas import (
    build_aux_graph,
    cleaning_step,
    independent_set,
    is_independent,
    lift_certificate,
    sample_independent_right_filter,
    unbalanced_step,
)
from .params import Profile, resolve_profile
from .robust import induced_mader
from .trace import DuplicateAuxEdge, PipelineResult, PipelineTrace, PreconditionError


def _finish(trace: PipelineTrace, cert: SubdivisionCertificate, k: int, attempts: int = 0) -> PipelineResult:
    """Restrict to K_{k+1}, verify, and close the trace."""
    sub = cert.restrict(list(range(k + 1)))
    report = verify(sub)
    st = trace.stage("main/verify", cert.host.n)
    st.flags.update(induced=report.is_induced, proper=report.is_proper)
    trace.close()
    if not (report.is_induced and report.is_proper):
        return PipelineResult(trace, failed_stage="main/verify", reason=str(report.violations), attempts=attempts)
    return PipelineResult(trace, certificate=sub, attempts=attempts)


def _fail(trace: PipelineTrace, stage: str, reason: str, attempts: int = 0) -> PipelineResult:
    trace.close()
    return PipelineResult(trace, failed_stage=stage, reason=reason, attempts=attempts)


def case_one(
    g: Graph,
    A: frozenset,
    B: frozenset,
    A1: frozenset,
    d: int,
    profile: Profile,
    seed: int,
    retries: int,
    budget: int,
    trace: PipelineTrace,
) -> tuple[Optional[SubdivisionCertificate], str, int]:
    """Most vertices see exactly one high-degree vertex: clean, pick anticomplete triples,
    sample B, and lift a subdivision through the length-4 connectors."""
    clean = cleaning_step(
        g, A1, B, d, seed=derive_seed(seed, "clean"), retries=retries,
        girth_floor=0 if profile.relax_girth else profile.lemma_girth,
        fraction=profile.case1_fraction, delta0_factor=profile.delta0_factor,
        kappa_factor=profile.kappa_factor, beta=profile.beta,
    )
    trace.extend(clean.trace, "case1")
    if not clean.ok:
        return None, clean.failed_stage, clean.attempts
    X1, Y = clean.value
    st = trace.stage("case1/triples", g.n)
    Y0 = sorted(Y - A - B)
    alive = set(Y0)
    Y1: list[int] = []
    triple: dict[int, tuple[int, int]] = {}
    for y in Y0:
        if y not in alive:
            continue
        xs = sorted(u for u in g.adj[y] if u in X1)[:2]
        triple[y] = (xs[0], xs[1])
        Y1.append(y)
        alive.discard(y)
        for x in xs:
            alive -= g.adj[x]
    rank = {y: i for i, y in enumerate(Y1)}
    conflict = []
    for y2 in Y1:
        xs2 = set(triple[y2])
        for y in Y1:
            if rank[y] < rank[y2] and any(g.adj[w] & xs2 for w in (y, *triple[y])):
                conflict.append((y, y2))
    Y2 = independent_set(Y1, conflict)
    st.sets.update(Y0=frozenset(Y0), Y1=frozenset(Y1), Y2=frozenset(Y2))
    st.values["L_edges"] = len(conflict)
    members = {y: {y, *triple[y]} for y in Y2}
    st.flags["triples_anticomplete"] = all(
        not (members[y] & members[y2]) and all(not (g.adj[w] & members[y2]) for w in members[y])
        for i, y in enumerate(Y2) for y2 in Y2[i + 1:]
    )
    hub = {}
    usable = []
    for y in Y2:
        bs = [next(iter(g.adj[x] & B)) for x in triple[y]]
        if bs[0] != bs[1] and not g.has_edge(*bs):
            hub[y] = (bs[0], bs[1])
            usable.append(y)
    st.values["girth_conflicts"] = len(Y2) - len(usable)

    rate = profile.case1_rate if profile.case1_rate is not None else Fraction(1, 2 * d)
    reason = "no attempts"
    for attempt in range(retries):
        rng = stream(seed, "case1-sample", attempt)
        st = trace.stage(f"case1/sample-{attempt}", g.n)
        _, R = sample_independent_right_filter(g, sorted(B), float(rate), rng)
        st.sets["R"] = R
        st.flags["R_independent"] = is_independent(g, R)
        assert st.flags["R_independent"], "right-filtered sample is not independent"
        good = [y for y in usable if hub[y][0] in R and hub[y][1] in R and not (g.adj[y] & R)]
        st.sets["good"] = frozenset(good)
        if len(good) <= d * len(R):
            reason = "too few good vertices"
            continue
        try:
            H, labels, owner = build_aux_graph(R, {y: hub[y] for y in good})
        except DuplicateAuxEdge as exc:
            st.flags["duplicate_aux_edge"] = True
            st.values["duplicate_witness"] = list(exc.witness)
            reason = "duplicate auxiliary edge"
            continue
        core = avg_core(H, d - 1)
        if core is None:
            reason = "empty core"
            continue
        st.sets["H_core"] = frozenset(labels[i] for i in core)
        sub, sl = H.induced(core)
        res = find_subdivision(sub, complete_pattern(d + 1), budget)
        if res.status is not SearchStatus.FOUND:
            reason = f"subdivision search: {res.status.value}"
            continue
        cert = res.certificate.relabel(H, sl)

        def connector(u: int, v: int, y: int) -> tuple[int, ...]:
            x1, x2 = triple[y]
            if hub[y] == (u, v):
                return (u, x1, y, x2, v)
            return (u, x2, y, x1, v)

        return lift_certificate(g, cert, labels, owner, connector), "", attempt + 1
    return None, f"case1/sample: {reason}", retries


def main_theorem(
    G: Graph,
    k: int,
    seed: int = 0,
    profile="desk",
    retries: int = 50,
    budget: int = 500_000,
) -> PipelineResult:
    """Search for an induced, proper K_{k+1}-subdivision following the case analysis.

    Returns a result whose certificate (when present) has been verified
    induced and proper; otherwise ``failed_stage`` names where the run stopped.
    """
    prof = resolve_profile(profile)
    if k < 3:
        raise PreconditionError("main/preconditions", "need k >= 3")
    if G.n == 0 or min(G.degrees()) < k:
        raise PreconditionError("main/preconditions", f"minimum degree below {k}")
    trace = PipelineTrace()
    st = trace.stage("main/preconditions", G.n)
    g_ok = girth(G) >= prof.g0
    st.flags.update(min_degree=True, girth=g_ok)
    st.values["profile"] = prof.name
    if not g_ok and not prof.relax_girth:
        raise PreconditionError("main/girth", f"girth below {prof.g0}")

    d, core = max_min_degree_core(G)
    Gc, labels = G.induced(sorted(core))
    st = trace.stage("main/densest", G.n)
    st.sets["core"] = frozenset(core)
    st.values["d"] = d

    def lift(cert: SubdivisionCertificate, attempts: int) -> PipelineResult:
        return _finish(trace, cert.relabel(G, labels), k, attempts)

    if d == 3:
        res = find_induced_subdivision(Gc, complete_pattern(4), budget, proper_only=True)
        st = trace.stage("main/d3", Gc.n)
        st.values["search"] = res.status.value
        if res.status is not SearchStatus.FOUND:
            return _fail(trace, "main/d3", f"proper K4 search: {res.status.value}")
        return lift(res.certificate, 1)

    threshold = d ** prof.b_exponent
    B = frozenset(v for v in range(Gc.n) if Gc.degree(v) >= threshold)
    into = [sum(1 for u in Gc.adj[v] if u in B) for v in range(Gc.n)]
    A = frozenset(v for v in range(Gc.n) if v not in B and into[v] >= 2)
    A1 = frozenset(v for v in range(Gc.n) if v not in B and into[v] == 1)
    st = trace.stage("main/split", Gc.n)
    st.sets.update(B=B, A=A, A_prime=A1)
    st.values["B_threshold"] = threshold

    if A and len(A) > prof.unbalanced_factor * d * d * len(B):
        st.values["branch"] = "unbalanced"
        try:
            res = unbalanced_step(
                Gc, A, B, d, seed=derive_seed(seed, "unbalanced"), retries=retries,
                girth_floor=0 if prof.relax_girth else prof.lemma_girth,
                rate=prof.unbalanced_rate, size_factor=prof.unbalanced_factor, budget=budget,
            )
        except PreconditionError as exc:
            return _fail(trace, exc.stage, str(exc))
        trace.extend(res.trace, "main")
        if not res.ok:
            return _fail(trace, res.failed_stage, res.reason, res.attempts)
        return lift(res.certificate, res.attempts)

    if len(A1) >= prof.case1_fraction * Gc.n:
        st.values["branch"] = "case1"
        try:
            cert, reason, attempts = case_one(Gc, A, B, A1, d, prof, seed, retries, budget, trace)
        except PreconditionError as exc:
            return _fail(trace, exc.stage, str(exc))
        if cert is None:
            return _fail(trace, reason if reason.startswith("case1") else f"case1/{reason}", reason, attempts)
        return lift(cert, attempts)

    st.values["branch"] = "case2"
    rest = sorted(set(range(Gc.n)) - B)
    Gp, rl = Gc.induced(rest)
    params = prof.mader_for(d, D=prof.mader_D or threshold)
    try:
        res = induced_mader(Gp, params, seed=derive_seed(seed, "mader"), retries=retries,
                            relax_girth=prof.relax_girth)
    except PreconditionError as exc:
        return _fail(trace, f"case2/{exc.stage}", str(exc))
    trace.extend(res.trace, "case2")
    if not res.ok:
        return _fail(trace, f"case2/{res.failed_stage}", res.reason, res.attempts)
    return lift(res.certificate.relabel(Gc, rl), res.attempts)
