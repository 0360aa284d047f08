"""Induced subdivisions of K_s from bounded degree, high average degree and large girth.

Roots far apart, nearest-root trees, short inter-tree paths as auxiliary
edges, random thinning so that disjoint auxiliary edges give anticomplete
paths, a highly connected core of the auxiliary graph, and finally a linkage
in that core expanded back into the host.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Optional, Sequence

from ..connectivity import Block, Decomposition, LinkageInstance, LinkageStatus, block_decomposition, solve_linkage
from ..graph import Graph
from ..invariants import BfsForest, bfs_distances, bfs_forest, girth, max_degree
from ..rng import stream
from ..subdivision import SubdivisionCertificate, complete_pattern, is_induced_path, shortest_induced_path, verify
from .params import MaderParameters
from .trace import PipelineResult, PipelineTrace, PreconditionError


class StructuralError(RuntimeError):
    """The host violates a girth consequence the construction relies on."""


# --- highly connected core with retained degrees ---------------------------------

@dataclass
class CoreSelection:
    block: Optional[Block]
    retained: frozenset = frozenset()
    B_prime: frozenset = frozenset()
    W: frozenset = frozenset()
    decomposition: Optional[Decomposition] = None
    flags: dict = field(default_factory=dict)
    diagnostic: str = ""


def core_with_retained_degrees(
    h: Graph,
    k: int,
    D: int,
    m: int,
    B: Iterable[int],
    strict: bool = False,
) -> CoreSelection:
    """k-connected induced block of h keeping many vertices of B with almost all their degree.

    The hypotheses (min degree >= 9k², max degree <= D, |B| >= n/D, girth >= 2m+2)
    are recorded as flags; with ``strict`` a failing one raises.
    The retained set is recomputed from degrees, never taken from the construction.
    """
    B = frozenset(B)
    n = h.n
    flags = {
        "min_degree": min(h.degrees(), default=0) >= 9 * k * k,
        "max_degree": max_degree(h) <= D,
        "B_large": len(B) * D >= n,
        "girth": girth(h) >= 2 * m + 2,
    }
    if strict:
        for name, ok in flags.items():
            if not ok:
                raise PreconditionError("core", f"hypothesis {name} fails")
    dec = block_decomposition(h, k, threshold=4 * k * k)
    if not dec.complete:
        return CoreSelection(None, decomposition=dec, flags=flags,
                             diagnostic=f"no block found in a remainder of {len(dec.leftover)} vertices")
    if not dec.steps:
        return CoreSelection(None, decomposition=dec, flags=flags, diagnostic="everything peeled")
    S = set()
    for blk in dec.blocks:
        S |= blk.boundary
    Z = set(dec.peeled)
    rest = set(range(n)) - S - Z
    kk = 2 * k * k
    Qset = {v for v in rest if sum(1 for u in h.adj[v] if u in Z) > kk}
    NS = {u for v in S for u in h.adj[v]}
    W = frozenset(S | Z | NS | Qset)
    Bp = B - W

    def ratio(blk: Block) -> Fraction:
        return Fraction(len(Bp & blk.vertices), len(blk.vertices))

    best = max(dec.blocks, key=ratio)  # max keeps the earliest block on ties
    verts = best.vertices
    retained = frozenset(
        x for x in B & verts
        if sum(1 for u in h.adj[x] if u in verts) >= h.degree(x) - kk
    )
    flags["ratio_at_least_1_over_2D"] = 2 * D * len(Bp & verts) >= len(verts)
    return CoreSelection(best, retained, frozenset(Bp), W, dec, flags)


# --- roots and the path system -----------------------------------------------------

def separated_roots(g: Graph, ell: int, U: Iterable[int] = ()) -> tuple[frozenset, frozenset]:
    """Greedy maximal set with pairwise distance > 2·ell, seeded from U.

    Returns ``(S_star, U_prime)`` where ``U_prime`` is the part chosen while scanning U.
    Both scans go by ascending vertex index.
    """
    blocked: set[int] = set()
    chosen: list[int] = []

    def take(v: int) -> None:
        chosen.append(v)
        blocked.update(bfs_distances(g, v, radius=2 * ell))

    for v in sorted(set(U)):
        if v not in blocked:
            take(v)
    U_prime = frozenset(chosen)
    for v in range(g.n):
        if v not in blocked:
            take(v)
    return frozenset(chosen), U_prime


@dataclass
class PathSystem:
    """Roots, their nearest-root trees, auxiliary edges with their host paths, and the conflict map.

    ``paths[(u, v)]`` (u < v) runs from root u to root v. ``conflicts[(u, v)]``
    is the set of roots whose tree meets the path or its neighbourhood.
    """

    host: Graph
    roots: tuple[int, ...]
    forest: BfsForest
    L: int
    paths: dict[tuple[int, int], tuple[int, ...]]
    conflicts: dict[tuple[int, int], frozenset]
    dropped: list = field(default_factory=list)

    def oriented(self, y: int, w: int) -> tuple[int, ...]:
        """The path between roots y and w, starting at y."""
        if y < w:
            return self.paths[(y, w)]
        return tuple(reversed(self.paths[(w, y)]))

    def aux_neighbors(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {r: set() for r in self.roots}
        for u, v in self.paths:
            out[u].add(v)
            out[v].add(u)
        return out


def build_path_system(g: Graph, roots: Iterable[int], L: int) -> PathSystem:
    """Nearest-root forest, one path per pair of trees joined by an edge, kept when of length <= L."""
    roots = tuple(sorted(set(roots)))
    forest = bfs_forest(g, roots)
    link: dict[tuple[int, int], tuple[int, int]] = {}
    for x, y in g.edges():
        rx, ry = forest.root[x], forest.root[y]
        if rx is None or ry is None or rx == ry:
            continue
        if rx > ry:
            x, y, rx, ry = y, x, ry, rx
        if (rx, ry) in link:
            raise StructuralError(f"trees rooted at {rx} and {ry} are joined by two edges")
        link[(rx, ry)] = (x, y)
    paths, conflicts, dropped = {}, {}, []
    delta = max_degree(g)
    cap = (L + 1) * (delta + 1)
    for (u, v), (x, y) in sorted(link.items()):
        path = tuple(reversed(forest.path_to_root(x))) + tuple(forest.path_to_root(y))
        if len(path) - 1 > L:
            continue
        if not is_induced_path(g, path):
            dropped.append((u, v))
            continue
        touched = set(path)
        for w in path:
            touched.update(g.adj[w])
        nf = frozenset(forest.root[w] for w in touched if forest.root[w] is not None)
        assert len(nf) <= cap, "conflict neighbourhood exceeds (L+1)(D+1)"
        paths[(u, v)] = path
        conflicts[(u, v)] = nf
    return PathSystem(g, roots, forest, L, paths, conflicts, dropped)


@dataclass
class AuxSample:
    """Sampled roots S and the auxiliary edges that conflict with no other sampled root."""

    S: frozenset
    edges: dict[tuple[int, int], tuple[int, ...]]

    def neighbors(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {v: set() for v in self.S}
        for u, v in self.edges:
            out[u].add(v)
            out[v].add(u)
        return out

    def graph(self, vertices: Optional[Iterable[int]] = None) -> tuple[Graph, list[int]]:
        """The auxiliary graph (or its induced subgraph) relabelled to ``0..k-1`` in sorted order."""
        labels = sorted(self.S if vertices is None else vertices)
        index = {v: i for i, v in enumerate(labels)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph(len(labels), edges), labels


def _anticomplete(g: Graph, P: Iterable[int], R: Iterable[int]) -> bool:
    Rset = set(R)
    return all(x not in Rset and not (g.adj[x] & Rset) for x in P)


def sample_aux_graph(ps: PathSystem, p, seed: int = 0, check_pairs: int = 2000) -> AuxSample:
    """Keep each root with probability p; keep uv when its conflict set meets S exactly in {u, v}.

    Vertex-disjoint kept edges then have disjoint, anticomplete paths; that is
    re-checked on up to ``check_pairs`` pairs (all pairs when fewer).
    """
    p = Fraction(p)
    if not 0 < p <= 1:
        raise ValueError("need 0 < p <= 1")
    rng = stream(seed, "aux-sample")
    S = frozenset(w for w in ps.roots if p == 1 or rng.random() < p)
    edges = {
        e: path for e, path in ps.paths.items()
        if e[0] in S and e[1] in S and ps.conflicts[e] & S == {e[0], e[1]}
    }
    keys = sorted(edges)
    if len(keys) * (len(keys) - 1) // 2 <= check_pairs:
        pairs = list(combinations(keys, 2))
    else:
        chk = stream(seed, "aux-check")
        pairs = [tuple(chk.sample(keys, 2)) for _ in range(check_pairs)]
    for e, f in pairs:
        if set(e) & set(f):
            continue
        assert _anticomplete(ps.host, edges[e], edges[f]), f"paths of {e} and {f} touch"
    return AuxSample(S, edges)


# --- robust branching witnesses ----------------------------------------------------

@dataclass(frozen=True)
class BranchWitness:
    """Distinct host neighbours ``z[i]`` of ``y`` and disjoint aux-neighbour classes ``M[i]``."""

    y: int
    z: tuple[int, ...]
    M: tuple[frozenset, ...]

    def to_json_obj(self) -> dict:
        return {"y": self.y, "z": list(self.z), "M": [sorted(m) for m in self.M]}


def _separate(g: Graph, y: int, p1: Sequence[int], p2: Sequence[int]) -> bool:
    """Paths from y share nothing but y and have no edges between them in g - y."""
    a = set(p1) - {y}
    b = set(p2) - {y}
    if a & b:
        return False
    return all(not (g.adj[x] & b) for x in a)


def _condition_iii(ps: PathSystem, y: int, M: Sequence[frozenset], cap: int) -> bool:
    """Every selection y_i in M_i gives pairwise separated paths.

    Small products are enumerated literally; otherwise all cross-class pairs
    are checked, which is equivalent because the condition is pairwise.
    """
    g = ps.host
    sizes = 1
    for m in M:
        sizes *= len(m)
    paths = [{w: ps.oriented(y, w) for w in sorted(m)} for m in M]
    if sizes <= cap:
        for sel in product(*[sorted(m) for m in M]):
            for i, j in combinations(range(len(sel)), 2):
                if not _separate(g, y, paths[i][sel[i]], paths[j][sel[j]]):
                    return False
        return True
    for i, j in combinations(range(len(M)), 2):
        for w1 in paths[i]:
            for w2 in paths[j]:
                if not _separate(g, y, paths[i][w1], paths[j][w2]):
                    return False
    return True


def branch_witnesses(
    ps: PathSystem,
    aux: AuxSample,
    a: int,
    q_threshold: int,
    cap: int = 10_000,
    candidates: Optional[Iterable[int]] = None,
) -> dict[int, BranchWitness]:
    """Witnesses of robust branchability for the vertices of the aux graph.

    Aux neighbours of y are grouped by the first host vertex after y on their
    path; the ``a`` largest classes (ties to the smaller z) must each have at
    least ``q_threshold`` members and satisfy the separation condition.
    """
    g = ps.host
    nbrs = aux.neighbors()
    out = {}
    for y in sorted(aux.S if candidates is None else set(candidates) & aux.S):
        if g.degree(y) < a:
            continue
        classes: dict[int, set[int]] = {}
        for w in nbrs[y]:
            classes.setdefault(ps.oriented(y, w)[1], set()).add(w)
        big = sorted((z for z in classes if len(classes[z]) >= q_threshold), key=lambda z: (-len(classes[z]), z))
        if len(big) < a:
            continue
        zs = tuple(sorted(big[:a]))
        M = tuple(frozenset(classes[z]) for z in zs)
        if _condition_iii(ps, y, M, cap):
            out[y] = BranchWitness(y, zs, M)
    return out


def check_witness(ps: PathSystem, aux: AuxSample, w: BranchWitness, q_threshold: int) -> list[str]:
    """Replay the three witness conditions from scratch; returns the problems found."""
    g = ps.host
    problems = []
    nbrs = aux.neighbors().get(w.y, set())
    if len(set(w.z)) != len(w.z) or any(not g.has_edge(w.y, z) for z in w.z):
        problems.append("z must be distinct host neighbours of y")
    seen: set[int] = set()
    for i, m in enumerate(w.M):
        if len(m) < q_threshold:
            problems.append(f"class {i} is smaller than {q_threshold}")
        if not m <= nbrs:
            problems.append(f"class {i} contains non-neighbours in the aux graph")
            continue
        if m & seen:
            problems.append(f"class {i} overlaps an earlier class")
        seen |= m
        for y2 in m:
            if w.z[i] not in ps.oriented(w.y, y2):
                problems.append(f"z[{i}] is not on the path to {y2}")
    if not problems:
        for i, j in combinations(range(len(w.M)), 2):
            for y1 in w.M[i]:
                for y2 in w.M[j]:
                    if not _separate(g, w.y, ps.oriented(w.y, y1), ps.oriented(w.y, y2)):
                        problems.append(f"paths to {y1} and {y2} touch away from y")
    return problems


# --- assembly -------------------------------------------------------------------------

@dataclass
class Assembly:
    certificate: Optional[SubdivisionCertificate]
    branch: tuple[int, ...] = ()
    gamma_independent: frozenset = frozenset()
    reason: str = ""


def _assign_slots(branch, witnesses, core_nbrs, budget: int = 100_000):
    """Yield choices u[(i, j)] for i != j: an H'-neighbour of branch[i] from a class used only for j.

    All chosen u are distinct and avoid the branch vertices. Small backtracking search.
    """
    s = len(branch)
    bset = set(branch)
    slots = [(i, j) for i in range(s) for j in range(s) if i != j]
    options = {}
    for i, v in enumerate(branch):
        options[i] = [sorted((m & core_nbrs[v]) - bset) for m in witnesses[v].M]
    chosen: dict[tuple[int, int], int] = {}
    class_of: dict[tuple[int, int], int] = {}
    used: set[int] = set()
    count = [0]

    def go(k: int):
        if k == len(slots):
            yield dict(chosen)
            return
        count[0] += 1
        if count[0] > budget:
            return
        i, j = slots[k]
        taken = {class_of[(i, jj)] for jj in range(s) if (i, jj) in class_of}
        for c, opts in enumerate(options[i]):
            if c in taken:
                continue
            for u in opts:
                if u in used:
                    continue
                chosen[(i, j)] = u
                class_of[(i, j)] = c
                used.add(u)
                yield from go(k + 1)
                used.discard(u)
                del chosen[(i, j)]
                del class_of[(i, j)]

    yield from go(0)


def assemble_subdivision(
    g: Graph,
    ps: PathSystem,
    aux: AuxSample,
    core: Iterable[int],
    good: Iterable[int],
    witnesses: dict[int, BranchWitness],
    s: int,
    linkage_budget: int = 200_000,
    max_branch_sets: int = 20,
    max_assignments: int = 5,
) -> Assembly:
    """Branch vertices from an independent set of Γ, a linkage in the core, expanded into g.

    Γ joins good witnessed vertices adjacent in the core aux graph or in g.
    Several branch sets and slot assignments are tried (bounded by the two
    caps). Every candidate is verified; anything short of induced and proper
    is discarded.
    """
    core = frozenset(core)
    core_nbrs: dict[int, set[int]] = {v: set() for v in core}
    for u, v in aux.edges:
        if u in core and v in core:
            core_nbrs[u].add(v)
            core_nbrs[v].add(u)
    cand = sorted(v for v in set(good) & core if v in witnesses)
    indep: list[int] = []
    for v in cand:
        if all(w not in core_nbrs[v] and not g.has_edge(v, w) for w in indep):
            indep.append(v)
    if len(indep) < s:
        return Assembly(None, gamma_independent=frozenset(indep),
                        reason=f"independent set in Gamma has {len(indep)} < {s} vertices")
    reason = "no branch set tried"
    tried = 0
    for branch in combinations(indep, s):
        if tried >= max_branch_sets:
            break
        tried += 1
        for n_assign, slots in enumerate(_assign_slots(branch, witnesses, core_nbrs)):
            if n_assign >= max_assignments:
                break
            paths = _link(g, ps, aux, core, branch, slots, linkage_budget)
            if isinstance(paths, str):
                reason = paths
                continue
            cert = SubdivisionCertificate(g, complete_pattern(s), branch, paths)
            report = verify(cert)
            if report.is_induced and report.is_proper:
                return Assembly(cert, branch, frozenset(indep))
            reason = f"assembled graph rejected: {sorted({v.kind for v in report.violations})}"
        else:
            if reason == "no branch set tried":
                reason = "could not assign distinct class representatives"
    return Assembly(None, (), frozenset(indep), reason)


def _link(g, ps, aux, core, branch, slots, linkage_budget):
    """Linkage in the core minus the branch set, expanded to host paths; a string on failure."""
    s = len(branch)
    rest = sorted(core - set(branch))
    index = {v: i for i, v in enumerate(rest)}
    sub = Graph(len(rest), [(index[u], index[v]) for u, v in aux.edges if u in index and v in index])
    pairs = [(i, j) for i in range(s) for j in range(i + 1, s)]
    inst = LinkageInstance(sub, tuple((index[slots[(i, j)]], index[slots[(j, i)]]) for i, j in pairs))
    res = solve_linkage(inst, linkage_budget)
    if res.status is not LinkageStatus.FOUND:
        return f"linkage: {res.status.value}"
    paths = {}
    for (i, j), qpath in zip(pairs, res.paths):
        qh = [rest[x] for x in qpath]
        Y = set(ps.oriented(branch[i], slots[(i, j)])) | set(ps.oriented(branch[j], slots[(j, i)]))
        for x, y in zip(qh, qh[1:]):
            Y |= set(ps.oriented(x, y))
        R = shortest_induced_path(g, Y, branch[i], branch[j])
        if R is None:
            return f"no path between branch vertices {i} and {j}"
        paths[(i, j)] = tuple(R)
    return paths


# --- orchestration ----------------------------------------------------------------------

def minimal_dense_subgraph(J: Graph, alpha: Fraction) -> list[int]:
    """Delete the smallest-index vertex whose removal keeps e > alpha·n, until none can go."""
    alive = set(range(J.n))
    deg = {v: J.degree(v) for v in alive}
    e = J.m
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if e - deg[v] > alpha * (len(alive) - 1):
                alive.discard(v)
                e -= deg[v]
                for u in J.adj[v]:
                    if u in alive:
                        deg[u] -= 1
                changed = True
                break
    return sorted(alive)


def induced_mader(
    J: Graph,
    params: MaderParameters,
    seed: int = 0,
    retries: int = 20,
    relax_girth: bool = False,
    linkage_budget: int = 200_000,
) -> PipelineResult:
    """Induced K_s-subdivision in a graph of bounded degree and average degree above s-2+eta."""
    trace = PipelineTrace()
    st = trace.stage("mader/preconditions", J.n)
    s, a = params.s, params.a
    if max_degree(J) > params.D:
        raise PreconditionError("mader/preconditions", "maximum degree exceeds D")
    if J.n == 0 or Fraction(2 * J.m, J.n) <= s - 2 + params.eta:
        raise PreconditionError("mader/preconditions", "average degree is not above s-2+eta")
    g_ok = girth(J) >= params.girth_threshold
    st.flags.update(max_degree=True, average_degree=True, girth=g_ok, parameters_feasible=params.feasible)
    if not g_ok and not relax_girth:
        raise PreconditionError("mader/preconditions", f"girth below {params.girth_threshold}")

    def fail(stage: str, reason: str, attempts: int = 0) -> PipelineResult:
        trace.close()
        return PipelineResult(trace, failed_stage=stage, reason=reason, attempts=attempts)

    keep = minimal_dense_subgraph(J, params.alpha)
    st = trace.stage("mader/reduction", J.n)
    st.sets["kept"] = frozenset(keep)
    st.values["deleted"] = J.n - len(keep)
    Jr, labels = J.induced(keep)

    U = frozenset(v for v in range(Jr.n) if Jr.degree(v) >= a)
    S_star, U1 = separated_roots(Jr, params.ell, U)
    st = trace.stage("mader/roots", Jr.n)
    st.sets.update(U=U, U_prime=U1, S_star=S_star)
    try:
        ps = build_path_system(Jr, S_star, params.L)
    except StructuralError as exc:
        return fail("mader/paths", str(exc))
    st = trace.stage("mader/paths", Jr.n)
    st.values.update(aux_edges=len(ps.paths), dropped=len(ps.dropped))

    aux = None
    for attempt in range(retries):
        cand = sample_aux_graph(ps, params.p, seed=stream(seed, "mader", attempt).getrandbits(64))
        st = trace.stage(f"mader/sample-{attempt}", Jr.n)
        st.sets["S"] = cand.S
        st.values["H_edges"] = len(cand.edges)
        nbrs = cand.neighbors()
        counts: dict[int, dict[int, int]] = {}
        for y in cand.S:
            c: dict[int, int] = {}
            for w in nbrs[y]:
                z = ps.oriented(y, w)[1]
                c[z] = c.get(z, 0) + 1
            counts[y] = c
        chosen = U1 & cand.S
        ok = bool(chosen) and all(
            sum(1 for z in counts[y] if counts[y][z] >= params.Q) >= a for y in chosen
        )
        st.flags["no_bad_event_on_U_prime"] = ok
        st.flags["no_bad_event_anywhere"] = all(
            counts[y].get(z, 0) >= params.Q for y in cand.S for z in Jr.adj[y]
        )
        st.flags["U_prime_sample_large"] = 2 * len(chosen) >= params.p * params.c0 * Jr.n
        if ok:
            aux = cand
            break
    if aux is None:
        return fail("mader/sample", "every sample had a bad event", retries)

    witnesses = branch_witnesses(ps, aux, a, params.Q)
    st = trace.stage("mader/witnesses", Jr.n)
    B_H = frozenset(witnesses)
    st.sets["B_H"] = B_H
    st.flags["U_prime_S_in_B_H"] = (U1 & aux.S) <= B_H
    st.flags["witness_replay"] = all(not check_witness(ps, aux, w, params.Q) for w in witnesses.values())

    Hg, hl = aux.graph()
    hidx = {v: i for i, v in enumerate(hl)}
    sel = core_with_retained_degrees(Hg, params.q, params.D0, params.m, [hidx[v] for v in B_H])
    st = trace.stage("mader/core", Jr.n)
    st.flags.update({f"core_{k}": v for k, v in sel.flags.items()})
    if sel.block is None:
        return fail("mader/core", sel.diagnostic, attempt + 1)
    core = frozenset(hl[i] for i in sel.block.vertices)
    good = frozenset(hl[i] for i in sel.retained) & B_H
    st.sets.update(H_core=core, good=good, W=frozenset(hl[i] for i in sel.W))

    asm = assemble_subdivision(Jr, ps, aux, core, good, witnesses, s, linkage_budget)
    st = trace.stage("mader/assemble", Jr.n)
    st.sets.update(Gamma_independent=asm.gamma_independent, branch=frozenset(asm.branch))
    if asm.certificate is None:
        return fail("mader/assemble", asm.reason, attempt + 1)
    cert = asm.certificate.relabel(J, labels)
    report = verify(cert)
    st.flags["verified"] = report.is_induced and report.is_proper
    if not st.flags["verified"]:
        return fail("mader/verify", str(report.violations), attempt + 1)
    trace.close()
    return PipelineResult(trace, certificate=cert, attempts=attempt + 1)
