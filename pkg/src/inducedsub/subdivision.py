"""Subdivision certificates, their verifier, and a complete backtracking finder."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from .graph import Graph, complete_graph, from_json_obj, to_json_obj
from .invariants import bfs_distances, components

Edge = tuple[int, int]


class MalformedCertificate(ValueError):
    """The certificate cannot even be interpreted (bad indices, missing paths...)."""


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SubdivisionCertificate:
    """Branch map ``V(pattern) -> V(host)`` and, per pattern edge ``(u, v)`` with
    ``u < v``, a host path from ``branch[u]`` to ``branch[v]``."""

    host: Graph
    pattern: Graph
    branch: tuple[int, ...]
    paths: Mapping[Edge, tuple[int, ...]]

    @property
    def vertex_set(self) -> frozenset[int]:
        out = set(self.branch)
        for p in self.paths.values():
            out.update(p)
        return frozenset(out)

    def restrict(self, pattern_vertices: Sequence[int]) -> "SubdivisionCertificate":
        """Sub-certificate on the pattern subgraph induced by ``pattern_vertices``."""
        sub, labels = self.pattern.induced(pattern_vertices)
        # labels are sorted, so (i, j) with i < j maps to (labels[i], labels[j]) in order
        paths = {(i, j): self.paths[(labels[i], labels[j])] for i, j in sub.edges()}
        return SubdivisionCertificate(self.host, sub, tuple(self.branch[v] for v in labels), paths)

    def relabel(self, host: Graph, labels: Sequence[int]) -> "SubdivisionCertificate":
        """Map a certificate on an induced subgraph back to its parent graph."""
        return SubdivisionCertificate(
            host,
            self.pattern,
            tuple(labels[b] for b in self.branch),
            {e: tuple(labels[x] for x in p) for e, p in self.paths.items()},
        )

    def to_json_obj(self) -> dict:
        return {
            "pattern": to_json_obj(self.pattern),
            "branch": list(self.branch),
            "paths": {f"{u}-{v}": list(p) for (u, v), p in sorted(self.paths.items())},
        }

    def to_json(self) -> bytes:
        return json.dumps(self.to_json_obj(), separators=(",", ":"), sort_keys=True).encode("ascii")


def certificate_from_json_obj(host: Graph, obj) -> SubdivisionCertificate:
    try:
        pattern = from_json_obj(obj["pattern"])
        branch = tuple(obj["branch"])
        paths = {}
        for key, seq in obj["paths"].items():
            a, b = key.split("-")
            u, v = int(a), int(b)
            if not isinstance(seq, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in seq):
                raise MalformedCertificate(f"path {key!r} is not a list of integers")
            if u > v:
                u, v, seq = v, u, list(reversed(seq))
            paths[(u, v)] = tuple(seq)
    except MalformedCertificate:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedCertificate(f"bad certificate JSON: {exc}") from None
    if not all(isinstance(b, int) and not isinstance(b, bool) for b in branch):
        raise MalformedCertificate("branch entries must be integers")
    return SubdivisionCertificate(host, pattern, branch, paths)


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple


@dataclass(frozen=True)
class VerificationReport:
    is_subdivision: bool
    is_induced: bool
    is_proper: bool
    violations: tuple[Violation, ...] = ()

    def to_json_obj(self) -> dict:
        return {
            "is_subdivision": self.is_subdivision,
            "is_induced": self.is_induced,
            "is_proper": self.is_proper,
            "violations": [{"kind": v.kind, "witness": list(v.witness)} for v in self.violations],
        }


def _check_well_formed(cert: SubdivisionCertificate) -> None:
    host, pattern = cert.host, cert.pattern
    if len(cert.branch) != pattern.n:
        raise MalformedCertificate(f"branch map has {len(cert.branch)} entries for {pattern.n} pattern vertices")
    for b in cert.branch:
        if not 0 <= b < host.n:
            raise MalformedCertificate(f"branch vertex {b} not in host")
    if len(set(cert.branch)) != len(cert.branch):
        raise MalformedCertificate("branch map is not injective")
    pattern_edges = set(pattern.edges())
    for e, p in cert.paths.items():
        if e not in pattern_edges:
            raise MalformedCertificate(f"path given for non-edge {e} of the pattern")
        for x in p:
            if not 0 <= x < host.n:
                raise MalformedCertificate(f"path {e} uses vertex {x} not in host")
    missing = pattern_edges - set(cert.paths)
    if missing:
        raise MalformedCertificate(f"no path for pattern edge {min(missing)}")


def verify(cert: SubdivisionCertificate) -> VerificationReport:
    """Check the certificate; every failed property comes with a concrete witness.

    Induced means: with W the union of branch images and path vertices, the
    edges of ``host[W]`` are exactly the consecutive pairs of the paths.
    Proper additionally forbids host edges between branch images.
    """
    _check_well_formed(cert)
    host = cert.host
    structural: list[Violation] = []
    branch_set = set(cert.branch)
    owner: dict[int, Edge] = {}
    sub_edges: dict[Edge, int] = {}
    for e, p in sorted(cert.paths.items()):
        u, v = e
        if len(p) < 2 or p[0] != cert.branch[u] or p[-1] != cert.branch[v]:
            structural.append(Violation("endpoint", (u, v) + tuple(p[:1]) + tuple(p[-1:])))
        if len(set(p)) != len(p):
            dup = next(x for x in p if p.count(x) > 1)
            structural.append(Violation("repeated_vertex", (u, v, dup)))
        for a, b in zip(p, p[1:]):
            if not host.has_edge(a, b):
                structural.append(Violation("non_edge", (a, b)))
            k = edge_key(a, b)
            sub_edges[k] = sub_edges.get(k, 0) + 1
        for x in p[1:-1]:
            if x in branch_set:
                structural.append(Violation("internal_hits_branch", (u, v, x)))
            elif x in owner and owner[x] != e:
                structural.append(Violation("shared_internal", owner[x] + e + (x,)))
            else:
                owner[x] = e
    is_sub = not structural

    induced_v: list[Violation] = []
    if is_sub:
        w = cert.vertex_set
        for x in sorted(w):
            for y in host.neighbors(x):
                if x < y and y in w:
                    c = sub_edges.get((x, y), 0)
                    if c == 0:
                        induced_v.append(Violation("extra_edge", (x, y)))
                    elif c > 1:
                        induced_v.append(Violation("edge_reused", (x, y)))
    is_ind = is_sub and not induced_v

    proper_v: list[Violation] = []
    for a, b in combinations(sorted(branch_set), 2):
        if host.has_edge(a, b):
            proper_v.append(Violation("adjacent_branches", (a, b)))
    is_prop = is_ind and not proper_v
    violations = structural + induced_v + proper_v
    return VerificationReport(is_sub, is_ind, is_prop, tuple(violations))


# --- finder -------------------------------------------------------------------------

class SearchStatus(enum.Enum):
    FOUND = "found"
    NONE_EXISTS = "none_exists"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass
class SearchResult:
    status: SearchStatus
    certificate: Optional[SubdivisionCertificate] = None
    expansions: int = 0


class _OutOfBudget(Exception):
    pass


def _is_complete(p: Graph) -> bool:
    return p.m == p.n * (p.n - 1) // 2


class _Search:
    """Backtracking over branch images, then over paths (one pattern edge at a time)."""

    def __init__(self, host: Graph, pattern: Graph, budget: int, induced: bool, proper: bool):
        self.host = host
        self.pattern = pattern
        self.budget = budget
        self.induced = induced
        self.proper = proper
        self.count = 0
        self.p_edges = sorted(pattern.edges(), key=lambda e: (-min(pattern.degree(e[0]), pattern.degree(e[1])), e))

    def tick(self) -> None:
        self.count += 1
        if self.count > self.budget:
            raise _OutOfBudget

    def run(self) -> Optional[SubdivisionCertificate]:
        host, pattern = self.host, self.pattern
        pverts = sorted(range(pattern.n), key=lambda v: (-pattern.degree(v), v))
        cands = [v for v in sorted(range(host.n), key=lambda v: (-host.degree(v), v))]
        need = [pattern.degree(v) for v in range(pattern.n)]
        if _is_complete(pattern):
            deg_need = pattern.n - 1
            pool = [v for v in cands if host.degree(v) >= deg_need]
            for combo in combinations(pool, pattern.n):
                self.tick()
                branch = [0] * pattern.n
                for pv, hv in zip(range(pattern.n), combo):
                    branch[pv] = hv
                if not self._branch_ok(branch):
                    continue
                found = self._route(branch)
                if found is not None:
                    return found
            return None
        assignment: dict[int, int] = {}

        def assign(i: int):
            if i == len(pverts):
                return self._route([assignment[v] for v in range(pattern.n)])
            pv = pverts[i]
            taken = set(assignment.values())
            for hv in cands:
                if hv in taken or host.degree(hv) < need[pv]:
                    continue
                self.tick()
                assignment[pv] = hv
                if self._partial_ok(assignment, pv):
                    found = assign(i + 1)
                    if found is not None:
                        return found
                del assignment[pv]
            return None

        return assign(0)

    def _pair_ok(self, pu: int, pv: int, hu: int, hv: int) -> bool:
        if not self.host.has_edge(hu, hv):
            return True
        if not self.induced:
            return True
        if self.proper:
            return False
        return self.pattern.has_edge(pu, pv)

    def _partial_ok(self, assignment: dict[int, int], pv: int) -> bool:
        hv = assignment[pv]
        return all(self._pair_ok(pu, pv, hu, hv) for pu, hu in assignment.items() if pu != pv)

    def _branch_ok(self, branch: list[int]) -> bool:
        return all(
            self._pair_ok(a, b, branch[a], branch[b])
            for a, b in combinations(range(len(branch)), 2)
        )

    def _route(self, branch: list[int]) -> Optional[SubdivisionCertificate]:
        host = self.host
        branch_set = set(branch)
        used = set(branch_set)
        internal: set[int] = set()
        paths: dict[Edge, tuple[int, ...]] = {}
        edges = self.p_edges

        def banned_near(x: int, ends: tuple[int, int]) -> bool:
            # x may touch only its own path; branch images other than ends are off limits
            for y in host.adj[x]:
                if y in internal:
                    return True
                if y in branch_set and y not in ends:
                    return True
            return False

        def feasible(idx: int) -> bool:
            for e in edges[idx:]:
                s, t = branch[e[0]], branch[e[1]]
                if host.has_edge(s, t):
                    continue
                seen = {s}
                stack = [s]
                ok = False
                while stack and not ok:
                    a = stack.pop()
                    for b in host.adj[a]:
                        if b == t:
                            ok = True
                            break
                        if b in seen or b in used:
                            continue
                        if self.induced and banned_near(b, (s, t)):
                            continue
                        seen.add(b)
                        stack.append(b)
                if not ok:
                    return False
            return True

        def next_edge(idx: int) -> bool:
            if idx == len(edges):
                return True
            if not feasible(idx):
                return False
            pu, pv = edges[idx]
            s, t = branch[pu], branch[pv]
            if host.has_edge(s, t):
                # only the direct edge: any longer path would leave the edge s-t as a chord
                if self.induced and self.proper:
                    return False
                paths[(pu, pv)] = (s, t)
                if next_edge(idx + 1):
                    return True
                del paths[(pu, pv)]
                if self.induced:
                    return False
            path = [s]

            def grow() -> bool:
                self.tick()
                tip = path[-1]
                blocked = used | set(path)
                dist = bfs_distances(host, t, allowed=(set(range(host.n)) - blocked) | {t})
                options = []
                for b in host.neighbors(tip):
                    if b in blocked or b not in dist:
                        continue
                    if self.induced:
                        if banned_near(b, (s, t)):
                            continue
                        if any(c in path and c != tip for c in host.adj[b]):
                            continue
                    options.append(b)
                options.sort(key=lambda b: (dist[b], b))
                for b in options:
                    path.append(b)
                    if host.has_edge(b, t):
                        paths[(pu, pv)] = tuple(path) + (t,)
                        inner = path[1:]
                        used.update(inner)
                        internal.update(inner)
                        if next_edge(idx + 1):
                            return True
                        used.difference_update(inner)
                        internal.difference_update(inner)
                        del paths[(pu, pv)]
                        if not self.induced and grow():
                            return True
                    elif grow():
                        return True
                    path.pop()
                return False

            return grow()

        if next_edge(0):
            return SubdivisionCertificate(host, self.pattern, tuple(branch), dict(paths))
        return None


def _search(host: Graph, pattern: Graph, budget: int, induced: bool, proper: bool) -> SearchResult:
    if pattern.n > host.n:
        return SearchResult(SearchStatus.NONE_EXISTS)
    s = _Search(host, pattern, budget, induced, proper)
    try:
        cert = s.run()
    except _OutOfBudget:
        return SearchResult(SearchStatus.BUDGET_EXHAUSTED, None, s.count)
    if cert is None:
        return SearchResult(SearchStatus.NONE_EXISTS, None, s.count)
    report = verify(cert)
    if induced and not (report.is_induced and (report.is_proper or not proper)):
        raise AssertionError(f"finder produced an invalid certificate: {report.violations}")
    if not report.is_subdivision:
        raise AssertionError(f"finder produced an invalid certificate: {report.violations}")
    return SearchResult(SearchStatus.FOUND, cert, s.count)


def find_induced_subdivision(
    host: Graph, pattern: Graph, budget: int = 1_000_000, proper_only: bool = False
) -> SearchResult:
    """Complete search for an induced subdivision of ``pattern`` in ``host``.

    Branch candidates are tried by descending host degree; paths grow towards
    their target shortest-first while staying anticomplete to everything
    already placed. ``NONE_EXISTS`` is only returned after the search space is
    exhausted within ``budget`` node expansions.
    """
    return _search(host, pattern, budget, induced=True, proper=proper_only)


def find_subdivision(host: Graph, pattern: Graph, budget: int = 1_000_000) -> SearchResult:
    """Same search without the induced constraint (plain topological containment)."""
    return _search(host, pattern, budget, induced=False, proper=False)


def one_subdivision(h: Graph) -> tuple[Graph, SubdivisionCertificate]:
    """Replace every edge by a path of length 2; vertex ``n + i`` subdivides the i-th edge."""
    edges = list(h.edges())
    n = h.n
    new_edges = []
    paths = {}
    for i, (u, v) in enumerate(edges):
        mid = n + i
        new_edges += [(u, mid), (mid, v)]
        paths[(u, v)] = (u, mid, v)
    g = Graph(n + len(edges), new_edges)
    return g, SubdivisionCertificate(g, h, tuple(range(n)), paths)


def is_induced_path(host: Graph, path: Sequence[int]) -> bool:
    """Consecutive vertices adjacent, no repeats, and no chords."""
    if len(set(path)) != len(path):
        return False
    pos = {x: i for i, x in enumerate(path)}
    for i, x in enumerate(path):
        for y in host.adj[x]:
            j = pos.get(y)
            if j is not None and abs(i - j) != 1:
                return False
    return all(host.has_edge(a, b) for a, b in zip(path, path[1:]))


def shortest_induced_path(host: Graph, allowed: Iterable[int], u: int, v: int) -> Optional[list[int]]:
    """Shortest u–v path inside ``host[allowed]`` (parents chosen by smallest index).

    Shortest paths have no chords inside the allowed set; that is asserted.
    """
    allowed = set(allowed)
    if u not in allowed or v not in allowed:
        raise ValueError("endpoints must lie in the allowed set")
    dist = bfs_distances(host, v, allowed=allowed)
    if u not in dist:
        return None
    path = [u]
    while path[-1] != v:
        x = path[-1]
        path.append(min(y for y in host.adj[x] if dist.get(y) == dist[x] - 1))
    assert is_induced_path(host, path)
    return path


def chordless_cycle_exists(g: Graph) -> bool:
    """Independent oracle: some vertex subset induces a connected 2-regular graph.

    Exponential in ``g.n``; meant for hosts of at most ~12 vertices.
    """
    n = g.n
    adj_mask = [sum(1 << u for u in g.adj[v]) for v in range(n)]
    for mask in range(1, 1 << n):
        if bin(mask).count("1") < 3:
            continue
        ok = True
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            if bin(adj_mask[v] & mask).count("1") != 2:
                ok = False
                break
            m ^= low
        if not ok:
            continue
        if len(components(g, [v for v in range(n) if mask >> v & 1])) == 1:
            return True
    return False


def complete_pattern(s: int) -> Graph:
    return complete_graph(s)
