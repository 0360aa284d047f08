"""Vertex connectivity, disjoint-path linkage, and extraction of well-connected induced blocks."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .graph import Graph
from .invariants import bfs_distances, components, peel

_BIG = 1 << 30


# --- max-flow over the vertex-split digraph -------------------------------------

def _local_cut(g: Graph, s: int, t: int, cap: int, allowed: Optional[set[int]] = None):
    """Max number of internally disjoint s-t paths (stopping at ``cap``) and a minimum separator.

    ``s`` and ``t`` must be non-adjacent. Node ``2v`` is v_in and ``2v+1`` is v_out;
    v_in -> v_out has capacity 1 for every vertex other than s and t.
    Returns ``(flow, cut)``; ``cut`` is None when ``flow >= cap``.
    """
    inside = (lambda v: True) if allowed is None else allowed.__contains__
    residual: dict[int, dict[int, int]] = {}

    def add(a: int, b: int, c: int) -> None:
        residual.setdefault(a, {})
        residual.setdefault(b, {})
        residual[a][b] = residual[a].get(b, 0) + c
        residual[b].setdefault(a, 0)

    verts = [v for v in range(g.n) if inside(v)]
    for v in verts:
        add(2 * v, 2 * v + 1, _BIG if v in (s, t) else 1)
        for u in g.neighbors(v):
            if inside(u):
                add(2 * v + 1, 2 * u, _BIG)
    source, sink = 2 * s + 1, 2 * t
    flow = 0
    while flow < cap:
        prev = {source: source}
        queue = deque([source])
        while queue and sink not in prev:
            a = queue.popleft()
            for b, c in residual[a].items():
                if c > 0 and b not in prev:
                    prev[b] = a
                    queue.append(b)
        if sink not in prev:
            reach = set(prev)
            cut = [v for v in verts if 2 * v in reach and 2 * v + 1 not in reach]
            return flow, cut
        b = sink
        while b != source:
            a = prev[b]
            residual[a][b] -= 1
            residual[b][a] += 1
            b = a
        flow += 1
    return flow, None


def local_connectivity(g: Graph, s: int, t: int) -> int:
    if g.has_edge(s, t):
        raise ValueError("local vertex connectivity is undefined for adjacent vertices")
    return _local_cut(g, s, t, _BIG)[0]


def find_small_cut(g: Graph, k: int, within: Optional[Iterable[int]] = None) -> Optional[list[int]]:
    """A vertex cut of ``g[within]`` with fewer than ``k`` vertices, or None if none exists.

    Complete graphs have no cut; the caller decides what their connectivity means.
    A disconnected graph yields the empty cut.
    """
    allowed = set(range(g.n)) if within is None else set(within)
    if len(components(g, allowed)) > 1:
        return []
    order = sorted(allowed)
    best: Optional[list[int]] = None
    bound = k
    # a cut of size < k misses one of the first k vertices, and that vertex is
    # separated by it from some non-neighbour
    for i, v in enumerate(order[:k]):
        if i >= bound:
            break
        for w in order:
            if w == v or g.has_edge(v, w):
                continue
            flow, cut = _local_cut(g, v, w, bound, allowed)
            if cut is not None and flow < bound:
                best, bound = cut, flow
    return best


def vertex_connectivity(g: Graph, within: Optional[Iterable[int]] = None) -> int:
    """Exact vertex connectivity via Menger / unit-capacity max-flow. ``K_n`` gives ``n-1``."""
    allowed = set(range(g.n)) if within is None else set(within)
    n = len(allowed)
    if n < 2:
        raise ValueError("vertex connectivity needs at least 2 vertices")
    cut = find_small_cut(g, n - 1, allowed)
    return n - 1 if cut is None else len(cut)


def is_k_connected(g: Graph, k: int, within: Optional[Iterable[int]] = None) -> bool:
    allowed = set(range(g.n)) if within is None else set(within)
    if k <= 0:
        return True
    if len(allowed) <= k:
        return False
    return find_small_cut(g, k, allowed) is None


# --- linkage ------------------------------------------------------------------------

class LinkageStatus(enum.Enum):
    FOUND = "found"
    INFEASIBLE = "infeasible"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class LinkageInstance:
    host: Graph
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("a linkage instance needs k >= 1 pairs")
        ends = [v for p in self.pairs for v in p]
        if len(set(ends)) != len(ends):
            raise ValueError("linkage endpoints must be pairwise distinct")
        for v in ends:
            if not 0 <= v < self.host.n:
                raise ValueError(f"endpoint {v} not in host")


@dataclass
class LinkageResult:
    status: LinkageStatus
    paths: Optional[list[list[int]]] = None
    expansions: int = 0


class _Budget(Exception):
    pass


def solve_linkage(inst: LinkageInstance, budget: int = 1_000_000) -> LinkageResult:
    """Exhaustive backtracking for vertex-disjoint x_i–y_i paths.

    Pairs are routed in order of increasing host distance; each path is grown
    towards the neighbour closest to its target. Only chordless paths are
    tried, which loses nothing (any path can be shortcut within itself), so a
    completed search that finds nothing proves the instance infeasible.
    """
    g = inst.host
    terminals = {v for p in inst.pairs for v in p}

    def dist_key(p):
        d = bfs_distances(g, p[0]).get(p[1])
        return (d is None, d if d is not None else 0)

    order = sorted(range(len(inst.pairs)), key=lambda i: (dist_key(inst.pairs[i]), i))
    if any(dist_key(inst.pairs[i])[0] for i in order):
        return LinkageResult(LinkageStatus.INFEASIBLE, None, 0)

    used: set[int] = set(terminals)
    chosen: dict[int, list[int]] = {}
    count = [0]

    def reachable(x: int, y: int) -> bool:
        seen = {x}
        stack = [x]
        while stack:
            a = stack.pop()
            for b in g.adj[a]:
                if b == y:
                    return True
                if b not in seen and b not in used:
                    seen.add(b)
                    stack.append(b)
        return False

    def route(idx: int) -> bool:
        if idx == len(order):
            return True
        x, y = inst.pairs[order[idx]]
        for later in order[idx + 1:]:
            if not reachable(*inst.pairs[later]):
                return False
        if g.has_edge(x, y):
            chosen[order[idx]] = [x, y]
            if route(idx + 1):
                return True
            del chosen[order[idx]]
            # with the direct edge available, longer x-y paths only block more
            return False
        path = [x]
        on_path = {x}

        def grow() -> bool:
            count[0] += 1
            if count[0] > budget:
                raise _Budget
            tip = path[-1]
            blocked = used | on_path
            dist = bfs_distances(g, y, allowed=(set(range(g.n)) - blocked) | {y})
            cands = [
                b for b in g.neighbors(tip)
                if b not in blocked and b in dist
                and not any(c in on_path and c != tip for c in g.adj[b])
            ]
            cands.sort(key=lambda b: (dist[b], b))
            for b in cands:
                path.append(b)
                on_path.add(b)
                if g.has_edge(b, y):
                    # b is adjacent to y: continuing past b would leave a chord
                    used.update(path[1:])
                    chosen[order[idx]] = path + [y]
                    if route(idx + 1):
                        return True
                    del chosen[order[idx]]
                    used.difference_update(path[1:])
                elif grow():
                    return True
                path.pop()
                on_path.discard(b)
            return False

        return grow()

    try:
        ok = route(0)
    except _Budget:
        return LinkageResult(LinkageStatus.BUDGET_EXHAUSTED, None, count[0])
    if not ok:
        return LinkageResult(LinkageStatus.INFEASIBLE, None, count[0])
    return LinkageResult(LinkageStatus.FOUND, [chosen[i] for i in range(len(inst.pairs))], count[0])


def check_linkage(inst: LinkageInstance, paths: Sequence[Sequence[int]]) -> list[str]:
    """Problems with a claimed linkage (empty list when valid)."""
    problems = []
    if len(paths) != len(inst.pairs):
        return [f"expected {len(inst.pairs)} paths, got {len(paths)}"]
    seen: dict[int, int] = {}
    for i, (path, (x, y)) in enumerate(zip(paths, inst.pairs)):
        if not path or path[0] != x or path[-1] != y:
            problems.append(f"path {i} does not join {x} and {y}")
        for a, b in zip(path, path[1:]):
            if not inst.host.has_edge(a, b):
                problems.append(f"path {i} uses non-edge ({a}, {b})")
        for v in path:
            if v in seen:
                problems.append(f"vertex {v} shared by paths {seen[v]} and {i}")
            seen[v] = i
    return problems


# --- blocks ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    vertices: frozenset[int]
    boundary: frozenset[int]
    connectivity_witness: int


def boundary_of(g: Graph, vertices: Iterable[int], within: Optional[Iterable[int]] = None) -> frozenset[int]:
    """Vertices of the set with a neighbour outside it (inside ``g[within]`` if given)."""
    s = set(vertices)
    world = None if within is None else set(within)
    return frozenset(
        v for v in s
        if any(u not in s and (world is None or u in world) for u in g.adj[v])
    )


def extract_block(
    g: Graph,
    q: int,
    boundary_cap: Optional[int] = None,
    within: Optional[Iterable[int]] = None,
) -> Optional[Block]:
    """Look for an induced q-connected subgraph with more than 4q² vertices and small boundary.

    Peels to the 4q²-core, then splits at vertex cuts of size < q, trying the
    larger side (with the cut added back) first. Returning None is not a proof
    that no such block exists.
    """
    if boundary_cap is None:
        boundary_cap = 2 * q * q
    world = set(range(g.n)) if within is None else set(within)
    size_floor = 4 * q * q
    core = peel(g, size_floor, world)[0]

    def search(cand: frozenset[int]) -> Optional[Block]:
        if len(cand) <= size_floor:
            return None
        cut = find_small_cut(g, q, cand)
        if cut is None:
            if not is_k_connected(g, q, cand):
                return None
            bd = boundary_of(g, cand, world)
            if len(bd) > boundary_cap:
                return None
            return Block(cand, bd, q)
        rest = cand - set(cut)
        sides = components(g, rest)
        sides.sort(key=lambda c: (-len(c), c[0]))
        for side in sides:
            found = search(frozenset(side) | frozenset(cut))
            if found is not None:
                return found
        return None

    return search(frozenset(core)) if core else None


@dataclass
class Decomposition:
    """Output of :func:`block_decomposition`.

    ``initial`` is the peel of the input before the first block; ``steps`` pairs
    each block with the set Z_t peeled after deleting it. ``deletion_degree``
    records, for every peeled vertex, its degree in the residual graph when deleted.
    """

    threshold: int
    initial: frozenset[int]
    steps: list[tuple[Block, frozenset[int]]] = field(default_factory=list)
    deletion_degree: dict[int, int] = field(default_factory=dict)
    complete: bool = True
    leftover: frozenset[int] = frozenset()

    @property
    def blocks(self) -> list[Block]:
        return [b for b, _ in self.steps]

    @property
    def peeled(self) -> frozenset[int]:
        out = set(self.initial)
        for _, z in self.steps:
            out |= z
        return frozenset(out)


def block_decomposition(g: Graph, k: int, threshold: Optional[int] = None) -> Decomposition:
    """Repeatedly extract a k-connected block (boundary <= 2k²), delete it, and re-peel below T."""
    T = 4 * k * k if threshold is None else threshold
    alive, log = peel(g, T)
    dec = Decomposition(threshold=T, initial=frozenset(v for v, _ in log))
    dec.deletion_degree.update(log)
    while alive:
        block = extract_block(g, k, 2 * k * k, within=alive)
        if block is None:
            dec.complete = False
            dec.leftover = frozenset(alive)
            break
        alive = alive - block.vertices
        alive, log = peel(g, T, alive)
        dec.deletion_degree.update(log)
        dec.steps.append((block, frozenset(v for v, _ in log)))
    return dec
