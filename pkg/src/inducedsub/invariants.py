"""Elementary invariants: degrees, girth, distances, degeneracy, colouring, cores, Moore bound."""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .graph import Graph


class _Infinity:
    """Girth of an acyclic graph. Compares greater than every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "inf"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("inducedsub.INFINITY")

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True


INFINITY = _Infinity()
UNREACHABLE = None  # distance between vertices in different components


def is_infinite(x) -> bool:
    return x is INFINITY


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    min_degree: int
    max_degree: int
    average_degree: Fraction
    girth: object  # int or INFINITY
    component_count: int


def graph_stats(g: Graph) -> GraphStats:
    degs = g.degrees()
    return GraphStats(
        n=g.n,
        m=g.m,
        min_degree=min(degs, default=0),
        max_degree=max(degs, default=0),
        average_degree=average_degree(g),
        girth=girth(g),
        component_count=len(components(g)),
    )


def average_degree(g: Graph) -> Fraction:
    return Fraction(2 * g.m, g.n) if g.n else Fraction(0)


def min_degree(g: Graph) -> int:
    return min(g.degrees(), default=0)


def max_degree(g: Graph) -> int:
    return max(g.degrees(), default=0)


def components(g: Graph, within: Optional[Iterable[int]] = None) -> list[list[int]]:
    """Connected components (each sorted), ordered by smallest vertex."""
    allowed = set(range(g.n)) if within is None else set(within)
    seen: set[int] = set()
    out = []
    for s in sorted(allowed):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if y in allowed and y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        out.append(sorted(comp))
    return out


def bfs_distances(
    g: Graph,
    source: int,
    allowed: Optional[set[int]] = None,
    radius: Optional[int] = None,
) -> dict[int, int]:
    """Distances from ``source`` inside ``g[allowed]``; unreachable vertices are absent."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        dx = dist[x]
        if radius is not None and dx >= radius:
            continue
        for y in g.neighbors(x):
            if y not in dist and (allowed is None or y in allowed):
                dist[y] = dx + 1
                queue.append(y)
    return dist


def distance(g: Graph, u: int, v: int):
    """Host distance, or ``UNREACHABLE`` (None) across components."""
    return bfs_distances(g, u).get(v, UNREACHABLE)


def girth(g: Graph):
    """Length of a shortest cycle, or ``INFINITY`` for forests.

    One BFS per vertex, truncated once the current best cannot be beaten.
    """
    best = math.inf
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            dx = dist[x]
            if 2 * dx + 1 >= best:
                break
            for y in g.adj[x]:
                if y not in dist:
                    dist[y] = dx + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dx + dist[y] + 1)
    return INFINITY if best == math.inf else int(best)


def shortest_cycle_through(g: Graph, v: int, cap: Optional[int] = None):
    """Length of a shortest cycle containing ``v`` (``INFINITY`` if none; stops beyond ``cap``)."""
    branch = {v: -1}
    dist = {v: 0}
    queue = deque()
    for y in g.neighbors(v):
        branch[y] = y
        dist[y] = 1
        queue.append(y)
    best = math.inf
    while queue:
        x = queue.popleft()
        dx = dist[x]
        if 2 * dx + 1 >= best or (cap is not None and 2 * dx > cap):
            break
        for y in g.adj[x]:
            if y == v:
                continue
            if y not in dist:
                dist[y] = dx + 1
                branch[y] = branch[x]
                queue.append(y)
            elif branch[y] != branch[x]:
                best = min(best, dx + dist[y] + 1)
    return INFINITY if best == math.inf else int(best)


def is_bipartite(g: Graph) -> bool:
    side: dict[int, int] = {}
    for s in range(g.n):
        if s in side:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adj[x]:
                if y not in side:
                    side[y] = 1 - side[x]
                    queue.append(y)
                elif side[y] == side[x]:
                    return False
    return True


# --- degeneracy ------------------------------------------------------------------

@dataclass(frozen=True)
class DegeneracyOrder:
    order: tuple[int, ...]
    degeneracy: int
    right_degree: tuple[int, ...]  # indexed by vertex
    position: tuple[int, ...]  # position[v] = index of v in order

    def right_neighbors(self, g: Graph, v: int) -> list[int]:
        p = self.position[v]
        return [u for u in g.neighbors(v) if self.position[u] > p]


def degeneracy_order(g: Graph, within: Optional[Iterable[int]] = None) -> DegeneracyOrder:
    """Min-degree peeling (ties to the smallest index).

    With ``within``, peels ``g[within]``; vertices outside get position ``-1``
    and right-degree 0, and are absent from ``order``.
    """
    alive = set(range(g.n)) if within is None else set(within)
    deg = {v: sum(1 for u in g.adj[v] if u in alive) for v in alive}
    heap = [(d, v) for v, d in deg.items()]
    heapq.heapify(heap)
    removed: set[int] = set()
    order: list[int] = []
    degeneracy = 0
    while heap:
        d, v = heapq.heappop(heap)
        if v in removed or d != deg[v]:
            continue
        removed.add(v)
        order.append(v)
        degeneracy = max(degeneracy, d)
        for u in g.adj[v]:
            if u in alive and u not in removed:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], u))
    position = [-1] * g.n
    for i, v in enumerate(order):
        position[v] = i
    right = [0] * g.n
    for v in order:
        right[v] = sum(1 for u in g.adj[v] if u in alive and position[u] > position[v])
    return DegeneracyOrder(tuple(order), degeneracy, tuple(right), tuple(position))


def degeneracy(g: Graph) -> int:
    return degeneracy_order(g).degeneracy


def greedy_color(g: Graph, ord: Optional[DegeneracyOrder] = None) -> list[int]:
    """Colour in reverse peeling order with the smallest free colour.

    Each vertex sees at most ``degeneracy`` already-coloured neighbours, so at
    most ``degeneracy + 1`` colours are used. Vertices outside ``ord`` get -1.
    """
    if ord is None:
        ord = degeneracy_order(g)
    colour = [-1] * g.n
    for v in reversed(ord.order):
        used = {colour[u] for u in g.adj[v] if colour[u] >= 0}
        c = 0
        while c in used:
            c += 1
        colour[v] = c
    return colour


def is_proper_coloring(g: Graph, colour: list[int]) -> bool:
    return all(colour[u] != colour[v] for u, v in g.edges())


def peel(g: Graph, min_deg: int, within: Optional[Iterable[int]] = None) -> tuple[set[int], list[tuple[int, int]]]:
    """Repeatedly delete vertices of degree < ``min_deg`` (smallest index first).

    Returns the surviving set and the deletion log ``[(vertex, degree_at_deletion)]``.
    """
    alive = set(range(g.n)) if within is None else set(within)
    deg = {v: sum(1 for u in g.adj[v] if u in alive) for v in alive}
    heap = [v for v in alive if deg[v] < min_deg]
    heapq.heapify(heap)
    log = []
    while heap:
        v = heapq.heappop(heap)
        if v not in alive:
            continue
        alive.discard(v)
        log.append((v, deg[v]))
        for u in g.adj[v]:
            if u in alive:
                deg[u] -= 1
                if deg[u] == min_deg - 1:
                    heapq.heappush(heap, u)
    return alive, log


def k_core(g: Graph, k: int, within: Optional[Iterable[int]] = None) -> set[int]:
    return peel(g, k, within)[0]


def avg_core(g: Graph, d: int) -> Optional[frozenset[int]]:
    """Delete vertices of degree <= d until none remain; the survivors have min degree >= d+1.

    Returns None when everything is deleted, which certifies that ``g`` is
    d-degenerate (so its average degree is at most 2d).
    """
    alive = k_core(g, d + 1)
    return frozenset(alive) if alive else None


def max_min_degree_core(g: Graph) -> tuple[int, frozenset[int]]:
    """``d = max`` over induced subgraphs of the minimum degree, with a vertex set attaining it."""
    d = degeneracy(g)
    return d, frozenset(k_core(g, d))


def moore_lower_bound(delta: int, m: int) -> int:
    """``2 * sum_{i=0..m} (delta-1)^i``, the minimum order for min degree delta and girth >= 2m+2."""
    if delta < 2 or m < 0:
        raise ValueError("need delta >= 2 and m >= 0")
    if delta == 2:
        return 2 * (m + 1)
    r = delta - 1
    return 2 * (r ** (m + 1) - 1) // (r - 1)


def decimal_digits(x: int) -> int:
    """Number of decimal digits of a non-negative integer without ``str()``."""
    if x == 0:
        return 1
    k = int(x.bit_length() * math.log10(2))
    while 10 ** k <= x:
        k += 1
    while k > 1 and 10 ** (k - 1) > x:
        k -= 1
    return k


# --- nearest-root BFS forest ----------------------------------------------------

@dataclass(frozen=True)
class BfsForest:
    root: tuple[Optional[int], ...]
    parent: tuple[Optional[int], ...]  # parent of a root is None
    depth: tuple[Optional[int], ...]

    @property
    def unassigned(self) -> list[int]:
        return [v for v, r in enumerate(self.root) if r is None]

    def tree(self, r: int) -> list[int]:
        return [v for v, rv in enumerate(self.root) if rv == r]

    def path_to_root(self, v: int) -> list[int]:
        out = [v]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])
        return out


def bfs_forest(g: Graph, roots: Iterable[int]) -> BfsForest:
    """Multi-source BFS; each vertex joins a nearest root.

    Ties go to the smaller root index, then the smaller parent index.
    """
    roots = sorted(set(roots))
    if not roots:
        raise ValueError("bfs_forest needs at least one root")
    root: list[Optional[int]] = [None] * g.n
    parent: list[Optional[int]] = [None] * g.n
    depth: list[Optional[int]] = [None] * g.n
    for r in roots:
        root[r] = r
        depth[r] = 0
    frontier = roots
    d = 0
    while frontier:
        best: dict[int, tuple[int, int]] = {}
        for x in frontier:
            for y in g.adj[x]:
                if depth[y] is None:
                    key = (root[x], x)
                    if y not in best or key < best[y]:
                        best[y] = key
        d += 1
        for y, (r, p) in best.items():
            root[y] = r
            parent[y] = p
            depth[y] = d
        frontier = sorted(best)
    return BfsForest(tuple(root), tuple(parent), tuple(depth))
