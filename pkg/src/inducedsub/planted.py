"""Instances with a known answer, used to measure recovery of the randomised pipeline."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .graph import Graph, complete_graph
from .subdivision import one_subdivision


@dataclass
class PlantedUnbalanced:
    graph: Graph
    A: list[int]
    B: list[int]
    d: int


def planted_unbalanced(N: int = 72, d: int = 2, density: float = 1.0, seed: int = 0) -> PlantedUnbalanced:
    """1-subdivision of a dense graph on B (K_N, or G(N, density)); A is the set of subdividing vertices.

    Every vertex of A has exactly two neighbours in B and the host is 2-degenerate,
    so the auxiliary graph on a sample of B is the pair graph restricted to it.
    """
    if density >= 1:
        base = complete_graph(N)
    else:
        rng = random.Random(seed)
        base = Graph(N, [(u, v) for u in range(N) for v in range(u + 1, N) if rng.random() < density])
    g, _ = one_subdivision(base)
    return PlantedUnbalanced(g, list(range(N, g.n)), list(range(N)), d)


def subdivide_edges(h: Graph, length: int) -> Graph:
    """Replace every edge of h by a path with ``length`` edges (new vertices after the old ones)."""
    if length < 1:
        raise ValueError("length must be >= 1")
    edges = []
    nxt = h.n
    for u, v in h.edges():
        chain = [u] + list(range(nxt, nxt + length - 1)) + [v]
        nxt += length - 1
        edges += list(zip(chain, chain[1:]))
    return Graph(nxt, edges)


@dataclass
class PlantedMader:
    graph: Graph
    roots: list[int]  # intended branch candidates
    main: list[int]  # vertices of the branchy tree part
    ballast: list[int]  # vertices the reduction is expected to strip
    s: int
    eta: Fraction
    D: int


def planted_mader(N: int = 20, t: int = 4, s: int = 4, seed: int = 0, clique: int = 7) -> PlantedMader:
    """Branchy trees joined leaf to leaf, plus dense ballast.

    Each of N roots has s-1 children with t leaves each. Leaves are matched
    across roots along a random (s-1)t-regular graph on the roots, so each
    inter-tree path has length 5 and each child carries t of them.

    Copies of K_clique sit at the lowest indices. Their top vertex has two
    bridges into the leaves and the next one has one, so every ballast
    deletion removes at least two edges. ``eta`` makes the tree part beat
    alpha·n by exactly 1/2, so the minimal reduction strips the ballast and
    nothing else. Enough copies are added to push the average degree above
    s-2+eta.
    """
    from .extremal import _pairing_model

    a = s - 1
    deg = a * t
    rng = random.Random(seed)
    root_graph = _pairing_model(deg, N, rng)
    per = 1 + a + a * t
    n_main = N * per
    e_main = N * (a + a * t) + N * deg // 2
    eta = 4 * (Fraction(2 * e_main - 1, 2 * n_main) - Fraction(s - 2, 2))
    alpha = Fraction(s - 2, 2) + eta / 4
    # ballast copies needed for average degree > s - 2 + eta
    ce = clique * (clique - 1) // 2 + 3
    c = 0
    while Fraction(2 * (e_main + c * ce), n_main + c * clique) <= s - 2 + eta:
        c += 1
    off = c * clique
    roots = [off + i for i in range(N)]
    child = {(i, j): off + N + i * a + j for i in range(N) for j in range(a)}
    leaf_base = off + N + N * a
    leaves = {i: [leaf_base + (i * a + j) * t + k for j in range(a) for k in range(t)] for i in range(N)}
    edges = []
    for i in range(N):
        for j in range(a):
            edges.append((roots[i], child[(i, j)]))
            for k in range(t):
                edges.append((child[(i, j)], leaves[i][j * t + k]))
    slot = {i: 0 for i in range(N)}
    for i in range(N):
        for w in sorted(root_graph[i]):
            if w > i:
                edges.append((leaves[i][slot[i]], leaves[w][slot[w]]))
                slot[i] += 1
                slot[w] += 1
    all_leaves = [x for i in range(N) for x in leaves[i]]
    pick = rng.sample(all_leaves, 3 * c)
    for b in range(c):
        base = b * clique
        edges += [(base + i, base + j) for i in range(clique) for j in range(i + 1, clique)]
        top, second = base + clique - 1, base + clique - 2
        edges += [(top, pick[3 * b]), (top, pick[3 * b + 1]), (second, pick[3 * b + 2])]
    g = Graph(off + n_main, edges)
    assert alpha * n_main == e_main - Fraction(1, 2)
    return PlantedMader(g, roots, list(range(off, g.n)), list(range(off)), s, eta, max(g.degrees()))


def hub_instance(n0: int = 120, hubs: int = 6, seed: int = 0, swap_budget: int = 4000) -> Optional[Graph]:
    """Cubic graph of girth >= 5 on n0 vertices plus hubs, each vertex joined to one hub.

    Minimum degree 4; most vertices see exactly one high-degree vertex.
    """
    from .extremal import high_girth_regular

    base = high_girth_regular(3, n0, 5, seed=seed, swap_budget=swap_budget)
    if base is None:
        return None
    edges = list(base.edges())
    for v in range(n0):
        edges.append((v, n0 + v % hubs))
    return Graph(n0 + hubs, edges)


def planted_main_unbalanced(N: int = 40, seed: int = 0) -> PlantedUnbalanced:
    """1-subdivision of K_N plus a random 2-factor on the subdividing vertices.

    Every subdividing vertex ends with degree 4 (two hubs, two cycle
    neighbours), the hubs have degree N-1, and the whole graph is its own
    4-core. With N > 2 d^2 + 1 = 33 the unbalanced branch applies.
    """
    base = complete_graph(N)
    g, _ = one_subdivision(base)
    A = list(range(N, g.n))
    rng = random.Random(seed)
    order = A[:]
    rng.shuffle(order)
    edges = set(g.edges())
    for u, v in zip(order, order[1:] + order[:1]):
        edges.add((min(u, v), max(u, v)))
    return PlantedUnbalanced(Graph(g.n, edges), A, list(range(N)), 4)
