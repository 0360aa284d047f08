"""Finite fields GF(q), projective planes PG(2, q), incidence graphs and arc search."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .graph import Graph
from .invariants import INFINITY

# Irreducible moduli for the non-prime fields up to 64, low coefficient first.
IRREDUCIBLE = {
    (2, 2): (1, 1, 1),           # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),        # x^3 + x + 1
    (2, 4): (1, 1, 0, 0, 1),     # x^4 + x + 1
    (2, 5): (1, 0, 1, 0, 0, 1),  # x^5 + x^2 + 1
    (2, 6): (1, 1, 0, 0, 0, 0, 1),  # x^6 + x + 1
    (3, 2): (1, 0, 1),           # x^2 + 1
    (3, 3): (1, 2, 0, 1),        # x^3 + 2x + 1
    (5, 2): (3, 0, 1),           # x^2 + 3
    (7, 2): (4, 0, 1),           # x^2 + 4
}


def prime_power(q: int) -> Optional[tuple[int, int]]:
    """``(p, k)`` with ``q = p**k`` and p prime, or None."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    return (p, k) if r == 1 else None


class FiniteField:
    """GF(p^k) for p^k <= 64 with elements encoded as integers 0..q-1 (base-p digits)."""

    def __init__(self, q: int):
        pk = prime_power(q)
        if pk is None:
            raise ValueError(f"{q} is not a prime power")
        if q > 64:
            raise ValueError("fields are tabulated only up to order 64")
        self.q = q
        self.p, self.k = pk
        self.modulus = (0, 1) if self.k == 1 else IRREDUCIBLE[pk]
        p = self.p
        digits = [self._digits(x) for x in range(q)]
        self.add = [[self._encode([(a + b) % p for a, b in zip(digits[x], digits[y])]) for y in range(q)] for x in range(q)]
        self.mul = [[self._encode(self._polymul(digits[x], digits[y])) for y in range(q)] for x in range(q)]
        self.neg = [next(y for y in range(q) if self.add[x][y] == 0) for x in range(q)]
        self.inv = [None] + [next((y for y in range(1, q) if self.mul[x][y] == 1), None) for x in range(1, q)]
        self._check_axioms()

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return out

    def _encode(self, digits) -> int:
        x = 0
        for d in reversed(digits):
            x = x * self.p + d
        return x

    def _polymul(self, a: list[int], b: list[int]) -> list[int]:
        p, k, mod = self.p, self.k, self.modulus
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        # reduce by the monic modulus
        for deg in range(len(prod) - 1, k - 1, -1):
            c = prod[deg]
            if c:
                for i in range(k + 1):
                    prod[deg - k + i] = (prod[deg - k + i] - c * mod[i]) % p
        return prod[:k]

    def _check_axioms(self) -> None:
        q = self.q
        if any(self.inv[x] is None for x in range(1, q)):
            raise ValueError(f"modulus for GF({q}) is reducible: missing inverses")
        rng = random.Random(q)
        for _ in range(200):
            a, b, c = (rng.randrange(q) for _ in range(3))
            if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]:
                raise ValueError("multiplication is not associative")
            if self.add[self.add[a][b]][c] != self.add[a][self.add[b][c]]:
                raise ValueError("addition is not associative")
            if self.mul[a][self.add[b][c]] != self.add[self.mul[a][b]][self.mul[a][c]]:
                raise ValueError("distributivity fails")
        for a in range(q):
            for b in range(q):
                if self.mul[a][b] != self.mul[b][a] or self.add[a][b] != self.add[b][a]:
                    raise ValueError("field operations are not commutative")

    def dot(self, u, v) -> int:
        s = 0
        for a, b in zip(u, v):
            s = self.add[s][self.mul[a][b]]
        return s


def _normalized_triples(F: FiniteField) -> list[tuple[int, int, int]]:
    """Homogeneous triples with first nonzero coordinate 1, in lexicographic order."""
    q = F.q
    out = [(0, 0, 1)]
    out += [(0, 1, z) for z in range(q)]
    out += [(1, y, z) for y in range(q) for z in range(q)]
    return sorted(out)


class ProjectivePlane:
    """PG(2, q): points and lines are normalized triples; incidence is a zero dot product."""

    def __init__(self, q: int, verify: bool = True):
        self.field = FiniteField(q)
        self.q = q
        self.points = _normalized_triples(self.field)
        self.lines = list(self.points)
        self.on_line: list[list[int]] = [
            [i for i, pt in enumerate(self.points) if self.field.dot(pt, ln) == 0] for ln in self.lines
        ]
        self.through: list[list[int]] = [[] for _ in self.points]
        for li, pts in enumerate(self.on_line):
            for pi in pts:
                self.through[pi].append(li)
        self._line_of = {}
        for li, pts in enumerate(self.on_line):
            for a, b in combinations(pts, 2):
                self._line_of[(a, b)] = li
        if verify:
            self.check_axioms()

    @property
    def size(self) -> int:
        return len(self.points)

    def line_through(self, a: int, b: int) -> int:
        return self._line_of[(a, b) if a < b else (b, a)]

    def check_axioms(self) -> None:
        q, N = self.q, self.size
        if N != q * q + q + 1 or len(self.lines) != N:
            raise AssertionError("wrong number of points or lines")
        if any(len(pts) != q + 1 for pts in self.on_line):
            raise AssertionError("some line does not have q+1 points")
        if any(len(ls) != q + 1 for ls in self.through):
            raise AssertionError("some point is not on q+1 lines")
        # every pair on at least one line (dict covers all pairs) and exactly one by counting
        if len(self._line_of) != N * (N - 1) // 2 or N * (q + 1) * q // 2 != N * (N - 1) // 2:
            raise AssertionError("two points do not determine a unique line")

    def collinear(self, a: int, b: int, c: int) -> bool:
        return c in self.on_line[self.line_through(a, b)]

    def is_arc(self, pts) -> bool:
        return all(not self.collinear(a, b, c) for a, b, c in combinations(sorted(pts), 3))

    def to_json_obj(self) -> dict:
        return {
            "q": self.q,
            "points": [list(p) for p in self.points],
            "lines": [list(ln) for ln in self.lines],
            "incidence": [[pi, li] for li, pts in enumerate(self.on_line) for pi in pts],
        }


def projective_plane(q: int) -> ProjectivePlane:
    return ProjectivePlane(q)


def incidence_graph(pl: ProjectivePlane) -> Graph:
    """Points ``0..N-1`` and lines ``N..2N-1``; a point is joined to every line through it."""
    N = pl.size
    return Graph(2 * N, ((pi, N + li) for li, pts in enumerate(pl.on_line) for pi in pts))


class ArcStatus(enum.Enum):
    FOUND = "found"
    NONE_EXISTS = "none_exists"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass
class ArcResult:
    status: ArcStatus
    arc: Optional[list[int]] = None
    expansions: int = 0


def max_arc(pl: ProjectivePlane, target: int, budget: int = 50_000_000, symmetry: bool = True) -> ArcResult:
    """Backtracking search for ``target`` points with no three collinear.

    Points are added in ascending index order; with ``symmetry`` the first point
    is fixed to point 0, which is enough for existence since the collineation
    group is transitive on points. Candidate sets are bitmasks; every new point
    blocks the lines it spans with the points already chosen.
    """
    if target > pl.q + 2:
        raise ValueError("no arc can exceed q + 2 points")
    N = pl.size
    line_mask = [sum(1 << p for p in pts) for pts in pl.on_line]
    count = 0

    class _Stop(Exception):
        pass

    def extend(chosen: list[int], cands: int) -> Optional[list[int]]:
        nonlocal count
        if len(chosen) == target:
            return list(chosen)
        if bin(cands).count("1") < target - len(chosen):
            return None
        while cands:
            low = cands & -cands
            p = low.bit_length() - 1
            cands ^= low
            count += 1
            if count > budget:
                raise _Stop
            blocked = 0
            for c in chosen:
                blocked |= line_mask[pl.line_through(c, p)]
            chosen.append(p)
            found = extend(chosen, cands & ~blocked)
            if found is not None:
                return found
            chosen.pop()
            if bin(cands).count("1") < target - len(chosen):
                break
        return None

    all_pts = (1 << N) - 1
    try:
        if target == 0:
            return ArcResult(ArcStatus.FOUND, [], 0)
        if symmetry:
            found = extend([0], all_pts & ~1)
        else:
            found = extend([], all_pts)
    except _Stop:
        return ArcResult(ArcStatus.BUDGET_EXHAUSTED, None, count)
    if found is None:
        return ArcResult(ArcStatus.NONE_EXISTS, None, count)
    assert pl.is_arc(found)
    return ArcResult(ArcStatus.FOUND, found, count)


# --- high-girth regular graphs ----------------------------------------------------

def _pairing_model(d: int, n: int, rng: random.Random, max_tries: Optional[int] = None) -> list[set[int]]:
    """Random d-regular simple graph: pair half-edges, then repair loops/multi-edges by swaps.

    A bad pair {a, b} and a random pair {c, e} become {a, c}, {b, e} (or {a, e}, {b, c})
    whenever both new pairs are fine; counts are kept incrementally.
    """
    if d == n - 1:
        return [set(range(n)) - {v} for v in range(n)]
    points = [v for v in range(n) for _ in range(d)]
    rng.shuffle(points)
    pairs = [(points[2 * i], points[2 * i + 1]) for i in range(len(points) // 2)]
    counts: dict[tuple[int, int], int] = {}

    def key(a: int, b: int) -> tuple[int, int]:
        return (a, b) if a < b else (b, a)

    for a, b in pairs:
        counts[key(a, b)] = counts.get(key(a, b), 0) + 1

    def is_bad(pr) -> bool:
        return pr[0] == pr[1] or counts[key(*pr)] > 1

    def fine(a: int, b: int) -> bool:
        return a != b and counts.get(key(a, b), 0) == 0

    tries = max_tries if max_tries is not None else 200 * max(len(pairs), 1)
    bad = [i for i in range(len(pairs)) if is_bad(pairs[i])]
    while bad:
        if tries <= 0:
            raise RuntimeError("could not repair the pairing into a simple graph")
        tries -= 1
        i = bad[-1]
        if not is_bad(pairs[i]):
            bad.pop()
            continue
        j = rng.randrange(len(pairs))
        if j == i:
            continue
        (a, b), (c, e) = pairs[i], pairs[j]
        if rng.random() < 0.5:
            c, e = e, c
        for pr in (pairs[i], pairs[j]):
            counts[key(*pr)] -= 1
        if fine(a, c) and fine(b, e) and key(a, c) != key(b, e):
            pairs[i], pairs[j] = (a, c), (b, e)
        for pr in (pairs[i], pairs[j]):
            counts[key(*pr)] = counts.get(key(*pr), 0) + 1
    adj = [set() for _ in range(n)]
    for a, b in pairs:
        adj[a].add(b)
        adj[b].add(a)
    assert all(len(x) == d for x in adj), "pairing repair lost regularity"
    return adj


def _short_cycle_cost(adj: list[set[int]], target: int) -> int:
    from .invariants import shortest_cycle_through

    g = Graph.from_adjacency(adj)
    cost = 0
    for v in range(g.n):
        c = shortest_cycle_through(g, v, cap=target)
        if c is not INFINITY and c < target:
            cost += target - c
    return cost


def high_girth_regular(
    d: int, n: int, g_target: int, seed: int = 0, swap_budget: int = 20000
) -> Optional[Graph]:
    """Random d-regular graph on n vertices with girth >= ``g_target``, or None.

    Pairing model plus repair, then local search over double-edge swaps
    ``{ab, cd} -> {ac, bd}`` that never increase the total shortfall of
    shortest cycles through each vertex. Requests below the Moore bound are
    rejected immediately; otherwise None is inconclusive.
    """
    from .invariants import girth, moore_lower_bound

    if d * n % 2 or n <= d:
        raise ValueError("need d*n even and n > d")
    if g_target >= 3 and d >= 2 and n < moore_lower_bound(d, (g_target - 2) // 2):
        return None
    rng = random.Random(seed)
    adj = _pairing_model(d, n, rng)
    cost = _short_cycle_cost(adj, g_target)
    for _ in range(swap_budget):
        if cost == 0:
            break
        g = Graph.from_adjacency(adj)
        # pick an edge on a shortest cycle
        from .invariants import shortest_cycle_through

        worst = min(range(n), key=lambda v: (shortest_cycle_through(g, v, cap=g_target), rng.random()))
        a = worst
        b = rng.choice(sorted(adj[a]))
        c = rng.randrange(n)
        if c in (a, b) or not adj[c]:
            continue
        dd = rng.choice(sorted(adj[c]))
        if dd in (a, b):
            continue
        if rng.random() < 0.5:
            c, dd = dd, c
        if c in adj[a] or dd in adj[b]:
            continue
        adj[a].discard(b); adj[b].discard(a); adj[c].discard(dd); adj[dd].discard(c)
        adj[a].add(c); adj[c].add(a); adj[b].add(dd); adj[dd].add(b)
        new_cost = _short_cycle_cost(adj, g_target)
        if new_cost <= cost:
            cost = new_cost
        else:
            adj[a].discard(c); adj[c].discard(a); adj[b].discard(dd); adj[dd].discard(b)
            adj[a].add(b); adj[b].add(a); adj[c].add(dd); adj[dd].add(c)
    g = Graph.from_adjacency(adj)
    if girth(g) < g_target:
        return None
    return g
