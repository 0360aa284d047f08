"""Simple undirected graphs on dense vertex indices, plus graph6 / edge-list / JSON I/O."""

from __future__ import annotations

import json
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    """Raised when a graph would violate simplicity (loops, duplicate edges, bad indices)."""


class GraphFormatError(ValueError):
    """Raised on malformed serialized input; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``adj[v]`` is a frozenset of neighbours; ``neighbors(v)`` gives them sorted.
    """

    __slots__ = ("n", "adj", "_m", "_sorted")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
            m += 1
        self.n = n
        self.adj: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in nbrs)
        self._m = m
        self._sorted: list[tuple[int, ...] | None] = [None] * n

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]]) -> "Graph":
        """Build from per-vertex neighbour sets; symmetry is checked."""
        n = len(adj)
        edges = []
        for u, nb in enumerate(adj):
            for v in nb:
                if u == v:
                    raise GraphError(f"self-loop at vertex {u}")
                if not 0 <= v < n:
                    raise GraphError(f"neighbour {v} of {u} out of range")
                if u not in adj[v]:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")
                if u < v:
                    edges.append((u, v))
        return cls(n, edges)

    @property
    def m(self) -> int:
        return self._m

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def neighbors(self, v: int) -> tuple[int, ...]:
        s = self._sorted[v]
        if s is None:
            s = tuple(sorted(self.adj[v]))
            self._sorted[v] = s
        return s

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def vertices(self) -> range:
        return range(self.n)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v`` in lexicographic order."""
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield (u, v)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to ``0..k-1``; returns it with the old labels in order."""
        labels = sorted(set(vertices))
        index = {v: i for i, v in enumerate(labels)}
        edges = [
            (index[u], index[v])
            for u in labels
            for v in self.adj[u]
            if v in index and u < v
        ]
        return Graph(len(labels), edges), labels

    def remove(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        drop = set(vertices)
        return self.induced(v for v in range(self.n) if v not in drop)

    def count_edges_within(self, vertices: Iterable[int]) -> int:
        s = set(vertices)
        return sum(1 for u in s for v in self.adj[u] if v in s) // 2


# --- constructors -----------------------------------------------------------

def complete_graph(n: int) -> Graph:
    return Graph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def heawood_graph() -> Graph:
    # LCF notation [5, -5]^7
    edges = {tuple(sorted((i, (i + 1) % 14))) for i in range(14)}
    for i in range(14):
        j = (i + (5 if i % 2 == 0 else -5)) % 14
        edges.add(tuple(sorted((i, j))))
    return Graph(14, sorted(edges))


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return Graph(offset, edges)


# --- graph6 -------------------------------------------------------------------

def _g6_size(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)])
    raise GraphError("graph6 supports at most 258047 vertices here")


def to_graph6(g: Graph) -> bytes:
    """Encode in graph6 (no ``>>graph6<<`` header, no trailing newline)."""
    bits = []
    for v in range(1, g.n):
        for u in range(v):
            bits.append(1 if g.has_edge(u, v) else 0)
    bits.extend([0] * (-len(bits) % 6))
    body = bytes(
        63 + int("".join(map(str, bits[i:i + 6])), 2) for i in range(0, len(bits), 6)
    )
    return _g6_size(g.n) + body


def from_graph6(data: bytes | str) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    pos = 0
    if data.startswith(b">>graph6<<"):
        pos = 10
    data = data.rstrip(b"\r\n")
    if pos >= len(data):
        raise GraphFormatError("missing graph6 size byte", pos)
    for i in range(pos, len(data)):
        if not 63 <= data[i] <= 126:
            raise GraphFormatError(f"byte {data[i]!r} outside graph6 range", i)
    if data[pos] == 126:
        if pos + 1 < len(data) and data[pos + 1] == 126:
            raise GraphFormatError("8-byte graph6 size form is not supported", pos)
        if pos + 4 > len(data):
            raise GraphFormatError("truncated long graph6 size", len(data))
        n = ((data[pos + 1] - 63) << 12) | ((data[pos + 2] - 63) << 6) | (data[pos + 3] - 63)
        pos += 4
    else:
        n = data[pos] - 63
        pos += 1
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise GraphFormatError(
            f"expected {need} adjacency bytes for n={n}, found {len(body)}", pos + min(len(body), need)
        )
    edges = []
    k = 0
    for v in range(1, n):
        for u in range(v):
            byte = body[k // 6] - 63
            if byte >> (5 - k % 6) & 1:
                edges.append((u, v))
            k += 1
    return Graph(n, edges)


# --- edge list ----------------------------------------------------------------

def to_edge_list(g: Graph) -> bytes:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges()]
    return ("\n".join(lines) + "\n").encode("ascii")


def from_edge_list(data: bytes | str) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    tokens: list[tuple[int, int]] = []  # (value, byte offset)
    i = 0
    while i < len(data):
        if data[i:i + 1].isspace():
            i += 1
            continue
        j = i
        while j < len(data) and not data[j:j + 1].isspace():
            j += 1
        word = data[i:j]
        try:
            tokens.append((int(word), i))
        except ValueError:
            raise GraphFormatError(f"non-integer token {word!r}", i) from None
        i = j
    if len(tokens) < 2:
        raise GraphFormatError("missing 'n m' header", len(data))
    (n, n_off), (m, m_off) = tokens[0], tokens[1]
    if n < 0 or m < 0:
        raise GraphFormatError("negative header value", n_off if n < 0 else m_off)
    rest = tokens[2:]
    if len(rest) != 2 * m:
        raise GraphFormatError(f"header declares {m} edges, found {len(rest) / 2:g}", len(data))
    edges = [(rest[2 * k][0], rest[2 * k + 1][0]) for k in range(m)]
    return Graph(n, edges)


# --- JSON ---------------------------------------------------------------------

def to_json_obj(g: Graph) -> dict:
    return {"n": g.n, "edges": [[u, v] for u, v in g.edges()]}


def from_json_obj(obj) -> Graph:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise GraphError("graph JSON must be an object with 'n' and 'edges'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise GraphError("'n' must be an integer")
    edges = []
    for e in obj["edges"]:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) for x in e)):
            raise GraphError(f"bad edge entry {e!r}")
        edges.append((e[0], e[1]))
    return Graph(n, edges)


def to_json(g: Graph) -> bytes:
    return json.dumps(to_json_obj(g), separators=(",", ":")).encode("ascii")


def from_json(data: bytes | str) -> Graph:
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="replace")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc.msg}", exc.pos) from None
    return from_json_obj(obj)


FORMATS = ("graph6", "edge-list", "json")


def load_graph(data: bytes | str, format: str) -> Graph:
    """Parse ``data`` in one of ``graph6``, ``edge-list`` or ``json``."""
    if format == "graph6":
        return from_graph6(data)
    if format == "edge-list":
        return from_edge_list(data)
    if format == "json":
        return from_json(data)
    raise ValueError(f"unknown graph format {format!r}")


def save_graph(g: Graph, format: str) -> bytes:
    if format == "graph6":
        return to_graph6(g)
    if format == "edge-list":
        return to_edge_list(g)
    if format == "json":
        return to_json(g)
    raise ValueError(f"unknown graph format {format!r}")
