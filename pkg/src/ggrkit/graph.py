"""Simple undirected graphs on vertices ``0..n-1``.

Edges are kept as a lexicographically sorted tuple of pairs ``(u, v)`` with
``u < v``; that order is the row order of every matrix built downstream.
Adjacency is also stored as one bitmask per vertex, which is what the
clique and connectivity routines work on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

GRAPH6_MAX_N = 62
ENUMERATION_MAX_N = 8

VertexSet = tuple  # strictly increasing tuple of vertex indices


class GraphFormatError(ValueError):
    """Malformed graph6 or edge-list input."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class UnsupportedSizeError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    adj: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        edges = tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges))
        adj = [0] * self.n
        prev = None
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u < 0 or v >= self.n:
                raise ValueError(f"edge {(u, v)} out of range for n={self.n}")
            if (u, v) == prev:
                raise ValueError(f"duplicate edge {(u, v)}")
            prev = (u, v)
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adj", tuple(adj))

    @classmethod
    def _trusted(cls, n: int, edges: tuple, adj: tuple) -> "Graph":
        # skips validation; callers guarantee sorted, simple, in-range edges
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "edges", edges)
        object.__setattr__(g, "adj", adj)
        return g

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and bool(self.adj[u] >> v & 1)

    def edge_index(self, u: int, v: int) -> int:
        return self.edges.index((min(u, v), max(u, v)))

    def neighbors(self, v: int) -> list[int]:
        mask = self.adj[v]
        return [u for u in range(self.n) if mask >> u & 1]

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def remove_edge(self, e) -> "Graph":
        """Copy of the graph without edge ``e`` (an index or a vertex pair)."""
        if isinstance(e, int):
            u, v = self.edges[e]
        else:
            u, v = min(e), max(e)
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        edges = tuple(f for f in self.edges if f != (u, v))
        if len(edges) == len(self.edges):
            raise KeyError(f"edge {(u, v)} not in graph")
        return Graph._trusted(self.n, edges, tuple(adj))

    def add_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, self.edges + ((u, v),))

    def edge_subgraph(self, indices: Iterable[int]) -> "Graph":
        return Graph(self.n, tuple(self.edges[i] for i in sorted(set(indices))))

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def is_clique(self, vertices: Sequence[int]) -> bool:
        mask = 0
        for v in vertices:
            mask |= 1 << v
        return all((self.adj[v] | 1 << v) & mask == mask for v in vertices)

    def __str__(self):
        return f"Graph(n={self.n}, m={self.m})"


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    shifted = tuple((u + g.n, v + g.n) for u, v in h.edges)
    return Graph(g.n + h.n, g.edges + shifted)


# --------------------------------------------------------------------------
# graph6


def _graph6_bits(g: Graph) -> list[int]:
    bits = []
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            bits.append(row >> i & 1)
    return bits


def serialize_graph6(g: Graph) -> str:
    """Encode ``g`` in graph6 short form (no header, no newline)."""
    if g.n > GRAPH6_MAX_N:
        raise UnsupportedSizeError(
            f"graph6 short form supports n <= {GRAPH6_MAX_N}, got n={g.n}"
        )
    bits = _graph6_bits(g)
    bits += [0] * (-len(bits) % 6)
    out = [chr(63 + g.n)]
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k:k + 6]:
            value = value << 1 | b
        out.append(chr(63 + value))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line.

    A leading ``>>graph6<<`` header and trailing whitespace are ignored.
    Only the short form (n <= 62) is accepted.
    """
    line = text.rstrip("\r\n")
    start = 0
    if line.startswith(">>graph6<<"):
        start = len(">>graph6<<")
    if start >= len(line):
        raise GraphFormatError("empty graph6 string", start)
    for i in range(start, len(line)):
        if not 63 <= ord(line[i]) <= 126:
            raise GraphFormatError(f"character {line[i]!r} out of graph6 range", i)
    n = ord(line[start]) - 63
    if n > GRAPH6_MAX_N:
        raise GraphFormatError("long-form graph6 (n > 62) is not supported", start)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = line[start + 1:]
    if len(body) != nbytes:
        raise GraphFormatError(
            f"expected {nbytes} data bytes for n={n}, found {len(body)}",
            start + 1 + min(len(body), nbytes),
        )
    values = [ord(c) - 63 for c in body]
    pad = nbytes * 6 - nbits
    if pad and values[-1] & ((1 << pad) - 1):
        raise GraphFormatError("nonzero padding bits", start + nbytes)
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if values[k // 6] >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    edges = tuple(
        (u, v) for u in range(n) for v in range(u + 1, n) if adj[u] >> v & 1
    )
    return Graph._trusted(n, edges, tuple(adj))


def read_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    """Parse a stream of graph6 lines, skipping blanks and a header line."""
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line == ">>graph6<<":
            continue
        try:
            yield parse_graph6(line)
        except GraphFormatError as exc:
            raise GraphFormatError(f"line {lineno}: {exc}") from exc


# --------------------------------------------------------------------------
# edge lists


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"`` (0-based)."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise GraphFormatError("empty edge list")
    try:
        header = [int(x) for x in rows[0]]
        if len(header) != 2:
            raise ValueError
        n, m = header
        pairs = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise GraphFormatError(f"malformed edge list: {exc}") from exc
    if len(pairs) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(pairs)}")
    try:
        return Graph(n, tuple(pairs))
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def read_edge_lists(lines: Iterable[str]) -> Iterator[Graph]:
    """Parse one or more concatenated edge lists; each starts with its ``"n m"`` header."""
    block: list[str] = []
    need = None
    start = 0
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if need is None:
            start = lineno
            try:
                n, m = (int(x) for x in line.split())
            except ValueError as exc:
                raise GraphFormatError(f"line {lineno}: bad header {line!r}") from exc
            need = m
            block = [line]
        else:
            block.append(line)
            need -= 1
        if need == 0:
            try:
                yield parse_edge_list("\n".join(block))
            except GraphFormatError as exc:
                raise GraphFormatError(f"lines {start}-{lineno}: {exc}") from exc
            need = None
    if need is not None:
        raise GraphFormatError(f"line {start}: edge list truncated, {need} edge(s) missing")


def serialize_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# cliques, enumeration, connectivity


def find_cliques(g: Graph, k: int) -> list[VertexSet]:
    """All vertex sets of size ``k`` inducing a complete subgraph, in lex order."""
    if k < 1 or k > g.n:
        return []
    adj = g.adj
    found: list[VertexSet] = []

    def extend(chosen: list[int], cand: int):
        if len(chosen) == k:
            found.append(tuple(chosen))
            return
        need = k - len(chosen)
        while cand and bin(cand).count("1") >= need:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            chosen.append(v)
            extend(chosen, cand & adj[v])
            chosen.pop()

    extend([], (1 << g.n) - 1)
    return found


def has_clique(g: Graph, k: int) -> bool:
    if k < 1 or k > g.n:
        return False
    adj = g.adj

    def search(size: int, cand: int) -> bool:
        if size == k:
            return True
        need = k - size
        while cand and bin(cand).count("1") >= need:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            if search(size + 1, cand & adj[v]):
                return True
        return False

    return search(0, (1 << g.n) - 1)


def _connected_within(adj: Sequence[int], alive: int) -> bool:
    if not alive:
        return True
    seen = alive & -alive
    frontier = seen
    while frontier:
        v = (frontier & -frontier).bit_length() - 1
        frontier &= frontier - 1
        new = adj[v] & alive & ~seen
        seen |= new
        frontier |= new
    return seen == alive


def is_connected(g: Graph) -> bool:
    return _connected_within(g.adj, (1 << g.n) - 1)


def is_k_connected(g: Graph, k: int) -> bool:
    """Vertex ``k``-connectivity: more than ``k`` vertices and no cut of size < k.

    Decided exactly by deleting every vertex subset of size ``k - 1``;
    deleting fewer never helps once all ``(k-1)``-subsets leave a
    connected graph.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if g.n <= k:
        return False
    full = (1 << g.n) - 1
    for cut in combinations(range(g.n), k - 1):
        mask = full
        for v in cut:
            mask &= ~(1 << v)
        if not _connected_within(g.adj, mask):
            return False
    return True


def enumerate_graphs(n: int, connected_only: bool = False) -> Iterator[Graph]:
    """Every labeled graph on ``n`` vertices, ordered by edge bitmask.

    Bit ``i`` of the mask selects the ``i``-th pair in lexicographic order.
    No isomorphism reduction is done.
    """
    if n > ENUMERATION_MAX_N:
        raise UnsupportedSizeError(
            f"builtin enumeration stops at n={ENUMERATION_MAX_N}; "
            "feed larger corpora as graph6 input (e.g. from geng)"
        )
    if n < 0:
        raise ValueError("n must be non-negative")
    pairs = list(combinations(range(n), 2))
    full = (1 << n) - 1
    trusted = Graph._trusted
    for mask in range(1 << len(pairs)):
        edges = []
        adj = [0] * n
        rest = mask
        while rest:
            i = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            u, v = pairs[i]
            edges.append(pairs[i])
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        if connected_only and not _connected_within(adj, full):
            continue
        yield trusted(n, tuple(edges), tuple(adj))


def graph_from_mask(n: int, mask: int) -> Graph:
    pairs = list(combinations(range(n), 2))
    return Graph(n, tuple(p for i, p in enumerate(pairs) if mask >> i & 1))
