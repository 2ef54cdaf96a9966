"""Shared brute-force references and hypothesis strategies."""

from itertools import combinations, permutations

import pytest
from hypothesis import strategies as st

from ggrkit.graph import Graph


@st.composite
def graphs(draw, min_n=0, max_n=7, p=None):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    if p is None:
        chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        chosen = [draw(st.floats(0, 1)) < p for _ in pairs]
    return Graph(n, tuple(e for e, keep in zip(pairs, chosen) if keep))


def brute_cliques(g: Graph, k: int):
    return [c for c in combinations(range(g.n), k) if all(g.has_edge(u, v) for u, v in combinations(c, 2))]


def brute_connected(g: Graph, removed=()) -> bool:
    alive = [v for v in range(g.n) if v not in removed]
    if not alive:
        return True
    seen = {alive[0]}
    stack = [alive[0]]
    while stack:
        u = stack.pop()
        for v in alive:
            if v not in seen and g.has_edge(u, v):
                seen.add(v)
                stack.append(v)
    return len(seen) == len(alive)


def brute_k_connected(g: Graph, k: int) -> bool:
    if g.n <= k:
        return False
    return all(brute_connected(g, set(s)) for r in range(k) for s in combinations(range(g.n), r))


def simple_cycles_as_edge_sets(g: Graph):
    """All cycles of ``g`` as frozensets of edge indices (exhaustive, small graphs)."""
    out = set()
    n = g.n
    for size in range(3, n + 1):
        for verts in combinations(range(n), size):
            first = verts[0]
            for rest in permutations(verts[1:]):
                if rest[0] > rest[-1]:
                    continue
                cyc = (first,) + rest
                pairs = [(cyc[i], cyc[(i + 1) % size]) for i in range(size)]
                if all(g.has_edge(u, v) for u, v in pairs):
                    out.add(frozenset(g.edge_index(u, v) for u, v in pairs))
    return out


@pytest.fixture
def tmp_text(tmp_path):
    def make(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return make


# one line per acceptance criterion, repeated in the terminal summary so it
# shows up even when output capture is on
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
