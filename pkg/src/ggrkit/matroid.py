"""The generic rigidity matroid of a graph, queried at one pinned framework.

Edge subsets are given as iterables of canonical edge indices of the host
graph and come back as ``frozenset``.  All answers of one oracle are taken
from the same sampled framework, so they describe a single linear matroid
even in the (improbable) event that the sample is not generic.
"""

from __future__ import annotations

from typing import Iterable

from .graph import Graph
from .rigidity import (
    Framework,
    RandomRegime,
    representation,
    sampled_representation,
)

EdgeSubset = frozenset


class PreconditionError(ValueError):
    pass


class CircuitVerificationError(RuntimeError):
    pass


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if rx < ry:
                self.parent[ry] = rx
            else:
                self.parent[rx] = ry


class MatroidOracle:
    """Rank oracle for ``R_d(G)`` with memoized subset ranks.

    The framework is sampled at ``trial``; if some edge gets a zero row
    (two points coincide) the oracle moves on to the next trial index.
    """

    MAX_RESAMPLES = 16

    def __init__(self, g: Graph, d: int, regime: RandomRegime = RandomRegime(), trial: int = 0,
                 framework: Framework | None = None):
        if d < 1:
            raise ValueError("dimension must be >= 1")
        self.graph = g
        self.d = d
        self.regime = regime
        if framework is not None:
            if framework.n != g.n or framework.d != d:
                raise ValueError("framework does not match graph/dimension")
            self.trial = None
            self._pin(representation(framework))
            return
        for attempt in range(self.MAX_RESAMPLES):
            self.trial = trial + attempt
            self._pin(sampled_representation(g.n, d, regime, self.trial))
            if self._rows_nonzero():
                return
        raise CircuitVerificationError("could not sample a framework with nonzero rows")

    @classmethod
    def from_framework(cls, g: Graph, fw: Framework) -> "MatroidOracle":
        return cls(g, fw.d, framework=fw)

    def _pin(self, rep):
        self.rep = rep
        self.framework = rep.framework
        self._pid = rep.edge_indices(self.graph)
        self._memo: dict[int, int] = {}

    def _rows_nonzero(self) -> bool:
        pts = self.framework.coords
        return all(pts[u] != pts[v] for u, v in self.graph.edges)

    @property
    def size(self) -> int:
        return self.graph.m

    def _mask(self, s: Iterable[int]) -> int:
        mask = 0
        m = self.graph.m
        for i in s:
            if not 0 <= i < m:
                raise IndexError(f"edge index {i} out of range for {m} edges")
            mask |= 1 << i
        return mask

    def _members(self, mask: int) -> list[int]:
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return out

    def _restrict(self, mask: int):
        pid = self._pid
        return self.rep.restrict([pid[i] for i in self._members(mask)])

    def _rank_mask(self, mask: int) -> int:
        r = self._memo.get(mask)
        if r is None:
            r = self._restrict(mask).rank
            self._memo[mask] = r
        return r

    def subset_rank(self, s: Iterable[int]) -> int:
        """Rank of the rows of the pinned rigidity matrix indexed by ``s``."""
        return self._rank_mask(self._mask(s))

    def rank(self) -> int:
        return self._rank_mask((1 << self.graph.m) - 1)

    def is_independent(self, s: Iterable[int]) -> bool:
        mask = self._mask(s)
        return self._rank_mask(mask) == bin(mask).count("1")

    def _is_circuit_mask(self, mask: int) -> bool:
        size = bin(mask).count("1")
        if size == 0 or self._rank_mask(mask) != size - 1:
            return False
        return all(self._rank_mask(mask & ~(1 << i)) == size - 1 for i in self._members(mask))

    def is_circuit(self, s: Iterable[int]) -> bool:
        """Dependent, and every single-edge deletion is independent."""
        return self._is_circuit_mask(self._mask(s))

    def fundamental_circuit(self, base: Iterable[int], e: int) -> EdgeSubset:
        base_mask = self._mask(base)
        if base_mask >> e & 1:
            raise PreconditionError(f"edge {e} already lies in the base set")
        size = bin(base_mask).count("1")
        if self._rank_mask(base_mask) != size:
            raise PreconditionError("base set is dependent")
        full = base_mask | 1 << e
        if self._rank_mask(full) == size + 1:
            raise PreconditionError("base set plus edge is independent; no circuit")
        circuit = 1 << e
        for b in self._members(base_mask):
            if self._rank_mask(full & ~(1 << b)) == size:
                circuit |= 1 << b
        if not self._is_circuit_mask(circuit):
            raise CircuitVerificationError("fundamental circuit failed verification")
        return frozenset(self._members(circuit))

    def _components_mask(self, mask: int) -> list[list[int]]:
        members = self._members(mask)
        res = self._restrict(mask)
        pos = {p: k for k, p in enumerate(res.pairs)}
        uf = _UnionFind(len(members))
        for stress in res.stress_basis():
            support = [pos[p] for p in stress]
            for k in support[1:]:
                uf.union(support[0], k)
        groups: dict[int, list[int]] = {}
        for k, i in enumerate(members):
            groups.setdefault(uf.find(k), []).append(i)
        return sorted(groups.values())

    def rd_components(self, s: Iterable[int] | None = None) -> list[tuple[int, ...]]:
        """Partition of the edges (or of ``s``) into connected components of the matroid.

        Built from one basis: all edges of each fundamental circuit are
        joined; components are the resulting connected classes.
        """
        mask = (1 << self.graph.m) - 1 if s is None else self._mask(s)
        return [tuple(c) for c in self._components_mask(mask)]

    def is_rd_connected(self) -> bool:
        """One component holding all edges; graphs with fewer than two edges are not."""
        if self.graph.m < 2:
            return False
        return len(self._components_mask((1 << self.graph.m) - 1)) == 1

    def _same_component(self, mask: int, e: int, f: int) -> bool:
        for comp in self._components_mask(mask):
            if e in comp:
                return f in comp
        return False

    def circuit_through_pair(self, e: int, f: int) -> EdgeSubset | None:
        """A circuit containing edges ``e`` and ``f``, or ``None`` when none exists."""
        if e == f:
            raise PreconditionError("need two distinct edges")
        mask = (1 << self.graph.m) - 1
        self._mask((e, f))
        if not self._same_component(mask, e, f):
            return None
        for g in range(self.graph.m):
            if g in (e, f):
                continue
            trial = mask & ~(1 << g)
            if self._same_component(trial, e, f):
                mask = trial
        if not self._is_circuit_mask(mask):
            raise CircuitVerificationError("terminal set of circuit search is not a circuit")
        return frozenset(self._members(mask))


def is_rd_connected(g: Graph, d: int, regime: RandomRegime = RandomRegime(), trial: int = 0) -> bool:
    """R_d-connectivity at the framework sampled for ``trial``.

    A modular pass settles the connected case exactly (its circuit
    supports are subsets of the true ones, so it can only split
    components); anything else is recomputed over Q.
    """
    if g.m < 2:
        return False
    rep = sampled_representation(g.n, d, regime, trial)
    pids = rep.edge_indices(g)
    res = rep.restrict_mod(pids)
    if res.certified and all(g.has_edge(u, v) and rep.framework.coords[u] != rep.framework.coords[v]
                             for u, v in g.edges):
        pos = {p: k for k, p in enumerate(pids)}
        uf = _UnionFind(len(pids))
        for support in res.circuit_supports():
            k0 = pos[support[0]]
            for p in support[1:]:
                uf.union(k0, pos[p])
        root = uf.find(0)
        if all(uf.find(k) == root for k in range(len(pids))):
            return True
    return MatroidOracle(g, d, regime, trial).is_rd_connected()


def all_circuits(oracle: MatroidOracle) -> list[EdgeSubset]:
    """Every circuit by brute force over all edge subsets; only for small graphs."""
    m = oracle.graph.m
    if m > 16:
        raise ValueError("brute-force circuit listing is limited to 16 edges")
    found = []
    for mask in range(1, 1 << m):
        if oracle._is_circuit_mask(mask):
            found.append(frozenset(oracle._members(mask)))
    return found


def components_from_circuits(m: int, circuits: Iterable[EdgeSubset]) -> list[tuple[int, ...]]:
    """Classes of "some circuit contains both", closed transitively, plus singletons."""
    uf = _UnionFind(m)
    for c in circuits:
        c = sorted(c)
        for x in c[1:]:
            uf.union(c[0], x)
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(uf.find(i), []).append(i)
    return sorted(tuple(v) for v in groups.values())
