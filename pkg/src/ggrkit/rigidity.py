"""Frameworks, rigidity matrices and the random-genericity regime.

A "generic" framework is realized by drawing large random integer
coordinates and then computing exactly.  Every rank found this way is a
lower bound for the generic value and equals it unless the sample hits a
proper algebraic subvariety, which happens with probability at most
(polynomial degree) / 2**coord_bits per sample.

Most rank questions in this package go through :class:`CompleteRepresentation`:
for a fixed framework on ``n`` vertices we row-reduce the rigidity matrix
of the complete graph once, keep a row basis ``B0`` (greedy in edge order)
and, for every other pair ``f``, the integer stress supported on
``{f} + B0``.  The rows of any graph on the same vertices are then
coordinate vectors over ``B0``, and questions about that graph shrink to
one small elimination over the basis pairs it is missing.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

from .graph import Graph
from .linalg import PRIME, RationalMatrix, bareiss_rank, ff_rref, rank_mod, rref_mod

DEFAULT_SEED = 0xC0FFEE
DEFAULT_COORD_BITS = 64
DEFAULT_TRIALS = 3

RANDOMIZED_CAVEAT = (
    "decided at random integer frameworks with exact arithmetic; a negative "
    "answer is correct with high probability, not certified"
)


@dataclass(frozen=True)
class RandomRegime:
    seed: int = DEFAULT_SEED
    coord_bits: int = DEFAULT_COORD_BITS
    trials: int = DEFAULT_TRIALS

    def __post_init__(self):
        if not 16 <= self.coord_bits <= 512:
            raise ValueError("coord_bits must lie in 16..512")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def as_dict(self) -> dict:
        return {"seed": self.seed, "coord_bits": self.coord_bits, "trials": self.trials}


def _draw(regime: RandomRegime, tag: str, *index: int) -> int:
    """Uniform integer in ``[1, 2**coord_bits]`` keyed by (seed, tag, index)."""
    nbytes = (regime.coord_bits + 7) // 8
    key = f"{regime.seed}:{tag}:" + ":".join(map(str, index))
    digest = hashlib.blake2b(key.encode(), digest_size=nbytes).digest()
    return (int.from_bytes(digest, "big") & ((1 << regime.coord_bits) - 1)) + 1


_coefficient_cache: dict = {}


def random_coefficients(regime: RandomRegime, trial: int, draw: int, count: int) -> list[int]:
    """Stress-combination coefficients for one (trial, draw); cached, deterministic."""
    key = (regime, trial, draw)
    cached = _coefficient_cache.get(key)
    if cached is None or len(cached) < count:
        cached = [_draw(regime, "coef", trial, draw, k) for k in range(max(count, 32))]
        _coefficient_cache[key] = cached
    return cached[:count]


@dataclass(frozen=True)
class Framework:
    """Rational coordinates for vertices ``0..n-1`` in dimension ``d``."""

    d: int
    coords: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        coords = tuple(tuple(Fraction(x) for x in p) for p in self.coords)
        for v, p in enumerate(coords):
            if len(p) != self.d:
                raise ValueError(f"vertex {v} has {len(p)} coordinates, expected {self.d}")
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    def point(self, v: int) -> tuple[Fraction, ...]:
        return self.coords[v]

    @property
    def configuration_matrix(self) -> RationalMatrix:
        """The ``n x d`` matrix whose row ``v`` is ``p(v)``."""
        return RationalMatrix(self.coords, self.d)

    @cached_property
    def integer_coords(self) -> tuple[tuple[int, ...], ...]:
        # a common positive scale changes neither ranks nor stresses
        s = 1
        for p in self.coords:
            for x in p:
                s = lcm(s, x.denominator)
        return tuple(tuple(int(x * s) for x in p) for p in self.coords)

    def scaled(self, t) -> "Framework":
        t = Fraction(t)
        return Framework(self.d, tuple(tuple(t * x for x in p) for p in self.coords))

    def matches(self, g: Graph) -> bool:
        return self.n == g.n


def sample_framework(g: Graph | int, d: int, regime: RandomRegime = RandomRegime(), trial: int = 0) -> Framework:
    """Independent uniform integer coordinates in ``[1, 2**coord_bits]``.

    Coordinate ``(v, axis)`` depends only on ``(seed, trial, v, axis)``, so
    graphs on the same vertex count share frameworks trial by trial.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    n = g if isinstance(g, int) else g.n
    return _sampled(n, d, regime, trial)


_framework_cache: dict = {}


def _sampled(n: int, d: int, regime: RandomRegime, trial: int) -> Framework:
    key = (n, d, regime, trial)
    fw = _framework_cache.get(key)
    if fw is None:
        fw = Framework(
            d,
            tuple(tuple(_draw(regime, "coord", trial, v, a) for a in range(d)) for v in range(n)),
        )
        _framework_cache[key] = fw
    return fw


# --------------------------------------------------------------------------
# rigidity matrix


class RigidityMatrixError(ValueError):
    pass


def _expected_row(u: int, v: int, coords, d: int, n: int) -> list:
    row = [0] * (d * n)
    for a in range(d):
        diff = coords[u][a] - coords[v][a]
        row[u * d + a] = diff
        row[v * d + a] = -diff
    return row


@dataclass(frozen=True)
class RigidityMatrix:
    graph: Graph
    framework: Framework
    matrix: RationalMatrix

    def __post_init__(self):
        self.validate()

    def validate(self):
        g, fw, m = self.graph, self.framework, self.matrix
        d, n = fw.d, g.n
        if m.shape != (g.m, d * n):
            raise RigidityMatrixError(f"shape {m.shape}, expected {(g.m, d * n)}")
        for k, (u, v) in enumerate(g.edges):
            for col, x in enumerate(m.row(k)):
                blk, a = divmod(col, d)
                if blk == u:
                    want = fw.coords[u][a] - fw.coords[v][a]
                elif blk == v:
                    want = fw.coords[v][a] - fw.coords[u][a]
                else:
                    want = 0
                if x != want:
                    raise RigidityMatrixError(f"row {k} (edge {u}{v}) column {col}: {x} != {want}")

    @property
    def shape(self):
        return self.matrix.shape

    def rank(self) -> int:
        return self.matrix.rank()


def rigidity_matrix(g: Graph, fw: Framework) -> RigidityMatrix:
    """``|E| x dn`` matrix; row ``uv`` holds ``p(u)-p(v)`` in u's block, its negation in v's."""
    if not fw.matches(g):
        raise RigidityMatrixError(f"framework has {fw.n} points, graph has {g.n} vertices")
    rows = [_expected_row(u, v, fw.coords, fw.d, g.n) for u, v in g.edges]
    return RigidityMatrix(g, fw, RationalMatrix(rows, fw.d * g.n))


# --------------------------------------------------------------------------
# the pinned complete-graph representation


class CompleteRepresentation:
    """Row-reduced rigidity matrix of ``K_n`` at one fixed framework.

    Pair ``(u, v)``, ``u < v``, has index ``pair_index[u][v]`` in
    lexicographic order.  ``basis`` lists the greedy row basis, and
    ``sigma[f]`` maps each non-basis pair to its fundamental stress: a
    primitive integer vector, supported on ``{f} + basis``, positive at
    ``f``, in the left kernel of the rigidity matrix.
    """

    def __init__(self, fw: Framework):
        n, d = fw.n, fw.d
        self.framework = fw
        self.n, self.d = n, d
        pts = fw.integer_coords
        self.pairs = list(combinations(range(n), 2))
        self.pair_index = [[-1] * n for _ in range(n)]
        for k, (u, v) in enumerate(self.pairs):
            self.pair_index[u][v] = self.pair_index[v][u] = k
        npairs = len(self.pairs)
        rt = [[0] * npairs for _ in range(d * n)]
        for k, (u, v) in enumerate(self.pairs):
            for a in range(d):
                diff = pts[u][a] - pts[v][a]
                rt[u * d + a][k] = diff
                rt[v * d + a][k] = -diff
        red, pivots, denom = ff_rref(rt, npairs)
        self.basis = [c for _, c in pivots]
        self.is_basis = [False] * npairs
        for b in self.basis:
            self.is_basis[b] = True
        self.rank = len(self.basis)
        self.sigma: dict[int, dict[int, int]] = {}
        for f in range(npairs):
            if self.is_basis[f]:
                continue
            vec = {f: denom}
            for r, c in pivots:
                if red[r][f]:
                    vec[c] = -red[r][f]
            g = 0
            for x in vec.values():
                g = gcd(g, x)
            if vec[f] < 0:
                g = -g
            self.sigma[f] = {k: x // g for k, x in vec.items()}
        self.sigma_mod = {f: [(k, x % PRIME) for k, x in vec.items()] for f, vec in self.sigma.items()}
        # column of the missing-basis matrix for pair f, indexed by basis position
        self.sigma_on_basis = {f: [vec.get(b, 0) for b in self.basis] for f, vec in self.sigma.items()}
        self.sigma_on_basis_mod = {
            f: [x % PRIME for x in col] for f, col in self.sigma_on_basis.items()
        }
        # vertices 0..d affinely independent lets stress ranks be read off
        # the principal block on the remaining vertices
        lift = [list(pts[v]) + [1] for v in range(min(n, d + 1))]
        self.anchor_ok = n >= d + 1 and bareiss_rank(lift) == d + 1
        self.block_mod = {}
        if self.anchor_ok:
            for f, vec in self.sigma.items():
                block = stress_block(self, vec)
                size = len(block)
                self.block_mod[f] = [
                    (i * size + j, x % PRIME)
                    for i, row in enumerate(block) for j, x in enumerate(row) if x % PRIME
                ]

    def edge_indices(self, g: Graph) -> list[int]:
        pi = self.pair_index
        return [pi[u][v] for u, v in g.edges]

    def restrict(self, pair_ids: Sequence[int]) -> "Restriction":
        return Restriction(self, pair_ids)

    def restrict_mod(self, pair_ids: Sequence[int]) -> "ModularRestriction":
        return ModularRestriction(self, pair_ids)


_rep_cache: dict = {}


def representation(fw: Framework) -> CompleteRepresentation:
    rep = _rep_cache.get(fw)
    if rep is None:
        rep = CompleteRepresentation(fw)
        _rep_cache[fw] = rep
    return rep


_sampled_rep_cache: dict = {}


def sampled_representation(n: int, d: int, regime: RandomRegime, trial: int) -> CompleteRepresentation:
    key = (n, d, regime, trial)
    rep = _sampled_rep_cache.get(key)
    if rep is None:
        rep = representation(_sampled(n, d, regime, trial))
        _sampled_rep_cache[key] = rep
    return rep


class Restriction:
    """The rigidity matroid of an edge set, read off the complete representation.

    ``a``/``pivots``/``denom`` are the fraction-free reduction of the
    matrix whose rows are the basis pairs missing from the edge set and
    whose columns are its non-basis pairs (entry = fundamental stress of
    the column pair at the row pair).  Pivot columns together with the
    basis pairs present form a basis of the edge set; each remaining
    column ``f`` gives one stress, supported exactly on the fundamental
    circuit of ``f``.
    """

    __slots__ = ("rep", "pairs", "inside", "outside", "a", "pivots", "denom", "free")

    def __init__(self, rep: CompleteRepresentation, pair_ids: Sequence[int]):
        self.rep = rep
        self.pairs = list(pair_ids)
        present = set(self.pairs)
        is_basis = rep.is_basis
        self.inside = [e for e in self.pairs if not is_basis[e]]
        self.outside = [b for b in rep.basis if b not in present]
        if self.outside and self.inside:
            cols = rep.sigma_on_basis
            pos = [i for i, b in enumerate(rep.basis) if b not in present]
            rows = [[cols[f][i] for f in self.inside] for i in pos]
            self.a, self.pivots, self.denom = ff_rref(rows, len(self.inside))
        else:
            self.a, self.pivots, self.denom = [], [], 1
        pivot_cols = {c for _, c in self.pivots}
        self.free = [j for j in range(len(self.inside)) if j not in pivot_cols]

    @property
    def rank(self) -> int:
        return len(self.pairs) - len(self.free)

    @property
    def stress_dimension(self) -> int:
        return len(self.free)

    def stress_combination(self, coeffs: Sequence[int]) -> dict[int, int]:
        """Pair-indexed integer stress ``sum_k coeffs[k] * (k-th basis stress)``."""
        inside, a, denom = self.inside, self.a, self.denom
        weights = [0] * len(inside)
        for k, j in enumerate(self.free):
            weights[j] += coeffs[k] * denom
        for r, c in self.pivots:
            row = a[r]
            s = 0
            for k, j in enumerate(self.free):
                x = row[j]
                if x:
                    s -= coeffs[k] * x
            weights[c] = s
        omega: dict[int, int] = {}
        sigma = self.rep.sigma
        for j, w in enumerate(weights):
            if w:
                for e, x in sigma[inside[j]].items():
                    omega[e] = omega.get(e, 0) + w * x
        return {e: x for e, x in omega.items() if x}

    def stress_basis(self) -> list[dict[int, int]]:
        """One primitive integer stress per free column (pair-indexed, sparse)."""
        out = []
        k = len(self.free)
        for i in range(k):
            coeffs = [0] * k
            coeffs[i] = 1
            vec = self.stress_combination(coeffs)
            g = 0
            for x in vec.values():
                g = gcd(g, x)
            out.append({e: x // g for e, x in vec.items()})
        return out


class ModularRestriction:
    """:class:`Restriction` computed modulo ``PRIME``.

    ``certified`` is true when the mod-p rank of the missing-basis matrix
    equals its rank over Q (checked for free when it is full, otherwise by
    an exact Bareiss rank).  Then the mod-p stress space is the reduction
    of the rational one, and any rank reached by a mod-p stress matrix is
    reached by a rational stress of the same framework.
    """

    __slots__ = ("rep", "pairs", "inside", "outside", "a", "pivots", "free", "certified")

    def __init__(self, rep: CompleteRepresentation, pair_ids: Sequence[int]):
        self.rep = rep
        self.pairs = pair_ids
        is_basis = rep.is_basis
        self.inside = inside = [e for e in pair_ids if not is_basis[e]]
        present = set(pair_ids)
        self.outside = outside = [i for i, b in enumerate(rep.basis) if b not in present]
        if outside and inside:
            cols = rep.sigma_on_basis_mod
            rows = [[cols[f][i] for f in inside] for i in outside]
            self.a, self.pivots = rref_mod(rows, len(inside))
            if len(self.pivots) == min(len(outside), len(inside)):
                self.certified = True
            else:
                exact = rep.sigma_on_basis
                self.certified = bareiss_rank(
                    [[exact[f][i] for f in inside] for i in outside]) == len(self.pivots)
        else:
            self.a, self.pivots = [], []
            self.certified = True
        pivot_cols = {c for _, c in self.pivots}
        self.free = [j for j in range(len(inside)) if j not in pivot_cols]

    @property
    def rank(self) -> int:
        return len(self.pairs) - len(self.free)

    @property
    def stress_dimension(self) -> int:
        return len(self.free)

    def _weights(self, coeffs: Sequence[int]) -> list[int]:
        weights = [0] * len(self.inside)
        free = self.free
        for k, j in enumerate(free):
            weights[j] = coeffs[k]
        for r, c in self.pivots:
            row = self.a[r]
            s = 0
            for k, j in enumerate(free):
                x = row[j]
                if x:
                    s -= coeffs[k] * x
            weights[c] = s % PRIME
        return weights

    def stress_combination(self, coeffs: Sequence[int]) -> dict[int, int]:
        """Pair-indexed stress mod p for the given free-column coefficients."""
        acc = [0] * len(self.rep.pairs)
        sigma_mod = self.rep.sigma_mod
        for f, w in zip(self.inside, self._weights(coeffs)):
            if w:
                for e, x in sigma_mod[f]:
                    acc[e] += w * x
        return {e: x % PRIME for e, x in enumerate(acc) if x and x % PRIME}

    def block_rank(self, coeffs: Sequence[int]) -> int:
        """Mod-p rank of the principal stress block of one combination (needs ``anchor_ok``)."""
        size = self.rep.n - self.rep.d - 1
        acc = [0] * (size * size)
        block_mod = self.rep.block_mod
        for f, w in zip(self.inside, self._weights(coeffs)):
            if w:
                for i, x in block_mod[f]:
                    acc[i] += w * x
        return rank_mod([acc[k:k + size] for k in range(0, size * size, size)])

    def circuit_supports(self) -> list[list[int]]:
        """Mod-p supports of the fundamental-circuit stresses, as pair ids.

        Each is a subset of the true circuit over Q (an entry nonzero mod p
        is nonzero), and equals it unless p divides some entry.
        """
        rep = self.rep
        cols = rep.sigma_on_basis_mod
        basis = rep.basis
        present = set(self.pairs)
        inB = [i for i, b in enumerate(basis) if b in present]
        inside, a = self.inside, self.a
        out = []
        for j in self.free:
            f = inside[j]
            support = [f]
            col = cols[f]
            acc = [col[i] for i in inB]
            for r, c in self.pivots:
                x = a[r][j]
                if x:
                    support.append(inside[c])
                    other = cols[inside[c]]
                    acc = [y - x * other[i] for y, i in zip(acc, inB)]
            support += [basis[i] for y, i in zip(acc, inB) if y % PRIME]
            out.append(support)
        return out


def stress_block(rep: CompleteRepresentation, omega: dict[int, int]) -> list[list[int]]:
    """Principal block of the stress matrix on vertices ``d+1..n-1``."""
    lo = rep.d + 1
    size = rep.n - lo
    block = [[0] * size for _ in range(size)]
    pairs = rep.pairs
    for e, w in omega.items():
        u, v = pairs[e]
        if u >= lo:
            i, j = u - lo, v - lo
            block[i][j] += w
            block[j][i] += w
            block[i][i] -= w
            block[j][j] -= w
        elif v >= lo:
            j = v - lo
            block[j][j] -= w
    return block


def full_stress_matrix(n: int, pairs, omega: dict[int, int]) -> list[list[int]]:
    m = [[0] * n for _ in range(n)]
    for e, w in omega.items():
        u, v = pairs[e]
        m[u][v] += w
        m[v][u] += w
        m[u][u] -= w
        m[v][v] -= w
    return m


def stress_rank_mod(rep: CompleteRepresentation, omega: dict[int, int]) -> int:
    if rep.anchor_ok:
        return rank_mod(stress_block(rep, omega))
    return rank_mod(full_stress_matrix(rep.n, rep.pairs, omega))


def stress_rank(rep: CompleteRepresentation, omega: dict[int, int]) -> int:
    if rep.anchor_ok:
        return bareiss_rank(stress_block(rep, omega))
    return bareiss_rank(full_stress_matrix(rep.n, rep.pairs, omega))


# --------------------------------------------------------------------------
# verdicts and generic rank


@dataclass(frozen=True)
class Verdict:
    """Outcome of a randomized rigidity decision, with what produced it."""

    property: str
    decision: bool
    achieved_rank: int
    target_rank: int
    regime: RandomRegime
    trial: int = 0
    reason: str = ""
    caveat: str = RANDOMIZED_CAVEAT
    witness_edges: tuple[tuple[int, int], ...] = field(default=())

    def __bool__(self):
        return self.decision

    def as_dict(self) -> dict:
        return {
            "property": self.property,
            "decision": self.decision,
            "achieved_rank": self.achieved_rank,
            "target_rank": self.target_rank,
            "regime": self.regime.as_dict(),
            "trial": self.trial,
            "reason": self.reason,
            "caveat": self.caveat,
            "witness_edges": [list(e) for e in self.witness_edges],
        }


def full_rank_target(n: int, d: int) -> int:
    """Rank of the rigidity matrix of ``K_n`` in dimension ``d``."""
    if n <= d + 1:
        return n * (n - 1) // 2
    return d * n - d * (d + 1) // 2


def rank_at(g: Graph, fw: Framework) -> int:
    rep = representation(fw)
    return rep.restrict(rep.edge_indices(g)).rank


def generic_rank(g: Graph, d: int, regime: RandomRegime = RandomRegime(), trial: int = 0) -> int:
    """Max over ``regime.trials`` sampled frameworks of the rigidity-matrix rank."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    best = 0
    target = min(g.m, full_rank_target(g.n, d))
    for t in range(regime.trials):
        rep = sampled_representation(g.n, d, regime, trial + t)
        best = max(best, rep.restrict(rep.edge_indices(g)).rank)
        if best == target:
            break
    return best


def is_generically_rigid(g: Graph, d: int, regime: RandomRegime = RandomRegime(), trial: int = 0) -> Verdict:
    if d < 1:
        raise ValueError("dimension must be >= 1")
    n = g.n
    if n <= d + 1:
        target = n * (n - 1) // 2
        return Verdict("rigid", g.is_complete(), g.m, target, regime, trial,
                       reason="small-n: rigid iff complete")
    target = full_rank_target(n, d)
    got = generic_rank(g, d, regime, trial)
    return Verdict("rigid", got == target, got, target, regime, trial,
                   reason="generic rank" if got == target else "rank deficit")
