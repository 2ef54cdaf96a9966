"""Equilibrium stresses and generic global rigidity.

A stress matrix of ``(G, p)`` is a symmetric ``n x n`` matrix that vanishes
on non-edges, has zero row sums and annihilates the configuration matrix.
A graph on ``n >= d+2`` vertices is generically globally rigid in R^d iff a
generic framework carries a stress matrix of rank ``n-d-1``; the decision
procedure below draws random integer combinations of a stress basis at a
random framework and checks for that rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .graph import Graph
from .linalg import (
    RationalMatrix,
    bareiss_rank,
    determinant,
    find_nonsingular_submatrix,
    int_nullspace,
    submatrix,
)
from .matroid import MatroidOracle
from .rigidity import (
    Framework,
    RandomRegime,
    Verdict,
    full_stress_matrix,
    random_coefficients,
    representation,
    sampled_representation,
    stress_rank,
    stress_rank_mod,
)

StressVector = tuple  # one Fraction per edge, canonical edge order


class StressValidationError(ValueError):
    pass


class GenericityError(ValueError):
    pass


class NotACircuitError(ValueError):
    pass


class InternalConsistencyError(RuntimeError):
    pass


def stress_rank_bound(n: int, d: int) -> int:
    return n - d - 1


def affinely_spanning(fw: Framework) -> bool:
    if fw.n == 0:
        return False
    lift = [list(p) + [1] for p in fw.integer_coords]
    return bareiss_rank(lift) == fw.d + 1


# --------------------------------------------------------------------------
# stress matrices


@dataclass(frozen=True)
class StressMatrix:
    """A symmetric matrix indexed by vertices, candidate equilibrium stress."""

    matrix: RationalMatrix

    @property
    def n(self) -> int:
        return self.matrix.rows

    def __getitem__(self, ij) -> Fraction:
        return self.matrix[ij]

    def edge_weight(self, u: int, v: int) -> Fraction:
        return self.matrix[u, v]

    def rank(self) -> int:
        return self.matrix.rank()

    def __add__(self, other: "StressMatrix") -> "StressMatrix":
        return StressMatrix(self.matrix + other.matrix)

    def __sub__(self, other: "StressMatrix") -> "StressMatrix":
        return StressMatrix(self.matrix - other.matrix)

    def scale(self, t) -> "StressMatrix":
        return StressMatrix(self.matrix.scale(t))

    def support(self) -> set[tuple[int, int]]:
        e = self.matrix.entries
        return {(u, v) for u in range(self.n) for v in range(u + 1, self.n) if e[u][v] != 0}

    def violations(self, g: Graph, fw: Framework) -> list[str]:
        """Names of the stress conditions this matrix breaks for ``(g, fw)``."""
        out = []
        m, n = self.matrix, g.n
        if m.shape != (n, n):
            return [f"shape {m.shape} != ({n}, {n})"]
        e = m.entries
        if not m.is_symmetric():
            out.append("symmetry")
        if any(e[u][v] != 0 and not g.has_edge(u, v) for u in range(n) for v in range(n) if u != v):
            out.append("support")
        if any(sum(row) != 0 for row in e):
            out.append("row-sums")
        pts = fw.coords
        for a in range(fw.d):
            if any(sum((row[v] * pts[v][a] for v in range(n)), Fraction(0)) != 0 for row in e):
                out.append("equilibrium")
                break
        return out

    def is_valid(self, g: Graph, fw: Framework) -> bool:
        return not self.violations(g, fw)

    def validate(self, g: Graph, fw: Framework) -> "StressMatrix":
        bad = self.violations(g, fw)
        if bad:
            raise StressValidationError("not an equilibrium stress matrix: " + ", ".join(bad))
        return self


def _int_stress_matrix(m: list[list[int]]) -> StressMatrix:
    return StressMatrix(RationalMatrix(m, len(m)))


def is_equilibrium(g: Graph, fw: Framework, w: Sequence) -> bool:
    """``w^T R(G, p) = 0``, checked vertex by vertex from the coordinates."""
    if len(w) != g.m:
        return False
    pts = fw.coords
    force = [[Fraction(0)] * fw.d for _ in range(g.n)]
    for (u, v), x in zip(g.edges, w):
        if x:
            for a in range(fw.d):
                diff = x * (pts[u][a] - pts[v][a])
                force[u][a] += diff
                force[v][a] -= diff
    return all(f == 0 for vec in force for f in vec)


def stress_space(g: Graph, fw: Framework) -> list[StressVector]:
    """Basis of the equilibrium stresses of ``(g, fw)``, in canonical edge order.

    Each basis vector is primitive integral, has a positive first nonzero
    entry, and is supported on one fundamental circuit of a greedy basis
    of ``g``.
    """
    if not fw.matches(g):
        raise ValueError("framework does not match graph")
    rep = representation(fw)
    pid = rep.edge_indices(g)
    res = rep.restrict(pid)
    out = []
    for vec in res.stress_basis():
        w = tuple(Fraction(vec.get(p, 0)) for p in pid)
        if next(x for x in w if x) < 0:
            w = tuple(-x for x in w)
        if not is_equilibrium(g, fw, w):
            raise InternalConsistencyError("stress basis vector fails equilibrium")
        out.append(w)
    return out


def assemble_stress_matrix(g: Graph, fw: Framework, w: Sequence) -> StressMatrix:
    """Symmetric matrix with ``w`` on edges, zero on non-edges, diagonal = minus row sum."""
    n = g.n
    if len(w) != g.m:
        raise StressValidationError(f"stress vector has {len(w)} entries for {g.m} edges")
    m = [[Fraction(0)] * n for _ in range(n)]
    for (u, v), x in zip(g.edges, w):
        x = Fraction(x)
        m[u][v] = m[v][u] = x
        m[u][u] -= x
        m[v][v] -= x
    return StressMatrix(RationalMatrix(m, n)).validate(g, fw)


def _check_bound(rank: int, n: int, d: int, fw: Framework):
    if rank > stress_rank_bound(n, d) and affinely_spanning(fw):
        raise InternalConsistencyError(
            f"stress rank {rank} exceeds n-d-1={n - d - 1} at an affinely spanning framework"
        )


def max_rank_stress(g: Graph, fw: Framework, regime: RandomRegime = RandomRegime(),
                    trial: int = 0) -> tuple[StressMatrix, int]:
    """Highest-rank stress matrix among ``regime.trials`` random combinations."""
    n, d = g.n, fw.d
    if n < d + 2:
        raise ValueError(f"need n >= d+2 (n={n}, d={d})")
    rep = representation(fw)
    res = rep.restrict(rep.edge_indices(g))
    k = res.stress_dimension
    if k == 0:
        return StressMatrix(RationalMatrix.zeros(n, n)), 0
    target = stress_rank_bound(n, d)
    best, best_rank = None, -1
    for draw in range(regime.trials):
        omega = res.stress_combination(random_coefficients(regime, trial, draw, k))
        m = full_stress_matrix(n, rep.pairs, omega)
        r = bareiss_rank(m)
        if r > best_rank:
            best, best_rank = m, r
        if r >= target:
            break
    _check_bound(best_rank, n, d, fw)
    return _int_stress_matrix(best).validate(g, fw), best_rank


def _sampled_stress_rank(g: Graph, d: int, regime: RandomRegime, trial: int) -> int:
    """Best stress rank over ``regime.trials`` draws at the sampled framework.

    Runs modulo a prime when the stress space is certified to reduce
    faithfully, which can only under-report the rank; otherwise exact.
    """
    rep = sampled_representation(g.n, d, regime, trial)
    pids = rep.edge_indices(g)
    res = rep.restrict_mod(pids)
    if res.certified:
        rank_of = stress_rank_mod
    else:
        res = rep.restrict(pids)
        rank_of = stress_rank
    k = res.stress_dimension
    if k == 0:
        return 0
    target = g.n - d - 1
    best = 0
    fused = res.certified and rep.anchor_ok
    for draw in range(regime.trials):
        coeffs = random_coefficients(regime, trial, draw, k)
        if fused:
            r = res.block_rank(coeffs)
        else:
            r = rank_of(rep, res.stress_combination(coeffs))
        if r > best:
            best = r
            if r >= target:
                break
    if best > target:
        _check_bound(best, g.n, d, rep.framework)
    return best


def is_generically_globally_rigid(g: Graph, d: int, regime: RandomRegime = RandomRegime(),
                                  trial: int = 0) -> Verdict:
    """Stress-rank test at the framework sampled for ``trial``.

    Graphs with ``n <= d+1`` are globally rigid exactly when complete.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    n = g.n
    if n <= d + 1:
        return Verdict("globally-rigid", g.is_complete(), 0, 0, regime, trial,
                       reason="small-n: globally rigid iff complete")
    target = n - d - 1
    got = _sampled_stress_rank(g, d, regime, trial)
    return Verdict("globally-rigid", got == target, got, target, regime, trial,
                   reason="full-rank stress" if got == target else "stress rank deficit")


def find_removable_edges(g: Graph, d: int, regime: RandomRegime = RandomRegime(), trial: int = 0,
                         first_only: bool = True) -> list[tuple[int, int]]:
    """Edges whose deletion keeps ``g`` generically globally rigid.

    Deleting edge number ``k`` is tested at trial index ``trial + 1 + k``.
    """
    found = []
    for k, e in enumerate(g.edges):
        if is_generically_globally_rigid(g.remove_edge(k), d, regime, trial + 1 + k).decision:
            found.append(e)
            if first_only:
                break
    return found


def is_minimally_ggr(g: Graph, d: int, regime: RandomRegime = RandomRegime(), trial: int = 0,
                     first_only: bool = True) -> Verdict:
    """Globally rigid, and no single edge deletion stays globally rigid.

    With ``first_only`` the search stops at the first witness edge.
    """
    base = is_generically_globally_rigid(g, d, regime, trial)
    if not base.decision:
        return Verdict("minimally-globally-rigid", False, base.achieved_rank, base.target_rank,
                       regime, trial, reason="not globally rigid")
    witnesses = find_removable_edges(g, d, regime, trial, first_only)
    return Verdict("minimally-globally-rigid", not witnesses, base.achieved_rank, base.target_rank,
                   regime, trial,
                   reason="edge-minimal" if not witnesses else "removable edge found",
                   witness_edges=tuple(witnesses))


# --------------------------------------------------------------------------
# simplex stress and proportionality


@dataclass(frozen=True)
class SimplexStress:
    clique: tuple[int, ...]
    a: tuple[Fraction, ...]
    stress: StressMatrix

    def coefficient(self, v: int) -> Fraction:
        return self.a[v]


def affine_dependence(points: Sequence[Sequence]) -> list[Fraction]:
    """Coefficients ``a`` with ``sum a_i = 0`` and ``sum a_i p_i = 0``, first nonzero entry 1.

    Raises GenericityError unless the dependence is unique up to scale.
    """
    pts = [[Fraction(x) for x in p] for p in points]
    d = len(pts[0]) if pts else 0
    lifted = RationalMatrix([[p[a] for p in pts] for a in range(d)] + [[1] * len(pts)])
    kernel = lifted.nullspace()
    if len(kernel) != 1:
        raise GenericityError(f"affine dependence space has dimension {len(kernel)}, expected 1")
    a = kernel[0]
    lead = next(x for x in a if x != 0)
    return [x / lead for x in a]


def simplex_stress(fw: Framework, x: Sequence[int]) -> SimplexStress:
    """The rank-one stress ``a a^T`` on ``d+2`` points from their affine dependence."""
    x = tuple(x)
    d, n = fw.d, fw.n
    if len(x) != d + 2 or len(set(x)) != len(x):
        raise ValueError(f"need {d + 2} distinct vertices, got {x}")
    if list(x) != sorted(x) or any(not 0 <= v < n for v in x):
        raise ValueError(f"vertex set {x} must be increasing and within 0..{n - 1}")
    coeffs = affine_dependence([fw.coords[v] for v in x])
    if any(c == 0 for c in coeffs):
        raise GenericityError(f"affine dependence {coeffs} has a zero coefficient")
    a = [Fraction(0)] * n
    for v, c in zip(x, coeffs):
        a[v] = c
    A = StressMatrix(RationalMatrix([[ai * aj for aj in a] for ai in a], n))
    clique = Graph(n, tuple(combinations(x, 2)))
    A.validate(clique, fw)
    for i, j in combinations(x, 2):
        if A[i, j] == 0:
            raise InternalConsistencyError("simplex stress vanishes on a clique edge")
    return SimplexStress(x, tuple(a), A)


class Proportionality(NamedTuple):
    lam: Fraction | None
    ratios: dict
    disagreeing: list


def clique_proportionality(g: Graph, fw: Framework, x: Sequence[int], s: StressMatrix) -> Proportionality:
    """Ratios ``s_ij / (a_i a_j)`` over clique edges ``ij`` and their common value if any.

    ``disagreeing`` lists the clique edges whose ratio differs from that of
    the first clique edge.
    """
    if not g.is_clique(x):
        raise ValueError(f"{tuple(x)} does not span a clique")
    simplex = simplex_stress(fw, x)
    a = simplex.a
    ratios = {(i, j): s[i, j] / (a[i] * a[j]) for i, j in combinations(sorted(x), 2)}
    ref = next(iter(ratios.values()))
    disagreeing = [e for e, c in ratios.items() if c != ref]
    return Proportionality(None if disagreeing else ref, ratios, disagreeing)


# --------------------------------------------------------------------------
# perturbation


class Perturbation(NamedTuple):
    t: Fraction
    certificate: Fraction  # det((s + t s0)[I, J]), nonzero
    rows: tuple
    cols: tuple
    rejected: list  # scanned t values where the determinant vanished


def dyadic_scan(steps: int = 10) -> list[Fraction]:
    """``+-2**-k`` for ``k = steps..1``: smallest magnitude first, positive before negative."""
    out = []
    for k in range(steps, 0, -1):
        t = Fraction(1, 2 ** k)
        out += [t, -t]
    return out


def rank_preserving_perturbation(s: StressMatrix, s0: StressMatrix, r: int,
                                 steps: int = 10) -> Perturbation:
    """Small dyadic ``t`` with ``rank(s + t*s0) == r``, given ``rank(s0) == r``.

    ``f(t) = det(s[I,J] + t s0[I,J])`` on a nonsingular ``r x r`` block of
    ``s0`` has leading coefficient ``det s0[I,J] != 0``, hence at most ``r``
    roots; a nonzero value certifies rank at least ``r``.
    """
    if s0.rank() != r:
        raise ValueError(f"s0 has rank {s0.rank()}, expected {r}")
    rows, cols = find_nonsingular_submatrix(s0.matrix, r)
    base = submatrix(s.matrix, rows, cols)
    pivot = submatrix(s0.matrix, rows, cols)
    rejected = []
    for t in dyadic_scan(steps):
        f_t = determinant(base + pivot.scale(t))
        if f_t == 0:
            rejected.append(t)
            continue
        if (s + s0.scale(t)).rank() != r:
            rejected.append(t)
            continue
        return Perturbation(t, f_t, rows, cols, rejected)
    raise InternalConsistencyError(
        f"no rank-{r} perturbation among {2 * steps} dyadic values; preconditions violated?"
    )


# --------------------------------------------------------------------------
# circuit stress


def circuit_stress(g: Graph, fw: Framework, c: Iterable[int]) -> StressMatrix:
    """The stress supported on circuit ``c`` (edge indices of ``g``), extended by zero."""
    c = sorted(set(c))
    oracle = MatroidOracle.from_framework(g, fw)
    if not oracle.is_circuit(c):
        raise NotACircuitError(f"edge set {c} is not a circuit at this framework")
    sub = g.edge_subgraph(c)
    basis = stress_space(sub, fw)
    if len(basis) != 1:
        raise InternalConsistencyError(f"circuit carries {len(basis)} independent stresses")
    w_sub = basis[0]
    if any(x == 0 for x in w_sub):
        raise InternalConsistencyError("circuit stress vanishes on a circuit edge")
    lookup = dict(zip(sub.edges, w_sub))
    w = [lookup.get(e, Fraction(0)) for e in g.edges]
    return assemble_stress_matrix(g, fw, w)


def stress_vector_of(g: Graph, s: StressMatrix) -> StressVector:
    return tuple(s[u, v] for u, v in g.edges)


def direct_stress_space(g: Graph, fw: Framework) -> list[list[Fraction]]:
    """Left kernel of the rigidity matrix by plain elimination (reference route)."""
    from .rigidity import rigidity_matrix

    R = rigidity_matrix(g, fw).matrix
    if g.m == 0:
        return []
    ints, _ = R.transpose().integer_rows()
    return [[Fraction(x) for x in v] for v in int_nullspace(ints, g.m)]
