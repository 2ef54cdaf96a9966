"""Dense exact linear algebra over the rationals.

Two layers live here.  The integer kernels (``bareiss_*``, ``ff_rref``,
``int_nullspace``) work on plain ``list[list[int]]`` and never build a
``Fraction``; the rigidity code calls them directly in its hot loops.
``RationalMatrix`` wraps ``Fraction`` entries and reduces every query to
the integer kernels by clearing denominators row by row.

``gauss_rank`` and ``gauss_rref`` are textbook elimination over
``Fraction``; they exist as an independent check on the fraction-free
routines and are not used on any decision path.

The last section reduces integer matrices modulo a fixed 61-bit prime.
A mod-p rank can only undershoot the rational rank, so callers accept a
modular answer only when it reaches the largest possible value.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence


class DimensionError(ValueError):
    pass


class RankDeficiencyError(ValueError):
    pass


# --------------------------------------------------------------------------
# integer kernels


def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free forward elimination."""
    a = [list(r) for r in rows]
    m = len(a)
    if not m:
        return 0
    ncols = len(a[0])
    prev = 1
    r = 0
    for c in range(ncols):
        piv = r
        while piv < m and not a[piv][c]:
            piv += 1
        if piv == m:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        prow = a[r]
        p = prow[c]
        for i in range(r + 1, m):
            row = a[i]
            f = row[c]
            if f:
                a[i] = [(p * x - f * y) // prev for x, y in zip(row, prow)]
            elif p != prev:
                a[i] = [p * x // prev for x in row]
        prev = p
        r += 1
        if r == m:
            break
    return r


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (Bareiss)."""
    a = [list(r) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n):
        piv = k
        while piv < n and not a[piv][k]:
            piv += 1
        if piv == n:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        prow = a[k]
        p = prow[k]
        for i in range(k + 1, n):
            row = a[i]
            f = row[k]
            a[i] = [(p * x - f * y) // prev for x, y in zip(row, prow)]
        prev = p
    return sign * a[n - 1][n - 1]


def ff_rref(rows: Sequence[Sequence[int]], ncols: int | None = None):
    """Fraction-free Gauss-Jordan elimination.

    Returns ``(a, pivots, denom)``: the reduced integer matrix, the list of
    ``(row, col)`` pivot positions in order, and the common pivot value.
    Every pivot row carries ``denom`` at its own pivot column and zeros in
    the other pivot columns, so ``a / denom`` is the reduced row echelon
    form.  Every entry stays an integer minor of the input.
    """
    a = [list(r) for r in rows]
    m = len(a)
    if ncols is None:
        ncols = len(a[0]) if m else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        piv = r
        while piv < m and not a[piv][c]:
            piv += 1
        if piv == m:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        prow = a[r]
        p = prow[c]
        for i in range(m):
            if i == r:
                continue
            row = a[i]
            f = row[c]
            if f:
                a[i] = [(p * x - f * y) // prev for x, y in zip(row, prow)]
            elif p != prev:
                a[i] = [p * x // prev for x in row]
        pivots.append((r, c))
        prev = p
        r += 1
    return a, pivots, prev


def _primitive(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        v = [x // g for x in v]
    for x in v:
        if x:
            if x < 0:
                v = [-y for y in v]
            break
    return v


def int_nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Integer basis of the right kernel, one primitive vector per free column."""
    a, pivots, denom = ff_rref(rows, ncols)
    pivot_cols = {c: r for r, c in pivots}
    basis = []
    for f in range(ncols):
        if f in pivot_cols:
            continue
        v = [0] * ncols
        v[f] = denom
        for r, c in pivots:
            v[c] = -a[r][f]
        basis.append(_primitive(v))
    return basis


def pivot_positions(rows: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """``(row, col)`` pivots of column-wise elimination, in original row indices."""
    a = [list(r) for r in rows]
    order = list(range(len(a)))
    m = len(a)
    ncols = len(a[0]) if m else 0
    prev = 1
    r = 0
    out = []
    for c in range(ncols):
        if r == m:
            break
        piv = r
        while piv < m and not a[piv][c]:
            piv += 1
        if piv == m:
            continue
        a[r], a[piv] = a[piv], a[r]
        order[r], order[piv] = order[piv], order[r]
        prow = a[r]
        p = prow[c]
        for i in range(r + 1, m):
            row = a[i]
            f = row[c]
            a[i] = [(p * x - f * y) // prev for x, y in zip(row, prow)]
        out.append((order[r], c))
        prev = p
        r += 1
    return out


# --------------------------------------------------------------------------
# Fraction-based reference elimination


def gauss_rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Plain reduced row echelon form over ``Fraction``; returns (rref, pivot cols)."""
    a = [[Fraction(x) for x in r] for r in rows]
    m = len(a)
    ncols = len(a[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def gauss_rank(rows: Sequence[Sequence]) -> int:
    return len(gauss_rref(rows)[1])


# --------------------------------------------------------------------------
# RationalMatrix


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RationalMatrix:
    """Immutable dense matrix of ``Fraction`` entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        grid = tuple(tuple(_as_fraction(x) for x in row) for row in entries)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        if any(len(row) != cols for row in grid):
            raise DimensionError("ragged rows")
        self.rows = len(grid)
        self.cols = cols
        self.entries = grid

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.entries)
        return f"RationalMatrix({self.rows}x{self.cols}: [{body}])"

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(zip(*self.entries), self.rows) if self.rows else RationalMatrix.zeros(self.cols, 0)

    T = property(transpose)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return RationalMatrix(
            ([x + y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)), self.cols
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + other.scale(-1)

    def scale(self, t) -> "RationalMatrix":
        t = _as_fraction(t)
        return RationalMatrix(([t * x for x in r] for r in self.entries), self.cols)

    def __rmul__(self, t):
        return self.scale(t)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return RationalMatrix(
            ([sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in ocols] for r in self.entries),
            other.cols,
        )

    def apply(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.cols:
            raise DimensionError("vector length mismatch")
        return [sum((x * _as_fraction(y) for x, y in zip(r, v)), Fraction(0)) for r in self.entries]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.entries[i][j] == self.entries[j][i] for i in range(self.rows) for j in range(i)
        )

    def integer_rows(self) -> tuple[list[list[int]], list[int]]:
        """Rows scaled by their denominator lcm; returns (int rows, scale factors)."""
        out, scales = [], []
        for r in self.entries:
            s = 1
            for x in r:
                s = lcm(s, x.denominator)
            out.append([int(x * s) for x in r])
            scales.append(s)
        return out, scales

    def rank(self) -> int:
        return rank(self)

    def determinant(self) -> Fraction:
        return determinant(self)

    def nullspace(self) -> list[list[Fraction]]:
        return nullspace(self)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return submatrix(self, rows, cols)


def as_matrix(m) -> RationalMatrix:
    return m if isinstance(m, RationalMatrix) else RationalMatrix(m)


def rank(m) -> int:
    m = as_matrix(m)
    ints, _ = m.integer_rows()
    return bareiss_rank(ints)


def nullspace(m) -> list[list[Fraction]]:
    """Right-kernel basis; each vector is primitive-integral with positive lead."""
    m = as_matrix(m)
    ints, _ = m.integer_rows()
    basis = int_nullspace(ints, m.cols)
    return [[Fraction(x) for x in v] for v in basis]


def determinant(m) -> Fraction:
    m = as_matrix(m)
    if m.rows != m.cols:
        raise DimensionError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    ints, scales = m.integer_rows()
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(bareiss_det(ints), denom)


def submatrix(m, rows: Sequence[int], cols: Sequence[int]) -> RationalMatrix:
    m = as_matrix(m)
    for i in rows:
        if not 0 <= i < m.rows:
            raise IndexError(f"row index {i} out of range for {m.rows} rows")
    for j in cols:
        if not 0 <= j < m.cols:
            raise IndexError(f"column index {j} out of range for {m.cols} columns")
    e = m.entries
    return RationalMatrix(([e[i][j] for j in cols] for i in rows), len(cols))


def find_nonsingular_submatrix(m, r: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Row and column index sets (sorted) of an ``r x r`` minor with nonzero determinant.

    Uses the first ``r`` pivots of column-wise elimination.
    """
    m = as_matrix(m)
    ints, _ = m.integer_rows()
    piv = pivot_positions(ints)
    if len(piv) < r:
        raise RankDeficiencyError(f"matrix has rank {len(piv)} < {r}")
    rows = tuple(sorted(i for i, _ in piv[:r]))
    cols = tuple(sorted(j for _, j in piv[:r]))
    assert determinant(submatrix(m, rows, cols)) != 0
    return rows, cols


# --------------------------------------------------------------------------
# arithmetic modulo a prime
#
# Reduction mod p never raises a rank: rank_p(M mod p) <= rank(M) for an
# integer matrix M.  Callers use this only where a full mod-p rank is the
# conclusion they want, which then holds exactly over Q.

PRIME = (1 << 61) - 1


def rank_mod(rows: Sequence[Sequence[int]], p: int = PRIME) -> int:
    """Rank mod ``p`` by cross-multiplying elimination (no inverses needed)."""
    a = [[x % p for x in r] for r in rows]
    m = len(a)
    if not m:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = r
        while piv < m and not a[piv][c]:
            piv += 1
        if piv == m:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        prow = a[r]
        q = prow[c]
        for i in range(r + 1, m):
            row = a[i]
            f = row[c]
            if f:
                a[i] = [(q * x - f * y) % p for x, y in zip(row, prow)]
        r += 1
        if r == m:
            break
    return r


def rref_mod(rows: Sequence[Sequence[int]], ncols: int, p: int = PRIME):
    """Reduced row echelon form mod ``p``; returns (matrix, [(row, col) pivots]).

    Inputs are assumed already reduced mod ``p``.  Elimination
    cross-multiplies; the pivot rows are normalized at the end with a
    single modular inversion.
    """
    a = [list(r) for r in rows]
    m = len(a)
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        piv = r
        while piv < m and not a[piv][c]:
            piv += 1
        if piv == m:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        prow = a[r]
        q = prow[c]
        for i in range(m):
            if i != r:
                row = a[i]
                f = row[c]
                if f:
                    a[i] = [(q * x - f * y) % p for x, y in zip(row, prow)]
        pivots.append((r, c))
        r += 1
    if pivots:
        # batch inversion of the pivot values
        vals = [a[i][c] for i, c in pivots]
        prefix = [1]
        for v in vals:
            prefix.append(prefix[-1] * v % p)
        inv = pow(prefix[-1], -1, p)
        for k in range(len(vals) - 1, -1, -1):
            inv_k = inv * prefix[k] % p
            inv = inv * vals[k] % p
            i = pivots[k][0]
            a[i] = [x * inv_k % p for x in a[i]]
    return a, pivots
