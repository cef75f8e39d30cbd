"""Exact rational vectors and matrices.

Vectors are tuples of Fraction (or int where a value is known integral);
matrices are immutable row-major Fraction grids.  Every routine here is
exact: no floats, no rounding, arbitrary precision throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

Rat = Fraction
Vec = tuple

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(x) -> Fraction:
    """Coerce an int, string like '3/4', or Fraction to Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def vec(xs) -> Vec:
    return tuple(rat(x) for x in xs)


def vzero(n: int) -> Vec:
    return (ZERO,) * n


def vadd(a: Vec, b: Vec) -> Vec:
    if len(a) != len(b):
        raise ValueError("dimension mismatch in vector addition")
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    if len(a) != len(b):
        raise ValueError("dimension mismatch in vector subtraction")
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vscale(a: Vec, s) -> Vec:
    return tuple(s * x for x in a)


def vdot(a: Vec, b: Vec):
    if len(a) != len(b):
        raise ValueError("dimension mismatch in dot product")
    return sum((x * y for x, y in zip(a, b)), ZERO)


def is_zero_vec(a: Vec) -> bool:
    return all(x == 0 for x in a)


def is_integer_vec(a: Vec) -> bool:
    return all(Fraction(x).denominator == 1 for x in a)


def l1_norm(a: Vec):
    return sum((abs(x) for x in a), ZERO)


def linf_norm(a: Vec):
    return max((abs(x) for x in a), default=ZERO)


@dataclass(frozen=True)
class Matrix:
    """Immutable row-major rational matrix."""

    rows: int
    cols: int
    data: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimensions")
        if len(self.data) != self.rows * self.cols:
            raise ValueError("matrix entry count does not match rows*cols")

    @staticmethod
    def from_rows(rows) -> Matrix:
        rows = [tuple(rat(x) for x in r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        if any(len(r) != nc for r in rows):
            raise ValueError("ragged rows")
        return Matrix(nr, nc, tuple(x for r in rows for x in r))

    @staticmethod
    def identity(n: int) -> Matrix:
        return Matrix(n, n, tuple(ONE if i == j else ZERO for i in range(n) for j in range(n)))

    @staticmethod
    def zeros(r: int, c: int) -> Matrix:
        return Matrix(r, c, (ZERO,) * (r * c))

    def at(self, i: int, j: int):
        return self.data[i * self.cols + j]

    def row(self, i: int) -> Vec:
        return self.data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> Vec:
        return self.data[j::self.cols] if self.cols else ()

    def row_list(self):
        return [self.row(i) for i in range(self.rows)]

    def mul_vec(self, v: Vec) -> Vec:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch in matrix-vector product")
        out = []
        for i in range(self.rows):
            base = i * self.cols
            out.append(sum((self.data[base + j] * v[j] for j in range(self.cols)), ZERO))
        return tuple(out)

    def column_submatrix(self, cols) -> Matrix:
        cols = tuple(cols)
        data = []
        for i in range(self.rows):
            base = i * self.cols
            for j in cols:
                data.append(self.data[base + j])
        return Matrix(self.rows, len(cols), tuple(data))

    def transpose(self) -> Matrix:
        return Matrix(self.cols, self.rows,
                      tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.data)

    def max_abs_entry(self):
        return max((abs(x) for x in self.data), default=ZERO)


def hstack(*mats: Matrix) -> Matrix:
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ValueError("row mismatch in hstack")
    out = []
    for i in range(rows):
        for m in mats:
            out.extend(m.row(i))
    return Matrix(rows, sum(m.cols for m in mats), tuple(out))


def vstack(*mats: Matrix) -> Matrix:
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("column mismatch in vstack")
    return Matrix(sum(m.rows for m in mats), cols, tuple(x for m in mats for x in m.data))


def _echelon(rows):
    """In-place fraction Gaussian elimination; returns pivot column list."""
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pr = rows[r]
        inv = ONE / pr[c]
        rows[r] = pr = [x * inv for x in pr]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def solve_linear(M: Matrix, b: Vec):
    """Return some x with Mx = b, or None when the system is inconsistent."""
    if M.rows != len(b):
        raise ValueError("dimension mismatch: M.rows != len(b)")
    rows = [list(M.row(i)) + [rat(b[i])] for i in range(M.rows)]
    pivots = _echelon(rows)
    # a pivot in the augmented column means 0 = 1
    if any(c == M.cols for c in pivots):
        return None
    x = [ZERO] * M.cols
    for r, c in enumerate(pivots):
        x[c] = rows[r][M.cols]
    return tuple(x)


def null_space(M: Matrix):
    """Basis of ker M as a list of vectors; empty iff full column rank."""
    rows = [list(M.row(i)) for i in range(M.rows)]
    pivots = _echelon(rows) if rows else []
    pivot_set = set(pivots)
    basis = []
    for free in range(M.cols):
        if free in pivot_set:
            continue
        v = [ZERO] * M.cols
        v[free] = ONE
        for r, c in enumerate(pivots):
            v[c] = -rows[r][free]
        basis.append(tuple(v))
    return basis


def rank(M: Matrix) -> int:
    rows = [list(M.row(i)) for i in range(M.rows)]
    return len(_echelon(rows)) if rows else 0


def rank_of_vectors(vectors) -> int:
    vectors = [v for v in vectors]
    if not vectors:
        return 0
    return rank(Matrix.from_rows(vectors))


def det(M: Matrix):
    """Determinant by fraction Gaussian elimination."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    rows = [list(M.row(i)) for i in range(n)]
    d = ONE
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            return ZERO
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            d = -d
        d *= rows[c][c]
        inv = ONE / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return d


def ceil_sqrt(n: int) -> int:
    """Exact ceiling of the square root of a nonnegative integer."""
    if n < 0:
        raise ValueError("negative argument")
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def lcm_abs_dets(mats, s: int, entry_bound=None) -> int:
    """lcm of |det D| over all invertible s x s column submatrices.

    Every matrix must have integer entries and exactly s rows.  Returns 1
    when no invertible submatrix exists.  When entry_bound is given, each
    enumerated determinant is checked against Hadamard's inequality
    (compared in squared form to stay rational).
    """
    result = 1
    for M in mats:
        if M.rows != s:
            raise ValueError("matrix does not have s rows")
        if not all(Fraction(x).denominator == 1 for x in M.data):
            raise ValueError("non-integer matrix entries")
        for cols in combinations(range(M.cols), s):
            d = det(M.column_submatrix(cols))
            if d == 0:
                continue
            a = abs(int(d))
            if entry_bound is not None:
                if a * a > (int(entry_bound) ** (2 * s)) * (s ** s):
                    raise AssertionError("Hadamard bound violated by submatrix determinant")
            result = math.lcm(result, a)
    return result


def primitive_integer_vector(v: Vec) -> Vec:
    """Scale a nonzero rational vector to a primitive integer vector."""
    denoms = [Fraction(x).denominator for x in v]
    scale = math.lcm(*denoms) if denoms else 1
    ints = [int(x * scale) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in ints)
