"""Exact rational vectors and dense matrices.

Everything here is built on ``fractions.Fraction``: arithmetic never rounds,
so downstream verdicts that hinge on exact zero tests are decidable.  Floats
are rejected at the boundary instead of being converted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

Vec = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value: int | str | Fraction) -> Fraction:
    """Parse an exact rational from an int, Fraction, or string ("3", "-2/7", "0.25")."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}; use int, Fraction, or a string like '2/3'")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def vec(values) -> Vec:
    return tuple(rat(v) for v in values)


def zero_vec(n: int) -> Vec:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def dot(a: Vec, b: Vec) -> Fraction:
    if len(a) != len(b):
        raise ValueError(f"dot of vectors with lengths {len(a)} and {len(b)}")
    return sum((x * y for x, y in zip(a, b)), ZERO)


def vec_add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_scale(c: Fraction, a: Vec) -> Vec:
    return tuple(c * x for x in a)


def vec_neg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def is_zero_vec(a: Vec) -> bool:
    return all(x == 0 for x in a)


def primitive(a: Vec) -> Vec:
    """Scale by a positive rational to the integer vector with coprime entries.

    The zero vector is returned unchanged.  Direction (sign pattern) is kept,
    so this is the canonical representative of a ray.
    """
    if is_zero_vec(a):
        return a
    denom = lcm(*(x.denominator for x in a)) if len(a) > 1 else a[0].denominator
    ints = [x * denom for x in a]
    g = 0
    for x in ints:
        g = gcd(g, x.numerator)
    return tuple(x / g for x in ints)


def format_vec(a: Vec) -> list[str]:
    return [str(x) for x in a]


@dataclass(frozen=True)
class RatMatrix:
    """Dense immutable matrix of rationals (rows of equal length)."""

    rows: tuple[Vec, ...]
    cols: int

    def __post_init__(self) -> None:
        for r in self.rows:
            if len(r) != self.cols:
                raise ValueError(f"row of length {len(r)} in matrix with {self.cols} columns")

    @staticmethod
    def from_rows(rows, cols: int | None = None) -> "RatMatrix":
        tup = tuple(vec(r) for r in rows)
        if cols is None:
            if not tup:
                raise ValueError("column count required for an empty matrix")
            cols = len(tup[0])
        return RatMatrix(tup, cols)

    @staticmethod
    def identity(n: int) -> "RatMatrix":
        return RatMatrix(tuple(unit_vec(n, i) for i in range(n)), n)

    @staticmethod
    def zeros(n_rows: int, n_cols: int) -> "RatMatrix":
        return RatMatrix(tuple(zero_vec(n_cols) for _ in range(n_rows)), n_cols)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.cols)

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i][j]

    def row(self, i: int) -> Vec:
        return self.rows[i]

    def col(self, j: int) -> Vec:
        return tuple(r[j] for r in self.rows)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(tuple(self.col(j) for j in range(self.cols)), len(self.rows))

    def mat_vec(self, v: Vec) -> Vec:
        return tuple(dot(r, v) for r in self.rows)

    def vec_mat(self, v: Vec) -> Vec:
        if len(v) != len(self.rows):
            raise ValueError("vector length does not match row count")
        return tuple(
            sum((v[i] * self.rows[i][j] for i in range(len(self.rows))), ZERO)
            for j in range(self.cols)
        )

    def mat_mul(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.n_rows:
            raise ValueError("inner dimensions do not match")
        return RatMatrix(tuple(other.vec_mat(r) for r in self.rows), other.cols)

    def is_symmetric(self) -> bool:
        if self.n_rows != self.cols:
            return False
        return all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.n_rows)
            for j in range(i + 1, self.cols)
        )

    def is_zero(self) -> bool:
        return all(is_zero_vec(r) for r in self.rows)


def rank_rows(rows, cols: int) -> int:
    """Exact rank via fraction-free (Bareiss) elimination on integer-scaled rows."""
    work: list[list[int]] = []
    for r in rows:
        r = vec(r)
        if len(r) != cols:
            raise ValueError("inconsistent row length")
        denom = 1
        for x in r:
            denom = lcm(denom, x.denominator)
        work.append([int(x * denom) for x in r])
    n_rows = len(work)
    r = 0
    prev_pivot = 1
    for c in range(cols):
        pivot_row = next((i for i in range(r, n_rows) if work[i][c] != 0), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        pivot = work[r][c]
        for i in range(r + 1, n_rows):
            factor = work[i][c]
            for j in range(c, cols):
                work[i][j] = (pivot * work[i][j] - factor * work[r][j]) // prev_pivot
        prev_pivot = pivot
        r += 1
        if r == n_rows:
            break
    return r


def rank(m: RatMatrix) -> int:
    return rank_rows(m.rows, m.cols)


def rref(rows, cols: int) -> list[Vec]:
    """Reduced row echelon form; returns the nonzero rows (a canonical basis of the row space)."""
    work = [list(vec(r)) for r in rows]
    n_rows = len(work)
    pivots = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, n_rows) if work[i][c] != 0), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        p = work[r][c]
        work[r] = [x / p for x in work[r]]
        for i in range(n_rows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return [tuple(row) for row in work[:r]]


def in_row_span(rows, cols: int, target: Vec) -> bool:
    """Whether ``target`` lies in the linear span of ``rows``."""
    base = list(rows)
    return rank_rows(base, cols) == rank_rows(base + [target], cols)
