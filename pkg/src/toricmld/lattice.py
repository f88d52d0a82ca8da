"""Exact integer and rational linear algebra.

Everything here works on plain Python ints and :class:`fractions.Fraction`;
there is no floating point anywhere.  Lattice vectors are tuples of ints,
linear forms are tuples of Fractions (ints are accepted wherever a form is).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
import re
from typing import Iterable, Optional, Sequence, Tuple

Rational = Fraction
LatticeVector = Tuple[int, ...]
LinearForm = Tuple[Fraction, ...]


_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


class ZeroVector(ValueError):
    """Raised when a nonzero lattice vector was required."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major.

    ``ncols`` is kept explicitly so that matrices with zero rows still know
    their width.
    """

    rows: Tuple[Tuple[int, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], ncols: Optional[int] = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(rows, ncols)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        return cls(tuple(tuple(int(c[i]) for c in cols) for i in range(nrows)), len(cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(self.column(j) for j in range(self.ncols))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.columns(), self.nrows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows),
            other.ncols,
        )

    def apply(self, v: Sequence[int]) -> Tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def det(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return det([list(r) for r in self.rows])


def det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def snf(m: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns ``(U, D, V)`` with ``U @ m @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries ``d_1 | d_2 | ...``.  Pivots are chosen as the nonzero entry of
    smallest absolute value in the remaining block, first in row-major
    order on ties.
    """
    nr, nc = m.shape
    a = [list(r) for r in m.rows]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(nr, nc):
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x and (piv is None or abs(x) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        p = a[t][t]
        clean = True
        for i in range(t + 1, nr):
            if a[i][t]:
                add_row(i, t, -(a[i][t] // p))
                clean = clean and a[i][t] == 0
        for j in range(t + 1, nc):
            if a[t][j]:
                add_col(j, t, -(a[t][j] // p))
                clean = clean and a[t][j] == 0
        if not clean:
            continue
        bad = next(
            (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p),
            None,
        )
        if bad is not None:
            add_row(t, bad, 1)
            continue
        if p < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (
        IntMatrix(tuple(map(tuple, u)), nr),
        IntMatrix(tuple(map(tuple, a)), nc),
        IntMatrix(tuple(map(tuple, v)), nc),
    )


def elementary_divisors(m: IntMatrix) -> Tuple[int, ...]:
    _, d, _ = snf(m)
    return tuple(d.rows[i][i] for i in range(min(d.shape)) if d.rows[i][i])


def inverse(m: IntMatrix) -> Tuple[Tuple[Fraction, ...], ...]:
    """Exact inverse of a square integer matrix, as rows of Fractions."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("inverse of a non-square matrix")
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return tuple(tuple(r[n:]) for r in aug)


def adjugate(m: IntMatrix) -> IntMatrix:
    """Integer adjugate, ``m @ adjugate(m) == det(m) * I``."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("adjugate of a non-square matrix")
    if n == 1:
        return IntMatrix(((1,),), 1)
    rows = m.rows
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[rows[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            out[i][j] = (-1) ** (i + j) * det(minor)
    return IntMatrix(tuple(map(tuple, out)), n)


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    d = m.det()
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    adj = adjugate(m)
    return IntMatrix(tuple(tuple(d * x for x in r) for r in adj.rows), m.ncols)


def primitive(v: Sequence[int]) -> LatticeVector:
    """Divide ``v`` by the gcd of its coordinates."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ZeroVector("the zero vector has no primitive generator")
    return tuple(x // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def dot(f: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(f, v)), 0)


def rref(rows: Sequence[Sequence]) -> Tuple[list, list]:
    """Reduced row echelon form over Q; returns ``(rows, pivot_columns)``."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return a, []
    nr, nc = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(nr):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return a, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def solve_rational(a: IntMatrix, b: Sequence) -> Optional[Tuple[Fraction, ...]]:
    """One exact solution of ``a @ x == b``, or ``None`` if inconsistent.

    The solution returned is the basic one from row reduction with the
    leftmost available pivot in each column: free variables are set to zero.
    """
    if len(b) != a.nrows:
        raise ValueError("right-hand side has the wrong length")
    n = a.ncols
    aug = [list(r) + [Fraction(x)] for r, x in zip(a.rows, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(red, pivots):
        x[c] = row[n]
    return tuple(x)


def cross(rows: Sequence[Sequence[int]]) -> LatticeVector:
    """Generalised cross product of ``d - 1`` vectors in ``Z^d``.

    The result is orthogonal to every input row and vanishes exactly when
    the rows are linearly dependent.
    """
    d = len(rows) + 1
    out = []
    for j in range(d):
        minor = [[r[k] for k in range(d) if k != j] for r in rows]
        out.append((-1) ** j * det(minor))
    return tuple(out)


def as_rational(x) -> Fraction:
    """Parse an exact rational from an int, Fraction or ``"p/q"`` string."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use an exact rational")
    if isinstance(x, str):
        if not _RATIONAL_RE.match(x.strip()):
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(x.strip())
    return Fraction(x)
