"""Exact rational linear algebra.

Everything here works over :class:`fractions.Fraction`; no floating point is
ever produced.  Matrices are small and dense (at most a few hundred rows), so
plain row-major tuples are used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Sequence

Rat = Fraction


class NotSymmetricError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


def as_rat(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected outright.
    """
    if isinstance(x, float):
        raise TypeError("floating point values are not allowed")
    return Fraction(x)


def vector(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_rat(v) for v in values)


@dataclass(frozen=True)
class RatMatrix:
    """Immutable dense matrix of Fractions."""

    entries: tuple[tuple[Fraction, ...], ...]
    ncols: int

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(as_rat(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        if any(len(row) != ncols for row in data):
            raise ValueError("ragged rows")
        object.__setattr__(self, "entries", data)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m: int, n: int) -> RatMatrix:
        return cls([[0] * n for _ in range(m)], n)

    @classmethod
    def symmetric(cls, rows: Iterable[Iterable]) -> RatMatrix:
        """Build a matrix and insist that it is square and symmetric."""
        M = cls(rows)
        if not M.is_symmetric():
            raise NotSymmetricError("matrix is not symmetric")
        return M

    @classmethod
    def diagonal(cls, values: Sequence) -> RatMatrix:
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.entries)

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        n = self.nrows
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))

    def transpose(self) -> RatMatrix:
        return RatMatrix(zip(*self.entries), self.nrows) if self.nrows else RatMatrix.zeros(self.ncols, 0)

    T = property(transpose)

    def __add__(self, other: RatMatrix) -> RatMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.ncols
        )

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        return self + other.scale(-1)

    def scale(self, c) -> RatMatrix:
        c = as_rat(c)
        return RatMatrix([[c * a for a in r] for r in self.entries], self.ncols)

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.entries)) if other.nrows else [()] * other.ncols
            return RatMatrix(
                [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.entries],
                other.ncols,
            )
        v = vector(other)
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self.entries)

    def _integer_form(self) -> tuple[list[list[int]], int]:
        """(integer matrix N, denominator D) with M = N / D; cached."""
        cached = self.__dict__.get("_intform")
        if cached is None:
            D = lcm(1, *(x.denominator for r in self.entries for x in r))
            cached = ([[int(x * D) for x in r] for r in self.entries], D)
            object.__setattr__(self, "_intform", cached)
        return cached

    def bilinear(self, x: Sequence, y: Sequence) -> Fraction:
        """Return ``x^T M y``."""
        N, D = self._integer_form()
        xi, dx = integer_vector(x)
        yi, dy = integer_vector(y)
        total = 0
        for a, row in zip(xi, N):
            if a:
                total += a * sum(c * b for c, b in zip(row, yi) if c)
        return Fraction(total, D * dx * dy)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> RatMatrix:
        return RatMatrix([[self.entries[i][j] for j in cols] for i in rows], len(cols))

    def with_entry(self, i: int, j: int, value) -> RatMatrix:
        data = self.rows()
        data[i][j] = as_rat(value)
        return RatMatrix(data, self.ncols)

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.entries]

    def __repr__(self) -> str:
        return f"RatMatrix({self.to_strings()})"


def integer_vector(v: Sequence) -> tuple[list[int], int]:
    """(integer list w, denominator d) with v = w / d."""
    v = [as_rat(a) for a in v]
    d = lcm(1, *(a.denominator for a in v))
    return [a.numerator * (d // a.denominator) for a in v], d


def _integer_rows(M: RatMatrix) -> tuple[list[list[int]], list[int]]:
    """Clear denominators row by row; return integer rows and the row scale factors."""
    out, factors = [], []
    for r in M.entries:
        f = lcm(1, *(x.denominator for x in r))
        out.append([int(x * f) for x in r])
        factors.append(f)
    return out, factors


def _bareiss(rows: list[list[int]], ncols: int) -> tuple[int, int, int]:
    """Fraction-free elimination in place.

    Returns (rank, last pivot, sign of the row permutation).  For a square
    full-rank input the last pivot is the determinant of ``rows`` up to that sign.
    """
    m = len(rows)
    prev = 1
    sign = 1
    r = 0
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        pr = rows[r]
        for i in range(r + 1, m):
            ri = rows[i]
            a = ri[c]
            if a == 0:
                # still has to be rescaled to keep the Bareiss invariant
                ri[:] = [(p * x) // prev for x in ri]
                continue
            ri[:] = [(p * x - a * y) // prev for x, y in zip(ri, pr)]
        prev = p
        r += 1
    return r, prev, sign


def rank(M: RatMatrix) -> int:
    if M.nrows == 0 or M.ncols == 0:
        return 0
    rows, _ = _integer_rows(M)
    # eliminate along the shorter side
    if M.ncols < M.nrows:
        rows = [list(c) for c in zip(*rows)]
        return _bareiss(rows, M.nrows)[0]
    return _bareiss(rows, M.ncols)[0]


def det(M: RatMatrix) -> Fraction:
    if not M.is_square():
        raise ValueError(f"determinant of a non-square {M.nrows}x{M.ncols} matrix")
    n = M.nrows
    if n == 0:
        return Fraction(1)
    rows, factors = _integer_rows(M)
    r, last, sign = _bareiss(rows, n)
    if r < n:
        return Fraction(0)
    scale = 1
    for f in factors:
        scale *= f
    return Fraction(sign * last, scale)


def _rref(M: RatMatrix) -> tuple[list[list[Fraction]], list[int]]:
    A = M.rows()
    m, n = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                a = A[i][c]
                A[i] = [x - a * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def solve(M: RatMatrix, b: Sequence) -> tuple[Fraction, ...]:
    """Unique solution of ``M x = b`` for square invertible ``M``."""
    if not M.is_square():
        raise ValueError("solve needs a square matrix")
    b = vector(b)
    if len(b) != M.nrows:
        raise ValueError("right-hand side has the wrong length")
    aug = RatMatrix([list(r) + [bi] for r, bi in zip(M.entries, b)], M.ncols + 1)
    A, pivots = _rref(aug)
    if pivots[: M.ncols] != list(range(M.ncols)) or len(pivots) > M.ncols:
        raise SingularMatrixError("matrix is singular")
    return tuple(A[i][-1] for i in range(M.ncols))


def solve_any(M: RatMatrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """Some solution of a possibly rectangular system, or None if inconsistent."""
    b = vector(b)
    aug = RatMatrix([list(r) + [bi] for r, bi in zip(M.entries, b)], M.ncols + 1)
    A, pivots = _rref(aug)
    if M.ncols in pivots:
        return None
    x = [Fraction(0)] * M.ncols
    for i, c in enumerate(pivots):
        x[c] = A[i][-1]
    return tuple(x)


def inverse(M: RatMatrix) -> RatMatrix:
    n = M.nrows
    if not M.is_square():
        raise ValueError("inverse needs a square matrix")
    aug = RatMatrix([list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M.entries)], 2 * n)
    A, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return RatMatrix([row[n:] for row in A], n)


def nullspace(M: RatMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel, one vector per free column."""
    A, pivots = _rref(M) if M.nrows else ([], [])
    free = [c for c in range(M.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -A[i][f]
        basis.append(tuple(v))
    return basis


def _require_symmetric(M: RatMatrix) -> None:
    if not M.is_symmetric():
        raise NotSymmetricError("expected a square symmetric matrix")


def signature(M: RatMatrix) -> tuple[int, int, int]:
    """Inertia (positives, negatives, zeros) by exact congruence diagonalization."""
    _require_symmetric(M)
    A = M.rows()
    n = M.nrows
    pos = neg = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if A[i][i] != 0), None)
        if k is None:
            # zero diagonal: make one nonzero via e_i -> e_i + e_j, or drop a null row
            pair = next(((i, j) for i in active for j in active if j != i and A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            for t in range(n):
                A[i][t] += A[j][t]
            for t in range(n):
                A[t][i] += A[t][j]
            k = i
        p = A[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(k)
        for i in active:
            if A[i][k] != 0:
                f = A[i][k] / p
                for t in active:
                    A[i][t] -= f * A[k][t]
                A[i][k] = Fraction(0)
        for i in active:
            A[k][i] = Fraction(0)
    return pos, neg, n - pos - neg


def principal_minors(M: RatMatrix):
    n = M.nrows
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            yield idx, det(M.submatrix(idx, idx))


def is_negative_semidefinite(M: RatMatrix) -> bool:
    """Decide ``v^T M v <= 0`` for all v.

    Up to 4x4 this uses the full principal-minor criterion on ``-M``;
    larger matrices go through :func:`signature`.
    """
    _require_symmetric(M)
    if M.nrows <= 4:
        neg = M.scale(-1)
        return all(d >= 0 for _, d in principal_minors(neg))
    return signature(M)[0] == 0


def cross(u: Sequence, v: Sequence) -> tuple[Fraction, ...]:
    u, v = vector(u), vector(v)
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((as_rat(a) * as_rat(b) for a, b in zip(u, v)), Fraction(0))
