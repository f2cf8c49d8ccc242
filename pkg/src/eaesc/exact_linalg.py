"""Exact rational dense linear algebra.

Every routine works over :class:`fractions.Fraction` and breaks pivot ties
by taking the lowest usable index, so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DependentInput, NotInvertible, ShapeMismatch

Scalar = Fraction
Vec = tuple  # tuple[Fraction, ...]

__all__ = [
    "Scalar", "Vec", "Mat", "NoSolution", "NO_SOLUTION", "as_scalar",
    "rref", "rank", "null_space", "solve", "solve_multi", "complement_basis",
    "column_basis", "inverse",
]


def as_scalar(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a reduced Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


class NoSolution:
    """Returned by :func:`solve` when the right-hand side is not in the range."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NoSolution"

    def __bool__(self) -> bool:
        return False


NO_SOLUTION = NoSolution()


@dataclass(frozen=True)
class Mat:
    rows: int
    cols: int
    entries: tuple  # row-major tuple of Fractions

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeMismatch("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        n = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != n for r in rows):
            raise ShapeMismatch("ragged rows")
        flat = tuple(as_scalar(x) for r in rows for x in r)
        return cls(len(rows), n, flat)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows,
                   tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise ShapeMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for j in range(other.cols):
                    out.append(sum((r[k] * other[k, j] for k in range(self.cols) if r[k]),
                                   Fraction(0)))
            return Mat(self.rows, other.cols, tuple(out))
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ShapeMismatch(f"vector of length {len(vec)} for {self.cols} columns")
        return tuple(sum((a * b for a, b in zip(self.row(i), vec) if a and b), Fraction(0))
                     for i in range(self.rows))


def _rows_of(m) -> tuple[list, int, int]:
    if isinstance(m, Mat):
        return m.to_rows(), m.rows, m.cols
    rows = [[as_scalar(x) for x in r] for r in m]
    return rows, len(rows), (len(rows[0]) if rows else 0)


def rref(m) -> tuple[list, list]:
    """Reduced row echelon form. Returns (rows, pivot columns)."""
    a, nr, nc = _rows_of(m)
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        p = next((i for i in range(r, nr) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        lead = a[r][c]
        if lead != 1:
            a[r] = [x / lead for x in a[r]]
        prow = a[r]
        for i in range(nr):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y if y else x for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m) -> int:
    return len(rref(m)[1])


def null_space(m) -> list:
    """Basis of the kernel, one vector per free column (free entry set to 1)."""
    a, _, nc = _rows_of(m)
    red, pivots = rref(a) if a else ([], [])
    pivset = set(pivots)
    basis = []
    for free in range(nc):
        if free in pivset:
            continue
        v = [Fraction(0)] * nc
        v[free] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[free]
        basis.append(tuple(v))
    return basis


def solve(m, b: Sequence):
    """One exact solution of ``m x = b`` (free variables set to zero), or NO_SOLUTION."""
    a, nr, nc = _rows_of(m)
    b = [as_scalar(x) for x in b]
    if len(b) != nr:
        raise ShapeMismatch(f"right-hand side of length {len(b)} for {nr} rows")
    aug = [row + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if nc in pivots:
        return NO_SOLUTION
    x = [Fraction(0)] * nc
    for row, pc in zip(red, pivots):
        x[pc] = row[nc]
    return tuple(x)


def solve_multi(m, bs: Sequence[Sequence]) -> list:
    """Like :func:`solve` for several right-hand sides sharing one elimination."""
    a, nr, nc = _rows_of(m)
    k = len(bs)
    for b in bs:
        if len(b) != nr:
            raise ShapeMismatch(f"right-hand side of length {len(b)} for {nr} rows")
    aug = [row + [as_scalar(b[i]) for b in bs] for i, row in enumerate(a)]
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        p = next((i for i in range(r, nr) if aug[i][c]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        lead = aug[r][c]
        if lead != 1:
            aug[r] = [x / lead for x in aug[r]]
        prow = aug[r]
        for i in range(nr):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y if y else x for x, y in zip(aug[i], prow)]
        pivots.append(c)
        r += 1
    out = []
    for j in range(k):
        if any(aug[i][nc + j] for i in range(r, nr)):
            out.append(NO_SOLUTION)
            continue
        x = [Fraction(0)] * nc
        for i, pc in enumerate(pivots):
            x[pc] = aug[i][nc + j]
        out.append(tuple(x))
    return out


def column_basis(m) -> list:
    """Pivot columns of ``m`` (lowest indices first), as vectors."""
    a, nr, nc = _rows_of(m)
    if not a:
        return []
    _, pivots = rref(a)
    return [tuple(a[i][c] for i in range(nr)) for c in pivots]


def complement_basis(subspace: Iterable[Sequence], ambient_dim: int) -> list:
    """Standard basis vectors completing ``subspace`` to a basis, greedily by index."""
    vecs = [tuple(as_scalar(x) for x in v) for v in subspace]
    for v in vecs:
        if len(v) != ambient_dim:
            raise ShapeMismatch(f"vector of length {len(v)} in dimension {ambient_dim}")
    if vecs and rank(vecs) != len(vecs):
        raise DependentInput("subspace vectors are linearly dependent")
    # scanning [V | I] column by column picks the lowest-index completion
    cols = [list(v) for v in vecs]
    joined = [[c[i] for c in cols] + [Fraction(int(i == j)) for j in range(ambient_dim)]
              for i in range(ambient_dim)]
    _, pivots = rref(joined)
    k = len(vecs)
    out = []
    for p in pivots:
        if p >= k:
            e = [Fraction(0)] * ambient_dim
            e[p - k] = Fraction(1)
            out.append(tuple(e))
    return out


def inverse(m: Mat) -> Mat:
    """Exact inverse of a square matrix; raises NotInvertible if singular."""

    if m.rows != m.cols:
        raise ShapeMismatch("inverse of a non-square matrix")
    n = m.rows
    aug = [m.row(i) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise NotInvertible("matrix is singular")
    return Mat(n, n, tuple(x for row in red for x in row[n:]))
