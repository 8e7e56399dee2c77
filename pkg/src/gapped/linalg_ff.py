"""Dense linear algebra over prime fields GF(p).

Matrices are immutable; entries are plain ints reduced mod p and stored
row-major.  Everything is exact, so there are no tolerances anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class ShapeError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_modulus(p: int) -> int:
    if not isinstance(p, int) or not _is_prime(p):
        raise ValueError(f"modulus must be prime, got {p!r}")
    return p


@dataclass(frozen=True)
class FieldElement:
    value: int
    p: int = 2

    def __post_init__(self):
        check_modulus(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _lift(self, other):
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._lift(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._lift(other), self.p)

    def __mul__(self, other):
        return FieldElement(self.value * self._lift(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = other if isinstance(other, FieldElement) else FieldElement(other, self.p)
        return self * o.inverse()

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple
    p: int = 2

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeError(
                f"entries length {len(self.entries)} != {self.rows}x{self.cols}"
            )
        object.__setattr__(self, "entries", tuple(int(e) % self.p for e in self.entries))

    # constructors ------------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int = 2, cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ShapeError("ragged rows")
        return cls(len(rows), cols, tuple(e for r in rows for e in r), p)

    @classmethod
    def zero(cls, rows: int, cols: int, p: int = 2) -> "Matrix":
        return cls(rows, cols, (0,) * (rows * cols), p)

    @classmethod
    def identity(cls, n: int, p: int = 2) -> "Matrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)), p)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], n_rows: int, p: int = 2) -> "Matrix":
        cols = [list(c) for c in columns]
        return cls(n_rows, len(cols), tuple(cols[j][i] for i in range(n_rows) for j in range(len(cols))), p)

    # access ------------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
                      self.p)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def is_zero(self) -> bool:
        return not any(self.entries)

    # arithmetic --------------------------------------------------------------
    def __matmul__(self, other: "Matrix") -> "Matrix":
        return compose(self, other)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape or self.p != other.p:
            raise ShapeError("incompatible shapes")
        return Matrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)), self.p)

    def apply(self, v: Sequence[int]) -> tuple:
        if len(v) != self.cols:
            raise ShapeError("incompatible shapes")
        p = self.p
        return tuple(sum(self.entries[i * self.cols + j] * v[j] for j in range(self.cols)) % p
                     for i in range(self.rows))

    def __repr__(self):
        return f"Matrix({self.to_rows()}, p={self.p})"


def compose(A: Matrix, B: Matrix) -> Matrix:
    """Matrix product ``A @ B`` over GF(p)."""
    if A.cols != B.rows or A.p != B.p:
        raise ShapeError(f"incompatible shapes: {A.shape} @ {B.shape}")
    p, n, m, k = A.p, A.rows, B.cols, A.cols
    a, b = A.entries, B.entries
    out = []
    for i in range(n):
        arow = a[i * k:(i + 1) * k]
        for j in range(m):
            s = 0
            for t in range(k):
                if arow[t]:
                    s += arow[t] * b[t * m + j]
            out.append(s % p)
    return Matrix(n, m, tuple(out), p)


def hstack(blocks: Sequence[Matrix], rows: int, p: int = 2) -> Matrix:
    cols = []
    for B in blocks:
        if B.rows != rows:
            raise ShapeError("incompatible shapes")
        cols.extend(B.columns())
    return Matrix.from_columns(cols, rows, p)


def block_diag(A: Matrix, B: Matrix) -> Matrix:
    if A.p != B.p:
        raise ShapeError("mixed moduli")
    rows = [list(r) + [0] * B.cols for r in A.to_rows()]
    rows += [[0] * A.cols + list(r) for r in B.to_rows()]
    return Matrix.from_rows(rows, A.p, cols=A.cols + B.cols)


def _row_reduce(rows: list, ncols: int, p: int):
    """Reduced row echelon form in place; returns pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(A: Matrix) -> int:
    """Rank over GF(p) by Gaussian elimination."""
    rows = A.to_rows()
    return len(_row_reduce(rows, A.cols, A.p))


def membership(v: Sequence[int], columns: Matrix) -> Optional[tuple]:
    """Coefficients x with ``columns @ x == v``, or None if v is outside the column span."""
    if len(v) != columns.rows:
        raise ShapeError(f"vector length {len(v)} != {columns.rows} rows")
    p, n = columns.p, columns.cols
    aug = [list(columns.row(i)) + [v[i] % p] for i in range(columns.rows)]
    pivots = _row_reduce(aug, n + 1, p)
    if n in pivots:
        return None
    x = [0] * n
    for r, c in enumerate(pivots):
        x[c] = aug[r][n]
    return tuple(x)


def in_span(v: Sequence[int], columns: Matrix) -> bool:
    return membership(v, columns) is not None


def column_basis(A: Matrix) -> Matrix:
    """A matrix whose columns are a basis of the column space of A (chosen among A's columns)."""
    rows = A.to_rows()
    pivots = _row_reduce(rows, A.cols, A.p)
    return Matrix.from_columns([A.column(j) for j in pivots], A.rows, A.p)


def kernel_basis(A: Matrix) -> Matrix:
    """Columns spanning the null space of A (shape ``A.cols x nullity``)."""
    p = A.p
    rows = A.to_rows()
    pivots = _row_reduce(rows, A.cols, p)
    free = [c for c in range(A.cols) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * A.cols
        x[f] = 1
        for r, c in enumerate(pivots):
            x[c] = (-rows[r][f]) % p
        basis.append(x)
    return Matrix.from_columns(basis, A.cols, p)


def solve_columns(B: Matrix, Y: Matrix) -> Matrix:
    """X with ``B @ X == Y``; every column of Y must lie in the span of B."""
    cols = []
    for j in range(Y.cols):
        x = membership(Y.column(j), B)
        if x is None:
            raise ValueError(f"column {j} is not in the span")
        cols.append(x)
    return Matrix.from_columns(cols, B.cols, B.p)


def extend_basis(current: list, candidates: Iterable[Sequence[int]], n: int, p: int) -> tuple:
    """Greedily extend a list of independent vectors; returns (basis, added)."""
    basis = list(current)
    added = []
    for v in candidates:
        M = Matrix.from_columns(basis, n, p)
        if not in_span(v, M):
            basis.append(tuple(x % p for x in v))
            added.append(tuple(x % p for x in v))
    return basis, added


def annihilator(A: Matrix) -> Matrix:
    """Columns spanning the functionals vanishing on the column space of A.

    Functionals are written in the dual of the standard basis, so the result
    is ``kernel_basis(A.T)``.
    """
    return kernel_basis(A.transpose())


def all_vectors(n: int, p: int):
    """Every vector of GF(p)^n (for brute-force oracles on tiny spaces)."""
    if n == 0:
        yield ()
        return
    for head in range(p):
        for tail in all_vectors(n - 1, p):
            yield (head,) + tail


def complement_basis(N: Matrix) -> Matrix:
    """Columns completing the columns of N to a basis (greedy over standard vectors)."""
    n, p = N.rows, N.p
    std = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    _, added = extend_basis(column_basis(N).columns(), std, n, p)
    return Matrix.from_columns(added, n, p)


def restricted_annihilator(A: Matrix, N: Matrix, C: Matrix) -> Matrix:
    """Basis of ``Ann(col A)`` intersected with ``span C``, where ``span N + span C`` is the
    whole dual and ``span N`` lies inside ``Ann(col A)``: project along N onto C."""
    full = hstack([column_basis(N), C], C.rows, C.p)
    k = full.cols - C.cols
    proj = []
    for x in annihilator(A).columns():
        coords = membership(x, full)
        proj.append(C.apply(coords[k:]))
    return column_basis(Matrix.from_columns(proj, C.rows, C.p))
