"""Exact integer matrices.

Entries are plain Python ints, so nothing overflows and nothing is ever
rounded.  Vectors are tuples of ints and are treated as columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    entries: tuple[tuple[int, ...], ...]
    ncols: int

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            if not entries:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(entries[0])
        for row in entries:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(((1 if i == j else 0) for j in range(n)) for i in range(n)) if n else cls((), 0)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(((0,) * cols for _ in range(rows)), cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
        return cls((tuple(c[i] for c in columns) for i in range(nrows)), len(columns))

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.ncols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix.from_columns(self.entries, self.ncols)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix(
            (tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.ncols,
        )

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix(
            (tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.ncols,
        )

    def __neg__(self) -> IntMatrix:
        return IntMatrix((tuple(-a for a in r) for r in self.entries), self.ncols)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix((tuple(c * a for a in r) for r in self.entries), self.ncols)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            return IntMatrix(
                (tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries),
                other.ncols,
            )
        v = tuple(other)
        if len(v) != self.ncols:
            raise ValueError(f"shape mismatch {self.shape} @ vector of length {len(v)}")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    def __pow__(self, n: int) -> IntMatrix:
        if not self.is_square():
            raise ValueError("only square matrices can be powered")
        if n < 0:
            raise ValueError("negative powers are not integral in general")
        result = IntMatrix.identity(self.nrows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def left_apply(self, covector: Sequence[int]) -> Vector:
        """Row vector times matrix."""
        if len(covector) != self.nrows:
            raise ValueError("shape mismatch")
        return tuple(sum(c * r[j] for c, r in zip(covector, self.entries)) for j in range(self.ncols))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
        return IntMatrix((tuple(self.entries[i][j] for j in cols) for i in rows), len(cols))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def is_diagonal(self) -> bool:
        return all(a == 0 for i, r in enumerate(self.entries) for j, a in enumerate(r) if i != j)

    def diagonal(self) -> Vector:
        return tuple(self.entries[i][i] for i in range(min(self.shape)))

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return 1
        a = [list(r) for r in self.entries]
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

    def rank(self) -> int:
        return len(_rational_row_echelon(self))

    def charpoly(self) -> list[int]:
        """Characteristic polynomial det(xI - A), highest degree first.

        Faddeev-LeVerrier; every division below is exact over the integers.
        """
        if not self.is_square():
            raise ValueError("characteristic polynomial of a non-square matrix")
        n = self.nrows
        coeffs = [1]
        aux = IntMatrix.zeros(n, n)
        eye = IntMatrix.identity(n)
        for k in range(1, n + 1):
            aux = self @ aux + eye.scale(coeffs[-1])
            prod = self @ aux
            trace = sum(prod.diagonal())
            assert trace % k == 0
            coeffs.append(-trace // k)
        return coeffs

    def _same_shape(self, other: IntMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r})"


def _rational_row_echelon(m: IntMatrix) -> list[list[Fraction]]:
    rows = [[Fraction(a) for a in r] for r in m.entries]
    out: list[list[Fraction]] = []
    col = 0
    while rows and col < m.ncols:
        pivot = next((r for r in rows if r[col] != 0), None)
        if pivot is None:
            col += 1
            continue
        rows.remove(pivot)
        rows = [[a - r[col] / pivot[col] * b for a, b in zip(r, pivot)] for r in rows]
        out.append(pivot)
        col += 1
    return out


def solve_exact(a: IntMatrix, b: IntMatrix) -> list[list[Fraction]]:
    """Solve a @ x = b over the rationals for a of full column rank.

    Raises ValueError when the system is inconsistent.
    """
    n, k = a.shape
    aug = [[Fraction(x) for x in a.row(i)] + [Fraction(x) for x in b.row(i)] for i in range(n)]
    pivots = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if p is None:
            raise ValueError("matrix does not have full column rank")
        aug[r], aug[p] = aug[p], aug[r]
        piv = aug[r][c]
        aug[r] = [x / piv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, n):
        if any(x != 0 for x in aug[i][k:]):
            raise ValueError("inconsistent system")
    return [aug[i][k:] for i in range(k)]
