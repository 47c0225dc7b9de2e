"""Exact rational matrices with fraction-free rank computation.

Entries are ``fractions.Fraction`` (arbitrary-precision, always reduced).
Rank is computed over the rationals by clearing denominators row-wise and
running one-step fraction-free (Bareiss) elimination on integers, with
deterministic pivoting: first nonzero entry in row-major order.  Empty
matrices (0 rows and/or 0 columns) are legal and compose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

__all__ = ["RatMatrix", "rank"]


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __init__(self, entries: Iterable[Iterable], rows: int | None = None, cols: int | None = None):
        grid = tuple(tuple(Fraction(x) for x in row) for row in entries)
        r = len(grid) if rows is None else int(rows)
        if grid:
            widths = {len(row) for row in grid}
            if len(widths) != 1:
                raise ValueError(f"ragged matrix rows: widths {sorted(widths)}")
            c = widths.pop()
            if cols is not None and cols != c:
                raise ValueError(f"declared cols {cols} != actual {c}")
        else:
            c = 0 if cols is None else int(cols)
        if r != len(grid):
            raise ValueError(f"declared rows {r} != actual {len(grid)}")
        object.__setattr__(self, "rows", r)
        object.__setattr__(self, "cols", c)
        object.__setattr__(self, "entries", grid)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls([[Fraction(0)] * cols for _ in range(rows)], rows=rows, cols=cols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(
            [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)],
            rows=n,
            cols=n,
        )

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"shape mismatch: ({self.rows}x{self.cols}) @ ({other.rows}x{other.cols})"
            )
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Fraction(0)
                for k in range(self.cols):
                    acc += self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return RatMatrix(out, rows=self.rows, cols=other.cols)

    def power(self, exponent: int) -> "RatMatrix":
        """Matrix power; requires a square matrix and exponent >= 0."""
        if self.rows != self.cols:
            raise ValueError(f"power of a non-square {self.rows}x{self.cols} matrix")
        if exponent < 0:
            raise ValueError("negative exponent")
        result = RatMatrix.identity(self.rows)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result @ base
            base_needed = e >> 1
            if base_needed:
                base = base @ base
            e = base_needed
        return result

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)


def _integer_rows(matrix: RatMatrix) -> list[list[int]]:
    # Row scaling by the lcm of denominators preserves rank.
    out = []
    for row in matrix.entries:
        scale = 1
        for x in row:
            scale = scale * x.denominator // math.gcd(scale, x.denominator)
        out.append([int(x * scale) for x in row])
    return out


def rank(matrix: RatMatrix) -> int:
    """Exact rank over the rationals.

    One-step fraction-free elimination: after eliminating with pivot p,
    every updated entry is divided by the previous pivot; the division is
    exact (entries stay k x k minors of the integer matrix).
    """
    m = _integer_rows(matrix)
    nrows, ncols = matrix.rows, matrix.cols
    r = 0
    prev = 1
    for col in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if m[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            m[r], m[pivot_row] = m[pivot_row], m[r]
        p = m[r][col]
        for i in range(r + 1, nrows):
            f = m[i][col]
            for j in range(col, ncols):
                num = m[i][j] * p - m[r][j] * f
                q, rem = divmod(num, prev)
                assert rem == 0, "fraction-free elimination lost exact divisibility"
                m[i][j] = q
        prev = p
        r += 1
        if r == nrows:
            break
    return r
