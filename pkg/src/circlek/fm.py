"""Rational nonstable K-group dimensions and induced maps.

For a finite-dimensional algebra the degree-m group contributes one
rational coordinate per summand of size n exactly when m is odd and
m <= 2n - 1.  For a circle algebra both parities contribute (the circle
direction shifts the degree by one), so the liveness condition is just
m <= 2n - 1.

A diagonal homomorphism induces, in each degree, multiplication by its
signature matrix: the multiplicity part acts on odd degrees and the
winding part on even degrees.  Coordinates whose summand is too small
("dead") are removed from the matrix shape entirely, never zero-padded.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebras import CircleAlgebra, FiniteDimAlgebra
from .homs import BlockError, SignatureMatrix, validate
from .ratmat import RatMatrix

__all__ = [
    "FmSpace",
    "fm_finite_dim",
    "fm_circle",
    "live_circle",
    "live_finite_dim",
    "fm_induced",
    "fm_induced_finite_dim",
]


@dataclass(frozen=True)
class FmSpace:
    """Degree-m dimension vector: one 0/1 per summand."""

    m: int
    summand_dims: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.summand_dims)


def _check_degree(m: int) -> None:
    if m < 1:
        raise ValueError(f"degree must be >= 1, got {m}")


def live_finite_dim(size: int, m: int) -> bool:
    return m % 2 == 1 and m <= 2 * size - 1


def live_circle(size: int, m: int) -> bool:
    return m <= 2 * size - 1


def fm_finite_dim(algebra: FiniteDimAlgebra, m: int) -> FmSpace:
    """Degree-m dimension vector of a finite-dimensional algebra."""
    _check_degree(m)
    dims = tuple(1 if live_finite_dim(n, m) else 0 for n in algebra.sizes)
    return FmSpace(m=m, summand_dims=dims)


def fm_circle(algebra: CircleAlgebra, m: int) -> FmSpace:
    """Degree-m dimension vector of a circle algebra."""
    _check_degree(m)
    dims = tuple(1 if live_circle(n, m) else 0 for n in algebra.sizes)
    return FmSpace(m=m, summand_dims=dims)


def fm_induced(matrix: SignatureMatrix, m: int) -> RatMatrix:
    """Exact matrix induced in degree m by a signature matrix.

    Rows and columns range over the live coordinates of target and source
    (in summand order); the entry is the multiplicity for odd m and the
    winding sum for even m.
    """
    _check_degree(m)
    problems = validate(matrix)
    if problems:
        raise BlockError(
            "invalid signature matrix: " + "; ".join(v.detail for v in problems)
        )
    live_src = [j for j, n in enumerate(matrix.source.sizes) if live_circle(n, m)]
    live_tgt = [i for i, n in enumerate(matrix.target.sizes) if live_circle(n, m)]
    odd = m % 2 == 1
    grid = [
        [
            (matrix.entries[i][j].a if odd else matrix.entries[i][j].b)
            for j in live_src
        ]
        for i in live_tgt
    ]
    return RatMatrix(grid, rows=len(live_tgt), cols=len(live_src))


def fm_induced_finite_dim(
    source: FiniteDimAlgebra,
    target: FiniteDimAlgebra,
    multiplicities: tuple[tuple[int, ...], ...],
    m: int,
) -> RatMatrix:
    """Degree-m matrix induced by a multiplicity matrix between
    finite-dimensional algebras (zero-dimensional for even m)."""
    _check_degree(m)
    live_src = [j for j, n in enumerate(source.sizes) if live_finite_dim(n, m)]
    live_tgt = [i for i, n in enumerate(target.sizes) if live_finite_dim(n, m)]
    grid = [[multiplicities[i][j] for j in live_src] for i in live_tgt]
    return RatMatrix(grid, rows=len(live_tgt), cols=len(live_src))
