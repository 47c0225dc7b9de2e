"""Circle algebras and finite-dimensional algebras as pure size data.

A direct sum of matrix algebras (with or without a circle of continuous
parameters tensored on) is modelled by the ordered list of its matrix
sizes.  Summands are identified by position, never by size, so duplicate
sizes stay distinguishable.  All values are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "CircleAlgebra",
    "FiniteDimAlgebra",
    "quotient_at_one",
    "amplify",
    "min_dim",
    "split_by_size",
]


@dataclass(frozen=True)
class CircleAlgebra:
    """Direct sum of circle-of-matrices summands, one size per summand.

    ``sizes`` may be empty: the zero algebra is a first-class value.
    """

    sizes: tuple[int, ...]

    def __init__(self, sizes):
        sizes = tuple(int(n) for n in sizes)
        for k, n in enumerate(sizes):
            if n < 1:
                raise ValueError(f"summand size must be >= 1, got {n} at index {k}")
        object.__setattr__(self, "sizes", sizes)

    def __len__(self) -> int:
        return len(self.sizes)


@dataclass(frozen=True)
class FiniteDimAlgebra:
    """Direct sum of matrix algebras, one size per summand."""

    sizes: tuple[int, ...]

    def __init__(self, sizes):
        sizes = tuple(int(n) for n in sizes)
        for k, n in enumerate(sizes):
            if n < 1:
                raise ValueError(f"summand size must be >= 1, got {n} at index {k}")
        object.__setattr__(self, "sizes", sizes)

    def __len__(self) -> int:
        return len(self.sizes)


def quotient_at_one(algebra: CircleAlgebra) -> FiniteDimAlgebra:
    """Evaluate every summand at the base point of the circle.

    Evaluation kills the circle of parameters and keeps the matrix part,
    so the size list is unchanged.
    """
    return FiniteDimAlgebra(algebra.sizes)


def amplify(algebra: CircleAlgebra, factor: int) -> CircleAlgebra:
    """Tensor with a full matrix algebra of the given size.

    Every summand size is multiplied by ``factor``; ``factor`` must be >= 1.
    """
    if factor < 1:
        raise ValueError(f"amplification factor must be >= 1, got {factor}")
    return CircleAlgebra(tuple(factor * n for n in algebra.sizes))


def min_dim(algebra: CircleAlgebra | FiniteDimAlgebra) -> int | float:
    """Smallest summand size; ``math.inf`` for the zero algebra.

    The infinite value keeps pipelines total when orphan elimination
    empties a stage.
    """
    if not algebra.sizes:
        return math.inf
    return min(algebra.sizes)


def split_by_size(
    algebra: CircleAlgebra | FiniteDimAlgebra, size: int
) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Partition summand indices into (below, at, above) the given size.

    Indices are 0-based positions into ``sizes``; the three tuples are
    disjoint and cover every index.
    """
    below = tuple(j for j, n in enumerate(algebra.sizes) if n < size)
    at = tuple(j for j, n in enumerate(algebra.sizes) if n == size)
    above = tuple(j for j, n in enumerate(algebra.sizes) if n > size)
    return below, at, above
