"""Homomorphisms between circle algebras at the data-tuple level.

A single block describes a map between one source summand and one target
summand: a multiplicity, a permutation matching path endpoints, and the
paths themselves.  The normalization pipeline turns such a block into a
diagonal block (loops through the base point, described by winding
numbers alone):

* the permutation is removed cycle by cycle, concatenating the paths of
  each cycle into one loop (total lift = sum of lifts) plus constant
  loops;
* phases are dropped, leaving pure power loops.

Both steps preserve the multiplicity, and the surviving data is exactly
the signature (multiplicity, total winding) that drives the rational
K-group machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebras import CircleAlgebra
from .paths import CirclePath, ENDPOINT_TOL, lift_increment

WINDING_INT_TOL = 1e-6

__all__ = [
    "TypeABlock",
    "DiagonalBlock",
    "SignaturePair",
    "SignatureMatrix",
    "BlockError",
    "permutation_cycles",
    "reduce_to_diagonal",
    "signature_of",
    "compose",
    "identity_signature",
    "validate",
    "Violation",
]


class BlockError(ValueError):
    """Raised for inconsistent block data (endpoints, closure, shapes)."""


def permutation_cycles(perm: tuple[int, ...]) -> list[list[int]]:
    """Disjoint cycles of a permutation given as a tuple of 0-based images.

    Cycles are listed by their smallest element, each cycle starting at
    that element; fixed points appear as singleton cycles.
    """
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise BlockError(f"not a permutation of 0..{n - 1}: {perm}")
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cycle = []
        p = start
        while not seen[p]:
            seen[p] = True
            cycle.append(p)
            p = perm[p]
        cycles.append(cycle)
    return cycles


@dataclass(frozen=True)
class TypeABlock:
    """Data tuple of a one-summand-to-one-summand map.

    ``permutation`` sends slot p to the slot whose path starts where path
    p ends: paths[perm[p]](0) == paths[p](1).  The connecting unitary
    path is not stored; the numeric realizer synthesizes a canonical one,
    and ``has_unitary_path`` merely witnesses that some path was part of
    the original data.
    """

    source_size: int
    target_size: int
    multiplicity: int
    permutation: tuple[int, ...]
    paths: tuple[CirclePath, ...]
    has_unitary_path: bool = True

    def __init__(self, source_size, target_size, multiplicity, permutation,
                 paths, has_unitary_path=True):
        a = int(multiplicity)
        if a < 0:
            raise BlockError(f"multiplicity must be >= 0, got {a}")
        if a * int(source_size) > int(target_size):
            raise BlockError(
                f"block does not fit: {a} copies of size {source_size} "
                f"exceed target size {target_size}"
            )
        perm = tuple(int(p) for p in permutation)
        if len(perm) != a:
            raise BlockError(f"permutation has {len(perm)} slots, multiplicity is {a}")
        permutation_cycles(perm)  # validates bijectivity
        path_tuple = tuple(paths)
        if len(path_tuple) != a:
            raise BlockError(f"{len(path_tuple)} paths given, multiplicity is {a}")
        for p in range(a):
            start = path_tuple[perm[p]].start()
            end = path_tuple[p].end()
            if abs(start - end) > ENDPOINT_TOL:
                raise BlockError(
                    f"endpoint mismatch: path {perm[p]} starts at {start!r} "
                    f"but path {p} ends at {end!r}"
                )
        object.__setattr__(self, "source_size", int(source_size))
        object.__setattr__(self, "target_size", int(target_size))
        object.__setattr__(self, "multiplicity", a)
        object.__setattr__(self, "permutation", perm)
        object.__setattr__(self, "paths", path_tuple)
        object.__setattr__(self, "has_unitary_path", bool(has_unitary_path))


@dataclass(frozen=True)
class DiagonalBlock:
    """Diagonal form: power loops through the base point, windings only."""

    source_size: int
    target_size: int
    multiplicity: int
    windings: tuple[int, ...]

    def __init__(self, source_size, target_size, multiplicity, windings):
        a = int(multiplicity)
        if a < 0:
            raise BlockError(f"multiplicity must be >= 0, got {a}")
        if a * int(source_size) > int(target_size):
            raise BlockError(
                f"block does not fit: {a} copies of size {source_size} "
                f"exceed target size {target_size}"
            )
        w = tuple(int(b) for b in windings)
        if len(w) != a:
            raise BlockError(f"{len(w)} windings given, multiplicity is {a}")
        object.__setattr__(self, "source_size", int(source_size))
        object.__setattr__(self, "target_size", int(target_size))
        object.__setattr__(self, "multiplicity", a)
        object.__setattr__(self, "windings", w)


def reduce_to_diagonal(block: TypeABlock) -> DiagonalBlock:
    """Normalize a block to diagonal form, preserving the multiplicity.

    Each permutation cycle concatenates to a single loop whose winding is
    the (rounded) sum of the member paths' lifts; the other slots of the
    cycle become constant loops.  Endpoint matching guarantees the sum is
    an integer; a sum farther than 1e-6 from an integer signals
    inconsistent path data.
    """
    windings = []
    for cycle in permutation_cycles(block.permutation):
        total = sum(lift_increment(block.paths[p]) for p in cycle)
        nearest = round(total)
        if abs(total - nearest) > WINDING_INT_TOL:
            raise BlockError(
                f"cycle {tuple(p + 1 for p in cycle)} has total lift {total!r}, "
                "not near an integer; endpoint data is inconsistent"
            )
        windings.append(int(nearest))
        windings.extend([0] * (len(cycle) - 1))
    return DiagonalBlock(
        source_size=block.source_size,
        target_size=block.target_size,
        multiplicity=block.multiplicity,
        windings=tuple(windings),
    )


@dataclass(frozen=True)
class SignaturePair:
    """Multiplicity and total winding of one diagonal block."""

    a: int
    b: int

    def __init__(self, a: int, b: int):
        a, b = int(a), int(b)
        if a < 0:
            raise BlockError(f"multiplicity must be >= 0, got {a}")
        if a == 0 and b != 0:
            raise BlockError(f"a=0 requires b=0, got b={b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __mul__(self, other: "SignaturePair") -> "SignaturePair":
        return SignaturePair(self.a * other.a, self.b * other.b)


def signature_of(block: DiagonalBlock) -> SignaturePair:
    """Signature (multiplicity, sum of windings) of a diagonal block."""
    return SignaturePair(block.multiplicity, sum(block.windings))


@dataclass(frozen=True)
class SignatureMatrix:
    """Grid of signature pairs: rows index target summands, columns source."""

    source: CircleAlgebra
    target: CircleAlgebra
    entries: tuple[tuple[SignaturePair, ...], ...]

    def __init__(self, source: CircleAlgebra, target: CircleAlgebra, entries):
        grid = tuple(
            tuple(e if isinstance(e, SignaturePair) else SignaturePair(*e) for e in row)
            for row in entries
        )
        if len(grid) != len(target):
            raise BlockError(
                f"{len(grid)} rows for a target with {len(target)} summands"
            )
        for i, row in enumerate(grid):
            if len(row) != len(source):
                raise BlockError(
                    f"row {i} has {len(row)} entries for a source with "
                    f"{len(source)} summands"
                )
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "entries", grid)

    def pair(self, i: int, j: int) -> SignaturePair:
        return self.entries[i][j]

    def a_part(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(e.a for e in row) for row in self.entries)

    def b_part(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(e.b for e in row) for row in self.entries)


@dataclass(frozen=True)
class Violation:
    """One failed signature-matrix invariant, with its grid location."""

    kind: str  # "row-capacity" or "zero-multiplicity"
    row: int
    col: int | None
    detail: str


def validate(matrix, source_sizes=None, target_sizes=None) -> list[Violation]:
    """Check both signature-matrix invariants; empty list means valid.

    Accepts either a SignatureMatrix or a raw grid of (a, b) integer
    pairs together with explicit source/target sizes (the form documents
    arrive in, where the zero-multiplicity rule can still be broken).

    Row capacity: the multiplicities of row i, weighted by source sizes,
    must fit inside target summand i.  Zero multiplicity: an entry with
    a == 0 must have b == 0.
    """
    if isinstance(matrix, SignatureMatrix):
        grid = [[(e.a, e.b) for e in row] for row in matrix.entries]
        source_sizes = matrix.source.sizes
        target_sizes = matrix.target.sizes
    else:
        grid = [[(int(a), int(b)) for a, b in row] for row in matrix]
        if source_sizes is None or target_sizes is None:
            raise BlockError("raw grids need explicit source and target sizes")
    out = []
    for i, row in enumerate(grid):
        used = sum(a * n for (a, _), n in zip(row, source_sizes))
        cap = target_sizes[i]
        if used > cap:
            out.append(
                Violation(
                    kind="row-capacity",
                    row=i,
                    col=None,
                    detail=f"row {i} uses {used} > target size {cap}",
                )
            )
        for j, (a, b) in enumerate(row):
            if a == 0 and b != 0:
                out.append(
                    Violation(
                        kind="zero-multiplicity",
                        row=i,
                        col=j,
                        detail=f"entry ({i},{j}) has a=0 but b={b}",
                    )
                )
            if a < 0:
                out.append(
                    Violation(
                        kind="zero-multiplicity",
                        row=i,
                        col=j,
                        detail=f"entry ({i},{j}) has negative multiplicity a={a}",
                    )
                )
    return out


def compose(second: SignatureMatrix, first: SignatureMatrix) -> SignatureMatrix:
    """Signature matrix of a composite map.

    Matrix product in the pair semiring: pairs multiply componentwise
    (multiplicities multiply, windings multiply) and add componentwise.
    Requires ``first.target == second.source``.
    """
    if first.target != second.source:
        raise BlockError(
            f"cannot compose: middle algebras differ "
            f"({first.target.sizes} vs {second.source.sizes})"
        )
    K = len(first.source)
    L = len(second.target)
    mid = len(second.source)
    grid = []
    for i in range(L):
        row = []
        for j in range(K):
            a = sum(second.entries[i][k].a * first.entries[k][j].a for k in range(mid))
            b = sum(second.entries[i][k].b * first.entries[k][j].b for k in range(mid))
            row.append(SignaturePair(a, b))
        grid.append(tuple(row))
    return SignatureMatrix(source=first.source, target=second.target, entries=tuple(grid))


def identity_signature(algebra: CircleAlgebra) -> SignatureMatrix:
    """Signature matrix of the identity map on ``algebra``."""
    n = len(algebra)
    grid = tuple(
        tuple(SignaturePair(1, 1) if i == j else SignaturePair(0, 0) for j in range(n))
        for i in range(n)
    )
    return SignatureMatrix(source=algebra, target=algebra, entries=grid)
