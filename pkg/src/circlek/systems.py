"""Inductive systems of circle algebras with diagonal connecting maps.

A system is a finite prefix of stages and signature matrices, optionally
followed by a self-similar periodic tail: a cyclic list of signature
templates together with padding vectors.  The tail generates stages
forever through the size recurrence

    sizes_{next}[i] = sum_j a[i][j] * sizes_cur[j] + pad[i]

which keeps every connecting matrix valid by construction (the target
size is exactly the used capacity plus the padding).  Generation fails
only if a stage would acquire a summand of size zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebras import CircleAlgebra, amplify
from .homs import SignatureMatrix, SignaturePair, validate

__all__ = [
    "PeriodicTail",
    "InductiveSystem",
    "AFSystem",
    "SystemError",
    "generate_prefix",
    "materialize",
    "amplify_system",
]


class SystemError(ValueError):
    """Raised for inconsistent stage/map data or failed tail generation."""


@dataclass(frozen=True)
class PeriodicTail:
    """Cyclic signature templates plus one padding vector per step.

    ``templates[s]`` is the grid of signature pairs used at every tail
    step congruent to s; ``pads[s]`` has one non-negative entry per row
    of that template.  Template widths must chain cyclically and start
    from the width of the last prefix stage.
    """

    templates: tuple[tuple[tuple[SignaturePair, ...], ...], ...]
    pads: tuple[tuple[int, ...], ...]

    def __init__(self, templates, pads):
        tpls = tuple(
            tuple(
                tuple(e if isinstance(e, SignaturePair) else SignaturePair(*e) for e in row)
                for row in grid
            )
            for grid in templates
        )
        if not tpls:
            raise SystemError("a periodic tail needs at least one template")
        pad_tuple = tuple(tuple(int(x) for x in vec) for vec in pads)
        if len(pad_tuple) != len(tpls):
            raise SystemError(
                f"{len(pad_tuple)} pad vectors for {len(tpls)} templates"
            )
        for s, (grid, pad) in enumerate(zip(tpls, pad_tuple)):
            if not grid:
                raise SystemError(f"template {s} has no rows")
            widths = {len(row) for row in grid}
            if len(widths) != 1:
                raise SystemError(f"template {s} has ragged rows")
            if len(pad) != len(grid):
                raise SystemError(
                    f"pad vector {s} has {len(pad)} entries, template has "
                    f"{len(grid)} rows"
                )
            if any(x < 0 for x in pad):
                raise SystemError(f"pad vector {s} has a negative entry")
        for s in range(len(tpls)):
            rows_here = len(tpls[s])
            cols_next = len(tpls[(s + 1) % len(tpls)][0])
            if rows_here != cols_next:
                raise SystemError(
                    f"template {s} produces {rows_here} summands but template "
                    f"{(s + 1) % len(tpls)} consumes {cols_next}"
                )
        object.__setattr__(self, "templates", tpls)
        object.__setattr__(self, "pads", pad_tuple)

    @property
    def period(self) -> int:
        return len(self.templates)

    def width(self, phase: int) -> int:
        """Number of summand classes at the given phase."""
        return len(self.templates[phase % self.period][0])

    def a_matrix(self, phase: int) -> list[list[int]]:
        return [[e.a for e in row] for row in self.templates[phase % self.period]]

    def step(self, phase: int, sizes: tuple[int, ...]) -> tuple[tuple[int, ...], "SignatureMatrix"]:
        """One tail step from the given phase: next sizes and the map."""
        grid = self.templates[phase % self.period]
        pad = self.pads[phase % self.period]
        if len(grid[0]) != len(sizes):
            raise SystemError(
                f"template {phase % self.period} consumes {len(grid[0])} summands, "
                f"stage has {len(sizes)}"
            )
        new_sizes = tuple(
            sum(e.a * n for e, n in zip(row, sizes)) + pad[i]
            for i, row in enumerate(grid)
        )
        if any(n < 1 for n in new_sizes):
            raise SystemError(
                f"tail step at phase {phase % self.period} generates a summand "
                f"of size 0 (sizes {new_sizes}); the size rule violates validity"
            )
        source = CircleAlgebra(sizes)
        target = CircleAlgebra(new_sizes)
        return new_sizes, SignatureMatrix(source=source, target=target, entries=grid)


@dataclass(frozen=True)
class InductiveSystem:
    """Finite prefix of circle algebras and maps, plus an optional tail."""

    stages: tuple[CircleAlgebra, ...]
    maps: tuple[SignatureMatrix, ...]
    tail: PeriodicTail | None = None

    def __init__(self, stages, maps, tail=None):
        stage_tuple = tuple(
            s if isinstance(s, CircleAlgebra) else CircleAlgebra(s) for s in stages
        )
        map_tuple = tuple(maps)
        if not stage_tuple:
            raise SystemError("at least one stage required")
        if len(map_tuple) != len(stage_tuple) - 1:
            raise SystemError(
                f"{len(stage_tuple)} stages need {len(stage_tuple) - 1} maps, "
                f"got {len(map_tuple)}"
            )
        for p, mat in enumerate(map_tuple):
            if mat.source != stage_tuple[p]:
                raise SystemError(
                    f"map {p} has source sizes {mat.source.sizes}, stage {p} "
                    f"has {stage_tuple[p].sizes}"
                )
            if mat.target != stage_tuple[p + 1]:
                raise SystemError(
                    f"map {p} has target sizes {mat.target.sizes}, stage {p + 1} "
                    f"has {stage_tuple[p + 1].sizes}"
                )
            problems = validate(mat)
            if problems:
                raise SystemError(
                    f"map {p} is invalid: " + "; ".join(v.detail for v in problems)
                )
        if tail is not None:
            if tail.width(0) != len(stage_tuple[-1]):
                raise SystemError(
                    f"tail consumes {tail.width(0)} summands, last prefix stage "
                    f"has {len(stage_tuple[-1])}"
                )
        object.__setattr__(self, "stages", stage_tuple)
        object.__setattr__(self, "maps", map_tuple)
        object.__setattr__(self, "tail", tail)

    @property
    def prefix_length(self) -> int:
        return len(self.stages)


def materialize(system: InductiveSystem, count: int) -> tuple[list[CircleAlgebra], list[SignatureMatrix]]:
    """First ``count`` stages (and their maps), unrolling the tail as needed.

    Tail generation is deterministic, so materializing a longer range
    extends a shorter one without rewriting it.
    """
    stages = list(system.stages[:count])
    maps = list(system.maps[: max(0, count - 1)])
    if len(stages) >= count:
        return stages, maps
    if system.tail is None:
        raise SystemError(
            f"cannot materialize {count} stages: prefix has "
            f"{len(system.stages)} and there is no tail"
        )
    sizes = system.stages[-1].sizes
    phase = 0
    while len(stages) < count:
        sizes, mat = system.tail.step(phase, sizes)
        maps.append(mat)
        stages.append(CircleAlgebra(sizes))
        phase += 1
    return stages, maps


def generate_prefix(system: InductiveSystem, count: int) -> InductiveSystem:
    """Unroll the tail into an explicit prefix of at least ``count`` stages.

    The result has no tail.  For a tailless system, ``count`` may not
    exceed the existing prefix.
    """
    if count < 1:
        raise SystemError(f"prefix length must be >= 1, got {count}")
    if system.tail is None:
        if count > len(system.stages):
            raise SystemError(
                f"cannot extend a tailless system from {len(system.stages)} "
                f"to {count} stages"
            )
        return InductiveSystem(stages=system.stages, maps=system.maps, tail=None)
    count = max(count, len(system.stages))
    stages, maps = materialize(system, count)
    return InductiveSystem(stages=tuple(stages), maps=tuple(maps), tail=None)


def amplify_system(system: InductiveSystem, factor: int) -> InductiveSystem:
    """Tensor every stage with a matrix algebra of the given size.

    Signature matrices keep their entries (amplification scales sizes,
    not multiplicities); tail pads scale by the factor so the generated
    sizes match the amplified recurrence.
    """
    if factor < 1:
        raise SystemError(f"amplification factor must be >= 1, got {factor}")
    stages = tuple(amplify(s, factor) for s in system.stages)
    maps = tuple(
        SignatureMatrix(
            source=amplify(mat.source, factor),
            target=amplify(mat.target, factor),
            entries=mat.entries,
        )
        for mat in system.maps
    )
    tail = system.tail
    if tail is not None:
        tail = PeriodicTail(
            templates=tail.templates,
            pads=tuple(tuple(factor * x for x in vec) for vec in tail.pads),
        )
    return InductiveSystem(stages=stages, maps=maps, tail=tail)


@dataclass(frozen=True)
class AFSystem:
    """Quotient system of finite-dimensional algebras.

    Stages carry only sizes; connecting maps are multiplicity matrices
    (the winding data dies under evaluation at the base point).  The tail
    mirrors the circle system's: multiplicity templates plus pads.
    """

    sizes: tuple[tuple[int, ...], ...]
    maps: tuple[tuple[tuple[int, ...], ...], ...]
    tail_templates: tuple[tuple[tuple[int, ...], ...], ...] | None = None
    tail_pads: tuple[tuple[int, ...], ...] | None = None
