"""Shared generators and independent oracles for randomized suites."""

import random

from circlek.fm import fm_induced
from circlek.ratmat import RatMatrix, rank
from circlek.systems import InductiveSystem, PeriodicTail, generate_prefix


def random_periodic_system(
    rng: random.Random,
    max_classes: int = 3,
    max_period: int = 2,
    a_max: int = 3,
    b_max: int = 3,
    pad_max: int = 2,
    bounded_bias: float = 0.0,
) -> InductiveSystem:
    """Random single-stage-prefix system with a valid periodic tail.

    Every generated row has positive multiplicity or positive pad, so
    sizes stay >= 1 at every stage.  ``bounded_bias`` is the probability
    that a row is size-preserving (a single multiplicity-1 entry, no
    pad), which seeds bounded and persistent summand classes.
    """
    period = rng.randint(1, max_period)
    widths = [rng.randint(1, max_classes) for _ in range(period)]
    templates = []
    pads = []
    for s in range(period):
        rows = widths[(s + 1) % period]
        cols = widths[s]
        grid = []
        pad = []
        for _ in range(rows):
            if rng.random() < bounded_bias:
                keep = rng.randrange(cols)
                row = [
                    (1, rng.randint(-b_max, b_max)) if j == keep else (0, 0)
                    for j in range(cols)
                ]
                grid.append(tuple(row))
                pad.append(0)
                continue
            row = []
            for _ in range(cols):
                a = 0 if rng.random() < 0.4 else rng.randint(0, a_max)
                b = rng.randint(-b_max, b_max) if a else 0
                row.append((a, b))
            p = rng.randint(0, pad_max)
            if all(a == 0 for a, _ in row) and p == 0:
                p = rng.randint(1, pad_max)
            grid.append(tuple(row))
            pad.append(p)
        templates.append(tuple(grid))
        pads.append(tuple(pad))
    start = tuple(rng.randint(1, 3) for _ in range(widths[0]))
    return InductiveSystem(
        stages=(start,),
        maps=(),
        tail=PeriodicTail(templates=tuple(templates), pads=tuple(pads)),
    )


def settled_dim(tailless: InductiveSystem, m: int, window: int = 3) -> int:
    """Exact-or-plateau dimension of a tailless tower in degree m.

    Prefers the stabilized report; otherwise reads the plateau of the
    image-chain ranks over the middle band and insists it has settled.
    """
    from circlek.colim import fm_of_system

    report = fm_of_system(tailless, m, window=window)
    if report.exact:
        return report.dimension
    mats = [fm_induced(mat, m) for mat in tailless.maps]
    ranks = suffix_composite_ranks(mats)
    band = ranks[len(ranks) // 3 : (2 * len(ranks)) // 3]
    if len(set(band)) != 1:
        raise AssertionError(f"tower did not settle: middle-band ranks {band}")
    return band[0]


def suffix_composite_ranks(mats: list[RatMatrix]) -> list[int]:
    """rank of (last map) o ... o (map p), for each p; plus the last dim."""
    ranks = [0] * (len(mats) + 1)
    ranks[len(mats)] = mats[-1].rows
    comp = None
    for p in range(len(mats) - 1, -1, -1):
        comp = mats[p] if comp is None else comp @ mats[p]
        ranks[p] = rank(comp)
    return ranks


def brute_force_fm_dim(system: InductiveSystem, m: int, stages: int = 50) -> int:
    """Truncation oracle: image-chain ranks in a ``stages``-stage unrolling.

    The rank of the full composite from stage p plateaus over the middle
    band of stages once liveness and rank decay have both settled; the
    plateau value is the limit dimension.  Raises if the band has not
    settled (enlarge the truncation).
    """
    unrolled = generate_prefix(system, stages)
    mats = [fm_induced(mat, m) for mat in unrolled.maps]
    ranks = suffix_composite_ranks(mats)
    band = ranks[stages // 3 : (2 * stages) // 3]
    if len(set(band)) != 1:
        raise AssertionError(
            f"truncation oracle did not settle: middle-band ranks {band}"
        )
    return band[0]


def brute_force_matrix_colim(mats: list[RatMatrix], stages: int = 50) -> int:
    """Same image-chain oracle for a raw periodic matrix tower.

    ``mats`` is one period of square-chaining matrices; the tower repeats
    it until ``stages`` maps are materialized.
    """
    tower = []
    while len(tower) < stages:
        tower.extend(mats)
    tower = tower[:stages]
    ranks = suffix_composite_ranks(tower)
    band = ranks[stages // 3 : (2 * stages) // 3]
    if len(set(band)) != 1:
        raise AssertionError(
            f"truncation oracle did not settle: middle-band ranks {band}"
        )
    return band[0]
