"""Direct-limit dimensions of towers of exact rational matrices.

The dimension of the colimit of Q^{k_0} -> Q^{k_1} -> ... equals the
limit of the per-stage eventual ranks: stage p contributes the rank its
composites settle at, and those contributions are non-decreasing in p.

Two regimes:

* Periodic continuation (the last ``tail_period`` matrices repeat
  forever): the per-period composite is a fixed square matrix T, ranks
  of its powers stabilize by the D-th power (D = its size), and the
  colimit dimension is exactly rank(T^D).

* Finite prefix with no tail: the answer is an extrapolation.  A stage
  whose composite-rank trace ends in ``window`` equal values counts as
  stabilized; if at least ``window`` stages stabilize at one common
  value the report is marked exact at that value, otherwise an interval
  [best stabilized value, best retained rank] is returned with
  exact=False.

``fm_of_system`` ties this to inductive systems: for a periodic tail it
first finds, with exact integer certificates, a stage from which every
summand's degree-m liveness repeats with a fixed super-period, then
feeds the induced matrices of one super-period to the periodic rank
computation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fm import fm_circle, fm_induced
from .ratmat import RatMatrix, rank
from .recurrence import StabilizationError, TailAnalysis, analyze_tail
from .systems import InductiveSystem, generate_prefix

__all__ = [
    "ColimitReport",
    "colim_dim",
    "fm_of_system",
    "StabilizedTower",
    "build_tower",
    "stable_power_rank",
]


@dataclass(frozen=True)
class ColimitReport:
    """Dimension of a direct limit, with stabilization evidence.

    ``dimension`` is an integer when ``exact`` is true, else a pair
    (lower, upper).  ``rank_trace`` records the non-increasing composite
    ranks that witnessed stabilization.
    """

    dimension: int | tuple[int, int]
    exact: bool
    stabilization_stage: int
    rank_trace: tuple[int, ...]


def _check_chain(mats: list[RatMatrix]) -> None:
    for k in range(len(mats) - 1):
        if mats[k + 1].cols != mats[k].rows:
            raise ValueError(
                f"matrices {k} and {k + 1} do not chain: "
                f"{mats[k].rows} rows vs {mats[k + 1].cols} cols"
            )


def stable_power_rank(matrix: RatMatrix) -> tuple[int, tuple[int, ...]]:
    """Eventual rank of powers of a square matrix, with the rank trace.

    rank(T^k) is non-increasing and constant from the first repeat on,
    and guaranteed stable by k = dim, so iteration stops early.
    """
    if matrix.rows != matrix.cols:
        raise ValueError(f"square matrix required, got {matrix.rows}x{matrix.cols}")
    d = matrix.rows
    if d == 0:
        return 0, ()
    trace = []
    power = matrix
    prev = None
    for _ in range(d):
        r = rank(power)
        trace.append(r)
        if prev is not None and r == prev:
            break
        if r == 0:
            break
        prev = r
        power = power @ matrix
    return trace[-1], tuple(trace)


def colim_dim(
    mats: list[RatMatrix],
    tail_period: int | None = None,
    window: int = 8,
) -> ColimitReport:
    """Dimension of the colimit of a tower of rational matrices.

    ``tail_period`` declares that the last that-many matrices repeat
    cyclically forever (exact answer); ``None`` means the tower is a
    finite prefix of an unknown continuation (extrapolated answer).
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    mats = list(mats)
    if not mats:
        raise ValueError("at least one matrix required")
    _check_chain(mats)

    if tail_period is not None:
        p = int(tail_period)
        if p < 1 or p > len(mats):
            raise ValueError(
                f"tail period {p} out of range for {len(mats)} matrices"
            )
        suffix = mats[-p:]
        if suffix[0].cols != suffix[-1].rows:
            raise ValueError(
                f"cyclic suffix does not close: first consumes {suffix[0].cols}, "
                f"last produces {suffix[-1].rows}"
            )
        composite = suffix[0]
        for mat in suffix[1:]:
            composite = mat @ composite
        dim, trace = stable_power_rank(composite)
        return ColimitReport(
            dimension=dim,
            exact=True,
            stabilization_stage=len(mats) - p,
            rank_trace=trace,
        )

    # finite prefix: per-stage composite-rank traces.  Per-stage eventual
    # ranks are non-decreasing along the tower, so the limit dimension is
    # the value the LAST stabilized stages agree on; earlier stages may
    # legitimately settle lower (their images are smaller).
    n_spaces = len(mats) + 1
    dims = [mats[0].cols] + [m.rows for m in mats]
    stabilized: dict[int, tuple[int, tuple[int, ...]]] = {}
    final_ranks = []
    for p in range(n_spaces):
        trace = [dims[p]]
        comp = RatMatrix.identity(dims[p])
        for q in range(p, len(mats)):
            comp = mats[q] @ comp
            trace.append(rank(comp))
        final_ranks.append(trace[-1])
        if len(trace) >= window and len(set(trace[-window:])) == 1:
            stabilized[p] = (trace[-1], tuple(trace))
    if stabilized:
        last = max(stabilized)
        run = [p for p in range(last - window + 1, last + 1)]
        run_ok = all(p in stabilized for p in run) and len(
            {stabilized[p][0] for p in run}
        ) == 1
        if run_ok:
            value = stabilized[last][0]
            first = run[0]
            while first - 1 in stabilized and stabilized[first - 1][0] == value:
                first -= 1
            return ColimitReport(
                dimension=value,
                exact=True,
                stabilization_stage=first,
                rank_trace=stabilized[first][1],
            )
    lower = max((v for v, _ in stabilized.values()), default=0)
    upper = max(max(final_ranks), lower)
    best = min(stabilized) if stabilized else 0
    trace = stabilized[best][1] if stabilized else tuple(final_ranks)
    return ColimitReport(
        dimension=(lower, upper),
        exact=False,
        stabilization_stage=best,
        rank_trace=trace,
    )


def live_threshold(m: int, level: int = 1) -> int:
    """Smallest original summand size alive in degree m at the given
    amplification level: level*n >= (m+1)/2."""
    return -((m + 1) // -(2 * level))  # ceil((m+1) / (2*level))


@dataclass(frozen=True)
class StabilizedTower:
    """One super-period of a degree-m tower in the stabilized regime.

    ``start_step`` is tail-relative (0 = last prefix stage); ``live``
    lists the live summand indices at each of the ``super_steps + 1``
    stages; ``composite`` maps the space at ``start_step`` to the
    identically-shaped space one super-period later.
    """

    start_step: int
    super_steps: int
    live: tuple[tuple[int, ...], ...]
    matrices: tuple[RatMatrix, ...]
    composite: RatMatrix

    @property
    def dim(self) -> int:
        return len(self.live[0])


def build_tower(
    analysis: TailAnalysis,
    m: int,
    level: int,
    start_lap: int,
    super_laps: int,
) -> StabilizedTower:
    """Degree-m tower of the ``level``-amplified system over one
    super-period starting at the given lap."""
    tail = analysis.system.tail
    period = analysis.period
    threshold = live_threshold(m, level)
    odd = m % 2 == 1
    start_step = start_lap * period
    steps = super_laps * period
    live = []
    for k in range(start_step, start_step + steps + 1):
        sizes = analysis.sizes_at(k)
        live.append(tuple(i for i, n in enumerate(sizes) if n >= threshold))
    mats = []
    for offset in range(steps):
        k = start_step + offset
        grid = tail.templates[k % period]
        src = live[offset]
        tgt = live[offset + 1]
        entries = [
            [(grid[i][j].a if odd else grid[i][j].b) for j in src] for i in tgt
        ]
        mats.append(RatMatrix(entries, rows=len(tgt), cols=len(src)))
    if live[0] != live[-1]:
        raise StabilizationError(
            "liveness pattern failed to repeat over the certified super-period"
        )
    composite = RatMatrix.identity(len(live[0]))
    for mat in mats:
        composite = mat @ composite
    return StabilizedTower(
        start_step=start_step,
        super_steps=steps,
        live=tuple(live),
        matrices=tuple(mats),
        composite=composite,
    )


def fm_of_system(
    system: InductiveSystem,
    m: int,
    window: int = 8,
    max_laps: int = 4096,
    analysis: TailAnalysis | None = None,
) -> ColimitReport:
    """Degree-m dimension of the limit of an inductive system.

    Periodic tails get the exact treatment; tailless prefixes fall back
    to the extrapolating finite-prefix rule of ``colim_dim``.
    """
    if m < 1:
        raise ValueError(f"degree must be >= 1, got {m}")
    if system.tail is None:
        if not system.maps:
            space = fm_circle(system.stages[0], m)
            return ColimitReport(
                dimension=space.total,
                exact=True,
                stabilization_stage=0,
                rank_trace=(space.total,),
            )
        mats = [fm_induced(mat, m) for mat in system.maps]
        return colim_dim(mats, tail_period=None, window=window)

    prefix_offset = len(system.stages) - 1
    try:
        if analysis is None:
            analysis = analyze_tail(system, max_laps=max_laps)
        lap, q = analysis.stabilized_lap(live_threshold(m), max_laps=max_laps)
        tower = build_tower(analysis, m, level=1, start_lap=lap, super_laps=q)
    except StabilizationError:
        period = system.tail.period
        fallback_stages = len(system.stages) + period * (2 * window + 4)
        unrolled = generate_prefix(system, fallback_stages)
        report = fm_of_system(unrolled, m, window=window)
        dim = report.dimension
        if report.exact:
            dim = (report.dimension, report.dimension)
        return ColimitReport(
            dimension=dim,
            exact=False,
            stabilization_stage=report.stabilization_stage,
            rank_trace=report.rank_trace,
        )
    dim, trace = stable_power_rank(tower.composite)
    return ColimitReport(
        dimension=dim,
        exact=True,
        stabilization_stage=prefix_offset + tower.start_step,
        rank_trace=trace,
    )
