"""Slow dimension growth, rational K-stability, and their equivalence.

Three verdicts about an inductive system of circle algebras with
diagonal connecting maps:

* slow dimension growth: some subsequence of the presentation can be
  rewritten (by deleting "orphan" summands that receive no multiplicity
  from the previous retained stage) so that the minimum summand size
  grows without bound;
* rational K-stability: amplifying every stage by j-1 and by j yields
  the same degree-m limit dimensions, with the inclusion inducing an
  isomorphism, for all degrees m and all j >= 2;
* K-stability proper, which for these systems is equivalent to both and
  is reported purely through that equivalence.

For periodic tails both checkers reach exact verdicts: the orphan
criterion becomes a statement about the multiplicity digraph (a bounded
summand class is non-eliminable exactly when it is reachable from a
directed cycle), and the rational checker compares exact colimit ranks
in the stabilized periodic regime.  Finite prefixes without a tail get
honest up-to-bounds verdicts instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebras import CircleAlgebra, min_dim, quotient_at_one
from .colim import (
    ColimitReport,
    build_tower,
    fm_of_system,
    live_threshold,
    stable_power_rank,
)
from .fm import fm_circle, fm_induced
from .homs import SignatureMatrix, compose
from .ratmat import RatMatrix, rank
from .recurrence import StabilizationError, TailAnalysis, analyze_tail
from .systems import (
    AFSystem,
    InductiveSystem,
    PeriodicTail,
    SystemError,
    amplify_system,
    generate_prefix,
)

__all__ = [
    "Verdict",
    "Bounds",
    "StabilityReport",
    "EliminationTrace",
    "EliminationBlocked",
    "PersistentClass",
    "RationalWitness",
    "MultiplicityDigraph",
    "StabilityContradiction",
    "OrphanPreconditionError",
    "orphan_eliminate",
    "check_sdg",
    "check_rational_k_stability",
    "k_stability_report",
    "quotient_system",
    "fm_of_af_system",
    "multiplicity_digraph",
    "default_bounds",
]


class StabilityContradiction(RuntimeError):
    """Two exact verdicts disagreed; this is an implementation bug."""


class OrphanPreconditionError(ValueError):
    """A stage has a summand smaller than the threshold being eliminated."""


@dataclass(frozen=True)
class Bounds:
    m_max: int
    j_max: int
    prefix_length: int


@dataclass(frozen=True)
class PersistentClass:
    """A bounded summand class reachable from a multiplicity cycle."""

    phase: int
    index: int
    size_cycle: tuple[int, ...]

    def describe(self) -> str:
        return (
            f"summand class (phase {self.phase}, position {self.index}) has "
            f"bounded size cycle {self.size_cycle} and keeps receiving "
            "multiplicity from a directed cycle"
        )


@dataclass(frozen=True)
class EliminationBlocked:
    """Why orphan elimination got stuck at one threshold."""

    m: int
    after_stage: int
    stage: int
    summand: int
    received_from: int
    multiplicity: int

    def describe(self) -> str:
        return (
            f"size-{self.m} summand {self.summand} of stage {self.stage} "
            f"receives multiplicity {self.multiplicity} from summand "
            f"{self.received_from} of stage {self.after_stage}"
        )


@dataclass(frozen=True)
class EliminationTrace:
    """Stages retained by one orphan-elimination pass."""

    m: int
    selected: tuple[int, ...]
    deleted: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class RationalWitness:
    """A degree and amplification level where the inclusion fails."""

    m: int
    j: int
    dim_small: int
    dim_big: int
    image_dim: int

    def describe(self) -> str:
        def q(d):
            return "0" if d == 0 else ("Q" if d == 1 else f"Q^{d}")

        return (
            f"F_{self.m}(iota_{self.j}): {q(self.dim_small)} -> {q(self.dim_big)} "
            f"(image dimension {self.image_dim}) is not an isomorphism"
        )


@dataclass(frozen=True)
class Verdict:
    """yes/no/unknown with exactness, provenance, and witness data."""

    value: str
    exact: bool
    via: str = ""
    witness: object = None

    def decided(self) -> bool:
        return self.value in ("yes", "no")


@dataclass(frozen=True)
class StabilityReport:
    sdg: Verdict
    rationally_k_stable: Verdict
    k_stable: Verdict
    bounds: Bounds


@dataclass(frozen=True)
class MultiplicityDigraph:
    """Combinatorial skeleton of a periodic tail.

    Vertices are summand classes (phase, position); an edge j -> i is
    present when the template multiplicity a_ij is positive.  ``bounded``
    lists classes with eventually periodic sizes; ``persistent`` those
    that are bounded and reachable from a directed cycle.
    """

    vertices: tuple[tuple[int, int], ...]
    edges: tuple[tuple[tuple[int, int], tuple[int, int], int], ...]
    bounded: tuple[tuple[int, int], ...]
    persistent: tuple[PersistentClass, ...]


def default_bounds(system: InductiveSystem) -> Bounds:
    """Desk-scale bounds: degrees past twice the largest size seen in a
    two-period unrolling have fully stabilized liveness patterns."""
    period = system.tail.period if system.tail is not None else 0
    probe = generate_prefix(system, len(system.stages) + 2 * period)
    maxsize = max((max(s.sizes) for s in probe.stages if s.sizes), default=1)
    m_max = 2 * maxsize + 1
    prefix = len(system.stages) + (6 * period if period else 0)
    return Bounds(m_max=m_max, j_max=4, prefix_length=prefix)


def _composite_map(maps: list[SignatureMatrix], lo: int, hi: int) -> SignatureMatrix:
    """Composite of maps[lo..hi-1] (stage lo to stage hi)."""
    comp = maps[lo]
    for k in range(lo + 1, hi):
        comp = compose(maps[k], comp)
    return comp


def orphan_eliminate(
    system: InductiveSystem, m: int, prefix_length: int | None = None
) -> tuple[InductiveSystem, EliminationTrace]:
    """Delete all size-m summands along a selected subsequence of stages.

    Every stage must already have minimum size >= m.  A stage can follow
    a previously selected one when the composed multiplicity rows into
    its size-m summands are all zero; those summands then receive
    nothing, deleting them cuts no path, and the retained system has
    minimum size >= m+1 everywhere.  Selection is exact within the
    unrolled window: valid hops form a DAG over stages, and the chosen
    subsequence is a longest path from the first to the last stage
    (retaining as many stages as possible for later passes), with
    smallest-predecessor tie-breaking for determinism.

    Raises OrphanPreconditionError if a stage is too small, and
    SystemError (with the blocking summand) if no subsequence through
    the window exists.
    """
    if prefix_length is None:
        prefix_length = default_bounds(system).prefix_length
    unrolled = (
        generate_prefix(system, prefix_length) if system.tail is not None else system
    )
    stages = list(unrolled.stages)
    maps = list(unrolled.maps)
    for t, stage in enumerate(stages):
        if min_dim(stage) < m:
            raise OrphanPreconditionError(
                f"stage {t} has minimum size {min_dim(stage)} < {m}"
            )

    def blocking(comp: SignatureMatrix, prev: int, t: int) -> EliminationBlocked | None:
        """First size-m summand of stage t fed through ``comp``, or None."""
        for i, size in enumerate(stages[t].sizes):
            if size != m:
                continue
            for j, e in enumerate(comp.entries[i]):
                if e.a > 0:
                    return EliminationBlocked(
                        m=m,
                        after_stage=prev,
                        stage=t,
                        summand=i,
                        received_from=j,
                        multiplicity=e.a,
                    )
        return None

    count = len(stages)
    blocks: dict[tuple[int, int], EliminationBlocked] = {}
    hops: dict[int, list[int]] = {p: [] for p in range(count)}
    for p in range(count - 1):
        comp = None
        for t in range(p + 1, count):
            comp = maps[t - 1] if comp is None else compose(maps[t - 1], comp)
            block = blocking(comp, p, t)
            if block is None:
                hops[p].append(t)
            else:
                blocks[(p, t)] = block

    # longest path 0 -> count-1 in the hop DAG
    best = [-1] * count
    pred = [-1] * count
    best[0] = 1
    for p in range(count):
        if best[p] < 0:
            continue
        for t in hops[p]:
            if best[p] + 1 > best[t]:
                best[t] = best[p] + 1
                pred[t] = p
    if best[count - 1] < 0:
        frontier = max(p for p in range(count) if best[p] >= 0)
        witness = blocks.get((frontier, frontier + 1)) if frontier + 1 < count else None
        detail = witness.describe() if witness else f"stage {frontier} is the window end"
        raise SystemError(
            f"no orphan subsequence within {count} stages: " + detail
        )
    selected = []
    cursor = count - 1
    while cursor >= 0:
        selected.append(cursor)
        cursor = pred[cursor]
    selected.reverse()

    kept = [
        tuple(i for i, size in enumerate(stages[t].sizes) if size != m)
        for t in selected
    ]
    deleted = [
        tuple(i for i, size in enumerate(stages[t].sizes) if size == m)
        for t in selected
    ]
    new_stages = [
        CircleAlgebra(tuple(stages[t].sizes[i] for i in kept[k]))
        for k, t in enumerate(selected)
    ]
    new_maps = []
    for k in range(len(selected) - 1):
        comp = _composite_map(maps, selected[k], selected[k + 1])
        entries = tuple(
            tuple(comp.entries[i][j] for j in kept[k]) for i in kept[k + 1]
        )
        new_maps.append(
            SignatureMatrix(
                source=new_stages[k], target=new_stages[k + 1], entries=entries
            )
        )
    trace = EliminationTrace(m=m, selected=tuple(selected), deleted=tuple(deleted))
    return (
        InductiveSystem(stages=tuple(new_stages), maps=tuple(new_maps), tail=None),
        trace,
    )


def multiplicity_digraph(
    system: InductiveSystem, analysis: TailAnalysis | None = None
) -> MultiplicityDigraph:
    """Digraph of summand classes of a periodic tail, with persistence."""
    if system.tail is None:
        raise SystemError("the multiplicity digraph needs a periodic tail")
    if analysis is None:
        analysis = analyze_tail(system)
    tail = system.tail
    vertices = []
    for s in range(tail.period):
        for i in range(tail.width(s)):
            vertices.append((s, i))
    edges = []
    for s in range(tail.period):
        nxt = (s + 1) % tail.period
        for i, row in enumerate(tail.templates[s]):
            for j, e in enumerate(row):
                if e.a > 0:
                    edges.append(((s, j), (nxt, i), e.a))
    persistent = tuple(
        PersistentClass(
            phase=s,
            index=i,
            size_cycle=tuple(
                analysis.sizes_at((analysis.transient_laps + t) * analysis.period + s)[i]
                for t in range(analysis.cycle_laps)
            ),
        )
        for (s, i) in analysis.persistent
    )
    return MultiplicityDigraph(
        vertices=tuple(vertices),
        edges=tuple(edges),
        bounded=tuple(sorted(analysis.bounded)),
        persistent=persistent,
    )


def check_sdg(
    system: InductiveSystem,
    m_max: int | None = None,
    prefix_length: int | None = None,
) -> Verdict:
    """Decide slow dimension growth for the given presentation.

    Runs the orphan-elimination ladder up to m_max over the unrolled
    prefix; for periodic tails the exact digraph criterion overrides the
    ladder: the presentation has slow dimension growth exactly when no
    bounded summand class is reachable from a directed cycle.
    """
    bounds = default_bounds(system)
    if m_max is None:
        m_max = bounds.m_max
    if prefix_length is None:
        prefix_length = bounds.prefix_length

    traces: list[EliminationTrace] = []
    blocked: EliminationBlocked | SystemError | None = None
    current = generate_prefix(system, prefix_length)
    for m in range(1, m_max + 1):
        try:
            current, trace = orphan_eliminate(current, m, len(current.stages))
            traces.append(trace)
        except SystemError as err:
            blocked = err
            break

    if system.tail is not None:
        digraph = multiplicity_digraph(system)
        if digraph.persistent:
            return Verdict(
                value="no",
                exact=True,
                via="digraph",
                witness=digraph.persistent[0],
            )
        return Verdict(value="yes", exact=True, via="digraph", witness=tuple(traces))

    if blocked is not None:
        return Verdict(value="no", exact=False, via="orphan", witness=blocked)
    return Verdict(value="yes", exact=False, via="orphan", witness=tuple(traces))


def _inclusion_matrix(
    live_small: tuple[int, ...], live_big: tuple[int, ...]
) -> RatMatrix:
    grid = [
        [1 if big == small else 0 for small in live_small] for big in live_big
    ]
    return RatMatrix(grid, rows=len(live_big), cols=len(live_small))


def _iso_at_periodic(
    analysis: TailAnalysis, m: int, j: int, max_laps: int
) -> tuple[bool, RationalWitness]:
    """Exact isomorphism test for the inclusion at one (m, j), in the
    stabilized periodic regime."""
    lap, q = analysis.stabilized_lap(live_threshold(m, j - 1), max_laps=max_laps)
    small = build_tower(analysis, m, level=j - 1, start_lap=lap, super_laps=q)
    big = build_tower(analysis, m, level=j, start_lap=lap, super_laps=q)
    dim_small, _ = stable_power_rank(small.composite)
    dim_big, _ = stable_power_rank(big.composite)
    inc = _inclusion_matrix(small.live[0], big.live[0])
    image = rank(big.composite.power(max(big.dim, 1)) @ inc)
    ok = image == dim_small == dim_big
    return ok, RationalWitness(
        m=m, j=j, dim_small=dim_small, dim_big=dim_big, image_dim=image
    )


def _check_rational_periodic(
    system: InductiveSystem,
    m_max: int,
    j_max: int,
    max_laps: int,
) -> Verdict:
    analysis = analyze_tail(system, max_laps=max_laps)
    max_bounded = 0
    for (s, i) in analysis.bounded:
        cycle_vals = [
            analysis.sizes_at((analysis.transient_laps + t) * analysis.period + s)[i]
            for t in range(analysis.cycle_laps)
        ]
        max_bounded = max(max_bounded, max(cycle_vals))
    for m in range(1, m_max + 1):
        for j in range(2, j_max + 1):
            # once every bounded class is dead at both levels the towers
            # coincide coordinate by coordinate and the inclusion is an
            # isomorphism; m <= 2 is always computed as a smoke check
            if live_threshold(m, j) > max_bounded and m > 2:
                continue
            ok, witness = _iso_at_periodic(analysis, m, j, max_laps)
            if not ok:
                return Verdict(value="no", exact=True, via="scan", witness=witness)
    if not analysis.bounded:
        # every class grows, so for any (m, j) at all the stabilized
        # towers are identical and the inclusion is an isomorphism
        return Verdict(value="yes", exact=True, via="growth", witness=None)
    return Verdict(value="yes", exact=False, via="scan", witness=None)


def _check_rational_prefix(
    system: InductiveSystem, m_max: int, j_max: int, window: int = 8
) -> Verdict:
    decided_pairs = 0
    for m in range(1, m_max + 1):
        for j in range(2, j_max + 1):
            small_sys = amplify_system(system, j - 1)
            big_sys = amplify_system(system, j)
            small_rep = fm_of_system(small_sys, m, window=window)
            big_rep = fm_of_system(big_sys, m, window=window)
            if not (small_rep.exact and big_rep.exact):
                continue
            decided_pairs += 1
            start = max(small_rep.stabilization_stage, big_rep.stabilization_stage)
            live_small = tuple(
                i
                for i, d in enumerate(fm_circle(small_sys.stages[start], m).summand_dims)
                if d
            )
            live_big = tuple(
                i
                for i, d in enumerate(fm_circle(big_sys.stages[start], m).summand_dims)
                if d
            )
            inc = _inclusion_matrix(live_small, live_big)
            comp = inc
            for k in range(start, len(big_sys.maps)):
                comp = fm_induced(big_sys.maps[k], m) @ comp
            image = rank(comp)
            if not (image == small_rep.dimension == big_rep.dimension):
                return Verdict(
                    value="no",
                    exact=False,
                    via="scan",
                    witness=RationalWitness(
                        m=m,
                        j=j,
                        dim_small=small_rep.dimension,
                        dim_big=big_rep.dimension,
                        image_dim=image,
                    ),
                )
    if decided_pairs == 0:
        return Verdict(value="unknown", exact=False, via="scan", witness=None)
    return Verdict(value="yes", exact=False, via="scan", witness=None)


def check_rational_k_stability(
    system: InductiveSystem,
    m_max: int | None = None,
    j_max: int | None = None,
    use_sdg_upgrade: bool = True,
    max_laps: int = 4096,
    window: int = 8,
) -> Verdict:
    """Decide rational K-stability.

    Scans degrees m <= m_max and amplification levels j <= j_max for a
    failing inclusion.  A found failure is an exact "no".  If every class
    of a periodic tail grows, the scan closes to an exact "yes" on
    structural grounds.  Otherwise the scan verdict is up-to-bounds, and
    (for periodic tails, when enabled) the slow-dimension-growth
    criterion upgrades it through the equivalence theorem.
    """
    bounds = default_bounds(system)
    if m_max is None:
        m_max = bounds.m_max
    if j_max is None:
        j_max = bounds.j_max
    if system.tail is not None:
        try:
            verdict = _check_rational_periodic(system, m_max, j_max, max_laps)
        except StabilizationError:
            verdict = Verdict(value="unknown", exact=False, via="scan", witness=None)
        if verdict.exact or not use_sdg_upgrade:
            return verdict
        sdg = check_sdg(system)
        if sdg.exact and sdg.decided():
            return Verdict(
                value=sdg.value,
                exact=True,
                via="sdg-equivalence",
                witness=sdg.witness if sdg.value == "no" else verdict.witness,
            )
        return verdict
    return _check_rational_prefix(system, m_max, j_max, window=window)


def k_stability_report(
    system: InductiveSystem,
    m_max: int | None = None,
    j_max: int | None = None,
    prefix_length: int | None = None,
    window: int = 8,
) -> StabilityReport:
    """Run both checkers, cross-assert the equivalence, and combine.

    Integral K-stability is reported purely through the equivalence with
    the two computed verdicts; no integral homotopy groups are computed.
    Two exact verdicts that disagree raise StabilityContradiction: that is an
    implementation bug, never a result.
    """
    bounds = default_bounds(system)
    resolved = Bounds(
        m_max=m_max if m_max is not None else bounds.m_max,
        j_max=j_max if j_max is not None else bounds.j_max,
        prefix_length=prefix_length
        if prefix_length is not None
        else bounds.prefix_length,
    )
    sdg = check_sdg(system, m_max=resolved.m_max, prefix_length=resolved.prefix_length)
    rational_independent = check_rational_k_stability(
        system,
        m_max=resolved.m_max,
        j_max=resolved.j_max,
        use_sdg_upgrade=False,
        window=window,
    )
    if (
        sdg.decided()
        and rational_independent.decided()
        and sdg.exact
        and rational_independent.exact
        and sdg.value != rational_independent.value
    ):
        raise StabilityContradiction(
            f"slow dimension growth says {sdg.value!r} but the rational "
            f"checker says {rational_independent.value!r}; both exact"
        )
    rational = rational_independent
    if not rational.exact and sdg.exact and sdg.decided() and system.tail is not None:
        rational = Verdict(
            value=sdg.value,
            exact=True,
            via="sdg-equivalence",
            witness=sdg.witness if sdg.value == "no" else rational.witness,
        )

    candidates = [v for v in (sdg, rational) if v.decided()]
    exact_candidates = [v for v in candidates if v.exact]
    if exact_candidates:
        pick = exact_candidates[0]
        k_stable = Verdict(
            value=pick.value, exact=True, via="equivalence", witness=pick.witness
        )
    elif candidates and len({v.value for v in candidates}) == 1:
        k_stable = Verdict(
            value=candidates[0].value,
            exact=False,
            via="equivalence",
            witness=candidates[0].witness,
        )
    elif candidates:
        noes = [v for v in candidates if v.value == "no"]
        k_stable = Verdict(
            value="no", exact=False, via="equivalence", witness=noes[0].witness
        )
    else:
        k_stable = Verdict(value="unknown", exact=False, via="equivalence")
    return StabilityReport(
        sdg=sdg,
        rationally_k_stable=rational,
        k_stable=k_stable,
        bounds=resolved,
    )


def quotient_system(system: InductiveSystem) -> AFSystem:
    """Evaluate every stage at the circle's base point.

    Stage sizes survive; connecting maps keep only their multiplicity
    parts (windings die in the quotient); a periodic tail quotients
    template by template.
    """
    sizes = tuple(quotient_at_one(s).sizes for s in system.stages)
    maps = tuple(mat.a_part() for mat in system.maps)
    if system.tail is None:
        return AFSystem(sizes=sizes, maps=maps)
    templates = tuple(
        tuple(tuple(e.a for e in row) for row in grid)
        for grid in system.tail.templates
    )
    return AFSystem(
        sizes=sizes,
        maps=maps,
        tail_templates=templates,
        tail_pads=system.tail.pads,
    )


def _af_as_circle(af: AFSystem) -> InductiveSystem:
    """Embed an AF system as a circle system with zero windings.

    In odd degrees the liveness rule and the induced matrices of the two
    presentations coincide, which is exactly what makes this embedding a
    valid computational route for the quotient.
    """
    stages = tuple(CircleAlgebra(s) for s in af.sizes)
    maps = []
    for k, grid in enumerate(af.maps):
        entries = tuple(tuple((a, 0) for a in row) for row in grid)
        maps.append(
            SignatureMatrix(source=stages[k], target=stages[k + 1], entries=entries)
        )
    tail = None
    if af.tail_templates is not None:
        tail = PeriodicTail(
            templates=tuple(
                tuple(tuple((a, 0) for a in row) for row in grid)
                for grid in af.tail_templates
            ),
            pads=af.tail_pads,
        )
    return InductiveSystem(stages=stages, maps=tuple(maps), tail=tail)


def fm_of_af_system(af: AFSystem, m: int, window: int = 8) -> ColimitReport:
    """Degree-m dimension of the limit of an AF quotient system.

    Even degrees vanish identically for finite-dimensional stages; odd
    degrees reduce to the same tower computation as circle systems.
    """
    if m < 1:
        raise ValueError(f"degree must be >= 1, got {m}")
    if m % 2 == 0:
        return ColimitReport(
            dimension=0, exact=True, stabilization_stage=0, rank_trace=()
        )
    return fm_of_system(_af_as_circle(af), m, window=window)
