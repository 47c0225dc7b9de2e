"""Exact analysis of the size recurrence of a periodic tail.

Summand classes of a periodic tail (one vertex per phase and summand
position) evolve by an affine integer recurrence with non-negative
coefficients.  Each class is either *bounded* (its size sequence is
eventually periodic) or grows to infinity.  Which happens is decided
exactly from the weighted multiplicity digraph:

* a class grows iff it is reachable from a "pumped" strongly connected
  component: one containing a cycle of weight >= 2 or two distinct
  cycles, or a weight-one cycle that is itself reachable from another
  cycle (padding counts as a cycle: it re-injects every step);
* bounded classes never receive multiplicity from growing ones, so the
  bounded sub-recurrence is autonomous and its joint state repeats
  exactly; iteration with state-repetition detection finds the transient
  and cycle lengths.

For liveness questions ("is this class's size >= B from some point on,
forever") the growing classes need a certificate: a window of observed
laps all >= B together with a matrix-power bound showing the window
reproduces itself.  All arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .systems import InductiveSystem, SystemError

__all__ = ["TailAnalysis", "StabilizationError", "analyze_tail"]


class StabilizationError(RuntimeError):
    """Raised when iteration caps are hit before stabilization is certified."""


def _strongly_connected_components(n: int, edges: dict[int, dict[int, int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative.  ``edges[u][v] = weight``."""
    index = [0] * n
    low = [0] * n
    on_stack = [False] * n
    visited = [False] * n
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = [1]
    for root in range(n):
        if visited[root]:
            continue
        work = [(root, iter(edges.get(root, {})))]
        visited[root] = True
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if not visited[w]:
                    visited[w] = True
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(edges.get(w, {}))))
                    advanced = True
                    break
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


def _scc_flags(n, edges, sccs):
    """Per-SCC cyclicity and heaviness.

    Cyclic: contains any cycle (size >= 2, or a self-loop).  Heavy: cyclic
    but not a single simple cycle of weight-1 edges; such a component
    already forces growth on its own.
    """
    comp_of = [0] * n
    for ci, comp in enumerate(sccs):
        for v in comp:
            comp_of[v] = ci
    cyclic = []
    heavy = []
    for ci, comp in enumerate(sccs):
        members = set(comp)
        internal = [
            (u, v, w)
            for u in comp
            for v, w in edges.get(u, {}).items()
            if v in members
        ]
        is_cyclic = len(comp) >= 2 or any(u == v for u, v, _ in internal)
        if not is_cyclic:
            cyclic.append(False)
            heavy.append(False)
            continue
        out_deg = {u: 0 for u in comp}
        in_deg = {u: 0 for u in comp}
        simple = True
        for u, v, w in internal:
            out_deg[u] += 1
            in_deg[v] += 1
            if w >= 2:
                simple = False
        if any(out_deg[u] != 1 or in_deg[u] != 1 for u in comp):
            simple = False
        cyclic.append(True)
        heavy.append(not simple)
    return comp_of, cyclic, heavy


def _pumped_reachability(n, edges, sccs, comp_of, cyclic, heavy):
    """Vertices reachable from a pumped component (see module docstring)."""
    nc = len(sccs)
    dag: list[set[int]] = [set() for _ in range(nc)]
    for u in range(n):
        for v in edges.get(u, {}):
            cu, cv = comp_of[u], comp_of[v]
            if cu != cv:
                dag[cu].add(cv)
    # Tarjan emits components in reverse topological order, so iterating
    # indices downward visits sources before their successors.
    order = range(nc - 1, -1, -1)
    upstream_cyclic = [False] * nc
    for ci in order:
        for cj in dag[ci]:
            upstream_cyclic[cj] = upstream_cyclic[cj] or upstream_cyclic[ci] or cyclic[ci]
    pumped = [heavy[ci] or (cyclic[ci] and upstream_cyclic[ci]) for ci in range(nc)]
    tainted = list(pumped)
    for ci in order:
        for cj in dag[ci]:
            tainted[cj] = tainted[cj] or tainted[ci]
    return tainted


@dataclass
class TailAnalysis:
    """Exact structural data of one periodic tail, relative to its start.

    Stage k (k >= 0, with stage 0 the last prefix stage) has phase
    k mod period; lap t covers stages t*period .. t*period + period - 1.
    """

    system: InductiveSystem
    period: int
    widths: tuple[int, ...]
    unbounded: frozenset[tuple[int, int]]
    bounded: frozenset[tuple[int, int]]
    transient_laps: int
    cycle_laps: int
    cycle_min: dict[tuple[int, int], int]
    persistent: tuple[tuple[int, int], ...]
    _stage_sizes: list[tuple[int, ...]] = field(default_factory=list, repr=False)

    def sizes_at(self, stage: int) -> tuple[int, ...]:
        """Sizes at tail-relative stage index (0 = last prefix stage)."""
        tail = self.system.tail
        while len(self._stage_sizes) <= stage:
            k = len(self._stage_sizes) - 1
            cur = self._stage_sizes[k]
            grid = tail.templates[k % self.period]
            pad = tail.pads[k % self.period]
            nxt = tuple(
                sum(e.a * x for e, x in zip(row, cur)) + pad[i]
                for i, row in enumerate(grid)
            )
            if any(x < 1 for x in nxt):
                raise SystemError(
                    f"tail generates a size-0 summand at relative stage {k + 1}"
                )
            self._stage_sizes.append(nxt)
        return self._stage_sizes[stage]

    def lap_composite(self, phase: int, laps: int) -> list[list[int]]:
        """Multiplicity composite over ``laps`` full periods from ``phase``."""
        tail = self.system.tail
        width = self.widths[phase % self.period]
        mat = [[1 if i == j else 0 for j in range(width)] for i in range(width)]
        for step in range(laps * self.period):
            a = tail.a_matrix(phase + step)
            mat = [
                [
                    sum(a[i][k] * mat[k][j] for k in range(len(mat)))
                    for j in range(width)
                ]
                for i in range(len(a))
            ]
        return mat

    def stabilized_lap(self, threshold: int, max_laps: int = 4096) -> tuple[int, int]:
        """Lap L and super-period q such that, from lap L on, every class's
        liveness against ``threshold`` is exactly q-lap periodic.

        Bounded classes cycle exactly from the transient on.  Growing
        classes need the certificate: a window of w laps all >= threshold
        together with the matrix-power bound that the window regenerates
        itself (monotone lower bound through non-negative composites).
        """
        q = self.cycle_laps
        if threshold <= 0 or not self.unbounded:
            return self.transient_laps, q
        beta = {}
        for s in range(self.period):
            beta[s] = [
                threshold if (s, i) in self.unbounded else self.cycle_min[(s, i)]
                for i in range(self.widths[s])
            ]
        window = q
        window_cap = min(max_laps, max(256, 4 * q))
        while window <= window_cap:
            box_ok = True
            for s in range(self.period):
                comp = self.lap_composite(s, window)
                for i in range(self.widths[s]):
                    if (s, i) not in self.unbounded:
                        continue
                    bound = sum(comp[i][j] * beta[s][j] for j in range(self.widths[s]))
                    if bound < threshold:
                        box_ok = False
                        break
                if not box_ok:
                    break
            if box_ok:
                lap = self.transient_laps
                while lap + window <= max_laps:
                    good = True
                    for t in range(lap, lap + window):
                        for s in range(self.period):
                            sizes = self.sizes_at(t * self.period + s)
                            for i in range(self.widths[s]):
                                if (s, i) in self.unbounded and sizes[i] < threshold:
                                    good = False
                                    break
                            if not good:
                                break
                        if not good:
                            break
                    if good:
                        return lap, q
                    lap += 1
            window *= 2
        raise StabilizationError(
            f"no liveness certificate for threshold {threshold} within "
            f"{max_laps} laps"
        )


def _class_vertices(tail) -> tuple[list[tuple[int, int]], dict[tuple[int, int], int]]:
    vertices = []
    for s in range(tail.period):
        for i in range(tail.width(s)):
            vertices.append((s, i))
    return vertices, {v: k for k, v in enumerate(vertices)}


def analyze_tail(system: InductiveSystem, max_laps: int = 4096) -> TailAnalysis:
    """Classify every summand class of the tail and find its size cycle."""
    tail = system.tail
    if tail is None:
        raise SystemError("analysis needs a periodic tail")
    period = tail.period
    widths = tuple(tail.width(s) for s in range(period))
    vertices, vid = _class_vertices(tail)

    # multiplicity digraph, phase (s) feeding phase (s+1)
    mult_edges: dict[int, dict[int, int]] = {}
    for s in range(period):
        grid = tail.templates[s]
        nxt = (s + 1) % period
        for i, row in enumerate(grid):
            for j, e in enumerate(row):
                if e.a > 0:
                    src = vid[(s, j)]
                    dst = vid[(nxt, i)]
                    mult_edges.setdefault(src, {})[dst] = max(
                        mult_edges.get(src, {}).get(dst, 0), e.a
                    )

    # growth digraph: multiplicity edges plus the padding pump
    star = len(vertices)
    growth_edges = {u: dict(vs) for u, vs in mult_edges.items()}
    growth_edges.setdefault(star, {})[star] = 1
    for s in range(period):
        nxt = (s + 1) % period
        for i, pad in enumerate(tail.pads[s]):
            if pad > 0:
                growth_edges.setdefault(star, {})[vid[(nxt, i)]] = max(
                    growth_edges.get(star, {}).get(vid[(nxt, i)], 0), pad
                )

    n_growth = len(vertices) + 1
    sccs = _strongly_connected_components(n_growth, growth_edges)
    comp_of, cyclic, heavy = _scc_flags(n_growth, growth_edges, sccs)
    tainted = _pumped_reachability(n_growth, growth_edges, sccs, comp_of, cyclic, heavy)
    unbounded = frozenset(
        v for v in vertices if tainted[comp_of[vid[v]]]
    )
    bounded = frozenset(v for v in vertices if v not in unbounded)

    analysis = TailAnalysis(
        system=system,
        period=period,
        widths=widths,
        unbounded=unbounded,
        bounded=bounded,
        transient_laps=0,
        cycle_laps=1,
        cycle_min={},
        persistent=(),
        _stage_sizes=[system.stages[-1].sizes],
    )

    # bounded-state repetition over full laps
    seen: dict[tuple, int] = {}
    t0 = None
    q = None
    for t in range(max_laps):
        state = tuple(
            analysis.sizes_at(t * period + s)[i]
            for (s, i) in sorted(bounded)
        )
        if state in seen:
            t0, q = seen[state], t - seen[state]
            break
        seen[state] = t
    if t0 is None:
        raise StabilizationError(
            f"bounded-class size pattern did not repeat within {max_laps} laps"
        )
    analysis.transient_laps = t0
    analysis.cycle_laps = q
    cycle_min: dict[tuple[int, int], int] = {}
    for (s, i) in bounded:
        values = [
            analysis.sizes_at((t0 + t) * period + s)[i] for t in range(q)
        ]
        cycle_min[(s, i)] = min(values)
    analysis.cycle_min = cycle_min

    # persistence: bounded and reachable from a cycle of the multiplicity digraph
    n_mult = len(vertices)
    mult_sccs = _strongly_connected_components(n_mult, mult_edges)
    m_comp_of, m_cyclic, _ = _scc_flags(n_mult, mult_edges, mult_sccs)
    nc = len(mult_sccs)
    dag: list[set[int]] = [set() for _ in range(nc)]
    for u in range(n_mult):
        for v in mult_edges.get(u, {}):
            if m_comp_of[u] != m_comp_of[v]:
                dag[m_comp_of[u]].add(m_comp_of[v])
    from_cycle = list(m_cyclic)
    for ci in range(nc - 1, -1, -1):  # sources before their successors
        for cj in dag[ci]:
            from_cycle[cj] = from_cycle[cj] or from_cycle[ci]
    analysis.persistent = tuple(
        sorted(v for v in bounded if from_cycle[m_comp_of[vid[v]]])
    )
    return analysis
