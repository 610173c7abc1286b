"""Directed solvers: greedy DAG coloring, weight peeling over an independent
part, the residual base-case search, and the directed three-stage pipeline.

The digraph majority condition constrains out-going edges only, so every
neighborhood notion here reads "out-neighbors" and every comparison is the
integer form 2*bad_out <= out-degree or the rational bound bad_out <= weight.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    CLASS_A,
    CLASS_B,
    Digraph,
    Graph,
    ListAssignment,
    PrefixInstance,
    WeightMap,
    induced_subgraph,
)
from .errors import (
    AcyclicityError,
    BudgetExceededError,
    InfeasibleError,
    SolverError,
    ValidationError,
)
from .undirected import (
    PipelineResult,
    Stage3Decision,
    StageReport,
    STATUS_CERTIFICATE,
    STATUS_DEFERRED,
    STATUS_EXACT,
    _choose_sublists,
    _stage3_choice,
)
from .verify import amc_dominant, check_independent, check_weighted_guarantee

DEFAULT_RESTART_CAP = 32
DEFAULT_EXHAUSTIVE_LIMIT = 12


def topological_order_sinks_first(d: Digraph) -> list:
    """Vertex order in which every out-neighbor precedes its tail vertex;
    smallest-id tie-break.  Raises AcyclicityError with a witness cycle."""
    remaining_out = [d.out_degree(v) for v in range(d.n)]
    heap = [v for v in range(d.n) if remaining_out[v] == 0]
    heapq.heapify(heap)
    order = []
    placed = [False] * d.n
    while heap:
        v = heapq.heappop(heap)
        if placed[v]:
            continue
        placed[v] = True
        order.append(v)
        for u in d.in_neighbors(v):
            remaining_out[u] -= 1
            if remaining_out[u] == 0:
                heapq.heappush(heap, u)
    if len(order) < d.n:
        leftover = {v for v in range(d.n) if not placed[v]}
        start = min(leftover)
        seen = {}
        path = []
        v = start
        while v not in seen:
            seen[v] = len(path)
            path.append(v)
            v = min(u for u in d.out_neighbors(v) if u in leftover)
        raise AcyclicityError(path[seen[v]:] + [v])
    return order


@dataclass(frozen=True)
class GreedyResult:
    coloring: dict
    order: tuple


def greedy_acyclic_solve(d: Digraph, lists: ListAssignment) -> GreedyResult:
    """Majority coloring of a finite acyclic digraph from 2-lists.

    Processes vertices sinks-first, so all out-neighbors are colored when a
    vertex is reached, and picks whichever of its two list colors appears on
    at most half of them (first list color on ties).
    """
    lists.require_sizes(range(d.n), 2, "greedy DAG solver")
    order = topological_order_sinks_first(d)
    coloring = {}
    for v in order:
        a, b = lists[v]
        na = nb = 0
        for u in d.out_adjacency[v]:
            cu = coloring[u]
            if cu == a:
                na += 1
            elif cu == b:
                nb += 1
        coloring[v] = a if na <= nb else b
    return GreedyResult(coloring, tuple(order))


@dataclass(frozen=True)
class BaseCaseResult:
    coloring: dict
    mode: str            # "descent" or "exhaustive"
    attempts: int        # descent attempts used (0 = first try succeeded)
    psi_traces: tuple    # per attempt, tuple of deficiency values


def _deficiencies(d, lists, weights, coloring):
    out = {}
    for v in range(d.n):
        bad = sum(1 for u in d.out_adjacency[v] if coloring[u] == coloring[v])
        out[v] = max(Fraction(0), bad - weights.get(v, coloring[v]))
    return out


def _exhaustive_base_case(d: Digraph, lists: ListAssignment, weights: WeightMap):
    """First coloring (lexicographic in list order) with bad_out <= weight."""
    n = d.n
    colors = [None] * n
    bad = [0] * n

    def fits(v, value):
        return bad[v] <= weights.get(v, value)

    def place(v):
        for c in lists[v]:
            mine = sum(1 for u in d.out_adjacency[v] if u < v and colors[u] == c)
            bad[v] = mine
            if not fits(v, c):
                continue
            touched = []
            ok = True
            for u in d.in_adjacency[v]:
                if u < v and colors[u] == c:
                    bad[u] += 1
                    touched.append(u)
                    if not fits(u, colors[u]):
                        ok = False
                        break
            if ok:
                colors[v] = c
                if v + 1 == n:
                    return {w: colors[w] for w in range(n)}
                found = place(v + 1)
                if found is not None:
                    return found
                colors[v] = None
            for u in touched:
                bad[u] -= 1
        return None

    if n == 0:
        return {}
    return place(0)


def base_case_solve(
    d: Digraph,
    lists: ListAssignment,
    weights: WeightMap,
    mode: str = "auto",
    restart_cap: int = DEFAULT_RESTART_CAP,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    seed: int = 0,
) -> BaseCaseResult:
    """Coloring of a digraph from 4-lists with bad_out(v) <= weight(v, c(v)).

    Requires sum of weights over each list to be at least twice the
    out-degree.  Strategy: deficiency descent (sum over vertices of how far
    bad_out exceeds the weight) with steepest single-vertex switches over
    violated vertices and deterministic seeded restarts; when descent stalls,
    an exhaustive first-solution search takes over for instances of at most
    `exhaustive_limit` vertices, otherwise the solver refuses.
    """
    n = d.n
    lists.require_sizes(range(n), 4, "base-case solver")
    weights.require_domain(lists, range(n))
    for v in range(n):
        total = sum(weights.get(v, x) for x in lists[v])
        if total < 2 * d.out_degree(v):
            raise InfeasibleError(
                f"vertex {v}: list weights sum to {total} < 2*deg+ = {2 * d.out_degree(v)}"
            )
    if mode not in ("auto", "descent", "exhaustive"):
        raise ValidationError(f"unknown mode {mode!r}")

    def verified(coloring):
        return all(
            sum(1 for u in d.out_adjacency[v] if coloring[u] == coloring[v])
            <= weights.get(v, coloring[v])
            for v in range(n)
        )

    if mode == "exhaustive":
        coloring = _exhaustive_base_case(d, lists, weights)
        if coloring is None:
            raise SolverError("exhaustive search found no coloring; input invalid?")
        return BaseCaseResult(coloring, "exhaustive", 0, ())

    psi_traces = []
    for attempt in range(restart_cap + 1):
        if attempt == 0:
            coloring = {v: lists[v][0] for v in range(n)}
        else:
            rng = random.Random(seed * 1_000_003 + attempt)
            coloring = {v: lists[v][rng.randrange(4)] for v in range(n)}
        deficiency = _deficiencies(d, lists, weights, coloring)
        badout = {
            v: sum(1 for u in d.out_adjacency[v] if coloring[u] == coloring[v])
            for v in range(n)
        }
        psi = sum(deficiency.values())
        trace = [psi]

        while psi > 0:
            best = None  # (delta, vertex, color position)
            for v in range(n):
                if deficiency[v] == 0:
                    continue
                a = coloring[v]
                for pos, b in enumerate(lists[v]):
                    if b == a:
                        continue
                    nb = sum(1 for u in d.out_adjacency[v] if coloring[u] == b)
                    delta = max(Fraction(0), nb - weights.get(v, b)) - deficiency[v]
                    for w in d.in_adjacency[v]:
                        cw = coloring[w]
                        if cw == a:
                            delta += max(Fraction(0), badout[w] - 1 - weights.get(w, cw)) - deficiency[w]
                        elif cw == b:
                            delta += max(Fraction(0), badout[w] + 1 - weights.get(w, cw)) - deficiency[w]
                    if best is None or delta < best[0]:
                        best = (delta, v, pos)
            if best is None or best[0] >= 0:
                break  # local minimum, restart
            _, v, pos = best
            a, b = coloring[v], lists[v][pos]
            coloring[v] = b
            badout[v] = sum(1 for u in d.out_adjacency[v] if coloring[u] == b)
            deficiency[v] = max(Fraction(0), badout[v] - weights.get(v, b))
            for w in d.in_adjacency[v]:
                cw = coloring[w]
                if cw == a:
                    badout[w] -= 1
                elif cw == b:
                    badout[w] += 1
                deficiency[w] = max(Fraction(0), badout[w] - weights.get(w, cw))
            psi = sum(deficiency.values())
            if psi >= trace[-1]:
                raise SolverError("deficiency did not decrease after a switch")
            trace.append(psi)

        psi_traces.append(tuple(trace))
        if psi == 0:
            if not verified(coloring):
                raise SolverError("descent accepted an invalid coloring")
            return BaseCaseResult(coloring, "descent", attempt, tuple(psi_traces))

    if mode == "descent":
        raise BudgetExceededError(f"descent stalled after {restart_cap} restarts")
    if n > exhaustive_limit:
        raise BudgetExceededError(
            f"descent stalled and {n} vertices exceed the exhaustive limit {exhaustive_limit}"
        )
    coloring = _exhaustive_base_case(d, lists, weights)
    if coloring is None:
        raise SolverError("exhaustive search found no coloring; input invalid?")
    return BaseCaseResult(coloring, "exhaustive", restart_cap, tuple(psi_traces))


@dataclass(frozen=True)
class PeelStep:
    vertex: int
    decremented: tuple  # (core vertex, color) pairs that lost one unit


@dataclass(frozen=True)
class PeelTrace:
    steps: tuple            # PeelStep per peeled vertex, in peel order
    final_weights: WeightMap


@dataclass(frozen=True)
class PeelResult:
    coloring: dict
    trace: PeelTrace
    base: BaseCaseResult


def peel_and_solve(
    d: Digraph,
    core: Sequence[int],
    independent: Sequence[int],
    lists: ListAssignment,
    independent_lists: ListAssignment,
    weights: WeightMap,
    mode: str = "auto",
    restart_cap: int = DEFAULT_RESTART_CAP,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    seed: int = 0,
) -> PeelResult:
    """Color the core of a digraph so the weight bound survives any coloring
    of the independent part from its 2-lists.

    Peels independent vertices one at a time (descending id): deleting u
    charges one unit at both of u's list colors to every in-neighbor, which
    preserves the weight-sum condition on the residual digraph.  The empty
    residual is solved by base_case_solve; restoring the peeled vertices keeps
    every guarantee because both colors u may take were charged for.
    """
    core = sorted(set(core))
    ind = sorted(set(independent))
    core_set, ind_set = set(core), set(ind)
    if core_set & ind_set:
        raise ValidationError("core and independent parts overlap")
    if core_set | ind_set != set(range(d.n)):
        raise ValidationError("core and independent parts must cover all vertices")
    check_independent(d, ind_set)
    lists.require_sizes(core, 4, "peeling solver")
    independent_lists.require_sizes(ind, 2, "peeling solver")
    weights.require_domain(lists, core)
    for v in core:
        total = sum(weights.get(v, x) for x in lists[v])
        if total < 2 * d.out_degree(v):
            raise InfeasibleError(
                f"vertex {v}: list weights sum to {total} < 2*deg+ = {2 * d.out_degree(v)}"
            )

    current = {key: value for key, value in weights.items()}
    residual_out = {v: d.out_degree(v) for v in core}
    peeled = set()
    steps = []
    for u in sorted(ind, reverse=True):
        decremented = []
        for v in d.in_neighbors(u):
            for x in independent_lists[u]:
                if (v, x) in current:
                    current[(v, x)] -= 1
                    decremented.append((v, x))
        for v in d.in_neighbors(u):
            residual_out[v] -= 1
        peeled.add(u)
        for v in core:
            total = sum(current[(v, x)] for x in lists[v])
            if total < 2 * residual_out[v]:
                raise SolverError(
                    f"peeling broke the weight-sum condition at vertex {v}"
                )
        steps.append(PeelStep(u, tuple(sorted(decremented))))

    sub, remap = induced_subgraph(d, core)
    back = {new: old for old, new in remap.items()}
    sub_lists = ListAssignment({remap[v]: lists[v] for v in core})
    sub_weights = WeightMap(
        {(remap[v], x): current[(v, x)] for v in core for x in lists[v]}
    )
    base = base_case_solve(
        sub, sub_lists, sub_weights,
        mode=mode, restart_cap=restart_cap,
        exhaustive_limit=exhaustive_limit, seed=seed,
    )
    coloring = {back[v]: c for v, c in base.coloring.items()}

    ok, failures = check_weighted_guarantee(
        d, core, ind, coloring, independent_lists, weights
    )
    if not ok:
        raise SolverError(f"peeling guarantee violated at {failures[:3]}")
    trace = PeelTrace(tuple(steps), WeightMap(current))
    return PeelResult(coloring, trace, base)


def three_stage_solve_directed(
    prefix: PrefixInstance,
    lists: ListAssignment,
    amc_threshold: int = 3,
    stage1_steps: Optional[int] = None,
    mode: str = "auto",
    restart_cap: int = DEFAULT_RESTART_CAP,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    seed: int = 0,
) -> PipelineResult:
    """Directed analog of the three-stage pipeline, entirely out-neighborhood
    driven: stage 1 selects sublists over closed out-neighborhoods of class-A
    vertices, stage 2 peels the finite-out-degree part with weight deg+(v)/2
    on a host keeping only arcs leaving that part, and stage 3 dodges dominant
    colors among finite-out-degree out-neighbors of class-B vertices.
    """
    if not isinstance(prefix.graph, Digraph):
        raise ValidationError("directed pipeline requires a directed prefix")
    d = prefix.graph
    finite = prefix.finite_vertices
    infinite = prefix.infinite_vertices
    lists.require_sizes(finite, 4, "pipeline stage 2")
    lists.require_sizes(infinite, 3, "pipeline stage 1")
    inf_set = set(infinite)
    fin_set = set(finite)

    family = tuple(
        tuple(sorted(({u} | set(d.out_adjacency[u])) & inf_set))
        for u in prefix.class_a
    )
    state, sublists = _choose_sublists(prefix, lists, family, stage1_steps)

    host_arcs = [(u, v) for u, v in d.arcs() if u in fin_set]
    host = Digraph.from_arcs(d.n, host_arcs)
    weights = WeightMap(
        {(v, x): Fraction(d.out_degree(v), 2) for v in finite for x in lists[v]}
    )
    stage2 = peel_and_solve(
        host, finite, infinite, lists.restrict(finite),
        ListAssignment(dict(sublists)), weights,
        mode=mode, restart_cap=restart_cap,
        exhaustive_limit=exhaustive_limit, seed=seed,
    )

    coloring = dict(stage2.coloring)
    stage3 = {}
    for u in infinite:
        pair = sublists[u]
        dominant = None
        if prefix.subclass[u] == CLASS_B:
            seen = [coloring[w] for w in d.out_adjacency[u] if w in fin_set]
            dominant = amc_dominant(seen, amc_threshold)
        chosen = _stage3_choice(pair, dominant)
        coloring[u] = chosen
        stage3[u] = Stage3Decision(u, prefix.subclass[u], pair, dominant, chosen)

    cert_ok = not state.condition_violations()
    statuses = {}
    for v in finite:
        if prefix.complete[v]:
            bad = sum(1 for u in d.out_adjacency[v] if coloring[u] == coloring[v])
            ok = 2 * bad <= d.out_degree(v)
            statuses[v] = STATUS_EXACT if ok else STATUS_EXACT + "-failed"
        else:
            statuses[v] = STATUS_DEFERRED
    for u in infinite:
        if prefix.subclass[u] == CLASS_A:
            ok = cert_ok
        else:
            ok = stage3[u].rule_ok
        statuses[u] = STATUS_CERTIFICATE if ok else STATUS_CERTIFICATE + "-failed"

    report = StageReport(statuses, state, sublists, stage2, stage3, amc_threshold)
    return PipelineResult(coloring, report)
