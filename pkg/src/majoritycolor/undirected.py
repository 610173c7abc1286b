"""Undirected solvers: 2-list switching, weighted local search, and the
three-stage pipeline for prefixes of countable graphs.

All solvers are deterministic: initial colorings take the first list color,
repairs always pick the lowest violated vertex id, and switch targets break
ties by list order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .backforth import SelectionState, select_sublists
from .core import (
    CLASS_A,
    CLASS_B,
    Digraph,
    Graph,
    ListAssignment,
    PrefixInstance,
    WeightMap,
)
from .errors import InfeasibleError, SolverError, ValidationError
from .verify import amc_dominant, check_independent, check_weighted_guarantee, good_bad_counts


@dataclass(frozen=True)
class LovaszResult:
    coloring: dict
    switches: int
    bad_trace: tuple  # total bad edges, initial value first


def lovasz_switch_solve(g: Graph, lists: ListAssignment) -> LovaszResult:
    """Majority coloring of a finite graph from 2-lists by bad-edge descent.

    Starts from the first color of every list and repeatedly switches the
    lowest vertex with more bad than good edges to its other list color; every
    switch strictly decreases the number of bad edges, so at most |E| switches
    happen and the result satisfies the majority condition.
    """
    n = g.n
    lists.require_sizes(range(n), 2, "2-list switching solver")
    coloring = {v: lists[v][0] for v in range(n)}
    bad = [sum(1 for u in g.adjacency[v] if coloring[u] == coloring[v]) for v in range(n)]
    total_bad = sum(bad) // 2
    trace = [total_bad]
    switches = 0

    heap = [v for v in range(n) if 2 * bad[v] > g.degree(v)]
    heapq.heapify(heap)
    while heap:
        v = heapq.heappop(heap)
        if 2 * bad[v] <= g.degree(v):
            continue  # stale entry
        a = coloring[v]
        b = lists[v][1] if lists[v][0] == a else lists[v][0]
        new_bad = 0
        for u in g.adjacency[v]:
            cu = coloring[u]
            if cu == a:
                bad[u] -= 1
            elif cu == b:
                new_bad += 1
                bad[u] += 1
                if 2 * bad[u] > g.degree(u):
                    heapq.heappush(heap, u)
        if new_bad >= bad[v]:
            raise SolverError("switch failed to decrease bad edges")
        total_bad += new_bad - bad[v]
        coloring[v] = b
        bad[v] = new_bad
        if 2 * bad[v] > g.degree(v):
            heapq.heappush(heap, v)
        switches += 1
        trace.append(total_bad)
        if switches > g.edge_count:
            raise SolverError("more switches than edges; descent is broken")

    return LovaszResult(coloring, switches, tuple(trace))


@dataclass(frozen=True)
class PotentialLedger:
    """Exact decomposition of the local-search potential.

    potential = (bad edges inside the core) + (sum over core vertices of the
    independent-side pressure of their color) - half the signed weight sum.
    """

    bad_inside_core: int
    pressure_total: int
    weight_balance: Fraction

    @property
    def potential(self) -> Fraction:
        return self.bad_inside_core + self.pressure_total - self.weight_balance

    @classmethod
    def from_scratch(cls, host, core, lists, weights, coloring,
                     pressure) -> "PotentialLedger":
        core_set = set(core)
        bad = 0
        for v in core:
            for u in host.adjacency[v]:
                if u in core_set and u > v and coloring[u] == coloring[v]:
                    bad += 1
        pressure_total = sum(pressure[v][coloring[v]] for v in core)
        balance = Fraction(0)
        for v in core:
            own = weights.get(v, coloring[v])
            others = sum(weights.get(v, x) for x in lists[v] if x != coloring[v])
            balance += own - others
        return cls(bad, pressure_total, balance / 2)


@dataclass(frozen=True)
class WeightedResult:
    coloring: dict
    switches: int
    potential_trace: tuple  # ledger potential, initial value first
    ledger: PotentialLedger


def _pressure_table(host: Graph, core, ind_set, lists, independent_lists):
    """pressure[v][x] = independent neighbors of v whose list contains x."""
    table = {}
    for v in core:
        row = dict.fromkeys(lists[v], 0)
        for u in host.adjacency[v]:
            if u in ind_set:
                for x in independent_lists[u]:
                    if x in row:
                        row[x] += 1
        table[v] = row
    return table


def bernardi_weighted_solve(
    host: Graph,
    core: Sequence[int],
    independent: Sequence[int],
    lists: ListAssignment,
    independent_lists: ListAssignment,
    weights: WeightMap,
) -> WeightedResult:
    """Color the core part from 4-lists so that, whatever colors the
    independent part later takes from its 2-lists, no core vertex can see more
    bad edges than its weight allows.

    Requires sum of weights over each core list to be at least twice the host
    degree.  The search minimizes the ledger potential by switching violated
    vertices to their best list color; each switch strictly decreases the
    potential (exact rational comparison), which bounds the run.
    """
    core = sorted(set(core))
    ind = sorted(set(independent))
    core_set, ind_set = set(core), set(ind)
    if core_set & ind_set:
        raise ValidationError("core and independent parts overlap")
    if core_set | ind_set != set(range(host.n)):
        raise ValidationError("core and independent parts must cover all vertices")
    check_independent(host, ind_set)
    lists.require_sizes(core, 4, "weighted solver")
    independent_lists.require_sizes(ind, 2, "weighted solver")
    weights.require_domain(lists, core)
    for v in core:
        total = sum(weights.get(v, x) for x in lists[v])
        if total < 2 * host.degree(v):
            raise InfeasibleError(
                f"vertex {v}: list weights sum to {total} < 2*deg = {2 * host.degree(v)}"
            )

    pressure = _pressure_table(host, core, ind_set, lists, independent_lists)
    coloring = {v: lists[v][0] for v in core}
    cnt = {v: {} for v in core}  # colors of core neighbors
    for v in core:
        for u in host.adjacency[v]:
            if u in core_set:
                c = coloring[u]
                cnt[v][c] = cnt[v].get(c, 0) + 1

    def score(v, x):
        return cnt[v].get(x, 0) + pressure[v][x] - weights.get(v, x)

    ledger = PotentialLedger.from_scratch(host, core, lists, weights, coloring, pressure)
    bad_core = ledger.bad_inside_core
    pressure_total = ledger.pressure_total
    balance = ledger.weight_balance
    trace = [ledger.potential]
    switches = 0

    heap = [v for v in core if score(v, coloring[v]) > 0]
    heapq.heapify(heap)
    while heap:
        v = heapq.heappop(heap)
        a = coloring[v]
        if score(v, a) <= 0:
            continue  # stale entry
        b, best = None, None
        for x in lists[v]:
            s = score(v, x)
            if best is None or s < best:
                b, best = x, s
        if best >= 0:
            raise SolverError(f"no improving color at vertex {v}; precondition broken")
        delta = best - score(v, a)
        nfa, nfb = cnt[v].get(a, 0), cnt[v].get(b, 0)
        bad_core += nfb - nfa
        pressure_total += pressure[v][b] - pressure[v][a]
        balance += weights.get(v, b) - weights.get(v, a)
        coloring[v] = b
        for u in host.adjacency[v]:
            if u in core_set:
                cnt[u][a] -= 1
                cnt[u][b] = cnt[u].get(b, 0) + 1
                if score(u, coloring[u]) > 0:
                    heapq.heappush(heap, u)
        switches += 1
        potential = bad_core + pressure_total - balance
        if potential - trace[-1] != delta or delta >= 0:
            raise SolverError("potential bookkeeping mismatch")
        trace.append(potential)

    ledger = PotentialLedger(bad_core, pressure_total, balance)
    scratch = PotentialLedger.from_scratch(host, core, lists, weights, coloring, pressure)
    if scratch != ledger:
        raise SolverError("incremental ledger differs from scratch recomputation")
    ok, failures = check_weighted_guarantee(
        host, core, ind, coloring, independent_lists, weights
    )
    if not ok:
        raise SolverError(f"guarantee violated at {failures[:3]}")
    return WeightedResult(coloring, switches, tuple(trace), ledger)


# ---------------------------------------------------------------------------
# Three-stage pipeline
# ---------------------------------------------------------------------------

STATUS_EXACT = "exact"
STATUS_CERTIFICATE = "certificate"
STATUS_DEFERRED = "deferred"


def default_pair(colors) -> tuple:
    return tuple(sorted(colors)[:2])


@dataclass(frozen=True)
class Stage3Decision:
    vertex: int
    subclass: str
    pair: tuple
    dominant: Optional[int]
    chosen: int

    @property
    def rule_ok(self) -> bool:
        if self.dominant is None or self.dominant not in self.pair:
            return True
        return self.chosen != self.dominant


@dataclass
class StageReport:
    statuses: dict          # vertex -> exact | certificate | deferred (+ -failed)
    stage1: SelectionState
    sublists: dict          # infinite-degree vertex -> chosen 2-color pair
    stage2: object          # WeightedResult (undirected) or PeelResult (directed)
    stage3: dict            # vertex -> Stage3Decision
    amc_threshold: int

    def all_ok(self) -> bool:
        return not any(s.endswith("-failed") for s in self.statuses.values())


@dataclass
class PipelineResult:
    coloring: dict
    report: StageReport


def _stage1_steps_default(family) -> int:
    k = len(family)
    if k == 0:
        return 0
    longest = max(len(members) for members in family)
    return k * (k + 1) // 2 + max(0, longest - 1) * k


def _choose_sublists(prefix, lists, family, stage1_steps):
    if stage1_steps is None:
        stage1_steps = _stage1_steps_default(family)
    state = select_sublists(family, lists, stage1_steps, stop_when_exhausted=True)
    sublists = {}
    for u in prefix.infinite_vertices:
        pair = state.assigned.get(u)
        sublists[u] = pair if pair is not None else default_pair(lists[u])
    return state, sublists


def _stage3_choice(pair, dominant):
    if dominant is not None and dominant in pair:
        return pair[1] if dominant == pair[0] else pair[0]
    return pair[0]


def three_stage_solve(
    prefix: PrefixInstance,
    lists: ListAssignment,
    amc_threshold: int = 3,
    stage1_steps: Optional[int] = None,
) -> PipelineResult:
    """Color a prefix of a countable graph in three stages.

    Stage 1 runs the back-and-forth selector over the closed neighborhoods
    (intersected with the infinite-degree part) of class-A vertices, fixing a
    2-color sublist for every infinite-degree vertex; vertices the run never
    reached get the smallest pair of their list.  Stage 2 colors the
    finite-degree part by the weighted local search on the host graph that
    keeps finite-finite and finite-infinite edges, with weight deg(v)/2 on
    every list color.  Stage 3 colors the infinite-degree part from the
    sublists; class-B vertices dodge a dominant color among their
    finite-degree neighbors whenever that color sits in their sublist.
    """
    if isinstance(prefix.graph, Digraph):
        raise ValidationError("undirected pipeline requires an undirected prefix")
    g = prefix.graph
    finite = prefix.finite_vertices
    infinite = prefix.infinite_vertices
    lists.require_sizes(finite, 4, "pipeline stage 2")
    lists.require_sizes(infinite, 3, "pipeline stage 1")
    inf_set = set(infinite)

    family = tuple(
        tuple(sorted(({u} | set(g.adjacency[u])) & inf_set)) for u in prefix.class_a
    )
    state, sublists = _choose_sublists(prefix, lists, family, stage1_steps)

    host_edges = [
        (u, v) for u, v in g.edges() if not (u in inf_set and v in inf_set)
    ]
    host = Graph.from_edges(g.n, host_edges)
    weights = WeightMap(
        {(v, x): Fraction(g.degree(v), 2) for v in finite for x in lists[v]}
    )
    stage2 = bernardi_weighted_solve(
        host, finite, infinite, lists.restrict(finite),
        ListAssignment(dict(sublists)), weights,
    )

    coloring = dict(stage2.coloring)
    fin_set = set(finite)
    stage3 = {}
    for u in infinite:
        pair = sublists[u]
        dominant = None
        if prefix.subclass[u] == CLASS_B:
            seen = [coloring[w] for w in g.adjacency[u] if w in fin_set]
            dominant = amc_dominant(seen, amc_threshold)
        chosen = _stage3_choice(pair, dominant)
        coloring[u] = chosen
        stage3[u] = Stage3Decision(u, prefix.subclass[u], pair, dominant, chosen)

    cert_ok = not state.condition_violations()
    statuses = {}
    for v in finite:
        if prefix.complete[v]:
            good, bad = good_bad_counts(g, coloring, v)
            statuses[v] = STATUS_EXACT if bad <= good else STATUS_EXACT + "-failed"
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
