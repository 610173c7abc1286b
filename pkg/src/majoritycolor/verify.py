"""Ground-truth checkers and brute-force existence oracles.

Every solver output in this package can be re-checked here; the oracles
enumerate exhaustively (with explicit budgets and refusal semantics) and are
the reference against which the constructive solvers are validated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .core import AnyGraph, Digraph, Graph, ListAssignment
from .errors import BudgetExceededError, PartialColoringError, ValidationError
from .parallel import batched, thread_map

DEFAULT_ORACLE_BUDGET = 10_000_000


@dataclass(frozen=True)
class VertexReport:
    vertex: int
    good: int
    bad: int
    satisfied: bool


def _relevant_neighbors(g: AnyGraph, v: int) -> tuple[int, ...]:
    return g.out_adjacency[v] if isinstance(g, Digraph) else g.adjacency[v]


def good_bad_counts(g: AnyGraph, coloring: dict, v: int) -> tuple[int, int]:
    """Counts of good and bad incident edges at v (out-going arcs for digraphs)."""
    if v not in coloring:
        raise PartialColoringError(f"vertex {v} is not colored")
    mine = coloring[v]
    bad = 0
    for u in _relevant_neighbors(g, v):
        if u not in coloring:
            raise PartialColoringError(f"vertex {u} is not colored")
        if coloring[u] == mine:
            bad += 1
    return len(_relevant_neighbors(g, v)) - bad, bad


def is_majority(g: Graph, coloring: dict) -> tuple[bool, list[VertexReport]]:
    """True iff every vertex has at least as many good as bad incident edges."""
    failures = []
    for v in range(g.n):
        good, bad = good_bad_counts(g, coloring, v)
        if bad > good:
            failures.append(VertexReport(v, good, bad, False))
    return not failures, failures


def is_majority_digraph(d: Digraph, coloring: dict) -> tuple[bool, list[VertexReport]]:
    """True iff every vertex has at most half of its out-going edges bad.

    The comparison is 2*bad <= out-degree, kept in integers.
    """
    failures = []
    for v in range(d.n):
        good, bad = good_bad_counts(d, coloring, v)
        if 2 * bad > d.out_degree(v):
            failures.append(VertexReport(v, good, bad, False))
    return not failures, failures


@dataclass(frozen=True)
class GuaranteeFailure:
    vertex: int
    color: int
    core_bad: int       # same-colored neighbors inside the core part
    pressure: int       # independent-side neighbors whose list holds the color
    bound: Fraction


def check_independent(g: AnyGraph, independent: Iterable[int]) -> None:
    ind = set(independent)
    adj = g.out_adjacency if isinstance(g, Digraph) else g.adjacency
    for u in ind:
        for v in adj[u]:
            if v in ind:
                raise ValidationError(f"independent set violated by edge {u}-{v}")


def check_weighted_guarantee(
    g: AnyGraph,
    core: Iterable[int],
    independent: Iterable[int],
    coloring: dict,
    independent_lists: ListAssignment,
    weights,
) -> tuple[bool, list[GuaranteeFailure]]:
    """Worst-case bad-edge bound for core vertices against the independent part.

    For each core vertex v with color a the check is

        (#core neighbors colored a) + (#independent neighbors whose list
        contains a)  <=  weight of (v, a)

    which is equivalent to quantifying over every coloring of the independent
    part from its lists, because for a single v the worst case (all eligible
    independent neighbors colored a) is realizable.  For digraphs neighbors
    mean out-neighbors.
    """
    core = sorted(core)
    ind_set = set(independent)
    check_independent(g, ind_set)
    core_set = set(core)
    if core_set & ind_set:
        raise ValidationError("core and independent parts overlap")
    if core_set | ind_set != set(range(g.n)):
        raise ValidationError("core and independent parts must cover all vertices")

    failures = []
    for v in core:
        if v not in coloring:
            raise PartialColoringError(f"core vertex {v} is not colored")
        a = coloring[v]
        core_bad = 0
        pressure = 0
        for u in _relevant_neighbors(g, v):
            if u in ind_set:
                if a in independent_lists[u]:
                    pressure += 1
            else:
                if u not in coloring:
                    raise PartialColoringError(f"core vertex {u} is not colored")
                if coloring[u] == a:
                    core_bad += 1
        bound = weights.get(v, a)
        if core_bad + pressure > bound:
            failures.append(GuaranteeFailure(v, a, core_bad, pressure, bound))
    return not failures, failures


def _enumeration_size(lists: ListAssignment, n: int) -> int:
    size = 1
    for v in range(n):
        size *= len(lists[v])
    return size


def oracle_exists_majority_coloring(
    g: AnyGraph, lists: ListAssignment, budget: int = DEFAULT_ORACLE_BUDGET
) -> Optional[dict]:
    """First majority coloring from the lists in lexicographic order, or None.

    Refuses (BudgetExceededError) when the full enumeration space exceeds the
    budget; the backtracking search itself prunes but never changes the
    answer, so identical inputs always return the identical witness.
    """
    n = g.n
    for v in range(n):
        if v not in lists:
            raise ValidationError(f"oracle: vertex {v} has no color list")
    space = _enumeration_size(lists, n)
    if space > budget:
        raise BudgetExceededError(
            f"enumeration space {space} exceeds budget {budget}"
        )

    if isinstance(g, Digraph):
        fwd = g.out_adjacency
        back = g.in_adjacency
        caps = [len(x) for x in g.out_adjacency]
    else:
        fwd = g.adjacency
        back = g.adjacency
        caps = [len(x) for x in g.adjacency]

    colors = [None] * n
    bad = [0] * n

    def place(v: int) -> Optional[dict]:
        for c in lists[v]:
            # bad count of v against already-colored forward neighbors
            mine = 0
            for u in fwd[v]:
                if u < v and colors[u] == c:
                    mine += 1
            if 2 * mine > caps[v]:
                continue
            touched = []
            ok = True
            for u in back[v]:
                if u < v and colors[u] == c:
                    bad[u] += 1
                    touched.append(u)
                    if 2 * bad[u] > caps[u]:
                        ok = False
                        break
            if ok:
                colors[v] = c
                bad[v] = mine
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


def _canonical_assignment(assignment, perms):
    best = None
    for perm in perms:
        mapped = tuple(tuple(sorted(perm[c] for c in pick)) for pick in assignment)
        if best is None or mapped < best:
            best = mapped
    return best


def oracle_choosability(
    g: AnyGraph,
    k: int,
    universe: int,
    budget: int = DEFAULT_ORACLE_BUDGET,
    jobs: int = 1,
) -> tuple[bool, Optional[ListAssignment]]:
    """Probe majority choosability over all k-lists drawn from a color universe.

    Enumerates every assignment of k-subsets of range(universe) up to color
    permutation and runs the existence oracle on each.  A False verdict comes
    with a concrete witness assignment (sound refutation); True means no
    counterexample exists within the bounded universe.
    """
    if universe < k:
        raise ValidationError("universe must hold at least k colors")
    n = g.n
    picks = list(itertools.combinations(range(universe), k))
    raw = len(picks) ** n
    if raw > budget:
        raise BudgetExceededError(f"{raw} list assignments exceed budget {budget}")
    perms = [dict(enumerate(p)) for p in itertools.permutations(range(universe))]

    def survivors():
        seen = set()
        for assignment in itertools.product(picks, repeat=n):
            canon = _canonical_assignment(assignment, perms)
            if canon in seen:
                continue
            seen.add(canon)
            yield assignment

    def check(assignment):
        lists = ListAssignment({v: assignment[v] for v in range(n)})
        witness = oracle_exists_majority_coloring(g, lists, budget=budget)
        return lists if witness is None else None

    if n == 0:
        return True, None
    for chunk in batched(survivors(), 256):
        for result in thread_map(check, chunk, jobs):
            if result is not None:
                return False, result
    return True, None


def amc_dominant(colors: Iterable[int], threshold: int) -> Optional[int]:
    """Color x such that at most `threshold` elements differ from x, if any.

    Unique whenever the multiset has more than 2*threshold elements; ties are
    broken toward the most frequent, then smallest, color.
    """
    pool = list(colors)
    if not pool:
        return None
    counts = {}
    for c in pool:
        counts[c] = counts.get(c, 0) + 1
    total = len(pool)
    candidates = [c for c, cnt in counts.items() if total - cnt <= threshold]
    if not candidates:
        return None
    return max(candidates, key=lambda c: (counts[c], -c))
