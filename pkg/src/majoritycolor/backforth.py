"""Back-and-forth sublist selection over an indexed family of vertex sets.

Given 3-color lists and a family N_1..N_k of vertex sets, the procedure walks
the round-robin schedule 1, 1,2, 1,2,3, ... and on each visit to a set assigns
a 2-color pair to its first element that has none yet.  Two constraints make
the chosen pairs useful: consecutive pairs per set differ, and no color is
shared by three consecutive pairs of one set.  Together they bound how often
any single color can appear among a set's assigned elements, no matter which
colors are later picked from the pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import isqrt
from typing import Iterator, Optional, Sequence

from .core import ListAssignment
from .errors import ValidationError


def seq_s(i: int) -> int:
    """i-th term of the block schedule 1, 1,2, 1,2,3, 1,2,3,4, ..."""
    if i < 1:
        raise ValidationError("schedule index starts at 1")
    j = isqrt(2 * i)
    while j * (j + 1) // 2 < i:
        j += 1
    while (j - 1) * j // 2 >= i:
        j -= 1
    return i - j * (j - 1) // 2


def schedule() -> Iterator[int]:
    """Infinite generator over the terms of the block schedule."""
    j = 1
    while True:
        yield from range(1, j + 1)
        j += 1


@dataclass(frozen=True)
class SelectionState:
    """Outcome of a bounded back-and-forth run."""

    sets: tuple                # tuple[tuple[int, ...], ...] in numeration order
    assigned: dict             # vertex -> (c1, c2), sorted pair
    histories: tuple           # per set, tuple of pairs in visit order
    visit_vertices: tuple      # per set, tuple of vertices the pairs went to
    visit_counts: tuple        # per set, visits incl. starved ones
    starved: tuple             # (visit number, set index) records
    executed: int              # total executed visits

    def condition_violations(self) -> list[str]:
        """Scan every history for the two pair constraints; empty means valid."""
        problems = []
        for i, hist in enumerate(self.histories):
            for t in range(1, len(hist)):
                if set(hist[t]) == set(hist[t - 1]):
                    problems.append(f"set {i}: visits {t - 1},{t} repeat pair {hist[t]}")
            for t in range(2, len(hist)):
                common = set(hist[t]) & set(hist[t - 1]) & set(hist[t - 2])
                if common:
                    problems.append(
                        f"set {i}: visits {t - 2}..{t} share color {min(common)}"
                    )
        return problems


def _choose_pair(colors: Sequence[int], last: Optional[tuple], penult: Optional[tuple]):
    for pair in itertools.combinations(sorted(colors), 2):
        if last is not None and set(pair) == set(last):
            continue
        if penult is not None and set(pair) & set(last) & set(penult):
            continue
        return pair
    raise ValidationError(
        f"no admissible pair in list {tuple(colors)}; lists must have 3 colors"
    )


def select_sublists(
    sets: Sequence[Sequence[int]],
    lists: ListAssignment,
    steps: int,
    stop_when_exhausted: bool = False,
) -> SelectionState:
    """Run `steps` visits of the back-and-forth procedure over `sets`.

    Schedule terms pointing past the family (index > len(sets)) are skipped
    and do not consume a step, so `steps` counts executed visits.  A visit to
    a set whose elements all carry pairs already is recorded as starved and
    the run continues.  Every vertex occurring in a set must have a 3-color
    list.
    """
    family = tuple(tuple(sorted(set(s))) for s in sets)
    for members in family:
        for v in members:
            if v not in lists:
                raise ValidationError(f"set element {v} has no color list")
            if len(lists[v]) != 3:
                raise ValidationError(
                    f"vertex {v} has a list of size {len(lists[v])}, need 3"
                )

    k = len(family)
    assigned: dict = {}
    histories: list[list] = [[] for _ in range(k)]
    visit_vertices: list[list] = [[] for _ in range(k)]
    visit_counts = [0] * k
    starved: list[tuple] = []
    cursors = [0] * k
    union_size = len({v for members in family for v in members})
    executed = 0

    if k > 0 and steps > 0:
        for term in schedule():
            if term > k:
                continue
            executed += 1
            idx = term - 1
            visit_counts[idx] += 1
            members = family[idx]
            cur = cursors[idx]
            while cur < len(members) and members[cur] in assigned:
                cur += 1
            cursors[idx] = cur
            if cur == len(members):
                starved.append((executed, idx))
            else:
                v = members[cur]
                hist = histories[idx]
                last = hist[-1] if hist else None
                penult = hist[-2] if len(hist) >= 2 else None
                pair = _choose_pair(lists[v], last, penult)
                assigned[v] = pair
                hist.append(pair)
                visit_vertices[idx].append(v)
                cursors[idx] = cur + 1
            if executed >= steps:
                break
            if stop_when_exhausted and len(assigned) >= union_size:
                break

    return SelectionState(
        sets=family,
        assigned=assigned,
        histories=tuple(tuple(h) for h in histories),
        visit_vertices=tuple(tuple(v) for v in visit_vertices),
        visit_counts=tuple(visit_counts),
        starved=tuple(starved),
        executed=executed,
    )


def not_amc_certificate(state: SelectionState, set_index: int) -> dict:
    """Per-color cap on how often a color can appear among a set's assigned
    elements, in any coloring from the chosen pairs.

    Grouping the visit sequence into consecutive disjoint triples, no color
    lies in all three pairs of a complete triple, so each triple contributes
    at most 2; the caps therefore never exceed 2*ceil(k/3) for k assigned
    elements.  Returns {color: cap} over the colors present in the pairs.
    """
    if not 0 <= set_index < len(state.sets):
        raise ValidationError(f"no set with index {set_index}")
    if state.visit_counts[set_index] == 0:
        raise ValidationError(f"set {set_index} was never visited")
    pairs = state.histories[set_index]
    colors = sorted({c for pair in pairs for c in pair})
    caps = {}
    for x in colors:
        cap = 0
        for start in range(0, len(pairs), 3):
            block = pairs[start:start + 3]
            holding = sum(1 for pair in block if x in pair)
            cap += min(holding, 2) if len(block) == 3 else holding
        caps[x] = cap
    return caps
