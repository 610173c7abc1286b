import itertools
import random
from math import ceil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from majoritycolor import (
    ListAssignment,
    ValidationError,
    not_amc_certificate,
    select_sublists,
    seq_s,
)

from util import random_lists


def blocks_reference(limit):
    """Independent schedule oracle: concatenate blocks 1..j explicitly."""
    out = []
    j = 1
    while len(out) < limit:
        out.extend(range(1, j + 1))
        j += 1
    return out[:limit]


def test_seq_s_first_ten():
    assert [seq_s(i) for i in range(1, 11)] == [1, 1, 2, 1, 2, 3, 1, 2, 3, 4]


def test_seq_s_sixth_term():
    assert seq_s(6) == 3


def test_seq_s_block_start():
    assert seq_s(11) == 1  # first element of the fifth block


def test_seq_s_matches_block_oracle():
    ref = blocks_reference(2000)
    assert [seq_s(i) for i in range(1, 2001)] == ref


def test_seq_s_rejects_zero():
    with pytest.raises(ValidationError):
        seq_s(0)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(1, 15))
def test_block_value_frequency(j, t):
    # exact law: the t-th occurrence of value j is the j-th entry of block
    # B_{j+t-1}, i.e. term (j+t-2)(j+t-1)/2 + j; so value j occurs >= t times
    # among the first (j+t-1)(j+t)/2 terms
    exact = (j + t - 2) * (j + t - 1) // 2 + j
    assert seq_s(exact) == j
    assert sum(1 for i in range(1, exact + 1) if seq_s(i) == j) == t
    # the coarser linear bound j(j+1)/2 + t*j is valid once j >= (t-1)(t-2)/2
    if j >= (t - 1) * (t - 2) // 2:
        limit = j * (j + 1) // 2 + t * j
        count = sum(1 for i in range(1, limit + 1) if seq_s(i) == j)
        assert count >= t


def all_vertex_lists(n, colors=(1, 2, 3)):
    return ListAssignment({v: colors for v in range(n)})


def test_single_set_six_visits():
    lists = all_vertex_lists(6)
    state = select_sublists([range(6)], lists, steps=6)
    assert state.histories[0] == (
        (1, 2), (1, 3), (2, 3), (1, 2), (1, 3), (2, 3),
    )
    assert state.visit_vertices[0] == (0, 1, 2, 3, 4, 5)
    assert state.executed == 6
    assert not state.starved


def test_two_disjoint_sets_prefix():
    lists = all_vertex_lists(6)
    state = select_sublists([[0, 1, 2], [3, 4, 5]], lists, steps=3)
    # schedule prefix is 1, 1, 2
    assert len(state.histories[0]) == 2
    assert len(state.histories[1]) == 1
    assert state.histories[0][0] != state.histories[0][1]


def test_conditions_hold_on_random_runs():
    rng = random.Random(31)
    for _ in range(20):
        n = rng.randint(4, 30)
        lists = random_lists(range(n), 3, 7, rng)
        k = rng.randint(1, 5)
        sets = [sorted(rng.sample(range(n), rng.randint(1, n))) for _ in range(k)]
        state = select_sublists(sets, lists, steps=rng.randint(1, 120))
        assert state.condition_violations() == []
        # every assigned pair is a 2-subset of that vertex's list
        for v, pair in state.assigned.items():
            assert len(pair) == 2 and set(pair) <= set(lists[v])


def test_determinism():
    rng = random.Random(8)
    lists = random_lists(range(12), 3, 6, rng)
    sets = [[0, 2, 4, 6], [1, 3, 5, 7], [8, 9, 10, 11]]
    a = select_sublists(sets, lists, steps=40)
    b = select_sublists(sets, lists, steps=40)
    assert a == b


def test_starved_visits_recorded_and_run_continues():
    lists = all_vertex_lists(3)
    state = select_sublists([[0], [1, 2]], lists, steps=6)
    # schedule: 1, 1, 2, 1, 2, 1 -> set 1 starves after its first assignment
    assert len(state.histories[0]) == 1
    assert state.starved  # at least one starved visit on set 1
    assert all(idx == 0 for _, idx in state.starved)
    assert state.executed == 6


def test_visits_skip_indices_beyond_family():
    lists = all_vertex_lists(10)
    state = select_sublists([range(10)], lists, steps=5)
    # all five executed visits land on the single set
    assert state.visit_counts == (5,)
    assert len(state.histories[0]) == 5


def test_rejects_wrong_list_size():
    lists = ListAssignment({0: (1, 2)})
    with pytest.raises(ValidationError, match="need 3"):
        select_sublists([[0]], lists, steps=1)


def test_certificate_three_elements():
    lists = all_vertex_lists(3)
    state = select_sublists([range(3)], lists, steps=3)
    caps = not_amc_certificate(state, 0)
    # exhaustive: over all 2^3 colorings, each color fits its cap and caps <= 2
    for color, cap in caps.items():
        assert cap <= 2
    for choice in itertools.product(*state.histories[0]):
        for color in caps:
            assert choice.count(color) <= caps[color]


def test_certificate_vacuous_when_only_starved():
    lists = all_vertex_lists(2)
    state = select_sublists([[0], [0, 1]], lists, steps=4)
    # schedule 1, 1, 2, 1: set 0 assigns once then starves twice
    assert not_amc_certificate(state, 0) != {}
    lists1 = all_vertex_lists(1)
    state1 = select_sublists([[0], [0]], lists1, steps=3)
    # schedule 1, 1, 2: the visit to set 1 finds vertex 0 already assigned
    assert state1.visit_counts[1] == 1
    assert state1.histories[1] == ()
    assert not_amc_certificate(state1, 1) == {}


def test_certificate_requires_visit():
    lists = all_vertex_lists(4)
    state = select_sublists([range(4), range(4)], lists, steps=1)
    with pytest.raises(ValidationError, match="never visited"):
        not_amc_certificate(state, 1)
    with pytest.raises(ValidationError, match="no set"):
        not_amc_certificate(state, 5)


def test_certificate_twelve_elements_bound_eight():
    lists = all_vertex_lists(12)
    # single set, twelve visits: history cycles with period three
    state = select_sublists([range(12)], lists, steps=12)
    caps = not_amc_certificate(state, 0)
    assert caps[1] == 8 == 2 * ceil(12 / 3)
    # exhaustive confirmation over all 2^12 colorings from the pairs
    best = {c: 0 for c in caps}
    for choice in itertools.product(*state.histories[0]):
        for c in best:
            best[c] = max(best[c], choice.count(c))
    for color, cap in caps.items():
        assert best[color] <= cap
    assert best[1] == 8  # the bound is tight here


def test_certificate_caps_respect_global_bound():
    rng = random.Random(77)
    for _ in range(15):
        n = rng.randint(3, 16)
        lists = random_lists(range(n), 3, 6, rng)
        state = select_sublists([range(n)], lists, steps=n)
        k = len(state.histories[0])
        caps = not_amc_certificate(state, 0)
        for cap in caps.values():
            assert cap <= 2 * ceil(k / 3)
        if k <= 14:
            best = {c: 0 for c in caps}
            for choice in itertools.product(*state.histories[0]):
                for c in best:
                    best[c] = max(best[c], choice.count(c))
            for color in best:
                assert best[color] <= caps[color]
