"""Shared helpers for the test suite: seeded instance builders and small
independent brute-force oracles (deliberately separate from the package's
solver code paths)."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from majoritycolor import Digraph, Graph, ListAssignment, WeightMap


def random_graph(n, p, rng):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def random_digraph(n, p, rng):
    arcs = [(u, v) for u in range(n) for v in range(n)
            if u != v and rng.random() < p]
    return Digraph.from_arcs(n, arcs)


def random_lists(vertices, size, universe, rng):
    return ListAssignment(
        {v: tuple(rng.sample(range(universe), size)) for v in vertices}
    )


def random_split_graph(f_count, i_count, p, rng):
    """Graph on f_count + i_count vertices whose last i_count vertices form an
    independent set; edges exist only inside the first part or across."""
    n = f_count + i_count
    core = list(range(f_count))
    independent = list(range(f_count, n))
    edges = []
    for u in range(f_count):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v))
    return Graph.from_edges(n, edges), core, independent


def random_split_digraph(f_count, i_count, p, rng):
    n = f_count + i_count
    core = list(range(f_count))
    independent = list(range(f_count, n))
    arcs = []
    for u in range(n):
        for v in range(n):
            if u == v or (u >= f_count and v >= f_count):
                continue
            if rng.random() < p:
                arcs.append((u, v))
    return Digraph.from_arcs(n, arcs), core, independent


def half_degree_weights(g, lists, vertices):
    degree = g.out_degree if isinstance(g, Digraph) else g.degree
    return WeightMap({(v, x): Fraction(degree(v), 2) for v in vertices for x in lists[v]})


# ---------------------------------------------------------------------------
# Independent brute-force reference implementations
# ---------------------------------------------------------------------------


def brute_bad_count(g, coloring, v):
    nbrs = g.out_adjacency[v] if isinstance(g, Digraph) else g.adjacency[v]
    return sum(1 for u in nbrs if coloring[u] == coloring[v])


def brute_is_majority(g, coloring):
    if isinstance(g, Digraph):
        return all(
            2 * brute_bad_count(g, coloring, v) <= g.out_degree(v)
            for v in range(g.n)
        )
    return all(
        2 * brute_bad_count(g, coloring, v) <= g.degree(v) for v in range(g.n)
    )


def brute_first_majority(g, lists):
    """Plain product enumeration, no pruning; first hit in lexicographic order."""
    order = list(range(g.n))
    for choice in itertools.product(*(lists[v] for v in order)):
        coloring = dict(zip(order, choice))
        if brute_is_majority(g, coloring):
            return coloring
    return None


def brute_guarantee_all_colorings(g, core, independent, coloring, ind_lists, weights):
    """Check bad(v) <= weight(v, c(v)) for every coloring of the independent
    part, by full enumeration.  Returns True iff no combination violates."""
    independent = list(independent)
    nbrs = g.out_adjacency if isinstance(g, Digraph) else g.adjacency
    for choice in itertools.product(*(ind_lists[u] for u in independent)):
        full = dict(coloring)
        full.update(zip(independent, choice))
        for v in core:
            bad = sum(1 for u in nbrs[v] if full[u] == full[v])
            if bad > weights.get(v, full[v]):
                return False
    return True
