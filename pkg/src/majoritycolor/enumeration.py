"""Exhaustive enumeration of small graphs, DAGs, and digraphs up to
isomorphism.

Representatives are canonical: each isomorphism class is identified by the
minimum of its edge bitmask over all vertex permutations, computed with one
vectorized table lookup per candidate.  Intended scale is n <= 6, where the
class counts are 156 graphs, 5984 DAGs, and 1540944 digraphs.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numpy as np

from .core import Digraph, Graph


class Canonizer:
    """Minimum-over-permutations canonical form of edge/arc bitmasks."""

    def __init__(self, n: int, directed: bool):
        self.n = n
        self.directed = directed
        if directed:
            self.pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
        else:
            self.pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        index = {pair: i for i, pair in enumerate(self.pairs)}
        rows = []
        for perm in itertools.permutations(range(n)):
            if directed:
                rows.append([index[(perm[u], perm[v])] for u, v in self.pairs])
            else:
                row = []
                for u, v in self.pairs:
                    a, b = perm[u], perm[v]
                    row.append(index[(min(a, b), max(a, b))])
                rows.append(row)
        self.table = np.array(rows, dtype=np.int64)
        self.weights = (np.int64(1) << np.arange(len(self.pairs), dtype=np.int64))

    def canon_bits(self, bits: Sequence[int]) -> int:
        if len(bits) == 0:
            return 0
        remapped = self.table[:, np.asarray(bits, dtype=np.int64)]
        return int(self.weights[remapped].sum(axis=1).min())

    def mask_bits(self, mask: int) -> list:
        return [i for i in range(len(self.pairs)) if mask >> i & 1]

    def decode(self, mask: int):
        links = [self.pairs[i] for i in self.mask_bits(mask)]
        if self.directed:
            return Digraph.from_arcs(self.n, links)
        return Graph.from_edges(self.n, links)


_CANONIZERS: dict = {}


def canonizer(n: int, directed: bool) -> Canonizer:
    key = (n, directed)
    if key not in _CANONIZERS:
        _CANONIZERS[key] = Canonizer(n, directed)
    return _CANONIZERS[key]


def iter_graphs(n: int) -> Iterator[Graph]:
    """All simple graphs on n vertices up to isomorphism."""
    c = canonizer(n, directed=False)
    for mask in range(1 << len(c.pairs)):
        if c.canon_bits(c.mask_bits(mask)) == mask:
            yield c.decode(mask)


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in g.adjacency[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == g.n


def iter_connected_graphs(n: int) -> Iterator[Graph]:
    return (g for g in iter_graphs(n) if is_connected(g))


def iter_dags(n: int) -> Iterator[Digraph]:
    """All acyclic digraphs on n vertices up to isomorphism.

    Every DAG is isomorphic to one whose arcs all point from smaller to larger
    ids, so enumerating the upper-triangular arc masks covers every class;
    canonical forms dedupe the repeats.
    """
    c = canonizer(n, directed=True)
    index = {pair: i for i, pair in enumerate(c.pairs)}
    upper = [index[(u, v)] for u in range(n) for v in range(u + 1, n)]
    seen = set()
    for mask in range(1 << len(upper)):
        bits = [upper[i] for i in range(len(upper)) if mask >> i & 1]
        canon = c.canon_bits(bits)
        if canon not in seen:
            seen.add(canon)
    for canon in sorted(seen):
        yield c.decode(canon)


_DIGRAPH_LEVELS: dict = {}


def _digraph_masks(n: int) -> list:
    """Sorted canonical arc masks of all digraphs on n vertices up to iso."""
    if n in _DIGRAPH_LEVELS:
        return _DIGRAPH_LEVELS[n]
    c = canonizer(n, directed=True)
    if n == 1:
        masks = [0]
        _DIGRAPH_LEVELS[n] = masks
        return masks
    parents = _digraph_masks(n - 1)
    parent_canonizer = canonizer(n - 1, directed=True)
    index = {pair: i for i, pair in enumerate(c.pairs)}
    w = n - 1  # the freshly added vertex
    new_positions = [index[(u, w)] for u in range(w)] + [index[(w, u)] for u in range(w)]
    pattern_bits = []
    for pattern in range(1 << (2 * w)):
        pattern_bits.append(
            np.array(
                [new_positions[i] for i in range(2 * w) if pattern >> i & 1],
                dtype=np.int64,
            )
        )
    seen = set()
    for parent in parents:
        base = np.array(
            [index[parent_canonizer.pairs[i]] for i in parent_canonizer.mask_bits(parent)],
            dtype=np.int64,
        )
        for bits in pattern_bits:
            candidate = np.concatenate((base, bits)) if base.size else bits
            seen.add(c.canon_bits(candidate))
    masks = sorted(seen)
    _DIGRAPH_LEVELS[n] = masks
    return masks


def iter_digraphs(n: int) -> Iterator[Digraph]:
    """All digraphs on n vertices up to isomorphism, by canonical augmentation."""
    c = canonizer(n, directed=True)
    for mask in _digraph_masks(n):
        yield c.decode(mask)


def count_digraphs(n: int) -> int:
    return len(_digraph_masks(n))
