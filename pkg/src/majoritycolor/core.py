"""Core data model: immutable graphs, digraphs, color lists, weights, prefixes.

Vertices are dense integers 0..n-1; the numeration order of a countable graph
maps to increasing ids.  Colors are opaque non-negative integers.  All types
are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import ValidationError

# A coloring is a plain dict vertex id -> color; partial maps are allowed.
Coloring = dict

DEG_FINITE = "finite"
DEG_INFINITE = "infinite"
CLASS_A = "A"
CLASS_B = "B"


def _check_vertex(v: int, n: int) -> None:
    if not 0 <= v < n:
        raise ValidationError(f"vertex {v} out of range [0, {n})")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with per-vertex sorted adjacency tuples."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            _check_vertex(u, n)
            _check_vertex(v, n)
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if v in adj[u]:
                raise ValidationError(f"duplicate edge {u}-{v}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in adj))

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError("vertex count must be nonnegative")
        if len(self.adjacency) != self.n:
            raise ValidationError("adjacency length differs from vertex count")
        sets = [set(nbrs) for nbrs in self.adjacency]
        for u, nbrs in enumerate(self.adjacency):
            if len(sets[u]) != len(nbrs) or list(nbrs) != sorted(nbrs):
                raise ValidationError(f"adjacency of {u} not sorted or not unique")
            for v in nbrs:
                _check_vertex(v, self.n)
                if v == u:
                    raise ValidationError(f"self-loop at vertex {u}")
                if u not in sets[v]:
                    raise ValidationError(f"asymmetric edge {u}-{v}")

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(nbrs) for nbrs in self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adjacency[u]:
                if v > u:
                    yield (u, v)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2


@dataclass(frozen=True)
class Digraph:
    """Directed graph with per-vertex sorted out-adjacency; antiparallel arcs
    are permitted, self-loops and duplicate arcs are not."""

    n: int
    out_adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        out: list[set[int]] = [set() for _ in range(n)]
        for u, v in arcs:
            _check_vertex(u, n)
            _check_vertex(v, n)
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if v in out[u]:
                raise ValidationError(f"duplicate arc {u}->{v}")
            out[u].add(v)
        return cls(n, tuple(tuple(sorted(s)) for s in out))

    def __post_init__(self):
        if self.n < 0:
            raise ValidationError("vertex count must be nonnegative")
        if len(self.out_adjacency) != self.n:
            raise ValidationError("adjacency length differs from vertex count")
        for u, nbrs in enumerate(self.out_adjacency):
            if len(set(nbrs)) != len(nbrs) or list(nbrs) != sorted(nbrs):
                raise ValidationError(f"out-adjacency of {u} not sorted or not unique")
            for v in nbrs:
                _check_vertex(v, self.n)
                if v == u:
                    raise ValidationError(f"self-loop at vertex {u}")

    @cached_property
    def in_adjacency(self) -> tuple[tuple[int, ...], ...]:
        rev: list[list[int]] = [[] for _ in range(self.n)]
        for u in range(self.n):
            for v in self.out_adjacency[u]:
                rev[v].append(u)
        return tuple(tuple(sorted(r)) for r in rev)

    @cached_property
    def out_neighbor_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(nbrs) for nbrs in self.out_adjacency)

    def out_degree(self, v: int) -> int:
        return len(self.out_adjacency[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_adjacency[v])

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self.out_adjacency[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self.in_adjacency[v]

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.out_adjacency[u]:
                yield (u, v)

    @property
    def arc_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.out_adjacency)


AnyGraph = Union[Graph, Digraph]


@dataclass(frozen=True)
class ListAssignment:
    """Per-vertex ordered color lists; list order matters for tie-breaking."""

    lists: dict

    def __post_init__(self):
        clean = {}
        for v, colors in self.lists.items():
            colors = tuple(colors)
            if not isinstance(v, int) or v < 0:
                raise ValidationError(f"bad vertex id {v!r} in list assignment")
            if not colors:
                raise ValidationError(f"empty color list at vertex {v}")
            if len(set(colors)) != len(colors):
                raise ValidationError(f"repeated color in list of vertex {v}")
            for c in colors:
                if not isinstance(c, int) or c < 0:
                    raise ValidationError(f"bad color {c!r} at vertex {v}")
            clean[v] = colors
        object.__setattr__(self, "lists", clean)

    def __getitem__(self, v: int) -> tuple[int, ...]:
        return self.lists[v]

    def __contains__(self, v: int) -> bool:
        return v in self.lists

    def get(self, v: int):
        return self.lists.get(v)

    def size_of(self, v: int) -> int:
        return len(self.lists[v])

    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.lists))

    def restrict(self, vertices: Iterable[int]) -> "ListAssignment":
        keep = set(vertices)
        return ListAssignment({v: cs for v, cs in self.lists.items() if v in keep})

    def require_sizes(self, vertices: Iterable[int], size: int, what: str) -> None:
        for v in vertices:
            if v not in self.lists:
                raise ValidationError(f"{what}: vertex {v} has no color list")
            if len(self.lists[v]) != size:
                raise ValidationError(
                    f"{what}: vertex {v} has a list of size {len(self.lists[v])}, need {size}"
                )


@dataclass(frozen=True)
class WeightMap:
    """Exact rational weight per (vertex, color in its list)."""

    weights: dict

    def __post_init__(self):
        clean = {}
        for key, value in self.weights.items():
            v, x = key
            clean[(int(v), int(x))] = Fraction(value)
        object.__setattr__(self, "weights", clean)

    @classmethod
    def half_degrees(cls, g: AnyGraph, lists: ListAssignment,
                     vertices: Iterable[int]) -> "WeightMap":
        """Weight deg(v)/2 (out-degree for digraphs) on every list color."""
        deg = (g.out_degree if isinstance(g, Digraph) else g.degree)
        return cls({(v, x): Fraction(deg(v), 2) for v in vertices for x in lists[v]})

    def get(self, v: int, x: int) -> Fraction:
        try:
            return self.weights[(v, x)]
        except KeyError:
            raise ValidationError(f"no weight defined for vertex {v}, color {x}") from None

    def items(self):
        return self.weights.items()

    def require_domain(self, lists: ListAssignment, vertices: Iterable[int]) -> None:
        """The weight domain must be exactly {(v, x): v in vertices, x in L(v)}."""
        expected = {(v, x) for v in vertices for x in lists[v]}
        got = set(self.weights)
        if got != expected:
            missing = sorted(expected - got)[:3]
            extra = sorted(got - expected)[:3]
            raise ValidationError(
                f"weight domain mismatch (missing {missing}, unexpected {extra})"
            )


@dataclass(frozen=True)
class PrefixInstance:
    """Finite truncation of a countable graph plus degree-class metadata.

    degree_class[v] says whether v has finite or infinite degree in the full
    countable graph (out-degree for digraphs).  Infinite-degree vertices carry
    a subclass: "A" when infinitely many of their (out-)neighbors also have
    infinite degree, "B" otherwise.  complete[v] flags finite-degree vertices
    whose full (out-)neighborhood lies inside the prefix.
    """

    graph: AnyGraph
    degree_class: tuple[str, ...]
    subclass: tuple[Optional[str], ...]
    complete: tuple[bool, ...]

    def __post_init__(self):
        n = self.graph.n
        if not (len(self.degree_class) == len(self.subclass) == len(self.complete) == n):
            raise ValidationError("metadata arrays must have one entry per vertex")
        for v in range(n):
            dc = self.degree_class[v]
            if dc not in (DEG_FINITE, DEG_INFINITE):
                raise ValidationError(f"vertex {v}: bad degree class {dc!r}")
            sub = self.subclass[v]
            if dc == DEG_INFINITE:
                if sub not in (CLASS_A, CLASS_B):
                    raise ValidationError(
                        f"vertex {v}: infinite degree requires class A or B"
                    )
                if self.complete[v]:
                    raise ValidationError(
                        f"vertex {v}: complete flag requires finite degree"
                    )
            elif sub is not None:
                raise ValidationError(f"vertex {v}: subclass given for finite degree")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def directed(self) -> bool:
        return isinstance(self.graph, Digraph)

    @cached_property
    def finite_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if self.degree_class[v] == DEG_FINITE)

    @cached_property
    def infinite_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if self.degree_class[v] == DEG_INFINITE)

    @cached_property
    def class_a(self) -> tuple[int, ...]:
        return tuple(v for v in self.infinite_vertices if self.subclass[v] == CLASS_A)

    @cached_property
    def class_b(self) -> tuple[int, ...]:
        return tuple(v for v in self.infinite_vertices if self.subclass[v] == CLASS_B)


def induced_subgraph(g: AnyGraph, keep: Iterable[int]):
    """Induced sub(di)graph on `keep` with ids remapped to 0..|keep|-1.

    Returns (subgraph, remap) where remap maps old ids to new ids.
    """
    kept = sorted(set(keep))
    for v in kept:
        _check_vertex(v, g.n)
    remap = {old: new for new, old in enumerate(kept)}
    if isinstance(g, Digraph):
        arcs = [(remap[u], remap[v]) for u in kept
                for v in g.out_adjacency[u] if v in remap]
        return Digraph.from_arcs(len(kept), arcs), remap
    edges = [(remap[u], remap[v]) for u in kept
             for v in g.adjacency[u] if v in remap and v > u]
    return Graph.from_edges(len(kept), edges), remap


def coloring_respects_lists(coloring: Mapping, lists: ListAssignment) -> bool:
    return all(v in lists and c in lists[v] for v, c in coloring.items())
