"""Deterministic prefix families of countable graphs with truthful metadata.

Every family fixes one countable (di)graph and a numeration of its vertices;
`generate` materializes the subgraph induced by the first T ids together with
degree-class metadata describing the full countable object.  Construction is
prefix-monotone: growing T never changes the edges among earlier ids, so
certificates can be tracked across growing prefixes.

Two-sided families interleave their sides in the numeration (a1, b1, a2, ...)
so both sides are represented in every prefix.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import isqrt
import random
from typing import Mapping, Optional

from .core import (
    CLASS_A,
    CLASS_B,
    DEG_FINITE,
    DEG_INFINITE,
    Digraph,
    Graph,
    PrefixInstance,
)
from .errors import ValidationError


@dataclass(frozen=True)
class FamilySpec:
    family: str
    size: int
    seed: int = 0
    params: tuple = ()

    @classmethod
    def make(cls, family: str, size: int, seed: int = 0,
             params: Optional[Mapping] = None) -> "FamilySpec":
        items = tuple(sorted((params or {}).items()))
        return cls(family, size, seed, items)

    def param(self, key: str, default):
        for k, v in self.params:
            if k == key:
                return v
        return default


def _cantor_index(x: int, y: int) -> int:
    d = x + y
    return d * (d + 1) // 2 + x


def _cantor_unpair(i: int) -> tuple:
    d = (isqrt(8 * i + 1) - 1) // 2
    while (d + 1) * (d + 2) // 2 <= i:
        d += 1
    while d * (d + 1) // 2 > i:
        d -= 1
    x = i - d * (d + 1) // 2
    return x, d - x


def _all_finite(n):
    return [DEG_FINITE] * n, [None] * n


def _build_ray(T, seed, spec):
    edges = [(i, i + 1) for i in range(T - 1)]
    deg, sub = _all_finite(T)
    # Endpoints of the prefix are left unflagged, including vertex 0.
    complete = [0 < i < T - 1 for i in range(T)]
    return edges, deg, sub, complete, False


def _double_ray_pos(i: int) -> int:
    if i == 0:
        return 0
    return (i + 1) // 2 if i % 2 == 1 else -(i // 2)


def _double_ray_id(p: int) -> int:
    if p == 0:
        return 0
    return 2 * p - 1 if p > 0 else -2 * p


def _build_double_ray(T, seed, spec):
    edges = []
    for i in range(T):
        p = _double_ray_pos(i)
        j = _double_ray_id(p + 1)
        if j < T:
            edges.append((i, j))
    deg, sub = _all_finite(T)
    complete = [
        _double_ray_id(_double_ray_pos(i) + 1) < T
        and _double_ray_id(_double_ray_pos(i) - 1) < T
        for i in range(T)
    ]
    return edges, deg, sub, complete, False


def _grid_neighbors(x, y):
    if x > 0:
        yield x - 1, y
    if y > 0:
        yield x, y - 1
    yield x + 1, y
    yield x, y + 1


def _build_grid(T, seed, spec):
    edges = []
    complete = []
    for i in range(T):
        x, y = _cantor_unpair(i)
        nbr_ids = [_cantor_index(a, b) for a, b in _grid_neighbors(x, y)]
        complete.append(all(j < T for j in nbr_ids))
        for j in nbr_ids:
            if i < j < T:
                edges.append((i, j))
    deg, sub = _all_finite(T)
    return edges, deg, sub, complete, False


def _build_infinite_star(T, seed, spec):
    edges = [(0, i) for i in range(1, T)]
    deg, sub = _all_finite(T)
    deg[0], sub[0] = DEG_INFINITE, CLASS_B
    complete = [False] + [True] * (T - 1)
    return edges, deg, sub, complete, False


def _build_infinite_clique(T, seed, spec):
    edges = [(i, j) for i in range(T) for j in range(i + 1, T)]
    deg = [DEG_INFINITE] * T
    sub = [CLASS_A] * T
    return edges, deg, sub, [False] * T, False


def _half_graph_role(i: int) -> tuple:
    """id -> ("a"|"b", 1-based side index)."""
    return ("a", i // 2 + 1) if i % 2 == 0 else ("b", (i + 1) // 2)


def _build_half_graph(T, seed, spec):
    edges = []
    deg: list = []
    sub: list = []
    complete = []
    for v in range(T):
        side, idx = _half_graph_role(v)
        if side == "a":
            deg.append(DEG_INFINITE)
            sub.append(CLASS_B)
            complete.append(False)
        else:
            deg.append(DEG_FINITE)
            sub.append(None)
            # b_j needs a_1..a_{j-1}; a_i sits at id 2(i-1)
            complete.append(idx == 1 or 2 * (idx - 2) < T)
    for v in range(T):
        side, j = _half_graph_role(v)
        if side != "b":
            continue
        for i in range(1, j):
            a_id = 2 * (i - 1)
            if a_id < T:
                edges.append((min(a_id, v), max(a_id, v)))
    return edges, deg, sub, complete, False


def _build_complete_bipartite(T, seed, spec):
    edges = []
    for u in range(T):
        for v in range(u + 1, T):
            if u % 2 != v % 2:
                edges.append((u, v))
    deg = [DEG_INFINITE] * T
    sub = [CLASS_A] * T
    return edges, deg, sub, [False] * T, False


def _ray_cell_id(r: int, p: int) -> int:
    return 1 + _cantor_index(r, p)


def _build_star_of_rays(T, seed, spec):
    edges = []
    deg, sub = _all_finite(T)
    complete = [False] * T
    if T >= 1:
        deg[0], sub[0] = DEG_INFINITE, CLASS_B
    for v in range(1, T):
        r, p = _cantor_unpair(v - 1)
        succ = _ray_cell_id(r, p + 1)
        if succ < T:
            edges.append((min(v, succ), max(v, succ)))
        if p == 0 and v < T:
            edges.append((0, v))
        complete[v] = succ < T  # predecessor (center or p-1 cell) has smaller id
    return edges, deg, sub, complete, False


def _rlf_attachments(T, seed, max_degree):
    """Shared edge stream for the random locally finite families."""
    degree = [0] * T
    chosen_per_vertex = []
    for j in range(T):
        rng = random.Random(seed * 1_000_003 + j)
        eligible = [i for i in range(j) if degree[i] < max_degree]
        want = rng.randint(0, min(max_degree, j))
        take = min(want, len(eligible))
        chosen = sorted(rng.sample(eligible, take)) if take else []
        for i in chosen:
            degree[i] += 1
            degree[j] += 1
        chosen_per_vertex.append((rng, chosen))
    return degree, chosen_per_vertex


def _build_random_locally_finite(T, seed, spec):
    max_degree = int(spec.param("max_degree", 6))
    if max_degree < 1:
        raise ValidationError("max_degree must be positive")
    degree, chosen = _rlf_attachments(T, seed, max_degree)
    edges = [(i, j) for j, (_, picks) in enumerate(chosen) for i in picks]
    deg, sub = _all_finite(T)
    complete = [degree[v] == max_degree for v in range(T)]
    return edges, deg, sub, complete, False


def _build_directed_ray(T, seed, spec):
    arcs = [(i, i + 1) for i in range(T - 1)]
    deg, sub = _all_finite(T)
    complete = [i + 1 < T for i in range(T)]
    return arcs, deg, sub, complete, True


def _build_directed_double_ray(T, seed, spec):
    arcs = []
    complete = []
    for i in range(T):
        j = _double_ray_id(_double_ray_pos(i) + 1)
        if j < T:
            arcs.append((i, j))
        complete.append(j < T)
    deg, sub = _all_finite(T)
    return arcs, deg, sub, complete, True


def _build_directed_grid(T, seed, spec):
    arcs = []
    complete = []
    for i in range(T):
        x, y = _cantor_unpair(i)
        heads = [_cantor_index(x + 1, y), _cantor_index(x, y + 1)]
        complete.append(all(h < T for h in heads))
        arcs.extend((i, h) for h in heads if h < T)
    deg, sub = _all_finite(T)
    return arcs, deg, sub, complete, True


def _build_directed_infinite_star(T, seed, spec):
    arcs = [(0, i) for i in range(1, T)]
    deg, sub = _all_finite(T)
    deg[0], sub[0] = DEG_INFINITE, CLASS_B
    complete = [False] + [True] * (T - 1)  # leaves have no out-arcs at all
    return arcs, deg, sub, complete, True


def _build_directed_infinite_clique(T, seed, spec):
    arcs = [(i, j) for i in range(T) for j in range(T) if i != j]
    deg = [DEG_INFINITE] * T
    sub = [CLASS_A] * T
    return arcs, deg, sub, [False] * T, True


def _build_directed_half_graph(T, seed, spec):
    arcs = []
    deg: list = []
    sub: list = []
    complete = []
    for v in range(T):
        side, idx = _half_graph_role(v)
        if side == "a":
            deg.append(DEG_INFINITE)
            sub.append(CLASS_B)
            complete.append(False)
        else:
            deg.append(DEG_FINITE)
            sub.append(None)
            complete.append(True)  # b-side has out-degree zero
    for v in range(T):
        side, j = _half_graph_role(v)
        if side != "b":
            continue
        for i in range(1, j):
            a_id = 2 * (i - 1)
            if a_id < T:
                arcs.append((a_id, v))
    return arcs, deg, sub, complete, True


def _build_directed_complete_bipartite(T, seed, spec):
    arcs = []
    for u in range(T):
        for v in range(T):
            if u != v and u % 2 != v % 2:
                arcs.append((u, v))
    deg = [DEG_INFINITE] * T
    sub = [CLASS_A] * T
    return arcs, deg, sub, [False] * T, True


def _build_directed_star_of_rays(T, seed, spec):
    arcs = []
    deg, sub = _all_finite(T)
    complete = [False] * T
    if T >= 1:
        deg[0], sub[0] = DEG_INFINITE, CLASS_B
    for v in range(1, T):
        r, p = _cantor_unpair(v - 1)
        if p == 0:
            arcs.append((0, v))
        succ = _ray_cell_id(r, p + 1)
        if succ < T:
            arcs.append((v, succ))
        complete[v] = succ < T
    return arcs, deg, sub, complete, True


def _build_directed_random_locally_finite(T, seed, spec):
    max_degree = int(spec.param("max_degree", 6))
    if max_degree < 1:
        raise ValidationError("max_degree must be positive")
    degree, chosen = _rlf_attachments(T, seed, max_degree)
    arcs = []
    for j, (rng, picks) in enumerate(chosen):
        for i in picks:
            arcs.append((j, i) if rng.random() < 0.5 else (i, j))
    deg, sub = _all_finite(T)
    complete = [degree[v] == max_degree for v in range(T)]
    return arcs, deg, sub, complete, True


FAMILIES = {
    "ray": _build_ray,
    "double_ray": _build_double_ray,
    "grid": _build_grid,
    "infinite_star": _build_infinite_star,
    "infinite_clique": _build_infinite_clique,
    "half_graph": _build_half_graph,
    "complete_bipartite": _build_complete_bipartite,
    "star_of_rays": _build_star_of_rays,
    "random_locally_finite": _build_random_locally_finite,
    "directed_ray": _build_directed_ray,
    "directed_double_ray": _build_directed_double_ray,
    "directed_grid": _build_directed_grid,
    "directed_infinite_star": _build_directed_infinite_star,
    "directed_infinite_clique": _build_directed_infinite_clique,
    "directed_half_graph": _build_directed_half_graph,
    "directed_complete_bipartite": _build_directed_complete_bipartite,
    "directed_star_of_rays": _build_directed_star_of_rays,
    "directed_random_locally_finite": _build_directed_random_locally_finite,
}

UNDIRECTED_FAMILIES = tuple(name for name in FAMILIES if not name.startswith("directed_"))
DIRECTED_FAMILIES = tuple(name for name in FAMILIES if name.startswith("directed_"))


def generate(spec: FamilySpec) -> PrefixInstance:
    if spec.family not in FAMILIES:
        known = ", ".join(sorted(FAMILIES))
        raise ValidationError(f"unknown family {spec.family!r} (known: {known})")
    if spec.size < 1:
        raise ValidationError("prefix size must be at least 1")
    links, deg, sub, complete, directed = FAMILIES[spec.family](
        spec.size, spec.seed, spec
    )
    if directed:
        graph = Digraph.from_arcs(spec.size, links)
    else:
        graph = Graph.from_edges(spec.size, links)
    return PrefixInstance(graph, tuple(deg), tuple(sub), tuple(complete))


def grow(spec: FamilySpec, new_size: int) -> PrefixInstance:
    """Monotone extension: the edges among the first `spec.size` ids of the
    grown instance match generate(spec) exactly."""
    if new_size <= spec.size:
        raise ValidationError(f"new size {new_size} must exceed {spec.size}")
    return generate(replace(spec, size=new_size))
