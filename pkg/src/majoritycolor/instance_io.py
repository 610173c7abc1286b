"""Plain-text instance format shared by all tools.

One record per line, `#` starts a comment:

    graph undirected | graph directed        header, required first record
    v <id> [deg=finite|deg=infinite] [class=A|class=B] [complete]
    e <u> <v>                                edge, or arc u->v when directed
    l <id> <c1> <c2> ...                     ordered color list
    r <id> <color> <num>/<den>               exact rational weight
    s <index> <id> <id> ...                  indexed vertex family (1-based)

Vertices default to deg=finite and not complete.  Metadata on any vertex line
promotes the parsed object to a PrefixInstance.  Serialization is canonical,
so parse(serialize(x)) is structurally equal to x.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import (
    CLASS_A,
    CLASS_B,
    DEG_FINITE,
    DEG_INFINITE,
    Digraph,
    Graph,
    ListAssignment,
    PrefixInstance,
    WeightMap,
)
from .errors import ParseError, ValidationError


@dataclass(frozen=True)
class Instance:
    """Parsed instance bundle: a graph plus whatever optional data came along."""

    graph: Union[Graph, Digraph]
    prefix: Optional[PrefixInstance]
    lists: Optional[ListAssignment]
    weights: Optional[WeightMap]
    sets: tuple  # tuple[tuple[int, ...], ...], 0-indexed families

    @property
    def directed(self) -> bool:
        return isinstance(self.graph, Digraph)

    def require_lists(self) -> ListAssignment:
        if self.lists is None:
            raise ValidationError("instance carries no color lists (`l` lines)")
        return self.lists

    def require_prefix(self) -> PrefixInstance:
        if self.prefix is None:
            raise ValidationError("instance carries no degree-class metadata")
        return self.prefix


def _int(token: str, what: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected integer {what}, got {token!r}", lineno) from None


def parse_instance(text: str) -> Instance:
    directed = None
    vertex_meta = {}  # id -> (deg, subclass, complete)
    edge_seen = set()
    edges = []
    lists = {}
    weights = {}
    sets = {}
    any_meta = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]

        if directed is None:
            if kind != "graph" or len(tokens) != 2 or tokens[1] not in ("undirected", "directed"):
                raise ParseError(
                    "first record must be `graph undirected` or `graph directed`", lineno
                )
            directed = tokens[1] == "directed"
            continue

        if kind == "graph":
            raise ParseError("duplicate header", lineno)

        if kind == "v":
            if len(tokens) < 2:
                raise ParseError("vertex line needs an id", lineno)
            v = _int(tokens[1], "vertex id", lineno)
            if v < 0:
                raise ParseError(f"negative vertex id {v}", lineno)
            if v in vertex_meta:
                raise ParseError(f"duplicate vertex {v}", lineno)
            deg, sub, complete = DEG_FINITE, None, False
            deg_given = sub_given = False
            for tok in tokens[2:]:
                if tok == "complete":
                    if complete:
                        raise ParseError("repeated `complete` flag", lineno)
                    complete = True
                elif tok.startswith("deg="):
                    if deg_given:
                        raise ParseError("repeated deg= key", lineno)
                    deg_given = True
                    deg = tok[4:]
                    if deg not in (DEG_FINITE, DEG_INFINITE):
                        raise ParseError(f"bad degree class {tok!r}", lineno)
                elif tok.startswith("class="):
                    if sub_given:
                        raise ParseError("repeated class= key", lineno)
                    sub_given = True
                    sub = tok[6:]
                    if sub not in (CLASS_A, CLASS_B):
                        raise ParseError(f"bad subclass {tok!r}", lineno)
                else:
                    raise ParseError(f"unknown key {tok!r} on vertex line", lineno)
            if tokens[2:]:
                any_meta = True
            vertex_meta[v] = (deg, sub, complete)

        elif kind == "e":
            if len(tokens) != 3:
                raise ParseError("edge line needs exactly two endpoints", lineno)
            u = _int(tokens[1], "endpoint", lineno)
            v = _int(tokens[2], "endpoint", lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            key = (u, v) if directed else (min(u, v), max(u, v))
            if key in edge_seen:
                kindname = "arc" if directed else "edge"
                raise ParseError(f"duplicate {kindname} {u} {v}", lineno)
            edge_seen.add(key)
            edges.append((u, v))

        elif kind == "l":
            if len(tokens) < 3:
                raise ParseError("list line needs an id and at least one color", lineno)
            v = _int(tokens[1], "vertex id", lineno)
            if v in lists:
                raise ParseError(f"duplicate list for vertex {v}", lineno)
            colors = tuple(_int(t, "color", lineno) for t in tokens[2:])
            if any(c < 0 for c in colors):
                raise ParseError("colors must be nonnegative", lineno)
            if len(set(colors)) != len(colors):
                raise ParseError(f"repeated color in list of vertex {v}", lineno)
            lists[v] = colors

        elif kind == "r":
            if len(tokens) != 4:
                raise ParseError("weight line is `r <id> <color> <num>/<den>`", lineno)
            v = _int(tokens[1], "vertex id", lineno)
            x = _int(tokens[2], "color", lineno)
            if "/" not in tokens[3]:
                raise ParseError("weight must be written as <num>/<den>", lineno)
            num_s, den_s = tokens[3].split("/", 1)
            num = _int(num_s, "numerator", lineno)
            den = _int(den_s, "denominator", lineno)
            if den == 0:
                raise ParseError("zero denominator", lineno)
            if (v, x) in weights:
                raise ParseError(f"duplicate weight for vertex {v}, color {x}", lineno)
            weights[(v, x)] = Fraction(num, den)

        elif kind == "s":
            if len(tokens) < 3:
                raise ParseError("set line needs an index and at least one element", lineno)
            idx = _int(tokens[1], "set index", lineno)
            if idx < 1:
                raise ParseError("set indices are 1-based positive integers", lineno)
            if idx in sets:
                raise ParseError(f"duplicate set index {idx}", lineno)
            members = tuple(_int(t, "set element", lineno) for t in tokens[2:])
            if len(set(members)) != len(members):
                raise ParseError(f"repeated element in set {idx}", lineno)
            sets[idx] = tuple(sorted(members))

        else:
            raise ParseError(f"unknown record type {kind!r}", lineno)

    if directed is None:
        raise ParseError("empty instance: missing `graph` header")

    n = len(vertex_meta)
    missing = sorted(set(range(n)) - set(vertex_meta))
    if missing or any(v >= n for v in vertex_meta):
        raise ValidationError(
            f"vertex ids must be dense 0..{n - 1}; got {sorted(vertex_meta)}"
        )

    for u, v in edges:
        for w in (u, v):
            if w not in vertex_meta:
                raise ValidationError(f"edge endpoint {w} is not a declared vertex")
    graph = Digraph.from_arcs(n, edges) if directed else Graph.from_edges(n, edges)

    for v in lists:
        if v not in vertex_meta:
            raise ValidationError(f"list given for undeclared vertex {v}")
    for (v, x) in weights:
        if v not in lists:
            raise ValidationError(f"weight given for vertex {v} which has no list")
        if x not in lists[v]:
            raise ValidationError(f"weight color {x} not in the list of vertex {v}")

    if sets:
        k = len(sets)
        if sorted(sets) != list(range(1, k + 1)):
            raise ValidationError(f"set indices must be dense 1..{k}; got {sorted(sets)}")
        for idx, members in sets.items():
            for w in members:
                if w not in vertex_meta:
                    raise ValidationError(f"set {idx} contains undeclared vertex {w}")
    set_tuple = tuple(sets[i] for i in sorted(sets))

    prefix = None
    if any_meta:
        deg = tuple(vertex_meta[v][0] for v in range(n))
        sub = tuple(vertex_meta[v][1] for v in range(n))
        comp = tuple(vertex_meta[v][2] for v in range(n))
        prefix = PrefixInstance(graph, deg, sub, comp)

    return Instance(
        graph=graph,
        prefix=prefix,
        lists=ListAssignment(lists) if lists else None,
        weights=WeightMap(weights) if weights else None,
        sets=set_tuple,
    )


def _vertex_lines(obj) -> list[str]:
    if isinstance(obj, PrefixInstance):
        out = []
        for v in range(obj.n):
            parts = [f"v {v}", f"deg={obj.degree_class[v]}"]
            if obj.subclass[v] is not None:
                parts.append(f"class={obj.subclass[v]}")
            if obj.complete[v]:
                parts.append("complete")
            out.append(" ".join(parts))
        return out
    return [f"v {v}" for v in range(obj.n)]


def serialize_instance(obj) -> str:
    """Canonical text form; accepts Graph, Digraph, PrefixInstance or Instance."""
    lists = weights = None
    sets = ()
    if isinstance(obj, Instance):
        lists, weights, sets = obj.lists, obj.weights, obj.sets
        obj = obj.prefix if obj.prefix is not None else obj.graph

    graph = obj.graph if isinstance(obj, PrefixInstance) else obj
    directed = isinstance(graph, Digraph)

    lines = ["graph directed" if directed else "graph undirected"]
    lines.extend(_vertex_lines(obj))
    if directed:
        lines.extend(f"e {u} {v}" for u, v in sorted(graph.arcs()))
    else:
        lines.extend(f"e {u} {v}" for u, v in sorted(graph.edges()))
    if lists is not None:
        for v in lists.vertices():
            lines.append("l " + str(v) + " " + " ".join(map(str, lists[v])))
    if weights is not None:
        for (v, x), w in sorted(weights.items()):
            lines.append(f"r {v} {x} {w.numerator}/{w.denominator}")
    for i, members in enumerate(sets, start=1):
        lines.append(f"s {i} " + " ".join(map(str, members)))
    return "\n".join(lines) + "\n"


def parse_coloring(text: str) -> dict:
    """Coloring files are `c <id> <color>` lines, comments allowed."""
    coloring = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] != "c" or len(tokens) != 3:
            raise ParseError("coloring lines are `c <id> <color>`", lineno)
        v = _int(tokens[1], "vertex id", lineno)
        x = _int(tokens[2], "color", lineno)
        if v in coloring:
            raise ParseError(f"duplicate color for vertex {v}", lineno)
        coloring[v] = x
    return coloring


def serialize_coloring(coloring: dict) -> str:
    return "".join(f"c {v} {coloring[v]}\n" for v in sorted(coloring))
