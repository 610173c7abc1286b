"""Command-line interface.

Subcommands: gen, solve {lovasz|bernardi|pipeline|greedy-dag|peel|
pipeline-directed}, verify, oracle {exists|choosable}, backforth.

Every solve run re-verifies its own output with the verify module before
reporting success and exits nonzero when that gate fails.  Reports are
deterministic for a fixed input and parameter set; wall-clock time goes to
stderr so reports stay byte-identical across repeated and parallel runs.
Exit codes: 0 success, 1 usage/parse error, 2 infeasible precondition,
3 budget refusal.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction

from . import backforth as bf
from . import directed as dsolve
from . import generators
from . import undirected as usolve
from . import verify as vf
from .core import Digraph, Graph, ListAssignment, WeightMap
from .errors import (
    BudgetExceededError,
    InfeasibleError,
    MajorityColorError,
    ParseError,
    SolverError,
    ValidationError,
)
from .instance_io import (
    parse_coloring,
    parse_instance,
    serialize_coloring,
    serialize_instance,
)
from .parallel import thread_map

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_REFUSED = 3

ENV_ORACLE_BUDGET = "MAJORITYCOLOR_ORACLE_BUDGET"
ENV_RESTART_CAP = "MAJORITYCOLOR_RESTART_CAP"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"environment variable {name} must be an integer")


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None


def _digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def _load(args):
    text = _read(args.infile)
    return parse_instance(text), _digest(text)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def _emit(args, payload: str, pairs: list, extra_json=None) -> None:
    """Write the payload (c/l' lines) and the key:value report."""
    out = sys.stdout
    if getattr(args, "json", False):
        obj = {key: value for key, value in pairs}
        if extra_json:
            obj.update(extra_json)
        out.write(json.dumps(obj, sort_keys=True, default=str) + "\n")
        if getattr(args, "out", None) and payload:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(payload)
        return
    if getattr(args, "out", None) and payload:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(payload)
    elif payload:
        out.write(payload)
        out.write("---\n")
    for key, value in pairs:
        out.write(f"{key}: {_fmt(value)}\n")


def _default_two_lists(n: int) -> ListAssignment:
    return ListAssignment({v: (0, 1) for v in range(n)})


def _split_parts(instance):
    """Core/independent split from degree metadata; no metadata = all core."""
    if instance.prefix is None:
        return list(range(instance.graph.n)), []
    return list(instance.prefix.finite_vertices), list(instance.prefix.infinite_vertices)


def _majority_failures(graph, coloring, jobs):
    directed = isinstance(graph, Digraph)

    def check(v):
        good, bad = vf.good_bad_counts(graph, coloring, v)
        cap = graph.out_degree(v) if directed else graph.degree(v)
        return vf.VertexReport(v, good, bad, 2 * bad <= cap)

    reports = thread_map(check, range(graph.n), jobs)
    return [r for r in reports if not r.satisfied]


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_gen(args) -> int:
    params = {}
    for item in args.param:
        if "=" not in item:
            raise ValidationError(f"--param needs K=V, got {item!r}")
        key, value = item.split("=", 1)
        params[key] = int(value)
    spec = generators.FamilySpec.make(args.family, args.size, args.seed, params)
    text = serialize_instance(generators.generate(spec))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_verify(args) -> int:
    instance, digest = _load(args)
    coloring = parse_coloring(_read(args.coloring))
    graph = instance.graph
    failures = _majority_failures(graph, coloring, args.jobs)
    pairs = [
        ("command", "verify"),
        ("input", args.infile),
        ("digest", digest),
        ("kind", "directed" if instance.directed else "undirected"),
        ("vertices", graph.n),
        ("edges", graph.arc_count if instance.directed else graph.edge_count),
        ("majority", not failures),
        ("failures", len(failures)),
    ]
    for rep in failures:
        pairs.append((f"fail v={rep.vertex}", f"good={rep.good} bad={rep.bad}"))
    extra = {
        "failing_vertices": [
            {"vertex": r.vertex, "good": r.good, "bad": r.bad} for r in failures
        ]
    }
    _emit(args, "", pairs, extra)
    return EXIT_OK


def _solve_report_base(args, digest, name):
    return [
        ("command", f"solve {name}"),
        ("input", args.infile),
        ("digest", digest),
    ]


def _cmd_solve_lovasz(args) -> int:
    instance, digest = _load(args)
    if instance.directed:
        raise ValidationError("lovasz solver needs an undirected graph")
    lists = instance.lists or _default_two_lists(instance.graph.n)
    result = usolve.lovasz_switch_solve(instance.graph, lists)
    failures = _majority_failures(instance.graph, result.coloring, args.jobs)
    pairs = _solve_report_base(args, digest, "lovasz")
    pairs += [
        ("vertices", instance.graph.n),
        ("edges", instance.graph.edge_count),
        ("switches", result.switches),
        ("bad_edges_initial", result.bad_trace[0]),
        ("bad_edges_final", result.bad_trace[-1]),
        ("verified", not failures),
    ]
    _emit(args, serialize_coloring(result.coloring), pairs,
          {"coloring": {str(v): c for v, c in sorted(result.coloring.items())}})
    return EXIT_OK if not failures else EXIT_USAGE


def _weights_or_default(instance, lists, core):
    if instance.weights is not None:
        return instance.weights
    return WeightMap.half_degrees(instance.graph, lists, core)


def _cmd_solve_bernardi(args) -> int:
    instance, digest = _load(args)
    if instance.directed:
        raise ValidationError("bernardi solver needs an undirected graph; use peel")
    core, independent = _split_parts(instance)
    lists = instance.require_lists()
    weights = _weights_or_default(instance, lists, core)
    result = usolve.bernardi_weighted_solve(
        instance.graph, core, independent,
        lists.restrict(core), lists.restrict(independent), weights,
    )
    ok, failures = vf.check_weighted_guarantee(
        instance.graph, core, independent, result.coloring,
        lists.restrict(independent), weights,
    )
    pairs = _solve_report_base(args, digest, "bernardi")
    pairs += [
        ("vertices", instance.graph.n),
        ("core", len(core)),
        ("independent", len(independent)),
        ("switches", result.switches),
        ("potential_initial", result.potential_trace[0]),
        ("potential_final", result.potential_trace[-1]),
        ("verified", ok),
    ]
    _emit(args, serialize_coloring(result.coloring), pairs,
          {"coloring": {str(v): c for v, c in sorted(result.coloring.items())}})
    return EXIT_OK if ok else EXIT_USAGE


def _pipeline_verify(prefix, lists, result, jobs):
    """Re-check a pipeline run: exact vertices, stage-1 conditions, B rule."""
    graph = prefix.graph
    directed = isinstance(graph, Digraph)
    coloring = result.coloring
    report = result.report

    def check(v):
        status = report.statuses[v]
        if status.startswith(usolve.STATUS_EXACT):
            good, bad = vf.good_bad_counts(graph, coloring, v)
            cap = graph.out_degree(v) if directed else graph.degree(v)
            return 2 * bad <= cap
        if status.startswith(usolve.STATUS_CERTIFICATE) and v in report.stage3:
            return report.stage3[v].rule_ok
        return True

    per_vertex = thread_map(check, range(graph.n), jobs)
    return all(per_vertex) and not report.stage1.condition_violations() and report.all_ok()


def _pipeline_pairs(args, digest, name, prefix, result):
    report = result.report
    statuses = report.statuses
    counts = {}
    for status in statuses.values():
        counts[status] = counts.get(status, 0) + 1
    pairs = _solve_report_base(args, digest, name)
    pairs += [
        ("vertices", prefix.graph.n),
        ("amc_threshold", report.amc_threshold),
        ("stage1_sets", len(report.stage1.sets)),
        ("stage1_visits", report.stage1.executed),
        ("stage1_starved", len(report.stage1.starved)),
    ]
    for status in sorted(counts):
        pairs.append((f"status_{status}", counts[status]))
    for v in sorted(statuses):
        pairs.append((f"status v={v}", statuses[v]))
    for u in sorted(report.sublists):
        a, b = report.sublists[u]
        pairs.append((f"sublist v={u}", f"{a} {b}"))
    return pairs


def _cmd_solve_pipeline(args) -> int:
    instance, digest = _load(args)
    prefix = instance.require_prefix()
    lists = instance.require_lists()
    result = usolve.three_stage_solve(
        prefix, lists, amc_threshold=args.amc_threshold,
        stage1_steps=args.stage1_steps,
    )
    ok = _pipeline_verify(prefix, lists, result, args.jobs)
    pairs = _pipeline_pairs(args, digest, "pipeline", prefix, result)
    pairs.append(("verified", ok))
    _emit(args, serialize_coloring(result.coloring), pairs,
          {"coloring": {str(v): c for v, c in sorted(result.coloring.items())},
           "statuses": {str(v): s for v, s in sorted(result.report.statuses.items())}})
    return EXIT_OK if ok else EXIT_USAGE


def _cmd_solve_greedy(args) -> int:
    instance, digest = _load(args)
    if not instance.directed:
        raise ValidationError("greedy-dag needs a directed graph")
    lists = instance.lists or _default_two_lists(instance.graph.n)
    result = dsolve.greedy_acyclic_solve(instance.graph, lists)
    failures = _majority_failures(instance.graph, result.coloring, args.jobs)
    pairs = _solve_report_base(args, digest, "greedy-dag")
    pairs += [
        ("vertices", instance.graph.n),
        ("arcs", instance.graph.arc_count),
        ("verified", not failures),
    ]
    _emit(args, serialize_coloring(result.coloring), pairs,
          {"coloring": {str(v): c for v, c in sorted(result.coloring.items())}})
    return EXIT_OK if not failures else EXIT_USAGE


def _cmd_solve_peel(args) -> int:
    instance, digest = _load(args)
    if not instance.directed:
        raise ValidationError("peel solver needs a directed graph")
    core, independent = _split_parts(instance)
    lists = instance.require_lists()
    weights = _weights_or_default(instance, lists, core)
    result = dsolve.peel_and_solve(
        instance.graph, core, independent,
        lists.restrict(core), lists.restrict(independent), weights,
        restart_cap=args.restarts, seed=args.seed,
    )
    ok, failures = vf.check_weighted_guarantee(
        instance.graph, core, independent, result.coloring,
        lists.restrict(independent), weights,
    )
    pairs = _solve_report_base(args, digest, "peel")
    pairs += [
        ("vertices", instance.graph.n),
        ("core", len(core)),
        ("independent", len(independent)),
        ("peeled", len(result.trace.steps)),
        ("base_mode", result.base.mode),
        ("base_attempts", result.base.attempts),
        ("verified", ok),
    ]
    _emit(args, serialize_coloring(result.coloring), pairs,
          {"coloring": {str(v): c for v, c in sorted(result.coloring.items())}})
    return EXIT_OK if ok else EXIT_USAGE


def _cmd_solve_pipeline_directed(args) -> int:
    instance, digest = _load(args)
    prefix = instance.require_prefix()
    if not instance.directed:
        raise ValidationError("pipeline-directed needs a directed prefix")
    lists = instance.require_lists()
    result = dsolve.three_stage_solve_directed(
        prefix, lists, amc_threshold=args.amc_threshold,
        stage1_steps=args.stage1_steps,
        restart_cap=args.restarts, seed=args.seed,
    )
    ok = _pipeline_verify(prefix, lists, result, args.jobs)
    pairs = _pipeline_pairs(args, digest, "pipeline-directed", prefix, result)
    pairs.append(("verified", ok))
    _emit(args, serialize_coloring(result.coloring), pairs,
          {"coloring": {str(v): c for v, c in sorted(result.coloring.items())},
           "statuses": {str(v): s for v, s in sorted(result.report.statuses.items())}})
    return EXIT_OK if ok else EXIT_USAGE


def _cmd_oracle_exists(args) -> int:
    instance, digest = _load(args)
    lists = instance.lists or _default_two_lists(instance.graph.n)
    budget = args.budget or _env_int(ENV_ORACLE_BUDGET, vf.DEFAULT_ORACLE_BUDGET)
    witness = vf.oracle_exists_majority_coloring(instance.graph, lists, budget=budget)
    pairs = [
        ("command", "oracle exists"),
        ("input", args.infile),
        ("digest", digest),
        ("budget", budget),
        ("exists", witness is not None),
    ]
    payload = serialize_coloring(witness) if witness else ""
    _emit(args, payload, pairs,
          {"witness": None if witness is None
           else {str(v): c for v, c in sorted(witness.items())}})
    return EXIT_OK


def _cmd_oracle_choosable(args) -> int:
    instance, digest = _load(args)
    budget = args.budget or _env_int(ENV_ORACLE_BUDGET, vf.DEFAULT_ORACLE_BUDGET)
    verdict, witness = vf.oracle_choosability(
        instance.graph, args.k, args.universe, budget=budget, jobs=args.jobs
    )
    pairs = [
        ("command", "oracle choosable"),
        ("input", args.infile),
        ("digest", digest),
        ("k", args.k),
        ("universe", args.universe),
        ("budget", budget),
        ("choosable(bounded)", verdict),
    ]
    payload = ""
    if witness is not None:
        payload = "".join(
            "l " + str(v) + " " + " ".join(map(str, witness[v])) + "\n"
            for v in witness.vertices()
        )
        for v in witness.vertices():
            pairs.append((f"witness l {v}", " ".join(map(str, witness[v]))))
    _emit(args, payload, pairs, {
        "witness_lists": None if witness is None
        else {str(v): list(witness[v]) for v in witness.vertices()}
    })
    return EXIT_OK


def _cmd_backforth(args) -> int:
    instance, digest = _load(args)
    if not instance.sets:
        raise ValidationError("backforth needs `s` lines declaring the family")
    lists = instance.require_lists()
    state = bf.select_sublists(instance.sets, lists, args.steps)
    problems = state.condition_violations()
    pairs = [
        ("command", "backforth"),
        ("input", args.infile),
        ("digest", digest),
        ("steps", args.steps),
        ("executed", state.executed),
        ("sets", len(state.sets)),
        ("assigned", len(state.assigned)),
        ("starved", len(state.starved)),
        ("conditions_ok", not problems),
    ]
    for i in range(len(state.sets)):
        pairs.append((
            f"set {i + 1}",
            f"visits={state.visit_counts[i]} assigned={len(state.histories[i])}",
        ))
        if state.histories[i]:
            pairs.append((
                f"history {i + 1}",
                " ".join(f"({a},{b})" for a, b in state.histories[i]),
            ))
        if state.visit_counts[i]:
            caps = bf.not_amc_certificate(state, i)
            pairs.append((
                f"certificate {i + 1}",
                " ".join(f"{color}<={cap}" for color, cap in sorted(caps.items())),
            ))
    for problem in problems:
        pairs.append(("violation", problem))
    payload = "".join(
        f"l' {v} {a} {b}\n" for v, (a, b) in sorted(state.assigned.items())
    )
    _emit(args, payload, pairs, {
        "assigned": {str(v): list(p) for v, p in sorted(state.assigned.items())}
    })
    return EXIT_OK if not problems else EXIT_USAGE


# ---------------------------------------------------------------------------
# Parser wiring
# ---------------------------------------------------------------------------


def _common_io(p, coloring=False):
    p.add_argument("--in", dest="infile", required=True, help="instance file")
    if coloring:
        p.add_argument("--coloring", required=True, help="coloring file (c lines)")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--out", help="write the payload (c/l' lines) to this file")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")


def build_parser() -> _Parser:
    parser = _Parser(prog="majoritycolor",
                     description="Majority coloring solvers, oracles and verifiers")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="emit a countable-graph prefix instance")
    p.add_argument("--family", required=True,
                   help=", ".join(sorted(generators.FAMILIES)))
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", default=[], metavar="K=V")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_gen)

    solve = sub.add_parser("solve", help="run a solver and self-verify its output")
    ssub = solve.add_subparsers(dest="solver", required=True, parser_class=_Parser)

    p = ssub.add_parser("lovasz", help="majority coloring from 2-lists")
    _common_io(p)
    p.set_defaults(func=_cmd_solve_lovasz)

    p = ssub.add_parser("bernardi", help="weighted guarantee coloring from 4-lists")
    _common_io(p)
    p.set_defaults(func=_cmd_solve_bernardi)

    p = ssub.add_parser("pipeline", help="three-stage prefix pipeline (undirected)")
    _common_io(p)
    p.add_argument("--amc-threshold", type=int, default=3)
    p.add_argument("--stage1-steps", type=int, default=None)
    p.set_defaults(func=_cmd_solve_pipeline)

    p = ssub.add_parser("greedy-dag", help="greedy majority coloring of a DAG")
    _common_io(p)
    p.set_defaults(func=_cmd_solve_greedy)

    p = ssub.add_parser("peel", help="directed weighted guarantee via peeling")
    _common_io(p)
    p.add_argument("--restarts", type=int,
                   default=_env_int(ENV_RESTART_CAP, dsolve.DEFAULT_RESTART_CAP))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_solve_peel)

    p = ssub.add_parser("pipeline-directed", help="three-stage prefix pipeline (directed)")
    _common_io(p)
    p.add_argument("--amc-threshold", type=int, default=3)
    p.add_argument("--stage1-steps", type=int, default=None)
    p.add_argument("--restarts", type=int,
                   default=_env_int(ENV_RESTART_CAP, dsolve.DEFAULT_RESTART_CAP))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_solve_pipeline_directed)

    p = sub.add_parser("verify", help="check a coloring against the majority condition")
    _common_io(p, coloring=True)
    p.set_defaults(func=_cmd_verify)

    oracle = sub.add_parser("oracle", help="brute-force ground truth")
    osub = oracle.add_subparsers(dest="oracle", required=True, parser_class=_Parser)

    p = osub.add_parser("exists", help="first majority coloring from the lists")
    _common_io(p)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=_cmd_oracle_exists)

    p = osub.add_parser("choosable", help="probe k-choosability over a color universe")
    _common_io(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--universe", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=_cmd_oracle_choosable)

    p = sub.add_parser("backforth", help="back-and-forth sublist selection")
    _common_io(p)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=_cmd_backforth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ParseError, ValidationError, SolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MajorityColorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        elapsed = time.perf_counter() - started
        print(f"time: {elapsed:.3f}s", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
