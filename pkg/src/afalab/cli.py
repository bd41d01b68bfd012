"""Command line entry point: build, verify, decode, trace-tools, export.

Exit codes: 0 all checks pass, 1 a check failed (the report names the
counterexample), 2 usage or parse error.  JSON reports go to ``--report``
or, when ``AFALAB_REPORT_DIR`` is set, to ``<dir>/<command>.json``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from afalab import approx
from afalab.approx.processes import CATALOG
from afalab.approx.ranges import format_stream
from afalab.decoders import SpokeOracle, certify_centers, decoder_for
from afalab.decoders.report import decode_report
from afalab.distance import distance_matrix
from afalab.errors import LabError
from afalab.graphs import (
    ELONGATED, SHAPES, SINGLEDEGREE, FamilySpec, build_family, build_singledegree,
    parse_family, permuted_copy,
)
from afalab.graphs.io import layout_path_for, read_graph, to_dot, write_graph
from afalab.reductions import audit_report, load_reduction
from afalab.verify import SUITES, run_suites

REPORT_ENV = "AFALAB_REPORT_DIR"
MATRIX_LIMIT = 600


class UsageError(Exception):
    pass


def _emit_report(report: dict, args, default_name: str) -> Path | None:
    path = getattr(args, "report", None)
    if path is None and os.environ.get(REPORT_ENV):
        path = Path(os.environ[REPORT_ENV]) / f"{default_name}.json"
    if path is None:
        return None
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return path


def _out_path(args, default_name: str) -> Path:
    if args.out is not None:
        return Path(args.out)
    return Path(os.environ.get(REPORT_ENV, ".")) / default_name


def family_from_arg(text: str) -> FamilySpec:
    """``explicit:<file>``, ``periodic:n[:repeats]``, ``all:max_len:max_val[:repeats]``, ``interleaved:<family>``."""
    kind, _, rest = text.partition(":")
    if kind == "interleaved":
        return FamilySpec.interleaved(family_from_arg(rest))
    if kind == "explicit":
        if not rest:
            raise UsageError("explicit families need a file: explicit:<path>")
        return parse_family(Path(rest).read_text(), rest)
    try:
        nums = [int(t) for t in rest.split(":")] if rest else []
    except ValueError:
        raise UsageError(f"family {text!r}: expected natural numbers after {kind}:") from None
    if kind == "periodic" and len(nums) in (1, 2):
        return FamilySpec.periodic_countdown(*nums)
    if kind == "all" and len(nums) in (2, 3):
        return FamilySpec.all_decreasing(*nums)
    raise UsageError(f"unrecognized family {text!r}")


def _load(args):
    layout = Path(args.layout) if args.layout else layout_path_for(args.graph)
    if not layout.exists():
        raise UsageError(f"layout sidecar {layout} not found")
    return read_graph(args.graph, layout)


# build

def cmd_build(args) -> int:
    trace = approx.load_trace(args.trace) if args.trace else None
    if args.shape == SINGLEDEGREE:
        if trace is None:
            raise UsageError("singledegree builds need --trace")
        if args.family:
            raise UsageError("singledegree builds take no --family")
        g = build_singledegree(trace, args.stages)
    else:
        spec = family_from_arg(args.family) if args.family else None
        if spec is None and trace is None:
            raise UsageError("give --family, --trace or both")
        g = build_family(spec, args.shape, trace, args.stages)
    if args.permute is not None:
        g = permuted_copy(g, args.permute)
    out = _out_path(args, f"{args.shape}.graph")
    out.parent.mkdir(parents=True, exist_ok=True)
    layout = Path(args.layout) if args.layout else layout_path_for(out)
    write_graph(g, out, layout)

    report = {"shape": args.shape, "graph": str(out), "layout": str(layout), "nodes": g.n_nodes,
              "edges": g.n_edges, "spokes": len(g.layout.spokes), "complete": g.complete,
              "last_stage": g.last_stage, "family": g.layout.family}
    print(f"wrote {out} and {layout}")
    print(f"nodes {g.n_nodes}  edges {g.n_edges}  spokes {len(g.layout.spokes)}  "
          f"stages 0..{g.last_stage}  complete {'yes' if g.complete else 'no'}")
    if args.shape == ELONGATED and g.complete:
        cert = certify_centers(g.final(), ELONGATED, g.layout.u)
        report["duv"] = {"u": cert.u, "v": cert.v, "value": cert.duv, "witness_spoke": cert.witness}
        print(f"d(u,v)={cert.duv} certified by BFS (u={cert.u}, v={cert.v}, "
              f"shortest path through spoke ({cert.witness[0]}, {cert.witness[1]}))")
    _emit_report(report, args, "build")
    return 0


# verify

def cmd_verify(args) -> int:
    suites = []
    for name in args.suite or ["all"]:
        for part in name.split(","):
            if part == "all":
                suites.extend(SUITES)
            elif part in SUITES:
                suites.append(part)
            else:
                raise UsageError(f"unknown suite {part!r}; choose from {', '.join(SUITES)} or all")
    suites = list(dict.fromkeys(suites))
    g = _load(args)
    report = run_suites(g, suites, bound=args.bound, seed=args.seed, copies=args.copies,
                        pair_limit=args.pairs)
    report["graph"] = str(args.graph)
    for r in report["suites"]:
        verdict = "PASS" if r["passed"] else "FAIL"
        line = f"{verdict} {r['suite']}: {r['checked']} checks"
        if r["failure_count"]:
            line += f", {r['failure_count']} failures, first {json.dumps(r['failures'][0], sort_keys=True)}"
        elif r["notes"]:
            line += f" ({', '.join(f'{k}={v}' for k, v in sorted(r['notes'].items()))})"
        print(line)
    _emit_report(report, args, "verify")
    return 0 if report["passed"] else 1


# decode

def cmd_decode(args) -> int:
    g = _load(args)
    snap = g.final()
    dec = decoder_for(snap, g.layout.shape)
    oracle = SpokeOracle.from_snapshot(snap, g.layout.endpoint_pairs())
    if args.all:
        pairs = [(x, y) for x in snap.nodes for y in snap.nodes]
    elif args.x is None or args.y is None:
        raise UsageError("give two node ids or --all")
    else:
        pairs = [(args.x, args.y)]
    report = decode_report(dec, snap, oracle, pairs)
    report["graph"] = str(args.graph)
    for row in report["decodes"][: None if not args.all else 0]:
        print(f"d({row['x']},{row['y']}) = {row['value']}  [{row['case']}: {row['route']}]  "
              f"queries {row['queries']}  bfs {row['bfs']}")
    if args.all:
        print(f"{report['pairs']} pairs, max queries {report['max_queries']}, "
              f"{'all agree with BFS' if report['all_agree'] else 'DISAGREEMENT with BFS'}")
    _emit_report(report, args, "decode")
    return 0 if report["all_agree"] else 1


# trace-tools

def _bound_fn(args, trace):
    if args.bound is not None:
        return lambda x: args.bound
    return lambda x: trace.first(x)


def _write_trace(trace, args) -> None:
    text = approx.format_trace(trace)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)


def cmd_trace_tools(args) -> int:
    tool = args.tool
    report: dict = {"tool": tool}
    status = 0
    if tool == "classify":
        c = approx.classify(approx.load_trace(args.trace))
        report.update(monotone_above=c.monotone_above, monotone_below=c.monotone_below,
                      max_changes=c.max_changes, changes={str(x): n for x, n in c.changes.items()},
                      omega_bound=None if c.omega_bound is None else {str(x): n for x, n in c.omega_bound.items()})
        print(f"monotone above {c.monotone_above}  below {c.monotone_below}  max changes {c.max_changes}")
    elif tool == "countdown":
        t = approx.load_trace(args.trace)
        c = approx.countdown(t, _bound_fn(args, t))
        report["limits"] = {str(x): c.last(x) for x in c.domain}
        _write_trace(c, args)
    elif tool == "dual":
        t = approx.load_trace(args.trace)
        bound = None if args.bound is None else (lambda x: args.bound)
        _write_trace(approx.dual(t, bound), args)
    elif tool == "v":
        t = approx.load_trace(args.trace)
        codes = sorted(approx.v_set(t))
        report["v_f"] = codes
        print("V_f codes:", " ".join(map(str, codes)) or "(empty)")
    elif tool == "range":
        stream = approx.load_stream(args.stream)
        stages = args.stages if args.stages is not None else len(stream.prefix) + 2 * len(stream.cycle)
        t = approx.range_encoder(stream, stages)
        lim = approx.limit_range(stream)
        exp = stream.expected_range()
        report.update(stream=format_stream(stream), limit_range=sorted(lim), expected=sorted(exp),
                      max_changes=max((len(t.values(x)) - 1 for x in t.domain), default=0))
        print(f"limit range {sorted(lim)}  expected {sorted(exp)}")
        status = 0 if lim == exp else 1
        _write_trace(t, args)
    elif tool == "1complete":
        reg = approx.load_registry(args.registry)
        b = approx.one_complete_build(reg, args.stages, args.max_input)
        report["slots"] = [{"e": e, "x": x, "n": n} for (e, x), n in sorted(b.slots.items())]
        report["frozen"] = sorted(b.frozen)
        print(f"{len(b.slots)} slots assigned over {args.stages} stages, {len(b.frozen)} frozen")
        _write_trace(b.trace, args)
    elif tool == "diagonal":
        reg = approx.load_registry(args.registry)
        trace = approx.load_trace(args.trace) if args.trace else None
        inputs = range(args.inputs) if args.inputs is not None else None
        w = approx.diagonal_witness(args.kind, reg, args.stages, n=args.n, trace=trace, inputs=inputs)
        defeats = approx.check_defeats(args.kind, w, reg, args.stages, n=args.n, trace=trace, inputs=inputs)
        report["requirements"] = [{"e": d.e, "status": d.status, "detail": d.detail} for d in defeats]
        for d in defeats:
            print(f"e={d.e}: {d.status}  {d.detail}")
        status = 0 if all(d.satisfied for d in defeats) else 1
        _write_trace(w, args)
    elif tool == "apply-tt":
        r = load_reduction(args.reduction)
        t = approx.load_trace(args.oracle)
        if not t.complete:
            raise UsageError("the oracle trace must be complete")
        inputs = [int(v) for v in args.inputs.split(",")] if args.inputs else list(t.domain)
        report.update(audit_report(r, t.limit, inputs))
        for row in report["calls"]:
            print(f"{row['input']} -> {row['value']}  queries {row['queries']}")
        status = 0 if report["within_norm"] else 1
    _emit_report(report, args, f"trace-{tool}")
    return status


# export

def cmd_export(args) -> int:
    if not args.dot and not args.matrix:
        raise UsageError("export needs --dot and/or --matrix")
    layout = Path(args.layout) if args.layout else layout_path_for(args.graph)
    g = read_graph(args.graph, layout if layout.exists() else None)
    if args.dot:
        text = to_dot(g, g.layout)
        if args.dot == "-":
            sys.stdout.write(text)
        else:
            Path(args.dot).write_text(text)
            print(f"wrote {args.dot}")
    if args.matrix:
        if g.n_nodes > args.max_nodes:
            raise LabError(f"graph has {g.n_nodes} nodes; matrix export is limited to {args.max_nodes}")
        nodes, m = distance_matrix(g.final())
        rows = [",".join(["node", *map(str, nodes)])]
        for x, row in zip(nodes, m):
            rows.append(",".join([str(x), *("inf" if not np.isfinite(v) else str(int(v)) for v in row)]))
        Path(args.matrix).write_text("\n".join(rows) + "\n")
        print(f"wrote {args.matrix} ({len(nodes)}x{len(nodes)})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="afalab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a spoke graph and its layout sidecar")
    b.add_argument("--shape", choices=SHAPES, required=True)
    b.add_argument("--family", help="explicit:<file> | periodic:n[:repeats] | all:len:val[:repeats] | interleaved:<family>")
    b.add_argument("--trace", help="from-above trace file to encode")
    b.add_argument("--stages", type=int, help="stage budget (default: the trace horizon)")
    b.add_argument("--permute", type=int, metavar="SEED", help="write a relabeled copy instead")
    b.add_argument("--out", help="graph file (default <report dir or .>/<shape>.graph)")
    b.add_argument("--layout", help="layout sidecar path (default <graph>.layout.json)")
    b.add_argument("--report")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run verification suites on a graph")
    v.add_argument("graph")
    v.add_argument("--layout")
    v.add_argument("--suite", action="append", help=f"{', '.join(SUITES)} or all (repeatable)")
    v.add_argument("--bound", type=int, help="mind-change bound for the mind-changes suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--copies", type=int, default=3, help="permuted copies for equivariance")
    v.add_argument("--pairs", type=int, help="sample at most this many node pairs (default all)")
    v.add_argument("--report")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("decode", help="decode distances through the spoke oracle")
    d.add_argument("graph")
    d.add_argument("x", type=int, nargs="?")
    d.add_argument("y", type=int, nargs="?")
    d.add_argument("--all", action="store_true", help="every ordered node pair")
    d.add_argument("--layout")
    d.add_argument("--report")
    d.set_defaults(func=cmd_decode)

    t = sub.add_parser("trace-tools", help="operations on traces, streams and registries")
    tsub = t.add_subparsers(dest="tool", required=True)

    def tool(name, help_, *, trace=True, out=True):
        q = tsub.add_parser(name, help=help_)
        if trace:
            q.add_argument("trace")
        if out:
            q.add_argument("--out", help="write the resulting trace here (default stdout)")
        q.add_argument("--report")
        return q

    tool("classify", "monotonicity and mind-change counts", out=False)
    q = tool("countdown", "countdown trace c (bound defaults to g(x,0))")
    q.add_argument("--bound", type=int, help="constant bound h")
    q = tool("dual", "dual trace")
    q.add_argument("--bound", type=int, help="constant bound (needed for from-below traces)")
    tool("v", "the set V_f as Cantor codes <x, n>", out=False)
    q = tool("range", "range encoder on a stream file", trace=False)
    q.add_argument("stream")
    q.add_argument("--stages", type=int)
    q = tool("1complete", "1-complete construction against a registry", trace=False)
    q.add_argument("registry")
    q.add_argument("--stages", type=int, required=True)
    q.add_argument("--max-input", type=int)
    q = tool("diagonal", "diagonal witness and per-member defeat check", trace=False)
    q.add_argument("kind", choices=[approx.NOCOLLAPSE, approx.NO1COMPLETE_BELOW, approx.NO_MCOMPLETE_ABOVE])
    q.add_argument("registry")
    q.add_argument("--stages", type=int, required=True)
    q.add_argument("--n", type=int)
    q.add_argument("--trace")
    q.add_argument("--inputs", type=int)
    q = tool("apply-tt", "run a truth-table reduction against a trace's limits", trace=False, out=False)
    q.add_argument("reduction")
    q.add_argument("--oracle", required=True, help="complete trace whose limits answer queries")
    q.add_argument("--inputs", help="comma-separated inputs (default the oracle's domain)")
    t.set_defaults(func=cmd_trace_tools)
    t.epilog = "process shapes: " + ", ".join(CATALOG)

    e = sub.add_parser("export", help="DOT rendering and distance-matrix CSV")
    e.add_argument("graph")
    e.add_argument("--layout")
    e.add_argument("--dot", metavar="PATH", help="DOT output ('-' for stdout)")
    e.add_argument("--matrix", metavar="PATH", help="distance matrix CSV")
    e.add_argument("--max-nodes", type=int, default=MATRIX_LIMIT)
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, LabError, ValueError, OSError) as exc:
        print(f"afalab {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
