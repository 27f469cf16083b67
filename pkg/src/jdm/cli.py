"""Command-line entry point.

Exit codes: 0 success, 1 infeasible input or usage error, 2 when
``realize-connected`` answers with a certificate instead of a graph.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import __version__
from .connected import Certificate, realize_connected
from .core import (
    FeasibilityError,
    InstanceError,
    JdmInstance,
    extract_jdm,
    feasibility_violations,
    regroup_by_degree,
    validate_realization,
)
from .realizer import balanced_realize, simple_realize
from .sampler import (
    EnumerationCapError,
    SwitchPathError,
    merge_histograms,
    run_chain,
    switch_path,
)
from .serialize import (
    GRAPH_FORMATS,
    certificate_document,
    emit_graph,
    emit_instance,
    move_document,
    parse_graph,
    parse_instance,
)
from .star import NotRealizedError, StarInstance, realize_star

EXIT_OK, EXIT_FAIL, EXIT_CERTIFICATE = 0, 1, 2
FORMAT_ENV = "JDM_FORMAT"


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load_instance(path: str, *, star_ok: bool = False) -> JdmInstance | StarInstance:
    inst = parse_instance(_read(path))
    if isinstance(inst, StarInstance) and not star_ok:
        raise UsageError("instance contains '*' entries; use realize-star")
    return inst


def _names(inst) -> list[str]:
    return list(inst.names) if inst.names else [f"V{i}" for i in range(inst.k)]


class Output:
    def __init__(self, path: str | None):
        self.path = path
        self.chunks: list[str] = []

    def write(self, text: str) -> None:
        self.chunks.append(text)

    def flush(self) -> None:
        text = "".join(self.chunks)
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def cmd_check(args, out: Output) -> int:
    inst = _load_instance(args.instance, star_ok=False)
    violations = feasibility_violations(inst)
    out.write(json.dumps({"feasible": not violations, "violations": violations}) + "\n")
    return EXIT_OK if not violations else EXIT_FAIL


def cmd_realize(args, out: Output) -> int:
    inst = _load_instance(args.instance)
    g = simple_realize(inst) if args.method == "simple" else balanced_realize(inst)
    out.write(emit_graph(g, args.format, _names(inst)))
    return EXIT_OK


def cmd_realize_connected(args, out: Output) -> int:
    inst = _load_instance(args.instance)
    result = realize_connected(inst)
    if isinstance(result, Certificate):
        out.write(json.dumps(certificate_document(inst, result), indent=2) + "\n")
        return EXIT_CERTIFICATE
    out.write(emit_graph(result, args.format, _names(inst)))
    return EXIT_OK


def cmd_realize_star(args, out: Output) -> int:
    inst = _load_instance(args.instance, star_ok=True)
    if isinstance(inst, JdmInstance):
        inst = StarInstance(inst.class_sizes, inst.class_degrees, inst.matrix, inst.names)
    g = realize_star(inst)
    out.write(emit_graph(g, args.format, _names(inst)))
    return EXIT_OK


def _start_graph(args):
    if bool(args.graph) == bool(args.instance):
        raise UsageError("give exactly one of --graph or --instance")
    if args.graph:
        g, names = parse_graph(_read(args.graph))
        return g, names, None
    inst = _load_instance(args.instance)
    return balanced_realize(inst), _names(inst), inst


def cmd_sample(args, out: Output) -> int:
    g0, names, inst = _start_graph(args)
    seed = args.seed if args.seed is not None else 0
    results = [
        run_chain(g0, args.steps, seed + c, histogram=args.histogram, inst=inst)
        for c in range(args.chains)
    ]
    meta = {"chains": [r.metadata for r in results]}
    if args.histogram:
        merged = merge_histograms([r.histogram for r in results])
        meta["histogram"] = [
            {"edges": [[a, b] for a, b in key], "visits": count} for key, count in sorted(merged.items())
        ]
    out.write(emit_graph(results[0].graph, args.format, names))
    line = json.dumps(meta, sort_keys=True) + "\n"
    if args.meta:
        with open(args.meta, "w") as fh:
            fh.write(line)
    else:
        sys.stderr.write(line)
    return EXIT_OK


def cmd_switch_path(args, out: Output) -> int:
    g0, names = parse_graph(_read(args.source))
    g1, names1 = parse_graph(_read(args.target))
    if names != names1:
        raise UsageError("the two graphs use different class names")
    moves = switch_path(g0, g1)
    g = g0.copy()
    docs = []
    for move in moves:
        docs.append(move_document(g, move, names))
        move.apply_in_place(g)
    out.write(json.dumps({"length": len(moves), "moves": docs}, indent=2) + "\n")
    return EXIT_OK


def cmd_enumerate(args, out: Output) -> int:
    from .sampler import enumerate_omega

    inst = _load_instance(args.instance)
    graphs = enumerate_omega(inst, cap=args.cap)
    names = _names(inst)
    if args.format == "json":
        doc = {"count": len(graphs), "graphs": [json.loads(emit_graph(g, "json", names))["edges"] for g in graphs]}
        out.write(json.dumps(doc) + "\n")
    else:
        out.write(f"# count: {len(graphs)}\n")
        for g in graphs:
            out.write(emit_graph(g, args.format, names))
            out.write("\n")
    return EXIT_OK


def cmd_verify(args, out: Output) -> int:
    inst = _load_instance(args.instance)
    g, _ = parse_graph(_read(args.graph))
    try:
        ok = validate_realization(g, inst)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.write(json.dumps({"valid": ok, "connected": g.is_connected()}) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_extract(args, out: Output) -> int:
    g, names = parse_graph(_read(args.graph))
    if args.classes == "degree":
        inst, g = regroup_by_degree(g.n, g.edges())
        inst = JdmInstance(inst.class_sizes, inst.class_degrees, inst.matrix, [f"D{d}" for d in inst.class_degrees])
        out.write(emit_instance(inst))
        return EXIT_OK
    summary = extract_jdm(g)
    if summary.is_class_regular():
        out.write(emit_instance(summary.to_instance(names)))
        return EXIT_OK
    doc = {
        "class_regular": False,
        "classes": [{"name": nm, "size": s, "degrees": list(ds)} for nm, s, ds in zip(names, g.class_sizes, summary.degrees)],
        "matrix": [list(row) for row in summary.matrix],
    }
    out.write(json.dumps(doc) + "\n")
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (sample)")
    common.add_argument(
        "--format", choices=GRAPH_FORMATS, default=os.environ.get(FORMAT_ENV, "edges"),
        help=f"graph output format (default from ${FORMAT_ENV}, else edges)",
    )
    common.add_argument("--output", "-o", default=None, help="write the main result here instead of stdout")

    parser = argparse.ArgumentParser(prog="jdm", description="Joint-degree matrix realization toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="report feasibility of an instance")
    p.add_argument("instance")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("realize", parents=[common], help="construct a realization")
    p.add_argument("instance")
    p.add_argument("--method", choices=("simple", "balanced"), default="balanced")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("realize-connected", parents=[common], help="connected realization or certificate")
    p.add_argument("instance")
    p.set_defaults(func=cmd_realize_connected)

    p = sub.add_parser("realize-star", parents=[common], help="realize an instance with '*' entries")
    p.add_argument("instance")
    p.set_defaults(func=cmd_realize_star)

    p = sub.add_parser("sample", parents=[common], help="run the edge-switch chain")
    p.add_argument("--graph", help="starting graph document")
    p.add_argument("--instance", help="start from the balanced realization of this instance")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--chains", type=int, default=1, help="independent chains with seeds seed, seed+1, ...")
    p.add_argument("--histogram", action="store_true")
    p.add_argument("--meta", help="write the metadata record here instead of stderr")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("switch-path", parents=[common], help="legal switches from one realization to another")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.set_defaults(func=cmd_switch_path)

    p = sub.add_parser("enumerate", parents=[common], help="list every realization (small instances)")
    p.add_argument("instance")
    p.add_argument("--cap", type=int, default=10)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", parents=[common], help="check a graph against an instance")
    p.add_argument("--graph", required=True)
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extract", parents=[common], help="instance realized by a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--classes", choices=("header", "degree"), default="header",
                   help="keep the graph's class tags, or regroup vertices by degree")
    p.set_defaults(func=cmd_extract)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_FAIL
    if getattr(args, "steps", 0) is not None and getattr(args, "steps", 0) < 0:
        print("jdm: error: --steps must be non-negative", file=sys.stderr)
        return EXIT_FAIL
    out = Output(args.output)
    try:
        code = args.func(args, out)
    except FeasibilityError as exc:
        for v in exc.violations:
            print(f"jdm: infeasible: {v}", file=sys.stderr)
        return EXIT_FAIL
    except (InstanceError, UsageError, NotRealizedError, EnumerationCapError, SwitchPathError, ValueError, OSError) as exc:
        print(f"jdm: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
