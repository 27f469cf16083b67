"""Instance documents (JSON), graph documents (edge lists, DOT) and certificate records."""

from __future__ import annotations

import json
from typing import Any

from .connected import Certificate, certificate_report, contract
from .core import InstanceError, JdmInstance, LabeledGraph
from .sampler import SwitchMove
from .star import WILDCARD, StarInstance

GRAPH_FORMATS = ("edges", "dot", "json")


def _default_names(k: int) -> list[str]:
    return [f"V{i}" for i in range(k)]


def parse_instance(text: str) -> JdmInstance | StarInstance:
    """Parse an instance document; a ``"*"`` anywhere in the matrix gives a ``StarInstance``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or "classes" not in doc or "matrix" not in doc:
        raise InstanceError("instance document needs 'classes' and 'matrix' fields")
    classes = doc["classes"]
    if not isinstance(classes, list) or not classes:
        raise InstanceError("'classes' must be a non-empty list")
    names, sizes, degrees = [], [], []
    for pos, cl in enumerate(classes):
        if not isinstance(cl, dict):
            raise InstanceError(f"classes[{pos}] must be an object")
        for key in ("size", "degree"):
            if key not in cl:
                raise InstanceError(f"classes[{pos}] is missing '{key}'")
        names.append(str(cl.get("name", f"V{pos}")))
        sizes.append(cl["size"])
        degrees.append(cl["degree"])
    matrix = doc["matrix"]
    if not isinstance(matrix, list) or not all(isinstance(row, list) for row in matrix):
        raise InstanceError("'matrix' must be a list of rows")
    for i, row in enumerate(matrix):
        for j, entry in enumerate(row):
            if isinstance(entry, bool) or not (isinstance(entry, int) or entry == WILDCARD):
                raise InstanceError(f"matrix[{i}][{j}] = {entry!r} must be an integer or '*'")
    if any(entry == WILDCARD for row in matrix for entry in row):
        return StarInstance(sizes, degrees, matrix, names)
    return JdmInstance(sizes, degrees, matrix, names)


def instance_document(inst: JdmInstance | StarInstance) -> dict[str, Any]:
    names = inst.names or _default_names(inst.k)
    return {
        "classes": [
            {"name": name, "size": size, "degree": deg}
            for name, size, deg in zip(names, inst.class_sizes, inst.class_degrees)
        ],
        "matrix": [list(row) for row in inst.matrix],
    }


def emit_instance(inst: JdmInstance | StarInstance) -> str:
    return json.dumps(instance_document(inst)) + "\n"


def vertex_label(g: LabeledGraph, v: int, names) -> str:
    c = g.class_of[v]
    return f"{names[c]}_{v - g.offsets[c]}"


def emit_graph(g: LabeledGraph, fmt: str = "edges", names=None) -> str:
    """Canonical text for ``g``: ``edges`` (census header + sorted edge lines), ``dot`` or ``json``."""
    names = list(names) if names else _default_names(len(g.class_sizes))
    census = " ".join(f"{name}:{size}" for name, size in zip(names, g.class_sizes))
    edges = [(vertex_label(g, a, names), vertex_label(g, b, names)) for a, b in g.edges()]
    if fmt == "edges":
        return "".join([f"# classes: {census}\n", *(f"{a} {b}\n" for a, b in edges)])
    if fmt == "dot":
        lines = ["graph G {", f"  // classes: {census}"]
        lines += [f'  "{vertex_label(g, v, names)}";' for v in range(g.n)]
        lines += [f'  "{a}" -- "{b}";' for a, b in edges]
        return "\n".join(lines) + "\n}\n"
    if fmt == "json":
        doc = {"classes": [{"name": n, "size": s} for n, s in zip(names, g.class_sizes)], "edges": edges}
        return json.dumps(doc) + "\n"
    raise ValueError(f"unknown graph format {fmt!r}; choose from {', '.join(GRAPH_FORMATS)}")


def parse_graph(text: str) -> tuple[LabeledGraph, list[str]]:
    """Parse an ``edges`` or ``json`` graph document; returns the graph and its class names."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        names = [c["name"] for c in doc["classes"]]
        sizes = [c["size"] for c in doc["classes"]]
        raw = [tuple(e) for e in doc["edges"]]
    else:
        names, sizes, raw = [], [], []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("classes:"):
                    for item in body[len("classes:"):].split():
                        name, _, size = item.rpartition(":")
                        if not name or not size.isdigit():
                            raise ValueError(f"line {lineno}: bad class census entry {item!r}")
                        names.append(name)
                        sizes.append(int(size))
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected two vertex labels, got {line!r}")
            raw.append((parts[0], parts[1]))
        if not names:
            raise ValueError("graph document is missing the '# classes:' census header")
    g = LabeledGraph(sizes)
    where = {name: c for c, name in enumerate(names)}

    def resolve(label: str) -> int:
        name, _, off = label.rpartition("_")
        if name not in where or not off.isdigit() or int(off) >= sizes[where[name]]:
            raise ValueError(f"unknown vertex label {label!r}")
        return g.offsets[where[name]] + int(off)

    for a, b in raw:
        g.add_edge(resolve(a), resolve(b))
    return g, names


def certificate_document(inst: JdmInstance, cert: Certificate) -> dict[str, Any]:
    """Human-auditable record: family, grouping, collapsed weighted graph, both sides of the inequality."""
    names = inst.names or _default_names(inst.k)
    report = certificate_report(inst, cert)
    c = contract(inst)

    def node_name(node: str) -> str:
        if node.startswith("A"):
            return "group:" + "+".join(names[x] for x in cert.groups[int(node[1:])])
        return names[int(node[1:])]

    return {
        "certificate": "no connected realization",
        "family": [names[x] for x in cert.family],
        "groups": [[names[x] for x in grp] for grp in cert.groups],
        "contracted_sizes": dict(zip(names, c.sizes)),
        "nodes": [node_name(v) for v in report.nodes],
        "edges": [[node_name(a), node_name(b), w] for a, b, w in report.edges],
        "collapsed_graph_connected": report.connected,
        "total_weight": report.total_weight,
        "required_weight": report.required,
        "refutes": report.refutes,
    }


def move_document(g: LabeledGraph, move: SwitchMove, names) -> dict[str, Any]:
    lab = lambda v: vertex_label(g, v, names)  # noqa: E731
    return {
        "remove": [[lab(move.u), lab(move.v)], [lab(move.u2), lab(move.v2)]],
        "add": [[lab(move.u), lab(move.v2)], [lab(move.u2), lab(move.v)]],
    }
