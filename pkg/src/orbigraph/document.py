"""The ``orbigraph/1`` JSON file format and DOT export.

A document holds a graph, an ordered witness list and optionally the trace
of a decomposition.  The writer is canonical: ids are emitted in natural
order, every object has a fixed key order, output is indented by two spaces
and ends with a newline.  Parsing the written text gives back an equal
document, so ``write_document(parse_document(text)) == text`` for any text
the writer produced.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .core import Football, SingularGraph, Teardrop, check_witness, id_key, validate_graph
from .decompose import DecompositionTrace
from .errors import DocumentValidationError, ParseError, VersionError

FORMAT_VERSION = "orbigraph/1"


@dataclass(frozen=True)
class OrbifoldDocument:
    graph: SingularGraph
    witnesses: tuple = ()
    trace: dict | None = field(default=None, compare=True)
    format_version: str = FORMAT_VERSION


# ---------------------------------------------------------------------------
# Plain-data conversion


def graph_to_dict(g: SingularGraph) -> dict:
    edges = []
    for e in g.edges:
        shape = "circle" if e.ends is None else {"arc": [e.ends[0], e.ends[1]]}
        edges.append({"id": e.id, "weight": e.weight, "shape": shape})
    return {"vertices": list(g.vertices), "edges": edges}


def witness_to_dict(w) -> dict:
    if isinstance(w, Teardrop):
        return {"teardrop": w.edge}
    return {"football": {"e": w.e, "f": w.f, "f_plus_side": w.f_plus_side}}


def _germ(germ) -> dict:
    return {"edge": germ.edge, "end": germ.end, "pierce": germ.pierce, "weight": germ.weight}


def trace_to_dict(trace: DecompositionTrace) -> dict:
    steps = []
    for i, s in enumerate(trace.steps, 1):
        steps.append(
            {
                "step": i,
                "witness": witness_to_dict(s.witness),
                "form": s.form,
                "underlying": s.x.underlying,
                "boundary": [list(sig) for sig in s.x.signatures()],
                "removed": {
                    "vertices": sorted(s.x.interior_vertices, key=id_key),
                    "edges": sorted(s.x.interior_edges, key=id_key),
                },
                "caps": [
                    {
                        "kind": c.kind,
                        "created": list(c.created),
                        "consumed": [_germ(g) for g in c.consumed],
                        "signature": list(c.signature),
                    }
                    for c in s.caps
                ],
                "remaining": s.remaining,
                "output": graph_to_dict(s.output),
            }
        )
    return {
        "n": trace.n,
        "m": trace.m,
        "components": trace.caveat,
        "steps": steps,
        "ledger": [
            {
                "step": e.step,
                "form": e.form,
                "underlying": e.underlying,
                "signatures": [list(sig) for sig in e.signatures],
            }
            for e in trace.ledger
        ],
        "final": graph_to_dict(trace.final),
    }


def document_to_dict(doc: OrbifoldDocument) -> dict:
    out = {"format": doc.format_version}
    out.update(graph_to_dict(doc.graph))
    out["witnesses"] = [witness_to_dict(w) for w in doc.witnesses]
    if doc.trace is not None:
        out["trace"] = doc.trace
    return out


def write_document(doc: OrbifoldDocument) -> str:
    return json.dumps(document_to_dict(doc), indent=2, ensure_ascii=False) + "\n"


def trace_document(trace: DecompositionTrace) -> OrbifoldDocument:
    return OrbifoldDocument(trace.initial, tuple(trace.witnesses), trace_to_dict(trace))


# ---------------------------------------------------------------------------
# Parsing


def _expect(cond: bool, message: str, path: str) -> None:
    if not cond:
        raise ParseError(message, path)


def _ident(value, path: str) -> str:
    _expect(isinstance(value, str) and value != "", "expected a non-empty string id", path)
    return value


def graph_from_dict(data: dict, path: str = "") -> SingularGraph:
    prefix = f"{path}." if path else ""
    vertices = data.get("vertices")
    _expect(isinstance(vertices, list), "expected a list", prefix + "vertices")
    vs = [_ident(v, f"{prefix}vertices[{i}]") for i, v in enumerate(vertices)]
    _expect(len(set(vs)) == len(vs), "duplicate vertex id", prefix + "vertices")
    raw_edges = data.get("edges")
    _expect(isinstance(raw_edges, list), "expected a list", prefix + "edges")
    edges = []
    seen = set()
    for i, item in enumerate(raw_edges):
        where = f"{prefix}edges[{i}]"
        _expect(isinstance(item, dict), "expected an object", where)
        ident = _ident(item.get("id"), where + ".id")
        _expect(ident not in seen, f"duplicate edge id {ident!r}", where + ".id")
        seen.add(ident)
        weight = item.get("weight")
        _expect(isinstance(weight, int) and not isinstance(weight, bool), "expected an integer", where + ".weight")
        shape = item.get("shape")
        if shape == "circle":
            ends = None
        else:
            _expect(isinstance(shape, dict) and set(shape) == {"arc"}, 'expected "circle" or {"arc": [v, v]}', where + ".shape")
            arc = shape["arc"]
            _expect(isinstance(arc, list) and len(arc) == 2, "expected two vertex ids", where + ".shape.arc")
            ends = (_ident(arc[0], where + ".shape.arc[0]"), _ident(arc[1], where + ".shape.arc[1]"))
        edges.append((ident, weight, ends))
    _expect(not (set(vs) & seen), "an id is used for both a vertex and an edge", prefix + "edges")
    return SingularGraph(vs, edges)


def witness_from_dict(item, path: str):
    _expect(isinstance(item, dict) and len(item) == 1, 'expected {"teardrop": ...} or {"football": ...}', path)
    if "teardrop" in item:
        return Teardrop(_ident(item["teardrop"], path + ".teardrop"))
    _expect("football" in item, "unknown witness kind", path)
    fb = item["football"]
    where = path + ".football"
    _expect(isinstance(fb, dict), "expected an object", where)
    side = fb.get("f_plus_side")
    _expect(side in (None, 0, 1) and not isinstance(side, bool), "expected 0, 1 or null", where + ".f_plus_side")
    return Football(_ident(fb.get("e"), where + ".e"), _ident(fb.get("f"), where + ".f"), side)


def parse_document(text: str, *, source: str = "") -> OrbifoldDocument:
    """Parse and validate an ``orbigraph/1`` document.

    Raises ParseError (with a line number or field path), VersionError,
    DocumentValidationError for an invalid graph, or WitnessInconsistent.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source + ': ' if source else ''}{exc.msg}", line=exc.lineno) from None
    _expect(isinstance(data, dict), "top level must be an object", "$")
    version = data.get("format")
    if version != FORMAT_VERSION:
        raise VersionError(f"unsupported format {version!r}, expected {FORMAT_VERSION!r}", "format")
    try:
        g = graph_from_dict(data)
    except ValueError as exc:
        raise ParseError(str(exc), "edges") from None
    violations = validate_graph(g)
    if violations:
        raise DocumentValidationError(violations)
    raw_w = data.get("witnesses", [])
    _expect(isinstance(raw_w, list), "expected a list", "witnesses")
    witnesses = tuple(witness_from_dict(w, f"witnesses[{i}]") for i, w in enumerate(raw_w))
    for w in witnesses:
        check_witness(g, w)
    trace = data.get("trace")
    _expect(trace is None or isinstance(trace, dict), "expected an object", "trace")
    return OrbifoldDocument(g, witnesses, trace, version)


# ---------------------------------------------------------------------------
# DOT


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: SingularGraph, witnesses=(), name: str = "orbigraph") -> str:
    """Render the graph for Graphviz; witness edges are drawn thick and red."""
    marked = {e for w in witnesses for e in w.edges}
    lines = [f"graph {_q(name)} {{", "  node [shape=point];"]
    for v in g.vertices:
        lines.append(f"  {_q(v)};")
    for e in g.edges:
        style = ', color="red", penwidth=2' if e.id in marked else ""
        label = f'label="{e.weight}", tooltip={_q(e.id)}{style}'
        if e.ends is None:
            anchor = _q(f"_circle_{e.id}")
            lines.append(f"  {anchor} [width=0.02];")
            lines.append(f"  {anchor} -- {anchor} [{label}];")
        else:
            lines.append(f"  {_q(e.ends[0])} -- {_q(e.ends[1])} [{label}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
