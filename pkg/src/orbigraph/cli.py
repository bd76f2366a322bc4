"""Command-line interface for orbigraph documents.

Exit codes: 0 success, 1 validation failure, 2 witness or classification
inconsistency, 3 parse or I/O error.  Set ``ORBIGRAPH_VERBOSE=1`` to get
tracebacks on the error stream.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import traceback
from pathlib import Path

from .classify import classify
from .core import Football, SingularGraph, Teardrop, check_witness
from .decompose import decompose, remap_witness
from .document import OrbifoldDocument, parse_document, to_dot, trace_document, write_document
from .errors import DocumentValidationError, InvalidGraph, OrbigraphError, ParseError, StaleWitness
from .oracle import graphs_isomorphic, random_bad_orbifold
from .surgery import cut_and_cap

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INCONSISTENT = 2
EXIT_IO = 3

log = logging.getLogger("orbigraph")


def _read(path: str) -> OrbifoldDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read: {exc.strerror}", path) from None
    except UnicodeDecodeError:
        raise ParseError("file is not UTF-8", path) from None
    try:
        return parse_document(text, source=path)
    except ParseError as exc:
        if not exc.path:
            exc.path = path
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot write: {exc.strerror}", out) from None
    else:
        sys.stdout.write(text)


def _witness_from_args(args, doc: OrbifoldDocument):
    if args.teardrop:
        return Teardrop(args.teardrop)
    if args.football:
        return Football(args.football[0], args.football[1], args.f_plus_side)
    if doc.witnesses:
        return doc.witnesses[0]
    raise StaleWitness("no witness given and the document lists none")


def cmd_validate(args) -> int:
    doc = _read(args.file)
    g = doc.graph
    print(f"valid: {len(g.vertices)} vertices, {len(g.edges)} edges, {len(doc.witnesses)} witnesses")
    return EXIT_OK


def cmd_classify(args) -> int:
    doc = _read(args.file)
    w = _witness_from_args(args, doc)
    check_witness(doc.graph, w)
    print(classify(doc.graph, w).summary())
    return EXIT_OK


def cmd_cutcap(args) -> int:
    doc = _read(args.file)
    w = _witness_from_args(args, doc)
    check_witness(doc.graph, w)
    x = classify(doc.graph, w)
    res = cut_and_cap(doc.graph, x)
    rest = [remap_witness(v, res.renames) for v in doc.witnesses if v != w]
    log.info("%s", x.summary())
    _emit(write_document(OrbifoldDocument(res.graph, tuple(rest))), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    doc = _read(args.file)
    trace = decompose(doc.graph, doc.witnesses)
    for entry in trace.ledger:
        log.info("step %d: %s %s", entry.step, entry.form, entry.underlying)
    _emit(write_document(trace_document(trace)), args.out)
    return EXIT_OK


def cmd_generate(args) -> int:
    seed = _read(args.seed_file).graph if args.seed_file else SingularGraph()
    g, ws = random_bad_orbifold(seed, args.steps, args.rng, max_weight=args.max_weight)
    _emit(write_document(OrbifoldDocument(g, tuple(ws))), args.out)
    return EXIT_OK


def cmd_iso(args) -> int:
    a, b = _read(args.a), _read(args.b)
    same = graphs_isomorphic(a.graph, b.graph)
    print("isomorphic" if same else "not isomorphic")
    return EXIT_OK if same else EXIT_INVALID


def cmd_export_dot(args) -> int:
    doc = _read(args.file)
    _emit(to_dot(doc.graph, doc.witnesses), args.out)
    return EXIT_OK


def _side(value: str) -> int:
    if value not in ("0", "1"):
        raise argparse.ArgumentTypeError("must be 0 or 1")
    return int(value)


def _add_witness_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--teardrop", metavar="E", help="teardrop witness on edge E")
    group.add_argument("--football", nargs=2, metavar=("E", "F"), help="football witness on heavy edge E and light edge F")
    p.add_argument("--f-plus-side", type=_side, default=None, help="end of F on the side of E's end 1 (0 or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbigraph", description="Classify and cut bad pieces out of orbifold singular graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a document")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="classify a witness (default: first listed)")
    p.add_argument("file")
    _add_witness_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("cutcap", help="cut and cap one witness, writing the resulting document")
    p.add_argument("file")
    _add_witness_args(p)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_cutcap)

    p = sub.add_parser("decompose", help="remove every listed witness, writing the trace")
    p.add_argument("file")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("generate", help="build a random bad orbifold by attaching pieces")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--rng", type=int, required=True, help="random seed")
    p.add_argument("--max-weight", type=int, default=6)
    p.add_argument("--seed-file", help="start from this document's graph (default: empty)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("iso", help="test two documents' graphs for isomorphism (exit 1 if not)")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("export-dot", help="write Graphviz DOT")
    p.add_argument("file")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    verbose = os.environ.get("ORBIGRAPH_VERBOSE", "") not in ("", "0")
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        code, msg = EXIT_IO, f"parse error: {exc}"
    except (DocumentValidationError, InvalidGraph) as exc:
        code, msg = EXIT_INVALID, f"invalid: {exc}"
    except (OrbigraphError, ValueError) as exc:
        code, msg = EXIT_INCONSISTENT, f"error: {exc}"
    if verbose:
        traceback.print_exc()
    print(msg, file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
