"""``contragraph`` command-line interface.

Exit codes: 0 success, 1 check failure, 2 usage or parse error,
3 resource limit.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .certificate import (
    DEFAULT_MAX_BIJECTIONS,
    DEFAULT_MAX_CLIQUES,
    METHODS,
    DetectReport,
    abstract_detect,
    forward_certificate,
    threshold_table,
    verify_cube_trace,
)
from .concepts import (
    ConceptClass,
    class_from_json,
    dump_class,
    make_full,
    make_parity,
    make_prefix_tree,
    make_random,
    shattered_sets,
    vc_dimension,
)
from .errors import ContragraphError, InternalError, ParseError, ResourceLimitError, SizeLimitError
from .graph import ContradictionGraph, build_graph, default_vertex_cap
from .graphio import FORMATS, dumps_graph, loads_graph, sniff_format
from .suite import CHECKS, run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _info(msg: str, args) -> None:
    # keep stdout clean when it carries the payload
    stream = sys.stderr if getattr(args, "out", None) in (None, "-") else sys.stdout
    print(msg, file=stream)


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _read_class(path: str) -> tuple[ConceptClass, str]:
    data = Path(path).read_bytes()
    try:
        doc = json.loads(data.decode("utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", position=exc.lineno) from None
    return class_from_json(doc), _digest(data)


def cmd_gen(args) -> int:
    if args.family == "full":
        H = make_full(args.n)
    elif args.family == "parity":
        H = make_parity(args.n)
    elif args.family == "tree":
        H = make_prefix_tree(args.depth)
    else:
        H = make_random(args.n, args.count, args.seed)
    _write(dump_class(H), args.out)
    _info(f"n={H.domain_size} concepts={len(H)}", args)
    return EXIT_OK


def cmd_vc(args) -> int:
    H, _ = _read_class(args.cls)
    print(f"vc {vc_dimension(H)}")
    if args.m_max is None:
        return EXIT_OK
    table = threshold_table(H, args.m_max, args.method, cap=args.cap_vertices,
                            max_cliques=args.budget_cliques, max_bijections=args.budget_bijections)
    print("m\tvc>=m")
    for m, verdict in table:
        print(f"{m}\t{str(verdict).lower()}")
    passing = [m for m, v in table if v is True]
    if any(v == "limit" for _, v in table):
        print("result limit")
        return EXIT_LIMIT
    if len(passing) == args.m_max:
        print(f"result ≥ {args.m_max}")
    else:
        print(f"result {max(passing, default=0)}")
    return EXIT_OK


def cmd_graph(args) -> int:
    H, _ = _read_class(args.cls)
    G = build_graph(H, args.m, args.cap_vertices)
    _write(dumps_graph(G, args.format), args.out)
    _info(f"|V|={G.order} |E|={G.edge_count()}", args)
    return EXIT_OK


def _load_detect_input(path: str, fmt: str | None):
    data = Path(path).read_bytes()
    text = data.decode("utf-8")
    if fmt is None:
        fmt = sniff_format(path, text)
    if fmt == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc.msg}", position=exc.lineno) from None
        if isinstance(doc, dict) and "concepts" in doc:
            return class_from_json(doc), _digest(data)
    return loads_graph(text, fmt), _digest(data)


def cmd_detect(args) -> int:
    source, digest = _load_detect_input(args.input, args.format)
    m = args.m
    if isinstance(source, ConceptClass):
        H = source
        G = build_graph(H, m, args.cap_vertices)
    else:
        H = None
        G = source
        if m is None:
            if not isinstance(G, ContradictionGraph):
                raise ParseError("--m is required for graph6 and DIMACS inputs")
            m = G.m
    if m is None:
        raise ParseError("--m is required for class inputs")

    if args.method == "abstract":
        adjacency = G.adjacency if isinstance(G, ContradictionGraph) else G
        report = abstract_detect(adjacency, m, args.budget_cliques, args.budget_bijections)
    else:
        if H is None:
            raise ParseError(f"method {args.method!r} needs a class file, not a graph")
        report = DetectReport("not-found", m)
        sets = shattered_sets(H, m) if m <= H.domain_size else []
        if sets:
            report.verdict = "found"
            if args.method == "forward":
                cert = forward_certificate(H, sets[0], G)
                if not verify_cube_trace(G, cert.clique, cert.phi):
                    raise ContragraphError("forward certificate rejected")
                report.certificate = cert
    doc = {"tool": "contragraph", "version": __version__, "method": args.method,
           "input_sha256": digest, "vertices": G.order}
    doc.update(report.to_json())
    _write(json.dumps(doc, indent=1) + "\n", args.out)
    _info(f"verdict {report.verdict}", args)
    return EXIT_LIMIT if report.verdict == "resource-limit" else EXIT_OK


def cmd_verify(args) -> int:
    def progress(r):
        print(f"{'PASS' if r.passed else r.status.upper():5} [{r.criterion}] {r.name} "
              f"({r.wall_ms / 1000:.2f}s)", file=sys.stderr)
        for line in r.detail:
            print(f"      {line}", file=sys.stderr)

    report = run_suite(args.scope, args.seed, progress)
    text = json.dumps(report, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    passed = sum(1 for c in report["checks"] if c["status"] == "pass")
    print(f"{passed}/{len(report['checks'])} checks passed", file=sys.stderr)
    if report["passed"]:
        return EXIT_OK
    if any(c["status"] == "limit" for c in report["checks"]) and not any(
            c["status"] == "fail" for c in report["checks"]):
        return EXIT_LIMIT
    return EXIT_FAIL


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="contragraph", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"contragraph {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def budgets(sp):
        sp.add_argument("--budget-cliques", type=_positive, default=DEFAULT_MAX_CLIQUES)
        sp.add_argument("--budget-bijections", type=_positive, default=DEFAULT_MAX_BIJECTIONS)
        sp.add_argument("--cap-vertices", type=_positive, default=None,
                        help="vertex cap (default: $CONTRAGRAPH_CAP_VERTICES or 200000)")

    g = sub.add_parser("gen", help="write a concept-class file")
    g.add_argument("family", choices=["full", "parity", "tree", "random"])
    g.add_argument("--n", type=int)
    g.add_argument("--depth", type=int)
    g.add_argument("--count", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("vc", help="VC dimension and threshold table")
    v.add_argument("cls")
    v.add_argument("--method", choices=METHODS, default="oracle")
    v.add_argument("--m-max", type=_positive)
    budgets(v)
    v.set_defaults(func=cmd_vc)

    gr = sub.add_parser("graph", help="build and export G_m")
    gr.add_argument("cls")
    gr.add_argument("--m", type=_positive, required=True)
    gr.add_argument("--format", choices=FORMATS, default="json")
    gr.add_argument("--out")
    gr.add_argument("--cap-vertices", type=_positive, default=None)
    gr.set_defaults(func=cmd_graph)

    d = sub.add_parser("detect", help="search for a cube-trace clique")
    d.add_argument("input", help="class file, or graph in json/graph6/dimacs")
    d.add_argument("--m", type=_positive)
    d.add_argument("--method", choices=METHODS, default="abstract")
    d.add_argument("--format", choices=FORMATS, default=None, help="input graph format (default: sniffed)")
    d.add_argument("--out")
    budgets(d)
    d.set_defaults(func=cmd_detect)

    ve = sub.add_parser("verify", help="run the theorem-reproduction suite")
    ve.add_argument("scope", nargs="?", default="all", choices=["all", *CHECKS])
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--out")
    ve.set_defaults(func=cmd_verify)
    return p


def _check_gen_args(args, parser) -> None:
    need = {"full": ["n"], "parity": ["n"], "tree": ["depth"], "random": ["n", "count"]}[args.family]
    for name in need:
        if getattr(args, name) is None:
            parser.error(f"gen {args.family} requires --{name}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "cap_vertices", None) is None and hasattr(args, "cap_vertices"):
        try:
            args.cap_vertices = default_vertex_cap()
        except ContragraphError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        if args.command == "gen":
            _check_gen_args(args, parser)
        return args.func(args)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    except (ResourceLimitError, SizeLimitError) as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ContragraphError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
