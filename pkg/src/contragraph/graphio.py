"""graph6, DIMACS and JSON serialization of contradiction graphs.

graph6 and DIMACS carry adjacency only and import as :class:`Adjacency`.
The JSON form also carries the vertex sequences and imports as a labeled
:class:`ContradictionGraph`.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .errors import ArgumentError, ParseError
from .graph import Adjacency, ContradictionGraph, graph_from_sequences

FORMATS = ("graph6", "dimacs", "json")
GRAPH6_MAX_ORDER = 68719476735

AnyGraph = Union[ContradictionGraph, Adjacency]


def _adjacency(G: AnyGraph) -> Adjacency:
    return G.adjacency if isinstance(G, ContradictionGraph) else G


def _graph6_size(n: int) -> bytes:
    if n < 0 or n > GRAPH6_MAX_ORDER:
        raise ArgumentError(f"graph6 cannot encode {n} vertices")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return b"~" + bytes(((n >> s) & 63) + 63 for s in (12, 6, 0))
    return b"~~" + bytes(((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0))


def to_graph6(G: AnyGraph) -> str:
    """Encode as graph6 (no header, no trailing newline)."""
    A = _adjacency(G)
    n = A.order
    out = bytearray(_graph6_size(n))
    acc = nbits = 0
    for j in range(1, n):
        row = A.rows[j]
        for i in range(j):
            acc = (acc << 1) | ((row >> i) & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return out.decode("ascii")


def from_graph6(text: str) -> Adjacency:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = s.encode("ascii", errors="replace")
    for off, c in enumerate(data):
        if not 63 <= c <= 126:
            raise ParseError(f"graph6: invalid byte {chr(c)!r}", position=off)
    if not data:
        raise ParseError("graph6: empty input", position=0)
    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise ParseError("graph6: truncated size field", position=len(data))
        n, pos = 0, 8
        for c in data[2:8]:
            n = (n << 6) | (c - 63)
    else:
        if len(data) < 4:
            raise ParseError("graph6: truncated size field", position=len(data))
        n, pos = 0, 4
        for c in data[1:4]:
            n = (n << 6) | (c - 63)
    need = (n * (n - 1) // 2 + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise ParseError(f"graph6: expected {need} edge bytes for {n} vertices, got {len(body)}",
                         position=pos + min(len(body), need))
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] - 63) >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Adjacency(n, tuple(rows))


def to_dimacs(G: AnyGraph) -> str:
    A = _adjacency(G)
    edges = A.edges()
    lines = [f"p edge {A.order} {len(edges)}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> Adjacency:
    order = None
    edges = []
    declared = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if order is not None:
                raise ParseError("dimacs: duplicate problem line", position=lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise ParseError("dimacs: expected 'p edge <n> <m>'", position=lineno)
            try:
                order, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("dimacs: non-integer in problem line", position=lineno) from None
        elif parts[0] == "e":
            if order is None:
                raise ParseError("dimacs: edge before problem line", position=lineno)
            if len(parts) != 3:
                raise ParseError("dimacs: expected 'e <u> <v>'", position=lineno)
            try:
                u, v = int(parts[1]) - 1, int(parts[2]) - 1
            except ValueError:
                raise ParseError("dimacs: non-integer vertex", position=lineno) from None
            if not (0 <= u < order and 0 <= v < order) or u == v:
                raise ParseError(f"dimacs: bad edge {u + 1}-{v + 1}", position=lineno)
            edges.append((u, v))
        else:
            raise ParseError(f"dimacs: unknown line type {parts[0]!r}", position=lineno)
    if order is None:
        raise ParseError("dimacs: missing problem line", position=0)
    A = Adjacency.from_edges(order, edges)
    if A.edge_count() != declared:
        raise ParseError(f"dimacs: problem line declares {declared} edges, found {A.edge_count()}", position=0)
    return A


def graph_to_json(G: ContradictionGraph) -> dict:
    # The class reference names the domain only; G_m(H) does not determine H.
    return {
        "m": G.m,
        "class": {"domain_size": G.domain_size},
        "vertices": [[[x, b] for x, b in S] for S in G.vertices],
        "edges": [[u, v] for u, v in G.adjacency.edges()],
    }


def to_json(G: ContradictionGraph) -> str:
    if not isinstance(G, ContradictionGraph):
        raise ArgumentError("json export needs a labeled graph")
    return json.dumps(graph_to_json(G), separators=(",", ":")) + "\n"


def graph_from_json(doc: dict) -> ContradictionGraph:
    try:
        m = doc["m"]
        n = doc["class"]["domain_size"]
        vertices = [tuple((int(x), int(b)) for x, b in S) for S in doc["vertices"]]
        edges = [(int(u), int(v)) for u, v in doc["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"json graph: malformed document ({exc})") from None
    for i, S in enumerate(vertices):
        if len(S) != m:
            raise ParseError(f"json graph: vertex {i} has length {len(S)}, expected {m}", position=i)
    try:
        A = Adjacency.from_edges(len(vertices), edges)
    except ArgumentError as exc:
        raise ParseError(f"json graph: {exc}") from None
    return graph_from_sequences(m, n, vertices, A.rows)


def from_json(text: str) -> ContradictionGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"json graph: {exc.msg}", position=exc.lineno) from None
    return graph_from_json(doc)


def dumps_graph(G: AnyGraph, fmt: str) -> str:
    if fmt == "graph6":
        return to_graph6(G) + "\n"
    if fmt == "dimacs":
        return to_dimacs(G)
    if fmt == "json":
        return to_json(G)
    raise ArgumentError(f"unknown graph format {fmt!r}; expected one of {FORMATS}")


def export_graph(G: AnyGraph, fmt: str, destination: str | Path) -> None:
    text = dumps_graph(G, fmt)
    with open(destination, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def sniff_format(path: str | Path, text: str) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".g6", ".graph6"):
        return "graph6"
    if suffix in (".dimacs", ".col", ".clq"):
        return "dimacs"
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return "json"
    if stripped[:1] in ("p", "c", "e") and (" " in stripped.splitlines()[0] or stripped.startswith("c")):
        return "dimacs"
    return "graph6"


def loads_graph(text: str, fmt: str) -> AnyGraph:
    if fmt == "graph6":
        return from_graph6(text)
    if fmt == "dimacs":
        return from_dimacs(text)
    if fmt == "json":
        return from_json(text)
    raise ArgumentError(f"unknown graph format {fmt!r}; expected one of {FORMATS}")


def import_graph(path: str | Path, fmt: str | None = None) -> AnyGraph:
    text = Path(path).read_text(encoding="utf-8")
    return loads_graph(text, fmt or sniff_format(path, text))
