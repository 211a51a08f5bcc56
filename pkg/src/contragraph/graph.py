"""Order-m contradiction graphs over realizable labeled sequences.

Rows of the adjacency matrix are Python ints used as bitsets: bit ``v`` of
``rows[u]`` is set iff ``u`` and ``v`` are adjacent.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Iterable, Iterator, Sequence

from .concepts import ConceptClass, PointSet
from .errors import ArgumentError, SizeLimitError

DEFAULT_VERTEX_CAP = 200_000
CAP_ENV_VAR = "CONTRAGRAPH_CAP_VERTICES"

LabeledSequence = tuple[tuple[int, int], ...]


def default_vertex_cap() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_VERTEX_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ArgumentError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ArgumentError(f"{CAP_ENV_VAR} must be positive, got {cap}")
    return cap


def iter_bits(word: int) -> Iterator[int]:
    while word:
        low = word & -word
        yield low.bit_length() - 1
        word ^= low


@dataclass(frozen=True)
class SignedMask:
    positives: int
    negatives: int

    @classmethod
    def of(cls, S: LabeledSequence) -> "SignedMask":
        pos = neg = 0
        for x, b in S:
            if b:
                pos |= 1 << x
            else:
                neg |= 1 << x
        return cls(pos, neg)

    def clashes(self, other: "SignedMask") -> bool:
        return bool(self.positives & other.negatives or self.negatives & other.positives)


@dataclass(frozen=True)
class Adjacency:
    """Label-free symmetric, irreflexive adjacency on vertices ``0..order-1``."""

    order: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.order:
            raise ArgumentError(f"expected {self.order} rows, got {len(self.rows)}")

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def neighbors(self, u: int) -> list[int]:
        return list(iter_bits(self.rows[u]))

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.order) for v in iter_bits(self.rows[u] >> (u + 1) << (u + 1))]

    def validate(self) -> None:
        full = (1 << self.order) - 1
        for u, row in enumerate(self.rows):
            if row & ~full:
                raise ArgumentError(f"row {u} references a vertex beyond {self.order - 1}")
            if (row >> u) & 1:
                raise ArgumentError(f"self-loop at vertex {u}")
            for v in iter_bits(row):
                if not (self.rows[v] >> u) & 1:
                    raise ArgumentError(f"asymmetric edge {u}-{v}")

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]]) -> "Adjacency":
        rows = [0] * order
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise ArgumentError(f"edge {u}-{v} out of range for {order} vertices")
            if u == v:
                raise ArgumentError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(order, tuple(rows))


@dataclass(frozen=True, eq=False)
class ContradictionGraph:
    m: int
    domain_size: int
    vertices: tuple[LabeledSequence, ...]
    masks: tuple[SignedMask, ...]
    adjacency: Adjacency
    concept_class: ConceptClass | None = None
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._index:
            self._index.update((S, i) for i, S in enumerate(self.vertices))

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def rows(self) -> tuple[int, ...]:
        return self.adjacency.rows

    def adjacent(self, u: int, v: int) -> bool:
        return self.adjacency.adjacent(u, v)

    def edge_count(self) -> int:
        return self.adjacency.edge_count()

    def vertex_id(self, S: Sequence[tuple[int, int]]) -> int:
        key = tuple((int(x), int(b)) for x, b in S)
        try:
            return self._index[key]
        except KeyError:
            raise ArgumentError(f"{key} is not a vertex of this graph") from None

    def has_vertex(self, S: Sequence[tuple[int, int]]) -> bool:
        return tuple((int(x), int(b)) for x, b in S) in self._index


def _check_sequence(H: ConceptClass, S: LabeledSequence) -> None:
    for x, b in S:
        if not 0 <= x < H.domain_size:
            raise ArgumentError(f"point {x} out of range [0, {H.domain_size})")
        if b not in (0, 1):
            raise ArgumentError(f"label must be 0 or 1, got {b!r}")


def realizable(H: ConceptClass, S: LabeledSequence) -> bool:
    _check_sequence(H, S)
    mask = SignedMask.of(S)
    if mask.positives & mask.negatives:
        return False
    care = mask.positives | mask.negatives
    return any(h & care == mask.positives for h in H.concepts)


def projected_vertex_count(H: ConceptClass, m: int, stop_above: int | None = None) -> int:
    """Exact number of realizable length-``m`` sequences, without listing them.

    Tuples with support exactly ``U`` number ``|U|! * S(m, |U|)`` (surjections
    from positions onto ``U``), each carrying one vertex per trace of ``H`` on
    ``U``.  Stops early once the running total exceeds ``stop_above``.
    """
    n = H.domain_size
    surj = [sum((-1) ** i * comb(k, i) * (k - i) ** m for i in range(k + 1)) for k in range(m + 1)]
    total = 0
    for k in range(1, min(m, n) + 1):
        # each support carries at least one trace
        if stop_above is not None and total + comb(n, k) * surj[k] > stop_above:
            return total + comb(n, k) * surj[k]
        for U in combinations(range(n), k):
            total += surj[k] * len(H.trace(U))
            if stop_above is not None and total > stop_above:
                return total
    return total


def enumerate_vertices(H: ConceptClass, m: int, cap: int | None = None) -> list[LabeledSequence]:
    """Every realizable length-``m`` sequence, in canonical order."""
    if not isinstance(m, int) or m < 1:
        raise ArgumentError(f"m must be a positive integer, got {m!r}")
    cap = default_vertex_cap() if cap is None else cap
    n = H.domain_size
    if n**m << m > cap:
        projected = projected_vertex_count(H, m, stop_above=cap)
        if projected > cap:
            raise SizeLimitError(
                f"G_{m} would have at least {projected} vertices, above the cap {cap}",
                requested=projected, cap=cap)
    out = []
    for tup in product(range(n), repeat=m):
        for w in H.trace(tup):
            out.append(tuple((x, (w >> j) & 1) for j, x in enumerate(tup)))
    out.sort()
    return out


def contradicts(S: LabeledSequence, T: LabeledSequence) -> bool:
    return SignedMask.of(S).clashes(SignedMask.of(T))


def build_graph(H: ConceptClass, m: int, cap: int | None = None) -> ContradictionGraph:
    vertices = enumerate_vertices(H, m, cap)
    masks = [SignedMask.of(S) for S in vertices]
    n = H.domain_size
    # holders[x][b]: vertices containing the signed point (x, b)
    holders = [[0, 0] for _ in range(n)]
    for v, S in enumerate(vertices):
        for x, b in S:
            holders[x][b] |= 1 << v
    rows = []
    for S in vertices:
        row = 0
        for x, b in set(S):
            row |= holders[x][1 - b]
        rows.append(row)
    return ContradictionGraph(m, n, tuple(vertices), tuple(masks), Adjacency(len(vertices), tuple(rows)), H)


def graph_from_sequences(m: int, domain_size: int, vertices: Sequence[LabeledSequence],
                         rows: Sequence[int], concept_class: ConceptClass | None = None) -> ContradictionGraph:
    vertices = tuple(tuple((int(x), int(b)) for x, b in S) for S in vertices)
    return ContradictionGraph(m, domain_size, vertices, tuple(SignedMask.of(S) for S in vertices),
                              Adjacency(len(vertices), tuple(rows)), concept_class)


def support(S: LabeledSequence) -> PointSet:
    return tuple(sorted({x for x, _ in S}))


def support_union(G: ContradictionGraph, Q: Iterable[int]) -> PointSet:
    pts: set[int] = set()
    for v in Q:
        pts.update(x for x, _ in G.vertices[v])
    return tuple(sorted(pts))


def _rows_of(G) -> tuple[int, ...]:
    return G.rows


def non_neighbor_trace(G, Q: Iterable[int], T: int) -> set[int]:
    """Members of ``Q`` not adjacent to ``T``."""
    rows = _rows_of(G)
    Q = list(Q)
    for v in Q + [T]:
        if not 0 <= v < len(rows):
            raise ArgumentError(f"vertex id {v} out of range [0, {len(rows)})")
    row = rows[T]
    return {S for S in Q if not (row >> S) & 1}


def graphs_equal(G1: ContradictionGraph, G2: ContradictionGraph) -> bool:
    """Labeled equality: same sequences in the same order with the same rows."""
    return G1.m == G2.m and G1.vertices == G2.vertices and G1.rows == G2.rows


def relabel(G, perm: Sequence[int]) -> Adjacency:
    """Adjacency of ``G`` with vertex ``v`` renamed ``perm[v]``; labels dropped."""
    rows = _rows_of(G)
    n = len(rows)
    perm = list(perm)
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise ArgumentError("perm must be a bijection on the vertex ids")
    out = [0] * n
    for u, row in enumerate(rows):
        r = 0
        for v in iter_bits(row):
            r |= 1 << perm[v]
        out[perm[u]] = r
    return Adjacency(n, tuple(out))
