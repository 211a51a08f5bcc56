"""Cube-trace cliques: construction, verification, and adjacency-only search.

A cube-trace certificate is a ``2**m``-clique ``Q`` with a bijection ``phi``
onto ``{0,1}^m`` such that, for every vertex ``T`` of the host graph, the
image of the non-neighbors of ``T`` inside ``Q`` is a Boolean subcube.
Such a clique exists in ``G_m(H)`` exactly when ``VCdim(H) >= m``, which makes
the threshold decidable from the adjacency matrix alone.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .concepts import ConceptClass, PointSet, is_shattered, shattered_sets, tree_point_index, vc_dimension
from .cube import Subcube, is_subcube, parse_word, word_str
from .errors import ArgumentError, InternalError, PreconditionError, ResourceLimitError
from .graph import Adjacency, ContradictionGraph, build_graph, iter_bits, support, support_union

DEFAULT_MAX_CLIQUES = 10**6
DEFAULT_MAX_BIJECTIONS = 10**7
ABSTRACT_MAX_M = 3
TRACE_AUDIT_MAX_ORDER = 20_000

AnyGraph = Union[ContradictionGraph, Adjacency]
METHODS = ("oracle", "forward", "abstract")


def _rows(G: AnyGraph) -> tuple[int, ...]:
    return G.rows


def _labeled(G: AnyGraph) -> ContradictionGraph:
    if not isinstance(G, ContradictionGraph):
        raise ArgumentError("this operation needs a labeled contradiction graph")
    return G


def _log2_exact(k: int) -> int:
    if k < 1 or k & (k - 1):
        raise ArgumentError(f"clique size {k} is not a power of two")
    return k.bit_length() - 1


@dataclass
class CubeTraceCertificate:
    m: int
    clique: tuple[int, ...]
    phi: dict[int, int]
    traces: dict[int, Subcube] | None = None

    def to_json(self) -> dict:
        doc = {
            "m": self.m,
            "clique": list(self.clique),
            "phi": {str(v): word_str(self.phi[v], self.m) for v in self.clique},
        }
        if self.traces is not None:
            doc["traces"] = {str(t): c.to_json() for t, c in sorted(self.traces.items())}
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "CubeTraceCertificate":
        try:
            m = int(doc["m"])
            clique = tuple(int(v) for v in doc["clique"])
            phi = {int(k): parse_word(s, m) for k, s in doc["phi"].items()}
            traces = None
            if doc.get("traces") is not None:
                traces = {int(t): Subcube.from_json(c, m) for t, c in doc["traces"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ArgumentError(f"malformed certificate: {exc}") from None
        return cls(m, clique, phi, traces)


@dataclass
class Verification:
    """Outcome of :func:`verify_cube_trace`; truthy iff accepted.

    On rejection ``kind`` is ``"non-adjacent"`` (``witness`` is the pair) or
    ``"trace"`` (``witness`` is the vertex and ``words`` its mapped trace).
    """

    accepted: bool
    kind: str | None = None
    witness: tuple[int, ...] | None = None
    words: tuple[int, ...] | None = None
    traces: dict[int, Subcube] | None = None

    def __bool__(self) -> bool:
        return self.accepted


def _normalize_phi(Q: Sequence[int], phi, m: int) -> dict[int, int]:
    if isinstance(phi, Mapping):
        mapping = {int(v): int(w) for v, w in phi.items()}
    else:
        phi = list(phi)
        if len(phi) != len(Q):
            raise ArgumentError("phi must assign one cube word per clique vertex")
        mapping = dict(zip(Q, phi))
    if set(mapping) != set(Q):
        raise ArgumentError("phi must be defined exactly on the clique")
    if sorted(mapping.values()) != list(range(1 << m)):
        raise ArgumentError(f"phi is not a bijection onto {{0,1}}^{m}")
    return mapping


def verify_cube_trace(G: AnyGraph, Q: Sequence[int], phi, m: int | None = None,
                      keep_traces: bool = False) -> Verification:
    """Check that ``Q`` with ``phi`` is a cube-trace clique of ``G``.

    ``phi`` is a mapping from vertex ids to cube words or a sequence aligned
    with ``Q``.  Every vertex of ``G`` is examined, in id order.
    """
    rows = _rows(G)
    Q = list(Q)
    if m is None:
        m = G.m if isinstance(G, ContradictionGraph) else _log2_exact(len(Q))
    if len(Q) != 1 << m or len(set(Q)) != len(Q):
        raise ArgumentError(f"a certificate for m={m} needs {1 << m} distinct vertices, got {len(Q)}")
    for v in Q:
        if not 0 <= v < len(rows):
            raise ArgumentError(f"vertex id {v} out of range")
    mapping = _normalize_phi(Q, phi, m)

    for u, v in combinations(Q, 2):
        if not (rows[u] >> v) & 1:
            return Verification(False, "non-adjacent", (u, v))

    qmask = 0
    for v in Q:
        qmask |= 1 << v
    traces: dict[int, Subcube] = {}
    for T, row in enumerate(rows):
        words = [mapping[S] for S in iter_bits(qmask & ~row)]
        cube = is_subcube(words, m)
        if cube is None:
            return Verification(False, "trace", (T,), tuple(sorted(words)))
        if keep_traces:
            traces[T] = cube

    if isinstance(G, ContradictionGraph) and G.concept_class is not None:
        R = common_support_shatters(G, Q)
        if R is not None and not is_shattered(G.concept_class, R):
            raise InternalError(f"accepted certificate on common support {R} that is not shattered")
    return Verification(True, traces=traces if keep_traces else None)


def forward_certificate(H: ConceptClass, R: Sequence[int], G: ContradictionGraph | None = None,
                        keep_traces: bool = True) -> CubeTraceCertificate:
    """The clique of all labelings of a shattered point set ``R``.

    Coordinate ``i`` of ``phi`` is the label of the ``i``-th smallest point of ``R``.
    """
    R = tuple(sorted(R))
    m = len(R)
    if m == 0:
        raise ArgumentError("R must be nonempty")
    if not is_shattered(H, R):
        raise PreconditionError(f"{R} is not shattered by the class")
    if G is None:
        G = build_graph(H, m)
    elif G.m != m:
        raise ArgumentError(f"graph has m={G.m}, but |R|={m}")
    phi = {}
    for sigma in range(1 << m):
        v = G.vertex_id(tuple((x, (sigma >> i) & 1) for i, x in enumerate(R)))
        phi[v] = sigma
    clique = tuple(sorted(phi))
    traces = None
    if keep_traces and G.order <= TRACE_AUDIT_MAX_ORDER:
        traces = {T: _trace_cube(G.rows[T], phi, m) for T in range(G.order)}
    return CubeTraceCertificate(m, clique, phi, traces)


def _trace_cube(row: int, phi: Mapping[int, int], m: int) -> Subcube:
    cube = is_subcube([w for v, w in phi.items() if not (row >> v) & 1], m)
    if cube is None:
        raise InternalError("certificate trace is not a subcube")
    return cube


# --- clique enumeration -------------------------------------------------------

def maximal_cliques(G: AnyGraph, allowed: int | None = None) -> Iterator[tuple[int, ...]]:
    """Maximal cliques by Bron-Kerbosch with Tomita pivoting, as sorted tuples."""
    rows = _rows(G)
    if allowed is None:
        allowed = (1 << len(rows)) - 1

    def expand(R: list[int], P: int, X: int):
        if not P:
            if not X:
                yield tuple(sorted(R))
            return
        PX = P | X
        pivot = max(iter_bits(PX), key=lambda u: (P & rows[u]).bit_count())
        for v in list(iter_bits(P & ~rows[pivot])):
            R.append(v)
            yield from expand(R, P & rows[v], X & rows[v])
            R.pop()
            P &= ~(1 << v)
            X |= 1 << v

    yield from expand([], allowed, 0)


def enumerate_cliques(G: AnyGraph, k: int, cap: int = DEFAULT_MAX_CLIQUES) -> list[tuple[int, ...]]:
    """All ``k``-cliques, sorted, via maximal cliques and their ``k``-subsets."""
    if k < 1:
        raise ArgumentError(f"k must be positive, got {k}")
    found: set[tuple[int, ...]] = set()
    for C in maximal_cliques(G):
        if len(C) < k:
            continue
        for sub in combinations(C, k):
            found.add(sub)
            if len(found) > cap:
                raise ResourceLimitError(f"more than {cap} {k}-cliques", partial=len(found))
    return sorted(found)


def iter_k_cliques(rows: Sequence[int], k: int, allowed: int) -> Iterator[tuple[int, ...]]:
    """``k``-cliques inside ``allowed`` in lexicographic order of sorted ids."""
    clique: list[int] = []

    def extend(cand: int):
        need = k - len(clique)
        if need == 0:
            yield tuple(clique)
            return
        while cand and cand.bit_count() >= need:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            clique.append(v)
            yield from extend(cand & rows[v])
            clique.pop()

    yield from extend(allowed)


def twin_representatives(rows: Sequence[int]) -> int:
    """Bitmask of the lowest id in each class of vertices with identical rows.

    Equal rows force non-adjacency, and swapping a clique member for its twin
    leaves every non-neighbor trace unchanged, so searching over
    representatives loses no certificate.
    """
    seen: set[int] = set()
    mask = 0
    for v, row in enumerate(rows):
        if row not in seen:
            seen.add(row)
            mask |= 1 << v
    return mask


# --- adjacency-only detection --------------------------------------------------

@dataclass
class DetectReport:
    verdict: str
    m: int
    certificate: CubeTraceCertificate | None = None
    cliques_examined: int = 0
    bijection_nodes: int = 0
    elapsed_ms: float = 0.0
    reason: str | None = None

    @property
    def found(self) -> bool:
        return self.verdict == "found"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "m": self.m,
            "counters": {"cliques_examined": self.cliques_examined, "bijection_nodes": self.bijection_nodes},
            "elapsed_ms": round(self.elapsed_ms, 3),
            "reason": self.reason,
            "certificate": self.certificate.to_json() if self.certificate else None,
        }


class _Budget(Exception):
    pass


def _trace_classes(rows: Sequence[int], Q: Sequence[int], reps: int) -> list[int] | None:
    """Distinct non-neighbor traces of ``Q`` as local masks over clique positions.

    Returns ``None`` if some vertex is adjacent to all of ``Q`` or some trace
    has a size that is not a power of two.  Vertices are partitioned by
    refinement, one clique position at a time.
    """
    classes = [(reps, 0)]
    for j, v in enumerate(Q):
        non_adj = ~rows[v]
        bit = 1 << j
        nxt = []
        for members, sig in classes:
            inside = members & non_adj
            if inside:
                nxt.append((inside, sig | bit))
            if inside != members:
                nxt.append((members & ~inside, sig))
        classes = nxt
    out = set()
    for _, sig in classes:
        size = sig.bit_count()
        if size == 0 or size & (size - 1):
            return None
        out.add(sig)
    return sorted(out)


def _search_bijection(traces: list[int], k: int, m: int, budget: list[int]) -> list[int] | None:
    """Assign cube words to clique positions so every trace maps to a subcube.

    Position 0 is pinned to the all-zero word (translation quotient) and the
    remaining positions take words in increasing order.  A partial
    assignment is abandoned once the span of a trace's assigned members is
    larger than the trace, or contains an assigned non-member.
    """
    full = (1 << m) - 1
    codim_needed = [m - (t.bit_count().bit_length() - 1) for t in traces]
    members_of = [[p for p in range(k) if (t >> p) & 1] for t in traces]
    assign = [-1] * k
    used = [False] * k

    def consistent(p: int) -> bool:
        for t, trace in enumerate(traces):
            ones, zeros, seen = full, full, False
            for q in members_of[t]:
                if q <= p:
                    w = assign[q]
                    ones &= w
                    zeros &= ~w
                    seen = True
            if not seen:
                continue
            fixed = ones | zeros
            if fixed.bit_count() < codim_needed[t]:
                return False
            for q in range(p + 1):
                if not (trace >> q) & 1 and assign[q] & fixed == ones:
                    return False
        return True

    def place(p: int) -> bool:
        if p == k:
            return True
        for w in range(1 << m):
            if used[w]:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                raise _Budget
            assign[p] = w
            used[w] = True
            if consistent(p) and place(p + 1):
                return True
            used[w] = False
        assign[p] = -1
        return False

    assign[0] = 0
    used[0] = True
    budget[0] -= 1
    if not consistent(0):
        return None
    return list(assign) if place(1) else None


def abstract_detect(G: AnyGraph, m: int, max_cliques: int = DEFAULT_MAX_CLIQUES,
                    max_bijections: int = DEFAULT_MAX_BIJECTIONS, keep_traces: bool = True) -> DetectReport:
    """Search for a cube-trace clique of size ``2**m`` using adjacency only.

    Cliques are visited in lexicographic order of their sorted vertex ids,
    restricted to twin representatives; the first clique admitting a valid
    bijection is returned.  Exhausting either budget yields a
    ``"resource-limit"`` verdict rather than ``"not-found"``.
    """
    if not isinstance(m, int) or m < 1:
        raise ArgumentError(f"m must be a positive integer, got {m!r}")
    start = time.perf_counter()
    rows = _rows(G)
    A = G.adjacency if isinstance(G, ContradictionGraph) else G
    k = 1 << m
    reps = twin_representatives(rows)
    report = DetectReport("not-found", m)
    budget = [max_bijections]

    def finish(verdict: str, reason: str | None = None) -> DetectReport:
        report.verdict = verdict
        report.reason = reason
        report.bijection_nodes = max_bijections - max(budget[0], 0)
        report.elapsed_ms = (time.perf_counter() - start) * 1000
        return report

    try:
        for Q in iter_k_cliques(rows, k, reps):
            if report.cliques_examined >= max_cliques:
                return finish("resource-limit", f"clique budget {max_cliques} exhausted")
            report.cliques_examined += 1
            traces = _trace_classes(rows, Q, reps)
            if traces is None:
                continue
            words = _search_bijection(traces, k, m, budget)
            if words is None:
                continue
            phi = dict(zip(Q, words))
            check = verify_cube_trace(A, Q, phi, m, keep_traces=keep_traces and len(rows) <= TRACE_AUDIT_MAX_ORDER)
            if not check:
                raise InternalError(f"search produced a rejected certificate ({check.kind} {check.witness})")
            report.certificate = CubeTraceCertificate(m, tuple(Q), phi, check.traces)
            return finish("found")
    except _Budget:
        return finish("resource-limit", f"bijection budget {max_bijections} exhausted")
    return finish("not-found")


# --- threshold decisions -------------------------------------------------------

@dataclass(frozen=True)
class AtLeast:
    """Every tested threshold passed; the VC dimension is at least ``value``."""

    value: int

    def __str__(self) -> str:
        return f"≥ {self.value}"


def vc_at_least(H: ConceptClass, m: int, method: str = "oracle", *, cap: int | None = None,
                max_cliques: int = DEFAULT_MAX_CLIQUES, max_bijections: int = DEFAULT_MAX_BIJECTIONS,
                abstract_max_m: int = ABSTRACT_MAX_M) -> bool:
    """Decide ``VCdim(H) >= m`` by brute force, forward construction, or graph search."""
    if not isinstance(m, int) or m < 1:
        raise ArgumentError(f"m must be a positive integer, got {m!r}")
    if method == "oracle":
        return m <= H.domain_size and bool(shattered_sets(H, m))
    if method == "forward":
        sets = shattered_sets(H, m) if m <= H.domain_size else []
        if not sets:
            return False
        G = build_graph(H, m, cap)
        cert = forward_certificate(H, sets[0], G, keep_traces=False)
        if not verify_cube_trace(G, cert.clique, cert.phi):
            raise InternalError(f"forward certificate over {sets[0]} rejected")
        return True
    if method == "abstract":
        if m > abstract_max_m:
            raise ResourceLimitError(f"abstract search is limited to m <= {abstract_max_m}")
        G = build_graph(H, m, cap)
        report = abstract_detect(G.adjacency, m, max_cliques, max_bijections, keep_traces=False)
        if report.verdict == "resource-limit":
            raise ResourceLimitError(report.reason or "search budget exhausted",
                                     partial=report.cliques_examined)
        return report.found
    raise ArgumentError(f"unknown method {method!r}; expected one of {METHODS}")


def threshold_table(H: ConceptClass, m_max: int, method: str = "oracle", **kw) -> list[tuple[int, bool | str]]:
    """Per-threshold verdicts for ``m = 1..m_max``; a budget overrun shows as ``"limit"``."""
    rows = []
    for m in range(1, m_max + 1):
        try:
            rows.append((m, vc_at_least(H, m, method, **kw)))
        except ResourceLimitError:
            rows.append((m, "limit"))
    return rows


def vc_exact_via_graphs(H: ConceptClass, m_max: int, method: str = "abstract", **kw) -> int | AtLeast:
    """Largest passing threshold up to ``m_max``, or ``AtLeast(m_max)`` if all pass.

    Thresholds are monotone, so testing stops at the first failure.
    """
    if m_max < 1:
        raise ArgumentError(f"m_max must be positive, got {m_max}")
    for m in range(1, m_max + 1):
        if not vc_at_least(H, m, method, **kw):
            return m - 1
    return AtLeast(m_max)


# --- proof-level diagnostics on labeled graphs ------------------------------------

@dataclass
class InformativeAudit:
    counts: dict[int, tuple[int, int]]
    in_every_vertex: bool
    size_is_m: bool
    bijective: bool

    @property
    def passed(self) -> bool:
        return self.in_every_vertex and self.size_is_m and self.bijective


def informative_points(G: ContradictionGraph, Q: Sequence[int],
                       certified: bool = False) -> tuple[PointSet, InformativeAudit]:
    """Points labeled both ways inside ``Q``, with the reverse-direction waypoints.

    With ``certified=True`` the caller vouches that ``Q`` carries a verified
    certificate; a failing waypoint then raises :class:`InternalError`.
    """
    G = _labeled(G)
    Q = list(Q)
    counts: dict[int, list[int]] = {}
    for v in Q:
        for x, b in set(G.vertices[v]):
            counts.setdefault(x, [0, 0])[b] += 1
    points = tuple(sorted(x for x, (c0, c1) in counts.items() if c0 and c1))
    seqs = [G.vertices[v] for v in Q]
    in_every = all(set(points) <= set(support(S)) for S in seqs)
    size_is_m = len(points) == G.m
    labelings = set()
    for S in seqs:
        lab = dict(S)
        labelings.add(tuple(lab.get(x) for x in points))
    bijective = in_every and len(labelings) == len(Q) == 1 << len(points)
    audit = InformativeAudit({x: (counts[x][0], counts[x][1]) for x in points}, in_every, size_is_m, bijective)
    if certified and not audit.passed:
        raise InternalError(f"informative-point audit failed on a certified clique: {audit}")
    return points, audit


def common_support_shatters(G: ContradictionGraph, Q: Sequence[int]) -> PointSet | None:
    """The shared support of ``Q`` if all members use the same ``m`` points."""
    G = _labeled(G)
    supports = {support(G.vertices[v]) for v in Q}
    if len(supports) != 1:
        return None
    (R,) = supports
    if len(R) != G.m:
        return None
    if G.concept_class is not None and len(Q) == 1 << G.m and not is_shattered(G.concept_class, R):
        raise InternalError(f"clique on common support {R} but {R} is not shattered")
    return R


@dataclass
class SpreadReport:
    m: int
    cliques: int
    min_spread: int | None
    violation: tuple[int, ...] | None
    concentrated: int

    @property
    def passed(self) -> bool:
        return self.violation is None and self.concentrated == 0


def support_spread_check(G: ContradictionGraph, cap: int = DEFAULT_MAX_CLIQUES) -> SpreadReport:
    """Every ``2**m``-clique of a class with ``VCdim < m`` spreads over ``>= m+1`` points."""
    G = _labeled(G)
    if G.concept_class is None:
        raise ArgumentError("support spread needs the graph's concept class")
    m = G.m
    d = vc_dimension(G.concept_class)
    if d >= m:
        raise PreconditionError(f"class has VC dimension {d} >= m={m}")
    min_spread = None
    violation = None
    concentrated = 0
    cliques = enumerate_cliques(G, 1 << m, cap)
    for Q in cliques:
        spread = len(support_union(G, Q))
        if min_spread is None or spread < min_spread:
            min_spread = spread
        if spread < m + 1 and violation is None:
            violation = Q
        if common_support_shatters(G, Q) is not None:
            concentrated += 1
    return SpreadReport(m, len(cliques), min_spread, violation, concentrated)


def tree_clique_sequences(m: int) -> list[tuple[tuple[int, int], ...]]:
    """The sequences ``S_a``, ``a`` in ``{0,1}^m`` ascending, over tree-node indices.

    ``S_a`` labels the prefix ``a[:i]`` with 1 iff ``a[i] == '0'``.
    """
    out = []
    for a in range(1 << m):
        s = format(a, f"0{m}b")
        out.append(tuple((tree_point_index(s[:i]), int(s[i] == "0")) for i in range(m)))
    return out


def tree_clique(G: ContradictionGraph) -> tuple[int, ...]:
    """Vertex ids of the ``2**m`` branch-prefix clique in ``G_m`` of a prefix-tree class."""
    G = _labeled(G)
    n = G.domain_size
    depth = (n + 1).bit_length() - 1
    if n + 1 != 1 << depth:
        raise ArgumentError(f"domain size {n} is not that of a truncated prefix tree")
    if depth < G.m:
        raise PreconditionError(f"tree depth {depth} is below m={G.m}")
    ids = []
    for S in tree_clique_sequences(G.m):
        if not G.has_vertex(S):
            raise InternalError(f"tree-clique sequence {S} is not a vertex")
        ids.append(G.vertex_id(S))
    return tuple(ids)
