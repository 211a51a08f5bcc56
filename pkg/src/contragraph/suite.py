"""Theorem-reproduction checks run by ``contragraph verify``.

Each check returns a :class:`CheckResult`; ``status`` is ``"pass"``,
``"fail"`` or ``"limit"``.  Checks are deterministic given the seed.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable

from . import __version__
from .certificate import (
    abstract_detect,
    common_support_shatters,
    forward_certificate,
    informative_points,
    support_spread_check,
    tree_clique,
    vc_at_least,
    verify_cube_trace,
)
from .concepts import ConceptClass, is_shattered, make_full, make_parity, make_prefix_tree, shattered_sets, vc_dimension
from .corpus import corpus, digest_classes, named_families
from .cube import all_subcubes, facet_cover_check, is_subcube
from .errors import ResourceLimitError
from .graph import build_graph, graphs_equal, relabel

@dataclass
class CheckResult:
    name: str
    criterion: int
    status: str
    counters: dict = field(default_factory=dict)
    detail: list[str] = field(default_factory=list)
    wall_ms: float = 0.0
    limit_s: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"name": self.name, "criterion": self.criterion, "status": self.status,
                "counters": self.counters, "detail": self.detail,
                "wall_ms": round(self.wall_ms, 3), "time_limit_s": self.limit_s}


class _Check:
    def __init__(self, name: str, criterion: int):
        self.result = CheckResult(name, criterion, "pass")

    def expect(self, ok: bool, message: str) -> None:
        if not ok:
            self.result.status = "fail"
            if len(self.result.detail) < 20:
                self.result.detail.append(message)

    def count(self, key: str, n: int = 1) -> None:
        self.result.counters[key] = self.result.counters.get(key, 0) + n


def check_parity_thresholds(seed: int) -> CheckResult:
    c = _Check("parity-thresholds", 1)
    for n in range(2, 6):
        c.expect(vc_dimension(make_full(n)) == n, f"VCdim(U_{n}) != {n}")
        c.expect(vc_dimension(make_parity(n)) == n - 1, f"VCdim(E_{n}) != {n - 1}")
        c.count("classes", 2)
    return c.result


def check_finite_prefix(seed: int) -> CheckResult:
    c = _Check("finite-prefix", 2)
    for n in range(2, 5):
        E, U = make_parity(n), make_full(n)
        for m in range(1, n):
            c.expect(graphs_equal(build_graph(E, m), build_graph(U, m)), f"G_{m}(E_{n}) != G_{m}(U_{n})")
            c.count("graph_pairs")
    for n in range(2, 4):
        E, U = make_parity(n), make_full(n)
        for method in ("oracle", "forward", "abstract"):
            e, u = vc_at_least(E, n, method), vc_at_least(U, n, method)
            c.expect(e is False and u is True, f"{method}: E_{n} -> {e}, U_{n} -> {u} at m={n}")
            c.count("threshold_pairs")
    return c.result


def check_tree_clique(seed: int) -> CheckResult:
    c = _Check("tree-clique", 3)
    c.expect(vc_dimension(make_prefix_tree(4)) == 1, "VCdim of the depth-4 prefix tree != 1")
    for m in range(1, 4):
        G = build_graph(make_prefix_tree(m), m)
        Q = tree_clique(G)
        c.expect(len(set(Q)) == 1 << m, f"tree clique at m={m} has {len(set(Q))} vertices")
        c.expect(all(G.adjacent(u, v) for u, v in combinations(Q, 2)), f"tree clique at m={m} is not a clique")
        c.count("tree_cliques")
    for D, m in ((2, 2), (3, 2), (4, 2), (3, 3)):
        report = abstract_detect(build_graph(make_prefix_tree(D), m).adjacency, m, keep_traces=False)
        c.expect(report.verdict == "not-found", f"abstract on G_{m}(tree-{D}): {report.verdict}")
        c.count("cliques_examined", report.cliques_examined)
    return c.result


def check_level_m(seed: int) -> CheckResult:
    c = _Check("level-m", 4)
    classes = corpus(seed)
    for name, H in classes:
        for m in (1, 2):
            G = build_graph(H, m)
            truth = vc_at_least(H, m, "oracle")
            forward = vc_at_least(H, m, "forward")
            report = abstract_detect(G.adjacency, m, keep_traces=False)
            if report.verdict == "resource-limit":
                c.result.status = "limit"
                c.result.detail.append(f"{name} m={m}: {report.reason}")
                continue
            c.expect(truth == forward == report.found,
                     f"{name} m={m}: oracle={truth} forward={forward} abstract={report.verdict}")
            if report.found:
                informative_points(G, report.certificate.clique, certified=True)
            for R in shattered_sets(H, m) if m <= H.domain_size else []:
                cert = forward_certificate(H, R, G, keep_traces=False)
                c.expect(verify_cube_trace(G, cert.clique, cert.phi), f"{name}: forward certificate over {R} rejected")
                c.count("forward_certificates")
            c.count("decisions")
    for name, H in named_families():
        try:
            got = vc_at_least(H, 3, "abstract")
        except ResourceLimitError as exc:
            c.result.status = "limit"
            c.result.detail.append(f"{name} m=3: {exc}")
            continue
        c.expect(got == vc_at_least(H, 3, "oracle"), f"{name} m=3: abstract={got}")
        c.count("decisions_m3")
    c.result.counters["classes"] = len(classes)
    return c.result


def check_isomorphism_invariance(seed: int) -> CheckResult:
    c = _Check("isomorphism-invariance", 5)
    rng = random.Random(seed)
    for name, H in (("full-2", make_full(2)), ("parity-3", make_parity(3)), ("tree-3", make_prefix_tree(3))):
        G = build_graph(H, 2)
        base = abstract_detect(G.adjacency, 2, keep_traces=False).verdict
        c.expect(base == ("found" if vc_dimension(H) >= 2 else "not-found"), f"{name}: base verdict {base}")
        for _ in range(20):
            perm = list(range(G.order))
            rng.shuffle(perm)
            got = abstract_detect(relabel(G, perm), 2, keep_traces=False).verdict
            c.expect(got == base, f"{name}: relabeled verdict {got} != {base}")
            c.count("relabelings")
    return c.result


def check_support_spread(seed: int) -> CheckResult:
    c = _Check("support-spread", 6)
    for name, H in corpus(seed):
        G = build_graph(H, 2)
        if vc_dimension(H) < 2:
            rep = support_spread_check(G)
            c.expect(rep.violation is None, f"{name}: 4-clique {rep.violation} spreads over < 3 points")
            c.expect(rep.concentrated == 0, f"{name}: {rep.concentrated} cliques share one support")
            c.count("low_vc_classes")
            c.count("cliques", rep.cliques)
        else:
            for R in shattered_sets(H, 2):
                cert = forward_certificate(H, R, G, keep_traces=False)
                got = common_support_shatters(G, cert.clique)
                c.expect(got == R and is_shattered(H, R), f"{name}: forward clique over {R} -> {got}")
                c.count("forward_cliques")
    return c.result


def _definitional_subcubes(m: int) -> dict[int, tuple[int, int]]:
    """Bitmask-of-members -> (fixed, pattern), from every (I, tau) pair."""
    out = {}
    for fixed in range(1 << m):
        I = [i for i in range(m) if (fixed >> i) & 1]
        for bits in product((0, 1), repeat=len(I)):
            pattern = sum(b << i for i, b in zip(I, bits))
            members = 0
            for w in range(1 << m):
                if all((w >> i) & 1 == b for i, b in zip(I, bits)):
                    members |= 1 << w
            out[members] = (fixed, pattern)
    return out


def check_cube_utilities(seed: int) -> CheckResult:
    c = _Check("cube-utilities", 7)
    for m in range(1, 5):
        table = _definitional_subcubes(m)
        for A in range(1 << (1 << m)):
            words = [w for w in range(1 << m) if (A >> w) & 1]
            got = is_subcube(words, m)
            want = table.get(A)
            c.expect((got is None and want is None) or (got is not None and (got.fixed, got.pattern) == want),
                     f"m={m}: is_subcube({words}) = {got}, expected {want}")
        c.count("subsets", 1 << (1 << m))
    for m in range(1, 4):
        proper = [set(s.members()) for s in all_subcubes(m) if s.codim > 0]
        for A, B in product(proper, repeat=2):
            facet = next(((i, b) for i in range(m) for b in (0, 1)
                          if A == {w for w in range(1 << m) if (w >> i) & 1 == b}
                          and B == {w for w in range(1 << m) if (w >> i) & 1 != b}), None)
            c.expect(facet_cover_check(A, B, m) == facet, f"m={m}: facet_cover_check mismatch on {A}, {B}")
            c.count("pairs")
    return c.result


def brute_force_vertex_count(H: ConceptClass, m: int) -> int:
    """Point-tuples times labelings, filtered by agreement with some concept."""
    n = H.domain_size
    total = 0
    for tup in product(range(n), repeat=m):
        for labels in product((0, 1), repeat=m):
            if any(all((h >> x) & 1 == y for x, y in zip(tup, labels)) for h in H.concepts):
                total += 1
    return total


def check_vertex_count(seed: int) -> CheckResult:
    c = _Check("vertex-count", 8)
    U2 = make_full(2)
    for m, want in ((1, 4), (2, 12)):
        got = build_graph(U2, m).order
        oracle = brute_force_vertex_count(U2, m)
        c.expect(got == want == oracle, f"|V(G_{m}(U_2))|: graph={got} oracle={oracle} expected={want}")
        c.result.counters[f"vertices_m{m}"] = got
    return c.result


CHECKS: dict[str, tuple[Callable[[int], CheckResult], float]] = {
    "parity-thresholds": (check_parity_thresholds, 1.0),
    "finite-prefix": (check_finite_prefix, 30.0),
    "tree-clique": (check_tree_clique, 300.0),
    "level-m": (check_level_m, 600.0),
    "isomorphism-invariance": (check_isomorphism_invariance, 60.0),
    "support-spread": (check_support_spread, 300.0),
    "cube-utilities": (check_cube_utilities, 60.0),
    "vertex-count": (check_vertex_count, 1.0),
}


def run_check(name: str, seed: int) -> CheckResult:
    fn, limit = CHECKS[name]
    start = time.perf_counter()
    try:
        result = fn(seed)
    except ResourceLimitError as exc:
        result = CheckResult(name, -1, "limit", detail=[str(exc)])
    result.wall_ms = (time.perf_counter() - start) * 1000
    result.limit_s = limit
    if result.status == "pass" and result.wall_ms > limit * 1000:
        result.status = "fail"
        result.detail.append(f"took {result.wall_ms / 1000:.2f}s, limit {limit}s")
    return result


def run_suite(scope: str = "all", seed: int = 0, progress: Callable[[CheckResult], None] | None = None) -> dict:
    names = list(CHECKS) if scope == "all" else [scope]
    results = []
    for name in names:
        r = run_check(name, seed)
        results.append(r)
        if progress is not None:
            progress(r)
    report = {
        "tool": "contragraph",
        "version": __version__,
        "scope": scope,
        "seed": seed,
        "inputs": {"corpus_sha256": digest_classes(corpus(seed))},
        "checks": [r.to_json() for r in results],
        "passed": all(r.passed for r in results),
    }
    report["digest"] = report_digest(report)
    return report


def report_digest(report: dict) -> str:
    """SHA-256 of the report with timing fields removed."""
    stripped = dict(report)
    stripped.pop("digest", None)
    stripped["checks"] = [{k: v for k, v in ch.items() if k != "wall_ms"} for ch in report["checks"]]
    return hashlib.sha256(json.dumps(stripped, sort_keys=True).encode()).hexdigest()
