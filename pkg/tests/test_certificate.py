import json
import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings

from conftest import concept_classes
from oracles import contradict_brute, cube_trace_brute, realizable_brute, concepts_as_tuples, vc_brute

from contragraph.certificate import (
    AtLeast,
    CubeTraceCertificate,
    abstract_detect,
    common_support_shatters,
    enumerate_cliques,
    forward_certificate,
    informative_points,
    iter_k_cliques,
    maximal_cliques,
    support_spread_check,
    tree_clique,
    tree_clique_sequences,
    vc_at_least,
    vc_exact_via_graphs,
    verify_cube_trace,
)
from contragraph.concepts import ConceptClass, make_full, make_parity, make_prefix_tree, make_random, shattered_sets
from contragraph.cube import all_subcubes, is_subcube
from contragraph.errors import ArgumentError, PreconditionError, ResourceLimitError
from contragraph.graph import Adjacency, build_graph, relabel, support, support_union


def random_rows(rng, n, p):
    rows = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
    return rows


def planted_rows(rng, m, extra, corrupt=False):
    """A 2^m-clique whose outside vertices each miss a random subcube of it."""
    k = 1 << m
    n = k + extra
    rows = [0] * n

    def link(u, v):
        rows[u] |= 1 << v
        rows[v] |= 1 << u

    for u, v in combinations(range(k), 2):
        link(u, v)
    cubes = all_subcubes(m)
    for T in range(k, n):
        keep = set(rng.choice(cubes).members())
        for w in range(k):
            if w not in keep:
                link(T, w)
    for u, v in combinations(range(k, n), 2):
        if rng.random() < 0.5:
            link(u, v)
    if corrupt:
        T = rng.randrange(k, n)
        w = rng.randrange(k)
        rows[T] ^= 1 << w
        rows[w] ^= 1 << T
    perm = list(range(n))
    rng.shuffle(perm)
    return list(relabel(Adjacency(n, tuple(rows)), perm).rows)


# --- verification ---------------------------------------------------------------

def test_verify_forward_full2():
    H = make_full(2)
    G = build_graph(H, 2)
    cert = forward_certificate(H, (0, 1), G)
    assert verify_cube_trace(G, cert.clique, cert.phi)


def test_verify_rejects_tree_clique_for_every_bijection():
    G = build_graph(make_prefix_tree(2), 2)
    Q = tree_clique(G)
    for words in permutations(range(4)):
        res = verify_cube_trace(G, Q, list(words))
        assert not res and res.kind == "trace"


def test_verify_reports_non_adjacent_pair():
    G = build_graph(make_full(2), 2)
    a = G.vertex_id(((0, 0), (1, 0)))
    b = G.vertex_id(((1, 0), (0, 0)))
    c = G.vertex_id(((0, 1), (1, 1)))
    d = G.vertex_id(((0, 1), (1, 0)))
    res = verify_cube_trace(G, [a, b, c, d], [0, 1, 2, 3])
    assert not res and res.kind == "non-adjacent" and set(res.witness) == {a, b}


def test_verify_arity_and_bijection_errors():
    G = build_graph(make_full(2), 2)
    with pytest.raises(ArgumentError):
        verify_cube_trace(G, [0, 1, 2], [0, 1, 2])
    with pytest.raises(ArgumentError):
        verify_cube_trace(G, [0, 3, 8, 11], [0, 0, 1, 2])


def test_verify_detects_empty_trace():
    # path a-b plus c adjacent to both: c sees the clique {a, b} as empty
    A = Adjacency.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    res = verify_cube_trace(A, [0, 1], [0, 1])
    assert not res and res.witness == (2,) and res.words == ()


# --- forward construction ---------------------------------------------------------

def test_forward_full2_clique():
    H = make_full(2)
    G = build_graph(H, 2)
    cert = forward_certificate(H, (0, 1), G)
    seqs = {G.vertices[v] for v in cert.clique}
    assert seqs == {((0, a), (1, b)) for a in (0, 1) for b in (0, 1)}
    for v in cert.clique:
        (x0, s1), (x1, s2) = G.vertices[v]
        assert cert.phi[v] == s1 | s2 << 1
    assert len(cert.traces) == G.order


def test_forward_parity3():
    H = make_parity(3)
    G = build_graph(H, 2)
    cert = forward_certificate(H, (0, 1), G)
    assert verify_cube_trace(G, cert.clique, cert.phi)
    with pytest.raises(PreconditionError):
        forward_certificate(H, (0, 1, 2))


@settings(max_examples=60, deadline=None)
@given(concept_classes(max_n=4, max_concepts=10))
def test_forward_certificates_verify(H):
    for m in (1, 2, 3):
        if m > H.domain_size:
            break
        sets = shattered_sets(H, m)
        if not sets:
            continue
        G = build_graph(H, m)
        for R in sets:
            cert = forward_certificate(H, R, G)
            assert verify_cube_trace(G, cert.clique, cert.phi)
            assert all(t.size == 2 ** (m - t.codim) for t in cert.traces.values())
            points, audit = informative_points(G, cert.clique, certified=True)
            assert points == R and audit.passed


def test_certificate_json_round_trip():
    H = make_full(2)
    cert = forward_certificate(H, (0, 1))
    doc = json.loads(json.dumps(cert.to_json()))
    assert set(doc) == {"m", "clique", "phi", "traces"}
    again = CubeTraceCertificate.from_json(doc)
    assert again == cert


# --- clique enumeration -------------------------------------------------------------

def test_enumerate_cliques_examples():
    tri = Adjacency.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert enumerate_cliques(tri, 2) == [(0, 1), (0, 2), (1, 2)]
    G1 = build_graph(make_full(1), 1)
    assert enumerate_cliques(G1, 2) == [(0, 1)]
    G = build_graph(make_prefix_tree(2), 2)
    assert tuple(sorted(tree_clique(G))) in enumerate_cliques(G, 4)


def test_enumerate_cliques_cap():
    G = build_graph(make_full(2), 2)
    with pytest.raises(ResourceLimitError) as err:
        enumerate_cliques(G, 2, cap=5)
    assert err.value.partial > 5


@pytest.mark.parametrize("seed", range(30))
def test_clique_listings_match_brute_force(seed):
    rng = random.Random(seed)
    rows = random_rows(rng, rng.randint(3, 13), rng.uniform(0.3, 0.9))
    A = Adjacency(len(rows), tuple(rows))
    for k in (2, 3, 4):
        brute = [Q for Q in combinations(range(A.order), k) if all(A.adjacent(u, v) for u, v in combinations(Q, 2))]
        assert enumerate_cliques(A, k) == brute
        assert list(iter_k_cliques(rows, k, (1 << A.order) - 1)) == brute
    maxi = list(maximal_cliques(A))
    assert len(set(maxi)) == len(maxi)


# --- abstract detection ----------------------------------------------------------------

def test_abstract_detect_examples():
    G = build_graph(make_full(2), 2)
    r = abstract_detect(G, 2)
    assert r.found and verify_cube_trace(G, r.certificate.clique, r.certificate.phi)
    assert abstract_detect(build_graph(make_prefix_tree(3), 2), 2).verdict == "not-found"
    rng = random.Random(11)
    perm = list(range(G.order))
    rng.shuffle(perm)
    assert abstract_detect(relabel(G, perm), 2).found


def test_abstract_detect_budgets():
    G = build_graph(make_prefix_tree(3), 2)
    r = abstract_detect(G, 2, max_cliques=1)
    assert r.verdict == "resource-limit" and r.certificate is None
    r = abstract_detect(build_graph(make_full(3), 3), 3, max_bijections=3)
    assert r.verdict == "resource-limit"


def test_abstract_detect_is_deterministic():
    G = build_graph(make_parity(4), 3)
    a, b = abstract_detect(G, 3), abstract_detect(G, 3)
    assert a.certificate == b.certificate
    assert a.certificate.phi[min(a.certificate.clique)] == 0


def test_abstract_certificate_fixes_lowest_vertex_to_zero():
    r = abstract_detect(build_graph(make_full(3), 2), 2)
    assert r.certificate.phi[r.certificate.clique[0]] == 0


@pytest.mark.parametrize("seed", range(150))
def test_abstract_matches_brute_force_m2(seed):
    rng = random.Random(seed)
    if seed % 3 == 0:
        rows = planted_rows(rng, 2, rng.randint(1, 6), corrupt=seed % 2 == 0)
    else:
        rows = random_rows(rng, rng.randint(4, 10), rng.uniform(0.4, 0.9))
    A = Adjacency(len(rows), tuple(rows))
    report = abstract_detect(A, 2)
    assert report.verdict != "resource-limit"
    assert report.found == (cube_trace_brute(rows, 2) is not None)


@pytest.mark.parametrize("seed", range(12))
def test_abstract_matches_brute_force_m3(seed):
    rng = random.Random(1000 + seed)
    rows = planted_rows(rng, 3, rng.randint(1, 3), corrupt=seed % 2 == 1)
    A = Adjacency(len(rows), tuple(rows))
    report = abstract_detect(A, 3)
    assert report.found == (cube_trace_brute(rows, 3) is not None)
    if seed % 2 == 0:
        assert report.found


@pytest.mark.parametrize("m", [1, 2])
def test_abstract_m1_m2_random_classes(m):
    rng = random.Random(m)
    for _ in range(40):
        n = rng.randint(1, 4)
        H = make_random(n, rng.randint(1, min(8, 1 << n)), rng.getrandbits(32))
        G = build_graph(H, m)
        assert abstract_detect(G.adjacency, m).found == (vc_brute(H) >= m)


# --- thresholds -------------------------------------------------------------------------

@pytest.mark.parametrize("method", ["oracle", "forward", "abstract"])
def test_vc_at_least_examples(method):
    assert vc_at_least(make_parity(4), 3, method) is True
    if method != "abstract":
        assert vc_at_least(make_parity(4), 4, method) is False
    assert vc_at_least(make_prefix_tree(3), 2, method) is False


def test_tree_has_cliques_but_no_threshold():
    G = build_graph(make_prefix_tree(3), 2)
    assert enumerate_cliques(G, 4)
    assert not vc_at_least(make_prefix_tree(3), 2, "abstract")


def test_vc_at_least_abstract_limits():
    with pytest.raises(ResourceLimitError):
        vc_at_least(make_full(4), 4, "abstract")
    with pytest.raises(ResourceLimitError):
        vc_at_least(make_prefix_tree(3), 2, "abstract", max_cliques=1)
    with pytest.raises(ArgumentError):
        vc_at_least(make_full(2), 1, "psychic")


def test_vc_exact_examples():
    assert vc_exact_via_graphs(make_parity(4), 5, method="oracle") == 3
    assert vc_exact_via_graphs(make_parity(3), 3, method="abstract") == 2
    assert vc_exact_via_graphs(make_parity(4), 3, method="abstract") == AtLeast(3)
    assert vc_exact_via_graphs(make_prefix_tree(4), 3) == 1
    got = vc_exact_via_graphs(make_full(3), 2)
    assert got == AtLeast(2) and str(got) == "≥ 2"


def test_vc_exact_zero():
    assert vc_exact_via_graphs(ConceptClass(2, (0b01,)), 2) == 0


# --- diagnostics -----------------------------------------------------------------------

def test_informative_points_forward():
    H = make_full(3)
    G = build_graph(H, 2)
    cert = forward_certificate(H, (0, 2), G)
    points, audit = informative_points(G, cert.clique, certified=True)
    assert points == (0, 2) and audit.counts == {0: (2, 2), 2: (2, 2)}


def test_informative_points_tree_clique():
    G = build_graph(make_prefix_tree(3), 2)
    Q = tree_clique(G)
    points, audit = informative_points(G, Q)
    eps = 0
    assert eps in points and audit.counts[eps] == (2, 2)
    assert all(eps in support(G.vertices[v]) for v in Q)
    assert points == (0, 1, 2)
    assert not audit.size_is_m and not audit.in_every_vertex and not audit.passed


def test_informative_points_single_edge():
    G = build_graph(make_full(2), 1)
    Q = [G.vertex_id(((1, 0),)), G.vertex_id(((1, 1),))]
    points, audit = informative_points(G, Q, certified=True)
    assert points == (1,) and audit.passed


def test_support_spread_tree3():
    G = build_graph(make_prefix_tree(3), 2)
    rep = support_spread_check(G)
    assert rep.passed and rep.cliques > 0 and rep.min_spread >= 3


@pytest.mark.parametrize("m", [1, 2, 3])
def test_tree_clique_spread(m):
    G = build_graph(make_prefix_tree(m), m)
    assert len(support_union(G, tree_clique(G))) == 2**m - 1


def test_support_spread_precondition():
    with pytest.raises(PreconditionError):
        support_spread_check(build_graph(make_full(2), 1))


def test_common_support_examples():
    H = make_parity(3)
    G = build_graph(H, 2)
    cert = forward_certificate(H, (1, 2), G)
    assert common_support_shatters(G, cert.clique) == (1, 2)
    T = build_graph(make_prefix_tree(2), 2)
    assert common_support_shatters(T, tree_clique(T)) is None


def test_common_support_mixed_random_clique():
    rng = random.Random(5)
    seen = 0
    for _ in range(30):
        H = make_random(4, rng.randint(2, 8), rng.getrandbits(32))
        G = build_graph(H, 2)
        for Q in enumerate_cliques(G, 4):
            if len({support(G.vertices[v]) for v in Q}) > 1:
                assert common_support_shatters(G, Q) is None
                seen += 1
    assert seen > 0


def test_tree_clique_examples():
    G = build_graph(make_prefix_tree(1), 1)
    assert {G.vertices[v] for v in tree_clique(G)} == {((0, 1),), ((0, 0),)}
    G = build_graph(make_prefix_tree(2), 2)
    seqs = [G.vertices[v] for v in tree_clique(G)]
    eps, zero, one = 0, 1, 2
    assert seqs == [((eps, 1), (zero, 1)), ((eps, 1), (zero, 0)), ((eps, 0), (one, 1)), ((eps, 0), (one, 0))]


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_tree_clique_sequences_form_realizable_clique(m):
    H = make_prefix_tree(m)
    cs = concepts_as_tuples(H)
    seqs = tree_clique_sequences(m)
    assert len(set(seqs)) == 2**m
    assert all(realizable_brute(cs, S) for S in seqs)
    assert all(contradict_brute(S, T) for S, T in combinations(seqs, 2))


def test_tree_clique_needs_depth():
    with pytest.raises(PreconditionError):
        tree_clique(build_graph(make_prefix_tree(2), 3))
    with pytest.raises(ArgumentError):
        tree_clique(build_graph(make_full(2), 1))


def test_trace_subcube_sizes_in_found_certificate():
    G = build_graph(make_parity(4), 3)
    cert = abstract_detect(G, 3).certificate
    for T, cube in cert.traces.items():
        words = {cert.phi[S] for S in cert.clique if not G.adjacent(S, T)}
        assert words and is_subcube(words, 3) == cube
