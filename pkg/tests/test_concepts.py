import json
from math import floor, log2

import pytest
from hypothesis import given, settings
from itertools import combinations, product

from conftest import concept_classes
from oracles import concepts_as_tuples, shatters, vc_brute

from contragraph.concepts import (
    ConceptClass,
    class_from_json,
    class_to_json,
    is_shattered,
    load_class,
    make_full,
    make_parity,
    make_prefix_tree,
    make_random,
    save_class,
    shattered_sets,
    tree_nodes,
    vc_dimension,
)
from contragraph.errors import ArgumentError, ParseError, PreconditionError, SizeLimitError


def strings(H):
    return sorted(H.to_strings())


def test_make_full_examples():
    assert strings(make_full(1)) == ["0", "1"]
    assert len(make_full(3)) == 8
    with pytest.raises(ArgumentError):
        make_full(0)


def test_make_full_cap():
    with pytest.raises(SizeLimitError) as err:
        make_full(21)
    assert "21" in str(err.value) and "20" in str(err.value)


def test_make_parity_examples():
    assert strings(make_parity(1)) == ["0"]
    # filter oracle over all labelings
    even3 = sorted("".join(map(str, t)) for t in product((0, 1), repeat=3) if sum(t) % 2 == 0)
    assert even3 == ["000", "011", "101", "110"]
    assert strings(make_parity(3)) == even3
    assert strings(make_parity(2)) == ["00", "11"]


@pytest.mark.parametrize("n", range(1, 8))
def test_parity_count(n):
    assert len(make_parity(n)) == 2 ** (n - 1)


def branch_rule(depth):
    """Independent h_alpha: label s with 1 iff s + '0' is a prefix of alpha."""
    nodes = sorted((format(v, f"0{k}b") if k else "" for k in range(depth) for v in range(1 << k)),
                   key=lambda s: (len(s), s))
    labelings = set()
    for a in product("01", repeat=depth):
        alpha = "".join(a)
        labelings.add("".join("1" if alpha.startswith(s + "0") else "0" for s in nodes))
    return nodes, sorted(labelings)


def test_prefix_tree_depth1():
    H = make_prefix_tree(1)
    assert H.point_names == ("ε",)
    assert strings(H) == ["0", "1"]


def test_prefix_tree_depth2():
    H = make_prefix_tree(2)
    assert H.domain_size == 3
    assert H.point_names == ("ε", "0", "1")
    assert len(H) == 4


@pytest.mark.parametrize("depth", range(1, 7))
def test_prefix_tree_matches_rule(depth):
    nodes, labelings = branch_rule(depth)
    H = make_prefix_tree(depth)
    assert tree_nodes(depth) == nodes
    assert strings(H) == labelings
    assert len(H) == 2**depth


@pytest.mark.parametrize("depth", range(2, 6))
def test_prefix_tree_siblings_exclusive(depth):
    H = make_prefix_tree(depth)
    idx = {s: i for i, s in enumerate(tree_nodes(depth))}
    for h in H.concepts:
        for s in tree_nodes(depth - 1):
            a, b = idx[s + "0"], idx[s + "1"]
            assert not ((h >> a) & 1 and (h >> b) & 1)


def test_make_random_examples():
    assert make_random(3, 8, 12345) == make_full(3)
    assert make_random(4, 5, 1) == make_random(4, 5, 1)
    assert len(make_random(4, 5, 1)) == 5
    with pytest.raises(PreconditionError):
        make_random(2, 5, 0)


def test_is_shattered_examples():
    assert is_shattered(make_full(3), (0, 1, 2))
    assert not is_shattered(make_parity(3), (0, 1, 2))
    assert is_shattered(make_parity(3), (0, 1))
    with pytest.raises(ArgumentError):
        is_shattered(make_full(2), ())
    with pytest.raises(ArgumentError):
        is_shattered(make_full(2), (0, 5))


def test_vc_dimension_examples():
    assert vc_dimension(make_full(4)) == 4
    assert vc_dimension(make_parity(4)) == 3
    assert vc_dimension(make_prefix_tree(4)) == 1
    assert vc_brute(make_prefix_tree(4)) == 1


def test_vc_dimension_zero():
    assert vc_dimension(ConceptClass(3, (0b101,))) == 0


def test_shattered_sets_examples():
    assert shattered_sets(make_full(2), 2) == [(0, 1)]
    assert shattered_sets(make_parity(3), 3) == []
    expected = [R for R in combinations(range(3), 2) if shatters(concepts_as_tuples(make_parity(3)), R)]
    assert expected == [(0, 1), (0, 2), (1, 2)]
    assert shattered_sets(make_parity(3), 2) == expected


@pytest.mark.parametrize("n", range(2, 7))
def test_parity_vc(n):
    assert vc_dimension(make_full(n)) == n
    assert vc_dimension(make_parity(n)) == n - 1


@settings(max_examples=150, deadline=None)
@given(concept_classes())
def test_vc_matches_brute_force(H):
    assert vc_dimension(H) == vc_brute(H)


@settings(max_examples=100, deadline=None)
@given(concept_classes())
def test_shattered_sets_monotone(H):
    d = vc_dimension(H)
    for k in range(1, d + 1):
        assert shattered_sets(H, k)
    if d < H.domain_size:
        assert shattered_sets(H, d + 1) == []
    assert d <= floor(log2(len(H)))


@settings(max_examples=100, deadline=None)
@given(concept_classes())
def test_shattering_closed_under_subsets(H):
    for k in range(1, H.domain_size + 1):
        for R in shattered_sets(H, k):
            for j in range(1, k):
                for sub in combinations(R, j):
                    assert is_shattered(H, sub)


def test_duplicates_are_dropped():
    H = ConceptClass.from_strings(["01", "01", "10"])
    assert len(H) == 2


def test_empty_class_rejected():
    with pytest.raises(ArgumentError):
        ConceptClass(2, ())


def test_string_order_point_zero_first():
    H = ConceptClass.from_strings(["100"])
    assert H.label(H.concepts[0], 0) == 1
    assert H.label(H.concepts[0], 2) == 0


def test_json_round_trip(tmp_path):
    H = make_prefix_tree(3)
    path = tmp_path / "tree.json"
    save_class(H, path)
    again = load_class(path)
    assert again == H and again.point_names == H.point_names


def test_json_rejects_wrong_length():
    with pytest.raises(ParseError) as err:
        class_from_json({"domain_size": 3, "concepts": ["010", "01"]})
    assert err.value.position == 1


def test_json_rejects_bad_character():
    with pytest.raises(ParseError) as err:
        class_from_json({"domain_size": 2, "concepts": ["0x"]})
    assert err.value.position == 0 and "character 1" in str(err.value)


def test_json_schema():
    doc = class_to_json(make_parity(2))
    assert json.loads(json.dumps(doc)) == {"domain_size": 2, "concepts": ["00", "11"]}
