"""Seeded test corpora: small random classes plus the named families."""

from __future__ import annotations

import hashlib
import json
import random

from .concepts import ConceptClass, class_to_json, make_full, make_parity, make_prefix_tree, make_random

RANDOM_CORPUS_SIZE = 200
RANDOM_MAX_N = 5
RANDOM_MAX_CONCEPTS = 12


def random_corpus(seed: int, size: int = RANDOM_CORPUS_SIZE) -> list[tuple[str, ConceptClass]]:
    rng = random.Random(seed)
    out = []
    for i in range(size):
        n = rng.randint(1, RANDOM_MAX_N)
        count = rng.randint(1, min(RANDOM_MAX_CONCEPTS, 1 << n))
        out.append((f"random-{i}", make_random(n, count, rng.getrandbits(64))))
    return out


def named_families(max_tree_depth: int = 4) -> list[tuple[str, ConceptClass]]:
    out = [(f"full-{n}", make_full(n)) for n in range(1, 5)]
    out += [(f"parity-{n}", make_parity(n)) for n in range(1, 6)]
    out += [(f"tree-{d}", make_prefix_tree(d)) for d in range(1, max_tree_depth + 1)]
    return out


def corpus(seed: int) -> list[tuple[str, ConceptClass]]:
    return random_corpus(seed) + named_families()


def digest_classes(classes: list[tuple[str, ConceptClass]]) -> str:
    h = hashlib.sha256()
    for name, H in classes:
        h.update(json.dumps([name, class_to_json(H)], sort_keys=True).encode())
    return h.hexdigest()
