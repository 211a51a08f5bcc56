"""Finite binary concept classes, the named families, and the shattering oracle.

A concept over the domain ``[0, n)`` is stored as a Python ``int`` whose bit
``i`` is the label of point ``i``.  A class is a deduplicated, sorted tuple of
such words.  Point sets are sorted tuples of point indices.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ArgumentError, ParseError, PreconditionError, SizeLimitError

DEFAULT_CAP = 20

PointSet = tuple[int, ...]


@dataclass(frozen=True)
class ConceptClass:
    domain_size: int
    concepts: tuple[int, ...]
    point_names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        n = self.domain_size
        if not isinstance(n, int) or n < 1:
            raise ArgumentError(f"domain_size must be a positive integer, got {n!r}")
        words = sorted(set(self.concepts))
        if not words:
            raise ArgumentError("a concept class needs at least one concept")
        if words[0] < 0 or words[-1] >> n:
            raise ArgumentError(f"concept outside {{0,1}}^{n}")
        object.__setattr__(self, "concepts", tuple(words))
        if self.point_names is not None:
            names = tuple(self.point_names)
            if len(names) != n:
                raise ArgumentError(f"expected {n} point names, got {len(names)}")
            object.__setattr__(self, "point_names", names)

    def __len__(self) -> int:
        return len(self.concepts)

    def __contains__(self, word: int) -> bool:
        return word in set(self.concepts)

    def label(self, concept: int, point: int) -> int:
        return (concept >> point) & 1

    def name_of(self, point: int) -> str:
        if self.point_names is None:
            return str(point)
        return self.point_names[point]

    def trace(self, points: Sequence[int]) -> set[int]:
        """Distinct restrictions of the class to ``points``, packed as words.

        Bit ``j`` of each returned word is the label of ``points[j]``.
        """
        out = set()
        for h in self.concepts:
            w = 0
            for j, x in enumerate(points):
                w |= ((h >> x) & 1) << j
            out.add(w)
        return out

    def to_strings(self) -> list[str]:
        n = self.domain_size
        return ["".join("1" if (h >> i) & 1 else "0" for i in range(n)) for h in self.concepts]

    @classmethod
    def from_strings(cls, strings: Iterable[str], point_names: Sequence[str] | None = None) -> "ConceptClass":
        strings = list(strings)
        if not strings:
            raise ArgumentError("a concept class needs at least one concept")
        return cls(len(strings[0]), tuple(parse_concept(s, len(strings[0])) for s in strings),
                   tuple(point_names) if point_names is not None else None)


def parse_concept(s: str, n: int, index: int | None = None) -> int:
    where = "" if index is None else f"concept {index}: "
    if len(s) != n:
        raise ParseError(f"{where}expected length {n}, got {len(s)}", position=index)
    w = 0
    for i, ch in enumerate(s):
        if ch == "1":
            w |= 1 << i
        elif ch != "0":
            raise ParseError(f"{where}invalid character {ch!r} at character {i}", position=index)
    return w


def _check_cap(what: str, n: int, cap: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ArgumentError(f"{what} must be a positive integer, got {n!r}")
    if n > cap:
        raise SizeLimitError(f"{what}={n} exceeds the cap {cap}", requested=n, cap=cap)


def make_full(n: int, cap: int = DEFAULT_CAP) -> ConceptClass:
    """All ``2**n`` labelings of ``[0, n)``."""
    _check_cap("n", n, cap)
    return ConceptClass(n, tuple(range(1 << n)))


def make_parity(n: int, cap: int = DEFAULT_CAP) -> ConceptClass:
    """The even-parity labelings of ``[0, n)``."""
    _check_cap("n", n, cap)
    return ConceptClass(n, tuple(w for w in range(1 << n) if w.bit_count() % 2 == 0))


def tree_nodes(depth: int) -> list[str]:
    """Binary strings of length < depth, by length then lexicographically."""
    return [format(v, f"0{k}b") if k else "" for k in range(depth) for v in range(1 << k)]


def tree_point_index(s: str) -> int:
    """Canonical index of node ``s`` in the truncated prefix tree."""
    return (1 << len(s)) - 1 + (int(s, 2) if s else 0)


def branch_concept(alpha: str) -> int:
    """Labels node ``s`` with 1 iff ``s + '0'`` is a prefix of ``alpha``."""
    w = 0
    for i, bit in enumerate(alpha):
        if bit == "0":
            w |= 1 << tree_point_index(alpha[:i])
    return w


def make_prefix_tree(depth: int, cap: int = DEFAULT_CAP) -> ConceptClass:
    """Branch concepts of the binary tree truncated to nodes of length < depth.

    Point names are the node strings, with the root rendered ``"ε"``.
    """
    _check_cap("depth", depth, cap)
    names = tuple(s or "ε" for s in tree_nodes(depth))
    words = tuple(branch_concept(format(a, f"0{depth}b")) for a in range(1 << depth))
    return ConceptClass((1 << depth) - 1, words, names)


def make_random(n: int, count: int, seed: int, cap: int = DEFAULT_CAP) -> ConceptClass:
    """``count`` distinct labelings sampled uniformly without replacement."""
    _check_cap("n", n, cap)
    if not isinstance(count, int) or count < 1:
        raise ArgumentError(f"count must be a positive integer, got {count!r}")
    if count > 1 << n:
        raise PreconditionError(f"cannot draw {count} distinct concepts from 2^{n}={1 << n} labelings")
    rng = random.Random(seed)
    return ConceptClass(n, tuple(rng.sample(range(1 << n), count)))


def _check_points(H: ConceptClass, R: Sequence[int]) -> None:
    for x in R:
        if not 0 <= x < H.domain_size:
            raise ArgumentError(f"point {x} out of range [0, {H.domain_size})")


def is_shattered(H: ConceptClass, R: Sequence[int]) -> bool:
    if len(R) == 0:
        raise ArgumentError("shattered sets are nonempty")
    _check_points(H, R)
    if len(set(R)) != len(R):
        raise ArgumentError(f"point set has repeated points: {tuple(R)}")
    if len(R) > len(H).bit_length() - 1:
        return False
    return len(H.trace(R)) == 1 << len(R)


def shattered_sets(H: ConceptClass, k: int) -> list[PointSet]:
    """All shattered ``k``-subsets of the domain, in lexicographic order."""
    if not 1 <= k <= H.domain_size:
        raise ArgumentError(f"k must lie in [1, {H.domain_size}], got {k}")
    if 1 << k > len(H):
        return []
    return [R for R in combinations(range(H.domain_size), k) if len(H.trace(R)) == 1 << k]


def vc_dimension(H: ConceptClass) -> int:
    """Largest size of a shattered nonempty point set, 0 if there is none.

    Searches increasing sizes and stops at the first size with no shattered
    subset; shattering is closed under taking nonempty subsets.
    """
    d = 0
    for k in range(1, H.domain_size + 1):
        if 1 << k > len(H):
            break
        if any(len(H.trace(R)) == 1 << k for R in combinations(range(H.domain_size), k)):
            d = k
        else:
            break
    return d


def class_to_json(H: ConceptClass) -> dict:
    doc: dict = {"domain_size": H.domain_size}
    if H.point_names is not None:
        doc["point_names"] = list(H.point_names)
    doc["concepts"] = H.to_strings()
    return doc


def class_from_json(doc: dict) -> ConceptClass:
    if not isinstance(doc, dict):
        raise ParseError("class file must hold a JSON object")
    n = doc.get("domain_size")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"domain_size must be a positive integer, got {n!r}")
    raw = doc.get("concepts")
    if not isinstance(raw, list) or not raw:
        raise ParseError("concepts must be a nonempty list of 0/1 strings")
    words = []
    for i, s in enumerate(raw):
        if not isinstance(s, str):
            raise ParseError(f"concept {i}: expected a string", position=i)
        words.append(parse_concept(s, n, i))
    names = doc.get("point_names")
    if names is not None:
        if not isinstance(names, list) or len(names) != n or not all(isinstance(s, str) for s in names):
            raise ParseError(f"point_names must be a list of {n} strings")
        names = tuple(names)
    return ConceptClass(n, tuple(words), names)


def load_class(path: str | Path) -> ConceptClass:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", position=exc.lineno) from exc
    return class_from_json(doc)


def dump_class(H: ConceptClass) -> str:
    return json.dumps(class_to_json(H), indent=1) + "\n"


def save_class(H: ConceptClass, path: str | Path) -> None:
    Path(path).write_text(dump_class(H), encoding="utf-8")
