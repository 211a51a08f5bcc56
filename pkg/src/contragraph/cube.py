"""Boolean hypercube utilities.

A cube word is an ``int`` in ``[0, 2**m)``; coordinate ``i`` is bit ``i``
(bit 0 least significant).  Rendered as a string, a word is its binary
numeral padded to ``m`` digits, so coordinate 0 is the rightmost character.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ArgumentError, InternalError

MAX_M = 24


def check_m(m: int) -> None:
    if not isinstance(m, int) or not 1 <= m <= MAX_M:
        raise ArgumentError(f"cube dimension must lie in [1, {MAX_M}], got {m!r}")


def word_str(w: int, m: int) -> str:
    return format(w, f"0{m}b")


def parse_word(s: str, m: int) -> int:
    if len(s) != m or set(s) - {"0", "1"}:
        raise ArgumentError(f"expected an {m}-bit 0/1 string, got {s!r}")
    return int(s, 2)


@dataclass(frozen=True)
class Subcube:
    """``{σ : σ & fixed == pattern}`` inside ``{0,1}^m``."""

    m: int
    fixed: int
    pattern: int

    def __post_init__(self):
        check_m(self.m)
        full = (1 << self.m) - 1
        if self.fixed & ~full or self.pattern & ~self.fixed:
            raise ArgumentError("pattern must lie inside the fixed coordinates")

    @property
    def codim(self) -> int:
        return self.fixed.bit_count()

    @property
    def size(self) -> int:
        return 1 << (self.m - self.codim)

    def __contains__(self, w: int) -> bool:
        return w & self.fixed == self.pattern

    def members(self) -> list[int]:
        free = ((1 << self.m) - 1) & ~self.fixed
        out = []
        sub = free
        while True:
            out.append(self.pattern | sub)
            if sub == 0:
                break
            sub = (sub - 1) & free
        return sorted(out)

    def to_json(self) -> dict:
        return {"fixed": word_str(self.fixed, self.m), "pattern": word_str(self.pattern, self.m)}

    @classmethod
    def from_json(cls, doc: dict, m: int) -> "Subcube":
        return cls(m, parse_word(doc["fixed"], m), parse_word(doc["pattern"], m))


def span(words: Iterable[int], m: int) -> Subcube:
    """Smallest subcube containing the nonempty collection ``words``."""
    full = (1 << m) - 1
    ones, zeros = full, full
    seen = False
    for w in words:
        ones &= w
        zeros &= ~w
        seen = True
    if not seen:
        raise ArgumentError("span of an empty set is undefined")
    fixed = ones | zeros
    return Subcube(m, fixed, ones)


def is_subcube(A: Iterable[int], m: int) -> Subcube | None:
    """Decompose ``A`` as a subcube, or return ``None`` if it is not one.

    ``A`` always lies in the cube fixed by its agreeing coordinates, so it
    equals that cube exactly when the cardinalities match.
    """
    check_m(m)
    A = set(A)
    full = (1 << m) - 1
    for w in A:
        if not isinstance(w, int) or w < 0 or w > full:
            raise ArgumentError(f"{w!r} is not an {m}-bit cube word")
    if not A:
        return None
    cube = span(A, m)
    return cube if len(A) == cube.size else None


def facet_cover_check(A: Iterable[int], B: Iterable[int], m: int) -> tuple[int, int] | None:
    """For proper subcubes ``A``, ``B``: the facet witness ``(i, b)`` if they cover the cube.

    Returns ``(i, b)`` with ``A = {σ_i = b}`` and ``B = {σ_i = 1 - b}``, or ``None``
    when ``A ∪ B`` is a proper subset.
    """
    A, B = set(A), set(B)
    ca, cb = is_subcube(A, m), is_subcube(B, m)
    if ca is None or cb is None:
        raise ArgumentError("both arguments must be Boolean subcubes")
    if ca.codim == 0 or cb.codim == 0:
        raise ArgumentError("both subcubes must be proper")
    if len(A | B) != 1 << m:
        return None
    if ca.codim != 1 or cb.fixed != ca.fixed or cb.pattern == ca.pattern:
        raise InternalError(f"covering subcubes {ca} and {cb} are not complementary facets")
    i = ca.fixed.bit_length() - 1
    return i, (ca.pattern >> i) & 1


@dataclass(frozen=True)
class CubeAutomorphism:
    """Sends coordinate ``i`` to ``perm[i]``, then XORs ``flip``."""

    perm: tuple[int, ...]
    flip: int = 0

    def __post_init__(self):
        m = len(self.perm)
        if sorted(self.perm) != list(range(m)):
            raise ArgumentError(f"{self.perm} is not a permutation of range({m})")
        if self.flip < 0 or self.flip >> m:
            raise ArgumentError(f"flip mask {self.flip} exceeds {m} bits")

    @property
    def m(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, m: int) -> "CubeAutomorphism":
        return cls(tuple(range(m)), 0)

    @classmethod
    def random(cls, m: int, rng: random.Random) -> "CubeAutomorphism":
        perm = list(range(m))
        rng.shuffle(perm)
        return cls(tuple(perm), rng.getrandbits(m) if m else 0)


def apply_automorphism(g: CubeAutomorphism, w: int) -> int:
    out = 0
    for i, j in enumerate(g.perm):
        out |= ((w >> i) & 1) << j
    return out ^ g.flip


def all_subcubes(m: int) -> list[Subcube]:
    """Every subcube of ``{0,1}^m``, ordered by (fixed, pattern)."""
    check_m(m)
    out = []
    for fixed in range(1 << m):
        sub = fixed
        pats = []
        while True:
            pats.append(sub)
            if sub == 0:
                break
            sub = (sub - 1) & fixed
        out.extend(Subcube(m, fixed, p) for p in sorted(pats))
    return out


def words_of(strings: Sequence[str], m: int) -> set[int]:
    return {parse_word(s, m) for s in strings}
