"""Finite set systems over the ground set {1, ..., n}.

Members are stored as int bitmasks: element ``i`` is bit ``i - 1``.  Size
of an intersection is ``(a & b).bit_count()``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Iterator, Sequence

__all__ = [
    "FamilyError",
    "ParseError",
    "RangeError",
    "ValidityError",
    "LSet",
    "KSet",
    "SetFamily",
    "IntersectionProfile",
    "to_mask",
    "to_set",
    "popcount",
    "is_l_intersecting",
    "is_hwise_l_intersecting",
    "sizes_in",
    "common_intersection",
    "intersection_profile",
    "parse_family",
    "serialize_family",
    "read_family",
    "write_family",
    "parse_int_list",
]


class FamilyError(ValueError):
    """Base class for malformed families and parameter sets."""


class ParseError(FamilyError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RangeError(ParseError):
    pass


class ValidityError(ParseError):
    pass


def popcount(x: int) -> int:
    return x.bit_count()


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 1:
            raise RangeError(f"element {e} is not a positive integer")
        mask |= 1 << (e - 1)
    return mask


def to_set(mask: int) -> frozenset[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def _check_increasing(values: Sequence[int], lowest: int, what: str) -> tuple[int, ...]:
    values = tuple(int(v) for v in values)
    for a, b in zip(values, values[1:]):
        if b <= a:
            raise FamilyError(f"{what} must be strictly increasing, got {list(values)}")
    if values and values[0] < lowest:
        raise FamilyError(f"{what} entries must be >= {lowest}, got {list(values)}")
    return values


@dataclass(frozen=True)
class LSet:
    """Permitted intersection sizes l_1 < ... < l_s."""

    values: tuple[int, ...]

    def __init__(self, values: Iterable[int]):
        object.__setattr__(self, "values", _check_increasing(list(values), 0, "L"))
        if not self.values:
            raise FamilyError("L must be nonempty")

    @property
    def s(self) -> int:
        return len(self.values)

    @property
    def l1(self) -> int:
        return self.values[0]

    def __contains__(self, x: object) -> bool:
        return x in self.values

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def mask(self) -> int:
        """Bit j set iff j is a permitted size."""
        return to_mask(v + 1 for v in self.values)

    def __str__(self) -> str:
        return ",".join(map(str, self.values))


@dataclass(frozen=True)
class KSet:
    """Permitted member sizes k_1 < ... < k_r (all positive)."""

    values: tuple[int, ...]

    def __init__(self, values: Iterable[int]):
        object.__setattr__(self, "values", _check_increasing(list(values), 1, "K"))
        if not self.values:
            raise FamilyError("K must be nonempty")

    @property
    def r(self) -> int:
        return len(self.values)

    def __contains__(self, x: object) -> bool:
        return x in self.values

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __str__(self) -> str:
        return ",".join(map(str, self.values))


@dataclass(frozen=True)
class SetFamily:
    """An ordered list of distinct subsets of [n].

    ``allow_repeats`` lifts the distinctness check, for companion lists
    such as the C side of a partition.

    >>> fam = SetFamily.from_sets(4, [{1, 2}, {3}])
    >>> fam.sets()
    [frozenset({1, 2}), frozenset({3})]
    """

    n: int
    members: tuple[int, ...]
    allow_repeats: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise FamilyError(f"ground set size must be >= 1, got {self.n}")
        full = (1 << self.n) - 1
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        seen = set()
        for idx, m in enumerate(members):
            if m < 0 or m & ~full:
                raise RangeError(f"member {idx} has elements outside 1..{self.n}")
            if m in seen and not self.allow_repeats:
                raise ValidityError(f"duplicate member {sorted(to_set(m))}")
            seen.add(m)

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        masks = []
        for s in sets:
            s = list(s)
            bad = [e for e in s if not 1 <= e <= n]
            if bad:
                raise RangeError(f"element {bad[0]} outside 1..{n}")
            masks.append(to_mask(s))
        return cls(n, tuple(masks))

    @property
    def m(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __getitem__(self, i: int) -> int:
        return self.members[i]

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def sets(self) -> list[frozenset[int]]:
        return [to_set(m) for m in self.members]

    def sizes(self) -> list[int]:
        return [m.bit_count() for m in self.members]

    def max_size(self) -> int:
        return max(self.sizes(), default=0)

    def subfamily(self, indices: Iterable[int]) -> "SetFamily":
        return SetFamily(self.n, tuple(self.members[i] for i in indices), self.allow_repeats)

    def reordered(self, perm: Sequence[int]) -> "SetFamily":
        if sorted(perm) != list(range(self.m)):
            raise FamilyError("reorder must be a permutation of member indices")
        return self.subfamily(perm)


def _as_lset(L) -> LSet:
    return L if isinstance(L, LSet) else LSet(L)


@dataclass(frozen=True)
class IntersectionProfile:
    pair_sizes: tuple[int, ...]
    hwise: dict

    def hwise_sizes(self, h: int) -> tuple[int, ...]:
        return self.hwise[h]


def intersection_profile(fam: SetFamily, hs: Iterable[int] = (2,)) -> IntersectionProfile:
    """Multisets (sorted tuples) of intersection sizes over all h-subsets."""
    hwise = {}
    for h in hs:
        hwise[h] = tuple(sorted(
            reduce(int.__and__, combo).bit_count()
            for combo in itertools.combinations(fam.members, h)
        ))
    pairs = hwise.get(2)
    if pairs is None:
        pairs = tuple(sorted(
            (a & b).bit_count() for a, b in itertools.combinations(fam.members, 2)
        ))
    return IntersectionProfile(pairs, hwise)


def is_l_intersecting(fam: SetFamily, L) -> bool:
    """True iff every pairwise intersection size lies in L.

    Families with fewer than two members are rejected: the predicate is
    not meaningful there and callers must handle that case themselves.
    """
    if fam.m < 2:
        raise FamilyError("is_l_intersecting needs at least 2 members")
    allowed = _as_lset(L).mask()
    ms = fam.members
    for i, a in enumerate(ms):
        for b in ms[i + 1:]:
            if not (allowed >> (a & b).bit_count()) & 1:
                return False
    return True


def is_hwise_l_intersecting(fam: SetFamily, L, h: int) -> bool:
    if h < 2:
        raise FamilyError(f"h must be >= 2, got {h}")
    if fam.m < h:
        raise FamilyError(f"is_hwise_l_intersecting needs at least h={h} members, got {fam.m}")
    if h == 2:
        return is_l_intersecting(fam, L)
    allowed = _as_lset(L).mask()
    ms = fam.members

    # depth-first over increasing index tuples, pruning nothing: every
    # h-subset is visited once
    def rec(start: int, depth: int, acc: int) -> bool:
        if depth == h:
            return bool((allowed >> acc.bit_count()) & 1)
        for j in range(start, len(ms) - (h - depth) + 1):
            if not rec(j + 1, depth + 1, acc & ms[j]):
                return False
        return True

    return rec(0, 0, fam.full_mask)


def sizes_in(fam: SetFamily, K) -> bool:
    values = set(K)
    return all(m.bit_count() in values for m in fam.members)


def common_intersection_mask(fam: SetFamily) -> int:
    if fam.m == 0:
        raise FamilyError("common intersection of an empty family is undefined")
    return reduce(int.__and__, fam.members, fam.full_mask)


def common_intersection(fam: SetFamily) -> frozenset[int]:
    return to_set(common_intersection_mask(fam))


# --- text format -----------------------------------------------------------

_HEADER = re.compile(r"^n\s*=\s*(\d+)$")
_MEMBER = re.compile(r"^\{\s*(\d+(?:\s*,\s*\d+)*)?\s*\}$")


def parse_family(text: str) -> SetFamily:
    """Parse the family file format.

    Line 1 (first nonblank, noncomment line) is ``n=<int>``; every further
    nonblank line is ``{a,b,c}`` with strictly ascending elements or ``{}``.
    ``#`` starts a comment.
    """
    n = None
    masks: list[int] = []
    seen: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _HEADER.match(line)
            if not m:
                raise ParseError(f"expected header 'n=<int>', got {line!r}", lineno)
            n = int(m.group(1))
            if n < 1:
                raise ParseError("n must be >= 1", lineno)
            continue
        m = _MEMBER.match(line)
        if not m:
            raise ParseError(f"malformed member {line!r}", lineno)
        elems = [int(t) for t in m.group(1).split(",")] if m.group(1) else []
        if any(b <= a for a, b in zip(elems, elems[1:])):
            raise ParseError(f"elements must be strictly ascending in {line!r}", lineno)
        for e in elems:
            if not 1 <= e <= n:
                raise RangeError(f"element {e} outside 1..{n}", lineno)
        mask = to_mask(elems)
        if mask in seen:
            raise ValidityError(f"duplicate member {line!r} (first on line {seen[mask]})", lineno)
        seen[mask] = lineno
        masks.append(mask)
    if n is None:
        raise ParseError("missing header 'n=<int>'")
    return SetFamily(n, tuple(masks))


def serialize_family(fam: SetFamily) -> str:
    lines = [f"n={fam.n}"]
    for m in fam.members:
        lines.append("{" + ",".join(map(str, sorted(to_set(m)))) + "}")
    return "\n".join(lines) + "\n"


def read_family(path) -> SetFamily:
    with open(path, encoding="utf-8") as fh:
        return parse_family(fh.read())


def write_family(fam: SetFamily, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_family(fam))


def parse_int_list(text: str, what: str = "list") -> tuple[int, ...]:
    """Comma-separated ascending integers; duplicates or descents are errors."""
    try:
        values = tuple(int(t) for t in text.split(",") if t.strip() != "")
    except ValueError:
        raise FamilyError(f"{what}: not a comma-separated integer list: {text!r}") from None
    if not values:
        raise FamilyError(f"{what}: empty list")
    for a, b in zip(values, values[1:]):
        if b <= a:
            raise FamilyError(f"{what}: values must be strictly ascending, got {text!r}")
    return values
