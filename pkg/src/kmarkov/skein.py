"""Skein resolutions of pairs of fence posets and the counting identity

    |J(P1)| |J(P2)| = |J(P3)| |J(P4)| + |J(P5)| |J(P6)|.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError
from .poset import (
    DOWN,
    EMPTY,
    UP,
    FencePoset,
    enumerated_count,
    ENUMERATION_LIMIT,
    ideal_count,
    induced_interval,
    join,
    poset_to_dict,
    relation,
    reverse_poset,
)


@dataclass(frozen=True)
class CrossingOverlap:
    c: int
    d: int
    c2: int
    d2: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.c, self.d, self.c2, self.d2)


@dataclass(frozen=True)
class Resolution:
    p3: FencePoset
    p4: FencePoset
    p5: FencePoset
    p6: FencePoset
    kind: str = ""
    # chronological names of the input elements behind each output element,
    # "3" for P1(3) and "3'" for P2(3)
    sources: tuple[tuple[str, ...], ...] = ((), (), (), ())

    def parts(self) -> tuple[FencePoset, FencePoset, FencePoset, FencePoset]:
        return (self.p3, self.p4, self.p5, self.p6)

    def to_dict(self) -> dict:
        out: dict = {"type": self.kind}
        for j, (p, src) in enumerate(zip(self.parts(), self.sources), start=3):
            out[f"P{j}"] = {**poset_to_dict(p), "elements": list(src)}
        return out


@dataclass(frozen=True)
class _Part:
    """A poset together with the names of its elements."""

    poset: FencePoset
    ids: tuple[str, ...]

    @classmethod
    def of(cls, p: FencePoset, prime: str = "") -> "_Part":
        return cls(p, tuple(f"{i}{prime}" for i in range(1, p.size + 1)))

    @property
    def size(self) -> int:
        return self.poset.size

    def interval(self, a: int, b: int) -> "_Part":
        return _Part(induced_interval(self.poset, a, b), self.ids[a - 1 : b] if a <= b else ())

    def reversed(self) -> "_Part":
        return _Part(reverse_poset(self.poset), self.ids[::-1])

    def join(self, direction: str, other: "_Part") -> "_Part":
        return _Part(join(self.poset, direction, other.poset), self.ids + other.ids)


def _resolution(kind: str, *parts: _Part) -> Resolution:
    return Resolution(*(q.poset for q in parts), kind=kind, sources=tuple(q.ids for q in parts))


# overlaps -----------------------------------------------------------------

def _on_top(p: FencePoset, c: int, d: int) -> bool:
    # nothing outside may sit above something inside
    left_ok = c == 1 or p.directions[c - 2] == UP
    right_ok = d == p.size or p.directions[d - 1] == DOWN
    return left_ok and right_ok


def _on_bottom(p: FencePoset, c: int, d: int) -> bool:
    left_ok = c == 1 or p.directions[c - 2] == DOWN
    right_ok = d == p.size or p.directions[d - 1] == UP
    return left_ok and right_ok


def is_crossing_overlap(p1: FencePoset, p2: FencePoset, ov: CrossingOverlap) -> bool:
    c, d, c2, d2 = ov.as_tuple()
    h1, h2 = p1.size, p2.size
    if not (1 <= c <= d <= h1 and 1 <= c2 <= d2 <= h2) or d - c != d2 - c2:
        return False
    if p1.directions[c - 1 : d - 1] != p2.directions[c2 - 1 : d2 - 1]:
        return False
    if c == 1 and c2 == 1:
        return False
    if d == h1 and d2 == h2:
        return False
    return _on_top(p1, c, d) and _on_bottom(p2, c2, d2)


def find_crossing_overlaps(p1: FencePoset, p2: FencePoset) -> list[CrossingOverlap]:
    out = []
    h1, h2 = p1.size, p2.size
    for c in range(1, h1 + 1):
        for d in range(c, h1 + 1):
            if not _on_top(p1, c, d):
                continue
            n = d - c
            for c2 in range(1, h2 - n + 1):
                ov = CrossingOverlap(c, d, c2, c2 + n)
                if is_crossing_overlap(p1, p2, ov):
                    out.append(ov)
    return out


# type 0 -------------------------------------------------------------------

def _type0_p5(q1: _Part, q2: _Part, c: int, c2: int) -> _Part:
    if c > 1 and c2 > 1:
        # P1(1..c-1), then P2(c'-1) down to P2(1), with P1(c-1) > P2(c'-1)
        return q1.interval(1, c - 1).join(DOWN, q2.interval(1, c2 - 1).reversed())
    if c == 1:
        v = next((j for j in range(c2 - 2, 0, -1) if relation(q2.poset, j, c2 - 1) != "<"), 0)
        return q2.interval(1, v)
    u = next((j for j in range(c - 2, 0, -1) if relation(q1.poset, j, c - 1) != ">"), 0)
    return q1.interval(1, u)


def resolve_type0(p1: FencePoset, p2: FencePoset, ov: CrossingOverlap) -> Resolution:
    if not is_crossing_overlap(p1, p2, ov):
        raise UsageError(f"{ov.as_tuple()} is not a crossing overlap of the given posets")
    c, d, c2, d2 = ov.as_tuple()
    h1, h2 = p1.size, p2.size
    q1, q2 = _Part.of(p1), _Part.of(p2, "'")
    p3 = q1.interval(1, d).join(UP, q2.interval(d2 + 1, h2))
    p4 = q2.interval(1, d2).join(DOWN, q1.interval(d + 1, h1))
    p5 = _type0_p5(q1, q2, c, c2)
    # the right-hand cases are the left-hand ones seen through reversed labelings
    p6 = _type0_p5(q1.reversed(), q2.reversed(), h1 + 1 - d, h2 + 1 - d2).reversed()
    return _resolution("0", p3, p4, p5, p6)


# type 1 -------------------------------------------------------------------

def resolve_type1(p1: FencePoset, p2: FencePoset, i: int) -> Resolution:
    h2 = p2.size
    if not 1 <= i < h2:
        raise UsageError(f"index {i} must satisfy 1 <= i < {h2}")
    if p1.size == 0:
        raise UsageError("type 1 resolution needs a non-empty first poset")
    q1, q2 = _Part.of(p1), _Part.of(p2, "'")
    if p2.directions[i - 1] == UP:
        # relabel from the other end so that P2(i) > P2(i+1)
        q2, i = q2.reversed(), h2 - i
    p2 = q2.poset
    p3 = q2.interval(1, i).join(UP, q1)
    v = next((j for j in range(i + 1, h2 + 1) if relation(p2, i, j) != ">"), h2 + 1)
    p4 = q2.interval(v, h2)
    p5 = q2.interval(i + 1, h2).reversed().join(DOWN, q1)
    u = next((j for j in range(i - 1, 0, -1) if relation(p2, i, j) != "<"), 0)
    p6 = q2.interval(1, u)
    return _resolution("1", p3, p4, p5, p6)


# type 2 -------------------------------------------------------------------

def resolve_type2(p1: FencePoset, p2: FencePoset) -> Resolution:
    if p1.size == 0 or p2.size == 0:
        raise UsageError("type 2 resolution needs two non-empty posets")
    h1, h2 = p1.size, p2.size
    q1, q2 = _Part.of(p1), _Part.of(p2, "'")
    p3 = q2.reversed().join(UP, q1)
    # when every element lies below P1(1) nothing is left over
    v = next((j for j in range(1, h1 + 1) if relation(p1, 1, j) not in (">", "=")), h1 + 1)
    u = next((j for j in range(1, h2 + 1) if relation(p2, 1, j) not in ("<", "=")), h2 + 1)
    return _resolution("2", p3, _Part(EMPTY, ()), q1.interval(v, h1), q2.interval(u, h2))


# verification ---------------------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    counts: tuple[int, int, int, int, int, int]
    mode: str

    @property
    def lhs(self) -> int:
        c = self.counts
        return c[0] * c[1]

    @property
    def rhs(self) -> int:
        c = self.counts
        return c[2] * c[3] + c[4] * c[5]

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "counts": {f"P{j + 1}": str(n) for j, n in enumerate(self.counts)},
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "equal": self.equal,
        }


def verify_resolution_identity(p1: FencePoset, p2: FencePoset, res: Resolution, mode: str = "dp") -> IdentityCheck:
    """Check the product identity; mode "enumerate" uses the subset-filter oracle."""
    posets = (p1, p2) + res.parts()
    if mode == "dp":
        counter = ideal_count
    elif mode == "enumerate":
        if max(p.size for p in posets) > ENUMERATION_LIMIT:
            raise UsageError("posets too large for the enumeration mode")
        counter = enumerated_count
    else:
        raise UsageError(f"unknown mode {mode!r}")
    return IdentityCheck(tuple(counter(p) for p in posets), mode)
