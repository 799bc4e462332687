"""Fence posets: labeled, weighted posets whose Hasse diagram is a path.

Elements are numbered 1..h along the path (the chronological labeling).
``directions[i-1]`` is "U" when P(i) < P(i+1) and "D" when P(i) > P(i+1).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .errors import UsageError

UP, DOWN = "U", "D"
LABELS = ("x", "y", "z")
ENUMERATION_LIMIT = 30


def _flip(d: str) -> str:
    return DOWN if d == UP else UP


def _frac(w) -> Fraction:
    if isinstance(w, Fraction):
        return w
    if isinstance(w, (int, str)) and not isinstance(w, bool):
        try:
            return Fraction(w)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad weight {w!r}") from exc
    raise UsageError(f"weights must be exact (int, str or Fraction), got {w!r}")


@dataclass(frozen=True)
class FencePoset:
    size: int
    directions: tuple[str, ...] = ()
    labels: tuple[str, ...] | None = None
    weights: tuple[Fraction, ...] = field(default=())
    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        h = self.size
        if not isinstance(h, int) or h < 0:
            raise UsageError(f"poset size must be a non-negative integer, got {h!r}")
        dirs = tuple(self.directions)
        if len(dirs) != max(h - 1, 0):
            raise UsageError(f"a poset of size {h} needs {max(h - 1, 0)} directions, got {len(dirs)}")
        if any(d not in (UP, DOWN) for d in dirs):
            raise UsageError(f"directions must be 'U' or 'D': {dirs!r}")
        object.__setattr__(self, "directions", dirs)

        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != h or any(l not in LABELS for l in labels):
                raise UsageError(f"labels must be {h} entries from x/y/z: {labels!r}")
            object.__setattr__(self, "labels", labels)

        weights = tuple(_frac(w) for w in self.weights) if self.weights else (Fraction(1),) * h
        if len(weights) != h or any(w <= 0 for w in weights):
            raise UsageError(f"weights must be {h} positive rationals")
        object.__setattr__(self, "weights", weights)

        pairs = tuple(sorted((int(a), int(b)) for a, b in self.pairs))
        used: set[int] = set()
        for a, b in pairs:
            if b != a + 1 or a < 1 or b > h or a in used or b in used:
                raise UsageError(f"bad pair {(a, b)} for poset of size {h}")
            used.update((a, b))
        object.__setattr__(self, "pairs", pairs)

    # convenience -----------------------------------------------------------
    def __len__(self) -> int:
        return self.size

    @property
    def h(self) -> int:
        return self.size

    @property
    def is_weighted(self) -> bool:
        return any(w != 1 for w in self.weights)

    def word(self) -> str:
        return "".join(self.directions)

    def label(self, i: int) -> str | None:
        return None if self.labels is None else self.labels[i - 1]

    def plain(self) -> "FencePoset":
        """The bare order, with every label, weight and pairing dropped."""
        return FencePoset(self.size, self.directions)

    def same_order(self, other: "FencePoset") -> bool:
        return self.size == other.size and self.directions == other.directions


def fence(directions: str | Iterable[str], labels=None, weights=None, pairs=()) -> FencePoset:
    """Build a non-empty fence from a direction string such as "UUDDU"."""
    dirs = tuple(directions)
    return FencePoset(len(dirs) + 1, dirs, labels, tuple(weights) if weights else (), tuple(pairs))


EMPTY = FencePoset(0)


# shapes -------------------------------------------------------------------

def validate_shape(shape: Sequence[int]) -> list[int]:
    s = list(shape)
    if not s:
        raise UsageError("a shape must be non-empty")
    if any(isinstance(a, bool) or not isinstance(a, int) or a < 1 for a in s):
        raise UsageError(f"shape entries must be positive integers: {s}")
    if s[-1] < 2:
        raise UsageError(f"the last shape entry must be at least 2: {s}")
    return s


def poset_from_shape(shape: Sequence[int]) -> FencePoset:
    s = validate_shape(shape)
    if len(s) == 1:
        return fence(UP * (s[0] - 2))
    runs = [s[0] - 1] + s[1:-1] + [s[-1] - 1]
    dirs = "".join((UP if j % 2 == 0 else DOWN) * n for j, n in enumerate(runs))
    return fence(dirs)


def _runs(dirs: Sequence[str]) -> list[tuple[str, int]]:
    return [(d, len(list(g))) for d, g in itertools.groupby(dirs)]


def shape_of(p: FencePoset) -> list[int]:
    if p.size == 0:
        raise UsageError("the empty poset has no shape")
    runs = [n for _, n in _runs(p.directions)]
    if p.directions and p.directions[0] == DOWN:
        runs = [0] + runs
    if len(runs) <= 1:
        return [p.size + 1]
    return [runs[0] + 1] + runs[1:-1] + [runs[-1] + 1]


# basic operations -----------------------------------------------------------

def reverse_poset(p: FencePoset) -> FencePoset:
    h = p.size
    return FencePoset(
        h,
        tuple(_flip(d) for d in reversed(p.directions)),
        None if p.labels is None else tuple(reversed(p.labels)),
        tuple(reversed(p.weights)),
        tuple((h - b + 1, h - a + 1) for a, b in p.pairs),
    )


def dual_poset(p: FencePoset) -> FencePoset:
    """Order dual: every relation flipped, labeling kept."""
    return FencePoset(p.size, tuple(_flip(d) for d in p.directions), p.labels, p.weights, p.pairs)


def induced_interval(p: FencePoset, a: int, b: int) -> FencePoset:
    """P[a, b] (1-based, inclusive); empty when a > b."""
    if a > b:
        if a < 1 or b > p.size or a > p.size + 1 or b < 0:
            raise UsageError(f"interval [{a},{b}] out of range for size {p.size}")
        return EMPTY
    if a < 1 or b > p.size:
        raise UsageError(f"interval [{a},{b}] out of range for size {p.size}")
    return FencePoset(
        b - a + 1,
        p.directions[a - 1 : b - 1],
        None if p.labels is None else p.labels[a - 1 : b],
        p.weights[a - 1 : b],
        tuple((i - a + 1, j - a + 1) for i, j in p.pairs if i >= a and j <= b),
    )


def join(p: FencePoset, direction: str, q: FencePoset) -> FencePoset:
    """p followed by q; ``direction`` "U" puts last(p) below first(q), "D" above.

    If either side is empty there is nothing to join and the other is returned.
    """
    if p.size == 0:
        return q
    if q.size == 0:
        return p
    if direction not in (UP, DOWN):
        raise UsageError(f"bad joining direction {direction!r}")
    labels = None
    if p.labels is not None and q.labels is not None:
        labels = p.labels + q.labels
    return FencePoset(
        p.size + q.size,
        p.directions + (direction,) + q.directions,
        labels,
        p.weights + q.weights,
        p.pairs + tuple((a + p.size, b + p.size) for a, b in q.pairs),
    )


def relation(p: FencePoset, i: int, j: int) -> str | None:
    """'<', '>', '=' or None (incomparable) for P(i) versus P(j)."""
    if i == j:
        return "="
    lo, hi = min(i, j), max(i, j)
    seg = set(p.directions[lo - 1 : hi - 1])
    if len(seg) != 1:
        return None
    d = seg.pop()
    # along the path from lo to hi every step goes the same way
    lo_smaller = d == UP
    if i == lo:
        return "<" if lo_smaller else ">"
    return ">" if lo_smaller else "<"


# counting -----------------------------------------------------------------

def _ideal_dp(dirs: Sequence[str], weights: Sequence) -> tuple:
    """Sum over ideals of the product of member weights.

    Tracks (ideals containing the current element, ideals avoiding it).
    """
    if not weights:
        return 1
    w_in, w_out = weights[0], 1
    for d, w in zip(dirs, weights[1:]):
        if d == UP:
            # new element may join only if its predecessor is in
            w_in, w_out = w_in * w, w_in + w_out
        else:
            # predecessor may be in only if the new element is in
            w_in, w_out = (w_in + w_out) * w, w_out
    return w_in + w_out


def ideal_count(p: FencePoset) -> int:
    return _ideal_dp(p.directions, [1] * p.size)


def weighted_ideal_sum(p: FencePoset) -> Fraction:
    return Fraction(_ideal_dp(p.directions, p.weights))


# enumeration oracle -----------------------------------------------------------

_CHUNK_BITS = 20


@lru_cache(maxsize=32)
def _bit_tables(h: int):
    masks = np.arange(1 << h, dtype=np.int64)
    bits = [((masks >> i) & 1).astype(bool) for i in range(h)]
    # a U step at i forbids (i+1 in, i out); a D step forbids (i in, i+1 out)
    bad_up = [bits[i + 1] & ~bits[i] for i in range(h - 1)]
    bad_down = [bits[i] & ~bits[i + 1] for i in range(h - 1)]
    return masks, bad_up, bad_down


def _ideal_masks(p: FencePoset):
    """Yield arrays of bitmasks (bit i-1 set <=> element i in the ideal)."""
    h = p.size
    if h > ENUMERATION_LIMIT:
        raise UsageError(
            f"refusing to enumerate 2^{h} subsets (limit h <= {ENUMERATION_LIMIT}); use ideal_count instead"
        )
    if h <= _CHUNK_BITS:
        masks, bad_up, bad_down = _bit_tables(h)
        ok = np.ones(masks.shape, dtype=bool)
        for i, d in enumerate(p.directions):
            ok &= ~(bad_up[i] if d == UP else bad_down[i])
        yield masks[ok]
        return
    step = 1 << _CHUNK_BITS
    for start in range(0, 1 << h, step):
        masks = np.arange(start, start + step, dtype=np.int64)
        ok = np.ones(masks.shape, dtype=bool)
        for i, d in enumerate(p.directions):
            a = ((masks >> i) & 1).astype(bool)
            b = ((masks >> (i + 1)) & 1).astype(bool)
            ok &= ~((b & ~a) if d == UP else (a & ~b))
        yield masks[ok]


def _members(mask: int, h: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(h) if mask >> i & 1)


def ideals_enumerate(p: FencePoset) -> list[frozenset[int]]:
    """Every order ideal, found by filtering all 2^h subsets.

    Ordered lexicographically by the sorted tuple of members.
    """
    h = p.size
    found = [_members(int(m), h) for arr in _ideal_masks(p) for m in arr]
    found.sort()
    return [frozenset(t) for t in found]


def enumerated_count(p: FencePoset) -> int:
    return sum(int(arr.size) for arr in _ideal_masks(p))


def enumerated_weighted_sum(p: FencePoset) -> Fraction:
    h = p.size
    nums = [w.numerator for w in p.weights]
    dens = [w.denominator for w in p.weights]
    total = Fraction(0)
    for arr in _ideal_masks(p):
        for m in arr.tolist():
            idx = [i for i in range(h) if m >> i & 1]
            total += Fraction(prod(nums[i] for i in idx), prod(dens[i] for i in idx))
    return total


def is_order_ideal(p: FencePoset, members: Iterable[int]) -> bool:
    s = set(members)
    for i, d in enumerate(p.directions, start=1):
        lo, hi = (i, i + 1) if d == UP else (i + 1, i)
        if hi in s and lo not in s:
            return False
    return True


# balanced posets and extension ---------------------------------------------

def balanced_pairs(p: FencePoset) -> list[tuple[int, int]] | None:
    """Pairs carrying non-unit weights, or None if p is not balanced.

    Recorded pairs are used as given; remaining non-unit weights are paired
    greedily from the left, the way the extension algorithm scans.
    """
    w = p.weights
    recorded = set(p.pairs)
    in_recorded = {i for pr in recorded for i in pr}
    pairs = []
    i = 1
    while i <= p.size:
        if (i, i + 1) in recorded or (w[i - 1] != 1 and i not in in_recorded):
            if i + 1 > p.size or w[i - 1] * w[i] != 1:
                return None
            if (i, i + 1) not in recorded and i + 1 in in_recorded:
                return None
            lower = i if p.directions[i - 1] == UP else i + 1
            if w[lower - 1].denominator != 1:
                return None
            pairs.append((i, i + 1))
            i += 2
        elif w[i - 1] != 1:
            return None
        else:
            i += 1
    return pairs


def is_balanced(p: FencePoset) -> bool:
    return balanced_pairs(p) is not None


def extend_poset(p: FencePoset, k: int) -> FencePoset:
    """Replace each balanced pair by a (k+1)-chain of unit-weight elements."""
    if k < 0:
        raise UsageError("k must be non-negative")
    pairs = balanced_pairs(p)
    if pairs is None:
        raise UsageError("extend_poset needs a balanced poset")
    allowed = {Fraction(1), Fraction(k), Fraction(1, k) if k else Fraction(1)}
    if any(w not in allowed for w in p.weights):
        raise UsageError(f"weights must lie in {{1, {k}, 1/{k}}}")
    if k == 0 or not pairs:
        return p
    starts = {a for a, _ in pairs}
    dirs: list[str] = []
    labels: list[str] = []
    i = 1
    while i <= p.size:
        if i in starts:
            d = p.directions[i - 1]
            block, nxt = k + 1, i + 2
            lab = p.label(i)
        else:
            d, block, nxt = None, 1, i + 1
            lab = p.label(i)
        if dirs or labels:
            dirs.append(p.directions[i - 2])
        dirs.extend([d] * (block - 1))
        labels.extend([lab] * block)
        i = nxt
    return FencePoset(len(labels), tuple(dirs), None if p.labels is None else tuple(labels))


# serialization ----------------------------------------------------------------

def poset_to_dict(p: FencePoset) -> dict:
    out: dict = {"size": p.size, "directions": list(p.directions)}
    if p.labels is not None:
        out["labels"] = list(p.labels)
    if p.is_weighted:
        out["weights"] = [str(w) for w in p.weights]
    if p.pairs:
        out["pairs"] = [list(pr) for pr in p.pairs]
    return out


def poset_from_dict(data: dict) -> FencePoset:
    if not isinstance(data, dict) or "directions" not in data:
        raise UsageError("poset JSON needs a 'directions' list")
    dirs = data["directions"]
    if isinstance(dirs, str):
        dirs = list(dirs)
    try:
        size = int(data.get("size", len(dirs) + 1))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad poset size {data.get('size')!r}") from exc
    weights = data.get("weights") or ()
    return FencePoset(
        size,
        tuple(dirs),
        data.get("labels"),
        tuple(_frac(w) for w in weights),
        tuple(tuple(pr) for pr in data.get("pairs", ())),
    )


# near-palindromic shapes ----------------------------------------------------

def is_near_palindrome(shape: Sequence[int], k: int) -> bool:
    """Even length, mirror symmetric except the two middle entries, which differ by k."""
    n = len(shape)
    if n == 0 or n % 2:
        return False
    half = n // 2
    mirrored = all(shape[i] == shape[n - 1 - i] for i in range(half - 1))
    return mirrored and abs(shape[half - 1] - shape[half]) == k


def near_palindromic_orientations(p: FencePoset, k: int) -> dict[str, bool]:
    """Near-palindrome test for both labelings of p and of its order dual."""
    if p.size == 0:
        return {name: False for name in ("forward", "reversed", "dual", "dual_reversed")}
    views = {
        "forward": p,
        "reversed": reverse_poset(p),
        "dual": dual_poset(p),
        "dual_reversed": dual_poset(reverse_poset(p)),
    }
    return {name: is_near_palindrome(shape_of(v), k) for name, v in views.items()}
