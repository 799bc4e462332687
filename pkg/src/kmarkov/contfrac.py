"""Finite continued fractions over the integers.

Everything goes through the 2x2 matrix product of [[a, 1], [1, 0]] factors,
which is well defined for any integer entries (zero and negative included).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import UsageError

Matrix = tuple[int, int, int, int]  # (p, r, q, s) read as [[p, r], [q, s]]

IDENTITY: Matrix = (1, 0, 0, 1)


def _as_ints(seq: Iterable[int]) -> list[int]:
    out = []
    for a in seq:
        if isinstance(a, bool) or not isinstance(a, int):
            raise UsageError(f"continued fraction entries must be integers, got {a!r}")
        out.append(a)
    return out


def cf_matrix(seq: Iterable[int]) -> Matrix:
    """Left-to-right product of [[a,1],[1,0]]; returns (p, r, q, s)."""
    p, r, q, s = IDENTITY
    for a in _as_ints(seq):
        # [[p, r], [q, s]] @ [[a, 1], [1, 0]]
        p, r, q, s = p * a + r, p, q * a + s, q
    return p, r, q, s


@dataclass(frozen=True)
class CFValue:
    """p/q as read off the first column of the matrix product.

    Kept unreduced on purpose; for admissible input gcd(p, q) == 1 anyway.
    """

    p: int
    q: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def cf_eval(seq: Sequence[int]) -> CFValue:
    if len(seq) == 0:
        raise UsageError("cf_eval needs a non-empty sequence")
    p, _, q, _ = cf_matrix(seq)
    return CFValue(p, q)


def cf_numerator(seq: Sequence[int]) -> int:
    """Top-left entry of the matrix product. The empty sequence gives 1."""
    return cf_matrix(seq)[0]


def is_admissible(seq: Sequence[int]) -> bool:
    """True for sequences usable as a shape: positive entries, last one >= 2."""
    return len(seq) > 0 and all(a >= 1 for a in seq) and seq[-1] >= 2


@dataclass(frozen=True)
class SkeinCheck:
    variant: str
    lhs: int
    rhs: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    def to_dict(self) -> dict:
        return {"variant": self.variant, "lhs": str(self.lhs), "rhs": str(self.rhs), "equal": self.equal}


def cf_skein_check(mu1: Sequence[int], a: int, c: int, b: int, mu2: Sequence[int], variant: str = "merge") -> SkeinCheck:
    """Evaluate both sides of one of the two numerator identities.

    merge: N[mu1,a,c,b,mu2]   = N[mu1,a+c+b,mu2] + c*N[mu1,a-1,1,b-1,mu2]
    split: N[mu1,a,c+1,b,mu2] = N[mu1,a,1,b+c,mu2] + c*N[mu1,a-1,1,b-2,mu2]
    """
    m1, m2 = _as_ints(mu1), _as_ints(mu2)
    N = cf_numerator
    if variant == "merge":
        lhs = N(m1 + [a, c, b] + m2)
        rhs = N(m1 + [a + c + b] + m2) + c * N(m1 + [a - 1, 1, b - 1] + m2)
    elif variant == "split":
        lhs = N(m1 + [a, c + 1, b] + m2)
        rhs = N(m1 + [a, 1, b + c] + m2) + c * N(m1 + [a - 1, 1, b - 2] + m2)
    else:
        raise UsageError(f"unknown skein variant {variant!r} (expected merge or split)")
    return SkeinCheck(variant, lhs, rhs)


def parse_cf(text: str) -> list[int]:
    """'3,2,2' -> [3, 2, 2]. Empty text is the empty sequence."""
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc
