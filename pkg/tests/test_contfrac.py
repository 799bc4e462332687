from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from kmarkov.contfrac import (
    CFValue,
    cf_eval,
    cf_matrix,
    cf_numerator,
    cf_skein_check,
    is_admissible,
    parse_cf,
)
from kmarkov.errors import UsageError


def recursive_value(seq):
    """Independent oracle: a1 + 1/(a2 + 1/(...)) evaluated with Fractions."""
    acc = Fraction(seq[-1])
    for a in reversed(seq[:-1]):
        acc = a + 1 / acc
    return acc


def numerator_recurrence(seq):
    # continuant K(a1..an) via the three-term recurrence
    prev, cur = 0, 1
    for a in seq:
        prev, cur = cur, a * cur + prev
    return cur


admissible = st.lists(st.integers(1, 40), min_size=1, max_size=12)


@pytest.mark.parametrize(
    "seq, expected",
    [([3, 2, 2], 17), ([2, 1, 2], 8), ([1, 1, 1, 1, 3, 2, 2], 100), ([2, 2, 2], 12), ([3], 3)],
)
def test_golden_numerators(seq, expected):
    assert cf_numerator(seq) == expected


def test_eval_examples():
    assert cf_eval([3, 2, 2]) == CFValue(17, 5)
    assert str(cf_eval([3, 2, 2])) == "17/5"
    assert cf_eval([5]).as_fraction() == Fraction(5)
    assert cf_eval([2, 1, 2]) == CFValue(8, 3)


def test_empty_sequence():
    assert cf_numerator([]) == 1
    with pytest.raises(UsageError):
        cf_eval([])


def test_parse():
    assert parse_cf("3,2,2") == [3, 2, 2]
    assert parse_cf(" 1, -1 ,0") == [1, -1, 0]
    with pytest.raises(UsageError):
        parse_cf("3,x")


def test_admissibility():
    assert is_admissible([3, 2, 2])
    assert not is_admissible([3, -1])


def test_large_entries_stay_exact():
    seq = [10**30, 7, 10**25]
    assert cf_eval(seq).as_fraction() == recursive_value(seq)


@given(admissible)
def test_eval_matches_recursive_oracle(seq):
    assert cf_eval(seq).as_fraction() == recursive_value(seq)


@given(admissible)
def test_numerator_matches_continuant(seq):
    assert cf_numerator(seq) == numerator_recurrence(seq)


@given(admissible)
def test_reversal(seq):
    assert cf_numerator(seq) == cf_numerator(seq[::-1])


@given(st.lists(st.integers(-5, 20), min_size=1, max_size=10))
def test_determinant(seq):
    p, r, q, s = cf_matrix(seq)
    assert p * s - q * r == (-1) ** len(seq)


@given(admissible)
def test_coprime_without_reduction(seq):
    v = cf_eval(seq)
    assert gcd(v.p, v.q) == 1


def test_skein_examples():
    merged = cf_skein_check([], 3, 2, 2, [], "merge")
    assert (merged.lhs, merged.rhs, merged.equal) == (17, 7 + 2 * 5, True)
    split = cf_skein_check([], 3, 1, 2, [], "split")
    assert (split.lhs, split.rhs, split.equal) == (17, 15 + 2, True)
    zero = cf_skein_check([1, 4], 3, 0, 5, [2], "merge")
    assert zero.lhs == cf_numerator([1, 4, 8, 2]) and zero.equal


def test_skein_bad_variant():
    with pytest.raises(UsageError):
        cf_skein_check([], 1, 1, 1, [], "other")


mu = st.lists(st.integers(0, 10), max_size=5)
small = st.integers(0, 10)


@settings(max_examples=300)
@given(mu, small, small, small, mu, st.sampled_from(["merge", "split"]))
def test_skein_identities(mu1, a, c, b, mu2, variant):
    assert cf_skein_check(mu1, a, c, b, mu2, variant).equal
