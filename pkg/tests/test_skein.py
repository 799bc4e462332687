import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kmarkov.contfrac import cf_numerator
from kmarkov.errors import UsageError
from kmarkov.poset import EMPTY, FencePoset, fence, ideal_count, poset_from_shape, relation, shape_of
from kmarkov.sampling import sample_resolution, verify_identities
from kmarkov.skein import (
    CrossingOverlap,
    Resolution,
    find_crossing_overlaps,
    is_crossing_overlap,
    resolve_type0,
    resolve_type1,
    resolve_type2,
    verify_resolution_identity,
)

P1 = poset_from_shape([3, 2, 2])
P2 = poset_from_shape([2, 1, 2])


def n(p):
    return cf_numerator(shape_of(p)) if p.size else 1


def all_fences(max_h):
    for h in range(1, max_h + 1):
        for w in itertools.product("UD", repeat=h - 1):
            yield FencePoset(h, w)


def check_splice(p1, p2, res):
    """Outputs reuse input cover relations and add at most one new one."""
    inputs = {"": p1, "'": p2}
    for p, ids in zip(res.parts(), res.sources):
        assert len(ids) == p.size
        assert len(set(ids)) == len(ids)
        new = 0
        for j in range(len(ids) - 1):
            a, b = ids[j], ids[j + 1]
            ta, tb = a.endswith("'"), b.endswith("'")
            ia, ib = int(a.rstrip("'")), int(b.rstrip("'"))
            if ta == tb and abs(ia - ib) == 1:
                src = inputs["'" if ta else ""]
                want = relation(src, ia, ib)
                got = "<" if p.directions[j] == "U" else ">"
                assert want == got
            else:
                new += 1
        assert new <= 1


# type 0 -------------------------------------------------------------------------

def test_golden_type0_counts():
    ov = CrossingOverlap(2, 4, 1, 3)
    assert ov in find_crossing_overlaps(P1, P2)
    res = resolve_type0(P1, P2, ov)
    assert tuple(ideal_count(p) for p in res.parts()) == (11, 12, 1, 4)
    check = verify_resolution_identity(P1, P2, res)
    assert (check.lhs, check.rhs, check.equal) == (136, 136, True)


def test_golden_type0_matches_drawings():
    res = resolve_type0(P1, P2, CrossingOverlap(2, 4, 1, 3))
    assert res.sources[0] == ("1", "2", "3", "4", "4'")
    assert res.p3.word() == "UUDU"
    assert res.sources[1] == ("1'", "2'", "3'", "5", "6")
    assert res.p4.word() == "UDDU"
    assert res.p5 == EMPTY and res.sources[2] == ()
    assert res.sources[3] == ("4'", "5", "6")
    assert res.p6.word() == "UU"


def test_overlap_rules():
    assert find_crossing_overlaps(fence(""), fence("")) == []
    assert not is_crossing_overlap(P1, P1, CrossingOverlap(1, 6, 1, 6))
    # common suffix at both ends is excluded
    assert not is_crossing_overlap(fence("U"), fence("DU"), CrossingOverlap(1, 2, 2, 3))
    with pytest.raises(UsageError):
        resolve_type0(P1, P2, CrossingOverlap(1, 1, 1, 1))


def test_type0_random_pair_against_enumeration():
    rng = np.random.default_rng(8)
    done = 0
    while done < 20:
        p1 = fence("".join(rng.choice(["U", "D"], 7)))
        p2 = fence("".join(rng.choice(["U", "D"], 5)))
        for ov in find_crossing_overlaps(p1, p2):
            assert verify_resolution_identity(p1, p2, resolve_type0(p1, p2, ov), "enumerate").equal
            done += 1


# type 1 -------------------------------------------------------------------------

def test_type1_small():
    res = resolve_type1(fence(""), fence("D"), 1)
    check = verify_resolution_identity(fence(""), fence("D"), res, "enumerate")
    assert check.lhs == 2 * 3 and check.equal


def test_type1_relabels_when_needed():
    # direction at i is Up, so P2 is read from the other end
    res = resolve_type1(fence("U"), fence("UUD"), 1)
    assert verify_resolution_identity(fence("U"), fence("UUD"), res).equal
    assert res.sources[0][0] == "4'"


def test_type1_numerator_form():
    alpha, beta = poset_from_shape([2]), poset_from_shape([1, 4, 2])
    for i in range(1, beta.size):
        res = resolve_type1(alpha, beta, i)
        rhs = n(res.p3) * n(res.p4) + n(res.p5) * n(res.p6)
        assert cf_numerator([2]) * cf_numerator([1, 4, 2]) == rhs


def test_type1_errors():
    with pytest.raises(UsageError):
        resolve_type1(fence(""), fence("D"), 2)
    with pytest.raises(UsageError):
        resolve_type1(EMPTY, fence("D"), 1)


# type 2 -------------------------------------------------------------------------

def test_golden_type2():
    res = resolve_type2(P1, P2)
    assert shape_of(res.p3) == [1, 1, 1, 1, 3, 2, 2]
    assert res.p4 == EMPTY
    assert shape_of(res.p5) == [2, 2, 2]
    assert shape_of(res.p6) == [3]
    assert n(res.p3) + n(res.p5) * n(res.p6) == 100 + 12 * 3 == 136
    assert verify_resolution_identity(P1, P2, res, "enumerate").rhs == 136


def test_type2_singletons():
    res = resolve_type2(fence(""), fence(""))
    assert res.p3.word() == "U"
    assert res.p5 == EMPTY and res.p6 == EMPTY
    assert verify_resolution_identity(fence(""), fence(""), res, "enumerate").counts == (2, 2, 3, 1, 1, 1)


def test_type2_numerator_form():
    # shapes starting 1 and >1: the leading element of the first poset is maximal
    for a in ([1, 2, 2], [1, 1, 3], [1, 3]):
        for b in ([2, 2], [3, 1, 2], [4]):
            pa, pb = poset_from_shape(a), poset_from_shape(b)
            res = resolve_type2(pa, pb)
            assert cf_numerator(a) * cf_numerator(b) == n(res.p3) + n(res.p5) * n(res.p6)


def test_type2_errors():
    with pytest.raises(UsageError):
        resolve_type2(EMPTY, P1)


# identities -------------------------------------------------------------------------

def test_corrupted_resolution_is_caught():
    res = resolve_type0(P1, P2, CrossingOverlap(2, 4, 1, 3))
    bad = Resolution(res.p3, res.p4, res.p5, fence("UD"), "0")
    check = verify_resolution_identity(P1, P2, bad)
    assert not check.equal
    assert check.to_dict()["lhs"] == "136"
    assert check.to_dict()["rhs"] == str(11 * 12 + 1 * 5)


def test_bad_mode():
    with pytest.raises(UsageError):
        verify_resolution_identity(P1, P2, resolve_type2(P1, P2), "guess")


def test_all_small_pairs():
    failures = []
    for p1, p2 in itertools.product(list(all_fences(6)), repeat=2):
        cases = [resolve_type0(p1, p2, ov) for ov in find_crossing_overlaps(p1, p2)]
        cases += [resolve_type1(p1, p2, i) for i in range(1, p2.size)]
        cases.append(resolve_type2(p1, p2))
        for res in cases:
            if not verify_resolution_identity(p1, p2, res, "enumerate").equal:
                failures.append((p1.word(), p2.word(), res.kind))
    assert failures == []


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from("012"))
def test_outputs_are_splices(seed, kind):
    rng = np.random.default_rng(seed)
    p1, p2, res, _ = sample_resolution(rng, kind, max_h=9, max_total=14)
    check_splice(p1, p2, res)
    assert verify_resolution_identity(p1, p2, res).equal


def test_sampled_identities_are_reproducible():
    a = verify_identities(seed=5, samples=60)
    b = verify_identities(seed=5, samples=60, jobs=2)
    assert a.ok and a.to_json() == b.to_json()


def test_resolution_json():
    d = resolve_type0(P1, P2, CrossingOverlap(2, 4, 1, 3)).to_dict()
    assert d["type"] == "0"
    assert d["P6"]["elements"] == ["4'", "5", "6"]
    assert d["P5"]["size"] == 0
