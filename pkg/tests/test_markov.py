import itertools
import json
from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, strategies as st

from kmarkov.errors import UsageError
from kmarkov.markov import (
    MarkovTriple,
    collisions,
    compare_orders,
    convex_quadrilaterals,
    farey_node,
    farey_path,
    is_convex_quadrilateral,
    k_markov_check,
    markov_distance,
    markov_number,
    markov_table,
    ptolemy_check,
    reduced_fractions,
    tree_poset_cross_check,
    tree_levels,
    tree_node,
    verify_aigner,
    verify_ptolemy,
    verify_recurrences,
    vieta_step,
)
from kmarkov.report import table_csv

K1_VALUES = {"1/2": 13, "1/3": 61, "2/3": 217, "1/4": 291, "2/5": 4683, "3/5": 16693, "3/4": 3673}


def brute_triples(k, bound):
    """All sorted solutions a <= b <= c <= bound, by solving the quadratic in c."""
    out = set()
    for a in range(1, bound + 1):
        for b in range(a, bound + 1):
            # c^2 - B c + C = 0
            B = (3 + 3 * k) * a * b - k * (a + b)
            C = a * a + b * b + k * a * b
            disc = B * B - 4 * C
            if disc < 0:
                continue
            r = isqrt(disc)
            if r * r != disc:
                continue
            for c2 in (B - r, B + r):
                if c2 % 2 == 0:
                    c = c2 // 2
                    if b <= c <= bound:
                        out.add((a, b, c))
    return out


def tree_triples(k, depth):
    return {tuple(sorted(t.as_tuple())) for _, t, _ in tree_levels(k, depth)}


# triples and trees --------------------------------------------------------------

def test_check_examples():
    assert all(k_markov_check(1, 1, 1, k) for k in range(6))
    assert k_markov_check(2, 5, 29, 0)
    assert not k_markov_check(1, 2, 3, 0)


def test_vieta_examples():
    assert vieta_step(MarkovTriple(1, 3, 1, 1), "L") == MarkovTriple(3, 13, 1, 1)
    assert vieta_step(MarkovTriple(1, 61, 13, 1), "L") == MarkovTriple(61, 4683, 13, 1)
    with pytest.raises(UsageError):
        vieta_step(MarkovTriple(1, 3, 1, 1), "X")


@given(st.integers(0, 5), st.text(alphabet="LR", max_size=10))
def test_tree_nodes_are_solutions(k, path):
    t = tree_node(k, path)
    assert k_markov_check(t.a, t.b, t.c, k)


@given(st.integers(0, 4), st.text(alphabet="LR", min_size=1, max_size=8))
def test_vieta_involution(k, path):
    parent = tree_node(k, path[:-1])
    child = tree_node(k, path)
    # the child keeps two entries of the parent; the third is the Vieta partner of the middle one
    a, b, c = parent.as_tuple()
    x, y, z = child.as_tuple()
    if path[-1] == "L":
        assert (x, z) == (b, c) and (x * x + k * x * z + z * z) // y == a
    else:
        assert (x, z) == (a, b) and (x * x + k * x * z + z * z) // y == c


@pytest.mark.parametrize("k", [0, 1, 2])
def test_tree_matches_brute_force(k):
    bound = {0: 1500, 1: 2500, 2: 2000}[k]
    found = brute_triples(k, bound)
    listed = {t for t in tree_triples(k, 12) if max(t) <= bound}
    # (1,1,1) and (1,1,k+2) sit above the tree root
    singular = {(1, 1, 1), (1, 1, k + 2)}
    assert found - singular == listed - singular


def test_tree_examples():
    assert tree_node(1, "RL").as_tuple() == (13, 217, 3)
    assert tree_node(2).as_tuple() == (1, 4, 1)
    assert str(farey_node()) == "0/1, 1/1, 1/0"
    assert str(farey_node("RRL")) == "1/3, 2/5, 1/2"
    assert str(farey_node("RLL")) == "2/3, 3/4, 1/1"


def test_depth_three_middle_entries():
    mids = {tree_node(1, "R" + p).b for n in range(3) for p in map("".join, itertools.product("LR", repeat=n))}
    assert mids == set(K1_VALUES.values())


def test_farey_path():
    assert farey_path("2/5") == "RL"
    assert farey_path("1/2") == ""
    assert farey_path("3/4") == "LL"
    assert str(farey_node("R" + farey_path("3/4"))) == "2/3, 3/4, 1/1"
    for bad in ("0/1", "1/1", "3/2", "2/4", "-1/3"):
        with pytest.raises(UsageError):
            farey_path(bad)


@given(st.integers(2, 60).flatmap(lambda q: st.tuples(st.integers(1, q - 1), st.just(q))))
def test_farey_path_lands_on_fraction(pq):
    p, q = pq
    f = Fraction(p, q)
    node = farey_node("R" + farey_path(f))
    assert Fraction(*node.mid) == f
    (a, b), (c, d) = node.left, node.right
    assert c * b - a * d == 1


# numbers --------------------------------------------------------------------------

@pytest.mark.parametrize("r, value", sorted(K1_VALUES.items()))
def test_k1_numbers(r, value):
    assert markov_number(1, r, "both") == value


def test_number_edges():
    assert all(markov_number(k, "0/1") == 1 for k in range(5))
    assert all(markov_number(k, "1/1") == k + 2 for k in range(5))
    assert markov_number(0, "1/2") == 5
    assert markov_number(0, Fraction(2, 5), "poset") == markov_number(0, "2/5") == 194
    for bad in ("2/4", "3/2", "x", "1/0"):
        with pytest.raises(UsageError):
            markov_number(1, bad)
    with pytest.raises(UsageError):
        markov_number(1, "1/2", "guess")


def test_classical_numbers():
    # k = 0 gives the classical Markov numbers
    values = sorted({markov_number(0, Fraction(p, q)) for p, q in reduced_fractions(7, True)})
    assert values[:9] == [1, 2, 5, 13, 29, 34, 89, 169, 194]


def test_tree_poset_cross_check_small():
    rep = tree_poset_cross_check([0, 1, 2, 3], 8)
    assert rep.ok and rep.summary["mismatches"] == 0


# distances ------------------------------------------------------------------------

def test_distance_examples():
    assert markov_distance(2, (3, 3), (3, 3)) == 0
    assert markov_distance(1, (0, 0), (5, 2)) == 4683
    assert markov_distance(2, (0, 0), (4, 2)) == 5575
    assert markov_distance(2, (0, 0), (4, 2), "R") == 5575


@given(st.integers(0, 3), st.integers(-4, 4), st.integers(-4, 4), st.integers(-9, 9), st.integers(-9, 9))
def test_distance_translation_and_sides(k, dx, dy, vx, vy):
    d = markov_distance(k, (0, 0), (dx, dy))
    assert markov_distance(k, (vx, vy), (vx + dx, vy + dy)) == d
    assert markov_distance(k, (0, 0), (dx, dy), "R") == d
    assert markov_distance(k, (dx, dy), (0, 0)) == d


# Ptolemy ---------------------------------------------------------------------------

def test_unit_square():
    for k in range(5):
        chk = ptolemy_check(k, (0, 0), (1, 0), (1, 1), (0, 1))
        assert (chk.lhs, chk.rhs, chk.holds) == ((k + 2) * 1, 2, True)


def test_ptolemy_rejects_bad_quads():
    with pytest.raises(UsageError):
        ptolemy_check(0, (0, 0), (1, 0), (0, 0), (0, 1))
    with pytest.raises(UsageError):
        ptolemy_check(0, (0, 0), (1, 1), (1, 0), (0, 1))
    assert not is_convex_quadrilateral((0, 0), (1, 0), (2, 0), (1, 1))


def test_quad_enumeration_is_canonical():
    quads = list(convex_quadrilaterals(2))
    assert len(quads) == len({frozenset(q) for q in quads})
    assert all(is_convex_quadrilateral(*q) for q in quads)


def test_ptolemy_sweep_k0():
    rep = verify_ptolemy(0, 3)
    assert rep.ok and rep.summary["violations"] == 0 and rep.summary["instances"] > 1000


def test_ptolemy_single():
    rep = verify_ptolemy(1, quad=[(0, 0), (2, 0), (2, 1), (0, 1)])
    assert rep.ok and rep.summary["instances"] == 1


# Aigner, recurrences, orders ---------------------------------------------------------

def test_aigner_examples():
    m = {r: markov_number(1, r) for r in ("1/2", "1/3", "2/3", "2/5", "1/6")}
    assert m["1/2"] < m["1/3"] < m["2/3"]
    assert m["2/5"] == 4683 < m["1/6"] == 6673


def test_aigner_small():
    rep = verify_aigner([0, 1, 2, 3], 14)
    assert rep.ok and rep.summary["violations"] == 0
    assert rep.summary["k=1 fixed_sum"] > 0
    with pytest.raises(UsageError):
        verify_aigner([1], 1)


def test_recurrences():
    for k in (0, 1):
        rep = verify_recurrences(k, 20)
        assert rep.ok and rep.summary["checked"] == 18
    rows = {r["n"]: r for r in verify_recurrences(1, 4).rows}
    assert rows[3]["m"] == 61 == 5 * 13 - 3 - 1
    assert rows[4]["m"] == 291 == 5 * 61 - 13 - 1
    assert verify_recurrences(0, 3).rows[0]["m"] == 13 == 3 * 5 - 2
    with pytest.raises(UsageError):
        verify_recurrences(2, 10)


def test_compare_orders():
    same = compare_orders(1, 1, 8)
    assert same.rows == [] and not same.asserted
    rep = compare_orders(0, 1, 10)
    data = json.loads(rep.to_json())
    assert data["asserted"] is False and data["ok"] is True
    assert set(data["columns"]) == {"r", "s", "m_k(r)", "m_k(s)", "m_k2(r)", "m_k2(s)"}
    assert collisions(2, 10) == []


def test_table_csv():
    text = table_csv(markov_table([1], 3))
    lines = text.splitlines()
    assert lines[0] == "k,p,q,value"
    assert "1,2,3,217" in lines
