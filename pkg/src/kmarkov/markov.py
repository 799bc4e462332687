"""k-Markov triples and trees, plus the verification sweeps built on them."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, partial

from .errors import InvariantViolation, UsageError
from .lattice import LEFT, arc_length, crossing_word_segment, poset_from_word
from .parallel import pmap
from .poset import weighted_ideal_sum
from .report import Report


@dataclass(frozen=True)
class MarkovTriple:
    a: int
    b: int
    c: int
    k: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def mid(self) -> int:
        return self.b


@dataclass(frozen=True)
class FareyTriple:
    left: tuple[int, int]
    mid: tuple[int, int]
    right: tuple[int, int]  # (1, 0) stands for 1/0

    def __str__(self) -> str:
        return ", ".join(f"{p}/{q}" for p, q in (self.left, self.mid, self.right))


def k_markov_check(a: int, b: int, c: int, k: int) -> bool:
    return a * a + b * b + c * c + k * (a * b + a * c + b * c) == (3 + 3 * k) * a * b * c


def _exact_div(n: int, d: int) -> int:
    q, r = divmod(n, d)
    if r:
        raise InvariantViolation(f"Vieta division {n}/{d} is not exact")
    return q


def vieta_step(t: MarkovTriple, child: str) -> MarkovTriple:
    a, b, c, k = t.a, t.b, t.c, t.k
    if child in ("L", "Left", "left"):
        return MarkovTriple(b, _exact_div(b * b + k * b * c + c * c, a), c, k)
    if child in ("R", "Right", "right"):
        return MarkovTriple(a, _exact_div(a * a + k * a * b + b * b, c), b, k)
    raise UsageError(f"child must be L or R, got {child!r}")


def _check_path(path: str) -> str:
    path = "".join(path)
    if any(ch not in "LR" for ch in path):
        raise UsageError(f"tree paths are words over L and R, got {path!r}")
    return path


def tree_root(k: int) -> MarkovTriple:
    if k < 0:
        raise UsageError("k must be non-negative")
    return MarkovTriple(1, k + 2, 1, k)


def tree_node(k: int, path: str = "") -> MarkovTriple:
    """Node of the k-Markov tree reached from the root (1, k+2, 1)."""
    t = tree_root(k)
    for ch in _check_path(path):
        t = vieta_step(t, ch)
    return t


def farey_node(path: str = "") -> FareyTriple:
    """Node of the Farey tree reached from the root (0/1, 1/1, 1/0)."""
    (r, s), (p, q), (t, u) = (0, 1), (1, 1), (1, 0)
    for ch in _check_path(path):
        if ch == "L":
            (r, s), (p, q) = (p, q), (p + t, q + u)
        else:
            (p, q), (t, u) = (r + p, s + q), (p, q)
    return FareyTriple((r, s), (p, q), (t, u))


def as_fraction(r) -> Fraction:
    """Accept Fraction, (p, q) or "p/q"; unreduced input is rejected."""
    if isinstance(r, Fraction):
        return r
    if isinstance(r, tuple):
        p, q = r
    elif isinstance(r, str):
        parts = r.strip().split("/")
        try:
            p, q = (int(parts[0]), int(parts[1])) if len(parts) == 2 else (int(parts[0]), 1)
        except ValueError as exc:
            raise UsageError(f"not a fraction: {r!r}") from exc
    elif isinstance(r, int) and not isinstance(r, bool):
        p, q = r, 1
    else:
        raise UsageError(f"not a fraction: {r!r}")
    if q <= 0:
        raise UsageError(f"denominator must be positive in {p}/{q}")
    if math.gcd(p, q) != 1:
        raise UsageError(f"{p}/{q} is not reduced")
    return Fraction(p, q)


def farey_path(r) -> str:
    """Path below the [0,1] root (0/1, 1/2, 1/1) to the node with middle entry r."""
    r = as_fraction(r)
    if not 0 < r < 1:
        raise UsageError(f"{r} is not strictly between 0 and 1")
    (a, b), (c, d) = (0, 1), (1, 1)  # current interval ends
    path = []
    while True:
        m = Fraction(a + c, b + d)
        if r == m:
            return "".join(path)
        if r > m:
            path.append("L")
            a, b = m.numerator, m.denominator
        else:
            path.append("R")
            c, d = m.numerator, m.denominator


def _number_tree(k: int, r: Fraction) -> int:
    return tree_node(k, "R" + farey_path(r)).b


def _number_poset(k: int, r: Fraction) -> int:
    w = crossing_word_segment((0, 0), (r.denominator, r.numerator), LEFT)
    total = weighted_ideal_sum(poset_from_word(w, k))
    if total.denominator != 1:
        raise InvariantViolation(f"non-integral weighted sum {total}")
    return int(total)


def markov_number(k: int, r, method: str = "tree") -> int:
    """m^(k) at a rational r in [0, 1]."""
    if k < 0:
        raise UsageError("k must be non-negative")
    r = as_fraction(r)
    if not 0 <= r <= 1:
        raise UsageError(f"{r} is outside [0, 1]")
    if r == 0:
        return 1
    if r == 1:
        return k + 2
    method = method.lower()
    if method == "tree":
        return _number_tree(k, r)
    if method == "poset":
        return _number_poset(k, r)
    if method == "both":
        a, b = _number_tree(k, r), _number_poset(k, r)
        if a != b:
            raise InvariantViolation(f"m^({k})_{r}: tree gives {a}, poset gives {b}")
        return a
    raise UsageError(f"method must be tree, poset or both, got {method!r}")


def reduced_fractions(q_max: int, lo_inclusive: bool = False) -> list[tuple[int, int]]:
    """Reduced p/q in (0, 1] (or [0, 1]) with q <= q_max, ordered by (q, p)."""
    out = [(0, 1)] if lo_inclusive else []
    for q in range(1, q_max + 1):
        for p in range(1, q + 1):
            if math.gcd(p, q) == 1:
                out.append((p, q))
    return out


def tree_levels(k: int, depth: int) -> list[tuple[str, MarkovTriple, FareyTriple]]:
    """All nodes of both trees down to the given depth, breadth first."""
    if depth < 0:
        raise UsageError("depth must be non-negative")
    out = []
    for n in range(depth + 1):
        for word in itertools.product("LR", repeat=n):
            path = "".join(word)
            out.append((path, tree_node(k, path), farey_node(path)))
    return out


# distance -------------------------------------------------------------------

def markov_distance(k: int, a, b, side: str = LEFT) -> int:
    """|AB|_k, evaluated as the length of the left (or right) biased straight arc."""
    a, b = tuple(a), tuple(b)
    if a == b:
        return 0
    return arc_length(crossing_word_segment(a, b, side), k)


@lru_cache(maxsize=None)
def _distance_by_offset(k: int, dx: int, dy: int) -> int:
    return markov_distance(k, (0, 0), (dx, dy))


def _orient(o, a, b) -> int:
    v = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    return (v > 0) - (v < 0)


def is_convex_quadrilateral(a, b, c, d) -> bool:
    """Distinct points forming a strictly convex quadrilateral in this cyclic order."""
    pts = [tuple(a), tuple(b), tuple(c), tuple(d)]
    if len(set(pts)) != 4:
        return False
    signs = {_orient(pts[i], pts[(i + 1) % 4], pts[(i + 2) % 4]) for i in range(4)}
    return signs in ({1}, {-1})


@dataclass(frozen=True)
class PtolemyCheck:
    quad: tuple
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs


def ptolemy_check(k: int, a, b, c, d) -> PtolemyCheck:
    if not is_convex_quadrilateral(a, b, c, d):
        raise UsageError(f"{a}, {b}, {c}, {d} is not a convex quadrilateral in that order")

    def dist(p, q):
        return _distance_by_offset(k, q[0] - p[0], q[1] - p[1])

    lhs = dist(a, c) * dist(b, d)
    rhs = dist(a, b) * dist(c, d) + dist(a, d) * dist(b, c)
    return PtolemyCheck((tuple(a), tuple(b), tuple(c), tuple(d)), lhs, rhs)


def convex_quadrilaterals(max_coord: int, min_coord: int = 0):
    """Each strictly convex 4-subset of the box once, in a canonical cyclic order."""
    pts = [(x, y) for x in range(min_coord, max_coord + 1) for y in range(min_coord, max_coord + 1)]
    for quad in itertools.combinations(pts, 4):
        first, rest = quad[0], quad[1:]
        for perm in ((rest[0], rest[1], rest[2]), (rest[0], rest[2], rest[1]), (rest[1], rest[0], rest[2])):
            if is_convex_quadrilateral(first, *perm):
                yield (first,) + perm
                break


def _ptolemy_chunk(args) -> tuple[int, list]:
    k, quads = args
    bad = []
    for q in quads:
        chk = ptolemy_check(k, *q)
        if not chk.holds:
            bad.append(chk)
    return len(quads), bad


def verify_ptolemy(k: int, max_coord: int = 3, min_coord: int = 0, jobs: int | None = 1, quad=None) -> Report:
    """Ptolemy inequality |AC||BD| >= |AB||CD| + |AD||BC| on one or all convex quadrilaterals."""
    params = {"k": k}
    if quad is not None:
        chk = ptolemy_check(k, *quad)
        params["quadrilateral"] = [list(p) for p in chk.quad]
        return Report(
            "ptolemy", params, chk.holds, {"lhs": chk.lhs, "rhs": chk.rhs, "instances": 1, "violations": int(not chk.holds)}
        )
    params.update({"min_coord": min_coord, "max_coord": max_coord})
    quads = list(convex_quadrilaterals(max_coord, min_coord))
    size = 500
    chunks = [(k, quads[i : i + size]) for i in range(0, len(quads), size)]
    results = pmap(_ptolemy_chunk, chunks, jobs)
    bad = [b for _, bs in results for b in bs]
    rows = [{"A": q.quad[0], "B": q.quad[1], "C": q.quad[2], "D": q.quad[3], "lhs": q.lhs, "rhs": q.rhs} for q in bad]
    return Report(
        "ptolemy",
        params,
        not bad,
        {"instances": sum(n for n, _ in results), "violations": len(bad)},
        ["A", "B", "C", "D", "lhs", "rhs"],
        rows,
    )


# Aigner orderings -------------------------------------------------------------

def _numbers(k: int, q_max: int, with_zero: bool = False) -> dict[tuple[int, int], int]:
    return {pq: markov_number(k, Fraction(*pq)) for pq in reduced_fractions(q_max, with_zero)}


def _aigner_one(k: int, q_max: int) -> tuple[dict, list]:
    m = _numbers(k, q_max)
    counts = {"fixed_numerator": 0, "fixed_denominator": 0, "fixed_sum": 0}
    bad = []

    def check(family, small, large):
        counts[family] += 1
        if not m[small] < m[large]:
            bad.append({"k": k, "family": family, "smaller": f"{small[0]}/{small[1]}",
                        "larger": f"{large[0]}/{large[1]}", "m_smaller": m[small], "m_larger": m[large]})

    by_p: dict[int, list[int]] = {}
    by_q: dict[int, list[int]] = {}
    for p, q in m:
        by_p.setdefault(p, []).append(q)
        by_q.setdefault(q, []).append(p)
    for p, qs in sorted(by_p.items()):
        for q1, q2 in itertools.combinations(sorted(qs), 2):
            check("fixed_numerator", (p, q1), (p, q2))
    for q, ps in sorted(by_q.items()):
        for p1, p2 in itertools.combinations(sorted(x for x in ps if x < q), 2):
            check("fixed_denominator", (p1, q), (p2, q))
    for p, q in sorted(m, key=lambda t: (t[1], t[0])):
        for i in range(1, p):
            if q + i <= q_max and math.gcd(p - i, q + i) == 1:
                check("fixed_sum", (p, q), (p - i, q + i))
    return counts, bad


def verify_aigner(k_values, q_max: int = 30, jobs: int | None = 1) -> Report:
    """Monotonicity of m^(k) along each Aigner family of fractions."""
    if q_max < 2:
        raise UsageError("q_max must be at least 2")
    ks = [k_values] if isinstance(k_values, int) else list(k_values)
    results = pmap(partial(_aigner_one, q_max=q_max), ks, jobs)
    summary = {}
    rows = []
    for k, (counts, bad) in zip(ks, results):
        for fam, n in counts.items():
            summary[f"k={k} {fam}"] = n
        rows.extend(bad)
    summary["violations"] = len(rows)
    cols = ["k", "family", "smaller", "larger", "m_smaller", "m_larger"]
    return Report("aigner", {"k": ks, "q_max": q_max}, not rows, summary, cols, rows)


# recurrences ----------------------------------------------------------------

def verify_recurrences(k: int, n_max: int = 20) -> Report:
    """m_{1/n} = 3 m_{1/(n-1)} - m_{1/(n-2)} (k=0) or 5 m - m - 1 (k=1), for 3 <= n <= n_max."""
    if k not in (0, 1):
        raise UsageError("recurrences are stated for k = 0 and k = 1 only")
    if n_max < 3:
        raise UsageError("n_max must be at least 3")
    m = {n: markov_number(k, Fraction(1, n)) for n in range(1, n_max + 1)}
    rows = []
    for n in range(3, n_max + 1):
        pred = 3 * m[n - 1] - m[n - 2] if k == 0 else 5 * m[n - 1] - m[n - 2] - 1
        rows.append({"n": n, "m": m[n], "predicted": pred, "ok": m[n] == pred})
    ok = all(r["ok"] for r in rows)
    return Report("recurrences", {"k": k, "n_max": n_max}, ok,
                  {"checked": len(rows), "failures": sum(not r["ok"] for r in rows)},
                  ["n", "m", "predicted", "ok"], rows)


# order comparison -------------------------------------------------------------

def collisions(k: int, q_max: int) -> list[dict]:
    """Distinct rationals in [0,1] sharing one m^(k) value."""
    seen: dict[int, list[str]] = {}
    for pq, v in _numbers(k, q_max, with_zero=True).items():
        seen.setdefault(v, []).append(f"{pq[0]}/{pq[1]}")
    return [{"k": k, "value": v, "fractions": fs} for v, fs in seen.items() if len(fs) > 1]


def compare_orders(k: int, k2: int, q_max: int) -> Report:
    """Pairs of rationals ordered one way by m^(k) and the other way by m^(k2). Report only."""
    fr = reduced_fractions(q_max, lo_inclusive=True)
    m1, m2 = _numbers(k, q_max, True), _numbers(k2, q_max, True)
    rows = []
    for a, b in itertools.combinations(fr, 2):
        s1 = (m1[a] > m1[b]) - (m1[a] < m1[b])
        s2 = (m2[a] > m2[b]) - (m2[a] < m2[b])
        if s1 * s2 < 0:
            rows.append({"r": f"{a[0]}/{a[1]}", "s": f"{b[0]}/{b[1]}",
                         "m_k(r)": m1[a], "m_k(s)": m1[b], "m_k2(r)": m2[a], "m_k2(s)": m2[b]})
    coll = collisions(k, q_max) + ([] if k2 == k else collisions(k2, q_max))
    summary = {"fractions": len(fr), "pairs": len(fr) * (len(fr) - 1) // 2,
               "discordant": len(rows), "collisions": coll}
    cols = ["r", "s", "m_k(r)", "m_k(s)", "m_k2(r)", "m_k2(s)"]
    return Report("compare-orders", {"k": k, "k2": k2, "q_max": q_max}, True, summary, cols, rows, asserted=False)


def markov_table(k_values, q_max: int) -> list[tuple[int, int, int, int]]:
    """(k, p, q, m^(k)_{p/q}) rows for the CSV export, ordered by k then (q, p)."""
    return [(k, p, q, markov_number(k, Fraction(p, q))) for k in k_values for p, q in reduced_fractions(q_max, True)]


def tree_poset_cross_check(k_values, q_max: int, jobs: int | None = 1) -> Report:
    """Tree recursion against weighted posets for every reduced p/q with q <= q_max."""
    items = [(k, p, q) for k in k_values for p, q in reduced_fractions(q_max, True)]
    vals = pmap(_both_methods, items, jobs)
    rows = [{"k": k, "p": p, "q": q, "tree": a, "poset": b} for (k, p, q), (a, b) in zip(items, vals) if a != b]
    return Report("tree-vs-poset", {"k": list(k_values), "q_max": q_max}, not rows,
                  {"checked": len(items), "mismatches": len(rows)}, ["k", "p", "q", "tree", "poset"], rows)


def _both_methods(item) -> tuple[int, int]:
    k, p, q = item
    r = Fraction(p, q)
    # the poset path also covers 0/1 (no crossings) and 1/1 (one midpoint crossing)
    return markov_number(k, r, "tree"), _number_poset(k, r)
