"""The lattice L of unit segments and the arc-to-poset compiler.

L consists of the integer-endpoint segments that are horizontal (label z),
vertical (label y) or of slope -1 (label x). An arc is recorded by its
crossing word. Each entry names the crossed segment's label and says which
endpoint the crossing is nearer to, seen from the direction of travel. From
the second entry on it also records the side on which the segment shares an
endpoint with the previously crossed one.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .contfrac import cf_numerator
from .errors import InvariantViolation, UnsupportedFeature, UsageError
from .poset import DOWN, EMPTY, UP, FencePoset, extend_poset, shape_of, weighted_ideal_sum

NEAR_LEFT, NEAR_RIGHT, MIDPOINT = "left", "right", "mid"
SHARED_LEFT, SHARED_RIGHT = "left", "right"
LEFT, RIGHT = "L", "R"

Point = tuple[int, int]

# the six lattice segments leaving a lattice point, as direction vectors
_RAYS: tuple[tuple[Point, str], ...] = (
    ((1, 0), "z"),
    ((0, 1), "y"),
    ((-1, 1), "x"),
    ((-1, 0), "z"),
    ((0, -1), "y"),
    ((1, -1), "x"),
)


@dataclass(frozen=True)
class Crossing:
    label: str
    bias: str
    turn: str | None = None

    def __post_init__(self):
        if self.label not in ("x", "y", "z"):
            raise UsageError(f"bad crossing label {self.label!r}")
        if self.bias not in (NEAR_LEFT, NEAR_RIGHT, MIDPOINT):
            raise UsageError(f"bad crossing bias {self.bias!r}")
        if self.turn not in (None, SHARED_LEFT, SHARED_RIGHT):
            raise UsageError(f"bad crossing turn {self.turn!r}")

    def to_dict(self) -> dict:
        return {"label": self.label, "bias": self.bias, "turn": self.turn}


@dataclass(frozen=True)
class CrossingWord:
    crossings: tuple[Crossing, ...] = ()

    def __post_init__(self):
        cs = tuple(self.crossings)
        object.__setattr__(self, "crossings", cs)
        for j, c in enumerate(cs):
            if (j == 0) != (c.turn is None):
                raise UsageError("only the first crossing of a word may lack a turn")

    def __len__(self) -> int:
        return len(self.crossings)

    def __iter__(self):
        return iter(self.crossings)

    def to_list(self) -> list[dict]:
        return [c.to_dict() for c in self.crossings]

    def compact(self) -> str:
        """Short human form such as 'x:r y:m,R x:l,L'."""
        parts = []
        for c in self.crossings:
            s = f"{c.label}:{c.bias[0]}"
            if c.turn:
                s += "," + c.turn[0].upper()
            parts.append(s)
        return " ".join(parts)


def word(*items: tuple) -> CrossingWord:
    """word(("x","right"), ("y","mid","right"), ...)"""
    return CrossingWord(tuple(Crossing(*it) for it in items))


def word_from_list(data) -> CrossingWord:
    if not isinstance(data, list):
        raise UsageError("a crossing word must be a JSON list")
    try:
        return CrossingWord(tuple(Crossing(d["label"], d["bias"], d.get("turn")) for d in data))
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed crossing entry: {exc}") from exc


# geometry -------------------------------------------------------------------

def _cross(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _sub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def _sq(u) -> Fraction:
    return u[0] * u[0] + u[1] * u[1]


def _as_point(p) -> Point:
    try:
        x, y = p
    except (TypeError, ValueError) as exc:
        raise UsageError(f"expected a lattice point (x, y), got {p!r}") from exc
    if isinstance(x, bool) or isinstance(y, bool) or not isinstance(x, int) or not isinstance(y, int):
        raise UsageError(f"lattice point coordinates must be integers, got {p!r}")
    return (x, y)


def _floor(v: Fraction) -> int:
    return math.floor(v)


@dataclass
class _Event:
    t: Fraction
    label: str
    seg: tuple[Point, Point]
    bias: str
    detour_at: Point | None = None  # set for crossings made while detouring


def _straight_crossings(a: Point, d: Point) -> list[_Event]:
    """Transversal crossings of the open segment a + t d, 0 < t < 1, away from lattice points."""
    out = []

    def add(t: Fraction, label: str):
        x = a[0] + t * d[0]
        y = a[1] + t * d[1]
        if x.denominator == 1 and y.denominator == 1:
            return  # a lattice point, handled by a detour
        if label == "z":
            i = _floor(x)
            seg = ((i, int(y)), (i + 1, int(y)))
        elif label == "y":
            j = _floor(y)
            seg = ((int(x), j), (int(x), j + 1))
        else:
            s = int(x + y)
            i = _floor(x)
            seg = ((i, s - i), (i + 1, s - i - 1))
        out.append(_Event(t, label, seg, _bias((x, y), d, seg)))

    def family(start: int, delta: int, label: str):
        if delta == 0:
            return
        lo, hi = sorted((start, start + delta))
        for n in range(lo + 1, hi):
            add(Fraction(n - start, delta), label)

    family(a[1], d[1], "z")
    family(a[0], d[0], "y")
    family(a[0] + a[1], d[0] + d[1], "x")
    return out


def _bias(x, d, seg) -> str:
    e1, e2 = seg
    d1, d2 = _sq(_sub(e1, x)), _sq(_sub(e2, x))
    if d1 == d2:
        return MIDPOINT
    near = e1 if d1 < d2 else e2
    return NEAR_LEFT if _cross(d, _sub(near, x)) > 0 else NEAR_RIGHT


def _detour(p: Point, d: Point, side: str, t: Fraction) -> list[_Event]:
    """Crossings made by a small half-turn around lattice point p."""
    if side == LEFT:
        rays = [r for r in _RAYS if _cross(d, r[0]) > 0]
        # clockwise from -d to d: larger angle from d first
        order = lambda u, v: -1 if _cross(u[0], v[0]) < 0 else 1  # noqa: E731
        bias = NEAR_RIGHT
    else:
        rays = [r for r in _RAYS if _cross(d, r[0]) < 0]
        order = lambda u, v: -1 if _cross(u[0], v[0]) > 0 else 1  # noqa: E731
        bias = NEAR_LEFT
    rays.sort(key=functools.cmp_to_key(order))
    return [
        _Event(t, label, (p, (p[0] + r[0], p[1] + r[1])), bias, detour_at=p)
        for r, label in rays
    ]


def _shared_endpoint(s1, s2) -> Point:
    common = set(s1) & set(s2)
    if len(common) != 1:
        raise InvariantViolation(f"consecutive crossed segments {s1} and {s2} do not share one endpoint")
    return common.pop()


def _word_on_line(a: Point, b: Point, point_sides: Sequence[str], piece_mid: Sequence[str]) -> CrossingWord:
    """Core sweep along a -> b.

    point_sides[j-1]: detour side at the j-th interior lattice point.
    piece_mid[j]: midpoint treatment of primitive piece j ("L", "R" or "M").
    """
    d = _sub(b, a)
    g = math.gcd(*d)
    events = _straight_crossings(a, d)
    for j in range(1, g):
        p = (a[0] + d[0] * j // g, a[1] + d[1] * j // g)
        events.extend(_detour(p, d, point_sides[j - 1], Fraction(j, g)))
    # detour crossings share t; a stable sort keeps their angular order
    events.sort(key=lambda e: e.t)

    for e in events:
        if e.bias == MIDPOINT and e.detour_at is None:
            mode = piece_mid[_floor(e.t * g)]
            e.bias = NEAR_RIGHT if mode == RIGHT else MIDPOINT

    crossings = []
    prev = None
    for e in events:
        turn = None
        if prev is not None:
            v = _shared_endpoint(prev.seg, e.seg)
            if e.detour_at is not None and v == e.detour_at == prev.detour_at:
                # the detour keeps its centre on one side
                turn = SHARED_LEFT if e.bias == NEAR_LEFT else SHARED_RIGHT
            else:
                s = _cross(d, _sub(v, a))
                if s == 0:
                    raise InvariantViolation(f"shared endpoint {v} lies on the arc")
                turn = SHARED_LEFT if s > 0 else SHARED_RIGHT
        crossings.append(Crossing(e.label, e.bias, turn))
        prev = e
    return CrossingWord(tuple(crossings))


def _piece_modes(point_sides: Sequence[str], default: str) -> list[str]:
    """Midpoint rule per primitive piece from the sides of its two end points."""
    sides = [None] + list(point_sides) + [None]
    modes = []
    for j in range(len(sides) - 1):
        left, right = sides[j], sides[j + 1]
        known = [s for s in (left, right) if s is not None]
        if not known:
            modes.append(default)
        elif len(known) == 1 or known[0] == known[1]:
            modes.append(known[0])
        else:
            modes.append("M")
    return modes


def _check_side(side: str) -> str:
    s = {"L": LEFT, "LEFT": LEFT, "R": RIGHT, "RIGHT": RIGHT}.get(str(side).upper())
    if s is None:
        raise UsageError(f"side must be Left or Right, got {side!r}")
    return s


def crossing_word_segment(a, b, side: str = LEFT) -> CrossingWord:
    """Crossing word of the straight arc from a to b, detouring lattice points to one side."""
    a, b = _as_point(a), _as_point(b)
    if a == b:
        raise UsageError("the endpoints of an arc must differ")
    side = _check_side(side)
    g = math.gcd(b[0] - a[0], b[1] - a[1])
    sides = [side] * (g - 1)
    return _word_on_line(a, b, sides, _piece_modes(sides, side))


# polylines ------------------------------------------------------------------

@dataclass(frozen=True)
class PolylineArc:
    waypoints: tuple[Point, ...]
    turns: tuple[int, ...]  # -1 for a -pi wrap (left), +1 for +pi (right)
    end_bias: str = LEFT

    def __post_init__(self):
        pts = tuple(_as_point(p) for p in self.waypoints)
        if len(pts) < 2:
            raise UsageError("a polyline needs at least two waypoints")
        if any(p == q for p, q in zip(pts, pts[1:])):
            raise UsageError("consecutive waypoints must differ")
        turns = tuple(_turn_sign(t) for t in self.turns)
        if len(turns) != len(pts) - 2:
            raise UsageError(f"{len(pts)} waypoints need {len(pts) - 2} turns")
        object.__setattr__(self, "waypoints", pts)
        object.__setattr__(self, "turns", turns)
        object.__setattr__(self, "end_bias", _check_side(self.end_bias))

    def to_dict(self) -> dict:
        return {
            "waypoints": [list(p) for p in self.waypoints],
            "turns": ["-pi" if t < 0 else "+pi" for t in self.turns],
            "end_bias": "left" if self.end_bias == LEFT else "right",
        }


def _turn_sign(t) -> int:
    if isinstance(t, str):
        key = t.strip().lower().replace(" ", "")
        table = {"-pi": -1, "+pi": 1, "pi": 1, "-π": -1, "+π": 1, "π": 1}
        if key in table:
            return table[key]
        raise UnsupportedFeature(f"only turns of +pi or -pi are supported, got {t!r}")
    if t in (-1, 1) and not isinstance(t, bool):
        return int(t)
    raise UnsupportedFeature(f"only turns of +pi or -pi are supported, got {t!r}")


def polyline_from_dict(data: dict) -> PolylineArc:
    if not isinstance(data, dict) or "waypoints" not in data:
        raise UsageError("polyline JSON needs 'waypoints'")
    return PolylineArc(
        tuple(tuple(p) for p in data["waypoints"]),
        tuple(data.get("turns", ())),
        data.get("end_bias", "left"),
    )


def crossing_word_polyline(arc: PolylineArc) -> CrossingWord:
    """Crossing word of a straightened arc whose turns are all +-pi.

    A wrap of exactly pi means the arc passes straight by the waypoint, so
    consecutive pieces must continue in the same direction.
    """
    pts = arc.waypoints
    a, b = pts[0], pts[-1]
    d = _sub(b, a)
    g = math.gcd(*d)
    step = (d[0] // g, d[1] // g)
    waypoint_side: dict[int, str] = {}
    for q_prev, q, q_next, t in zip(pts, pts[1:], pts[2:], arc.turns):
        u, v = _sub(q, q_prev), _sub(q_next, q)
        if _cross(u, v) != 0 or u[0] * v[0] + u[1] * v[1] <= 0:
            raise UnsupportedFeature(
                f"a turn of {'+' if t > 0 else '-'}pi at {q} needs collinear pieces in the same direction"
            )
    for q in pts[1:-1]:
        off = _sub(q, a)
        j = off[0] // step[0] if step[0] else off[1] // step[1]
        waypoint_side[j] = None  # filled below
    for q, t in zip(pts[1:-1], arc.turns):
        off = _sub(q, a)
        j = off[0] // step[0] if step[0] else off[1] // step[1]
        waypoint_side[j] = LEFT if t < 0 else RIGHT
    sides = [waypoint_side.get(j, arc.end_bias) for j in range(1, g)]
    return _word_on_line(a, b, sides, _piece_modes(sides, arc.end_bias))


# compiler -------------------------------------------------------------------

def poset_from_word(w: CrossingWord, k: int) -> FencePoset:
    """Weighted fence poset of an arc from its crossing word."""
    if k < 0:
        raise UsageError("k must be non-negative")
    cs = w.crossings
    if not cs:
        return EMPTY
    if k == 0:
        dirs = tuple(DOWN if c.turn == SHARED_RIGHT else UP for c in cs[1:])
        return FencePoset(len(cs), dirs, tuple(c.label for c in cs))
    dirs: list[str] = []
    labels: list[str] = []
    weights: list[Fraction] = []
    pairs = []
    kk, inv = Fraction(k), Fraction(1, k)
    for j, c in enumerate(cs):
        if j:
            dirs.append(DOWN if c.turn == SHARED_RIGHT else UP)
        # midpoint crossings count as near-left
        if c.bias == NEAR_RIGHT:
            dirs.append(DOWN)
            weights.extend((inv, kk))
        else:
            dirs.append(UP)
            weights.extend((kk, inv))
        labels.extend((c.label, c.label))
        pairs.append((2 * j + 1, 2 * j + 2))
    return FencePoset(len(labels), tuple(dirs), tuple(labels), tuple(weights), tuple(pairs))


def arc_length(w: CrossingWord, k: int) -> int:
    """k-Markov length, checked against the continued fraction of the extended shape."""
    p = poset_from_word(w, k)
    total = weighted_ideal_sum(p)
    ext = extend_poset(p, k)
    via_cf = cf_numerator(shape_of(ext)) if ext.size else 1
    if total != via_cf:
        raise InvariantViolation(f"weighted sum {total} differs from continued fraction value {via_cf}")
    return int(total)
