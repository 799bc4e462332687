"""Seeded random instances for the property sweeps.

Every sample draws from its own generator spawned from one seed, so the
results do not depend on how the work is split across processes.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .contfrac import cf_skein_check
from .parallel import pmap
from .poset import (
    FencePoset,
    enumerated_count,
    enumerated_weighted_sum,
    fence,
    ideal_count,
    weighted_ideal_sum,
)
from .report import Report
from .skein import (
    find_crossing_overlaps,
    resolve_type0,
    resolve_type1,
    resolve_type2,
    verify_resolution_identity,
)


def random_fence(rng: np.random.Generator, h: int, weighted: bool = False) -> FencePoset:
    dirs = "".join(rng.choice(["U", "D"], size=max(h - 1, 0)))
    if not weighted:
        return fence(dirs) if h else FencePoset(0)
    ws = [Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 6))) for _ in range(h)]
    return FencePoset(h, tuple(dirs), None, tuple(ws))


def _sizes(rng, max_h: int, max_total: int, min1: int = 1, min2: int = 1) -> tuple[int, int]:
    while True:
        h1 = int(rng.integers(min1, max_h + 1))
        h2 = int(rng.integers(min2, max_h + 1))
        if h1 + h2 <= max_total:
            return h1, h2


def sample_resolution(rng, kind: str, max_h: int = 12, max_total: int = 16):
    """Draw (p1, p2, resolution, description) for one resolution type."""
    if kind == "0":
        while True:
            h1, h2 = _sizes(rng, max_h, max_total, 2, 2)
            p1, p2 = random_fence(rng, h1), random_fence(rng, h2)
            ovs = find_crossing_overlaps(p1, p2)
            if ovs:
                ov = ovs[int(rng.integers(len(ovs)))]
                return p1, p2, resolve_type0(p1, p2, ov), {"overlap": list(ov.as_tuple())}
    if kind == "1":
        h1, h2 = _sizes(rng, max_h, max_total, 1, 2)
        p1, p2 = random_fence(rng, h1), random_fence(rng, h2)
        i = int(rng.integers(1, h2))
        return p1, p2, resolve_type1(p1, p2, i), {"index": i}
    h1, h2 = _sizes(rng, max_h, max_total)
    p1, p2 = random_fence(rng, h1), random_fence(rng, h2)
    return p1, p2, resolve_type2(p1, p2), {}


def _resolution_task(args):
    kind, seed_seq, max_h, max_total = args
    rng = np.random.default_rng(seed_seq)
    p1, p2, res, extra = sample_resolution(rng, kind, max_h, max_total)
    enum = verify_resolution_identity(p1, p2, res, mode="enumerate")
    dp = verify_resolution_identity(p1, p2, res, mode="dp")
    if enum.equal and dp.equal and enum.counts == dp.counts:
        return None
    return {"check": f"type{kind}", "p1": p1.word() or "-", "p2": p2.word() or "-",
            "detail": {**extra, "enumerated": enum.to_dict(), "dp": dp.to_dict()}}


def _count_task(args):
    seed_seq, max_h = args
    rng = np.random.default_rng(seed_seq)
    p = random_fence(rng, int(rng.integers(0, max_h + 1)), weighted=True)
    ok = ideal_count(p) == enumerated_count(p) and weighted_ideal_sum(p) == enumerated_weighted_sum(p)
    if ok:
        return None
    return {"check": "weighted", "p1": p.word() or "-", "p2": "", "detail": {"weights": [str(w) for w in p.weights]}}


def _skein_task(args):
    seed_seq, = args
    rng = np.random.default_rng(seed_seq)
    a, c, b = (int(v) for v in rng.integers(0, 11, size=3))
    mu1 = [int(v) for v in rng.integers(0, 11, size=int(rng.integers(0, 6)))]
    mu2 = [int(v) for v in rng.integers(0, 11, size=int(rng.integers(0, 6)))]
    bad = [cf_skein_check(mu1, a, c, b, mu2, v).to_dict() for v in ("merge", "split")]
    bad = [r for r in bad if not r["equal"]]
    if not bad:
        return None
    return {"check": "numerator", "p1": "", "p2": "", "detail": {"mu1": mu1, "a": a, "c": c, "b": b, "mu2": mu2, "failed": bad}}


def verify_identities(seed: int = 0, samples: int = 1000, max_h: int = 12, max_total: int = 16,
                      jobs: int | None = 1) -> Report:
    """Random checks of the resolution identity and of the numerator identities."""
    kinds = ("0", "1", "2")
    children = np.random.SeedSequence(seed).spawn(len(kinds) + 2)
    results = {}
    for kind, child in zip(kinds, children):
        tasks = [(kind, s, max_h, max_total) for s in child.spawn(samples)]
        results[f"type{kind}"] = pmap(_resolution_task, tasks, jobs)
    results["weighted"] = pmap(_count_task, [(s, max_h) for s in children[3].spawn(samples)], jobs)
    results["numerator"] = pmap(_skein_task, [(s,) for s in children[4].spawn(samples)], jobs)
    rows = [r for rs in results.values() for r in rs if r is not None]
    summary = {name: len(rs) for name, rs in results.items()}
    summary["failures"] = len(rows)
    params = {"seed": seed, "samples": samples, "max_h": max_h, "max_total": max_total}
    return Report("identities", params, not rows, summary, ["check", "p1", "p2", "detail"], rows)
