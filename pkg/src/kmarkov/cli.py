"""Command line interface.

Exit codes: 0 success, 1 a check failed or a counterexample was found,
2 bad usage or invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .contfrac import cf_eval, cf_numerator, parse_cf
from .errors import InvariantViolation, UnsupportedFeature, UsageError
from .lattice import (
    arc_length,
    crossing_word_polyline,
    crossing_word_segment,
    polyline_from_dict,
    poset_from_word,
    word_from_list,
)
from .markov import (
    compare_orders,
    markov_distance,
    markov_number,
    markov_table,
    tree_levels,
    verify_aigner,
    verify_ptolemy,
    verify_recurrences,
)
from .parallel import default_jobs
from .poset import (
    extend_poset,
    ideal_count,
    ideals_enumerate,
    poset_from_dict,
    poset_from_shape,
    poset_to_dict,
    shape_of,
    weighted_ideal_sum,
)
from .report import Report, dumps, table_csv
from .sampling import verify_identities
from .skein import CrossingOverlap, resolve_type0, resolve_type1, resolve_type2, verify_resolution_identity

OK, FAILED, USAGE = 0, 1, 2


# argument helpers -----------------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return parse_cf(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _point(text: str) -> tuple[int, int]:
    vals = _int_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}")
    return vals[0], vals[1]


def _quad(text: str):
    pts = [_point(t) for t in text.split(";")]
    if len(pts) != 4:
        raise argparse.ArgumentTypeError("expected four points X,Y;X,Y;X,Y;X,Y")
    return pts


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _emit(args, text: str) -> None:
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_report(args, report: Report) -> int:
    _emit(args, report.to_json() if args.format == "json" else report.to_text())
    return OK if report.ok else FAILED


def _merge(name: str, reports: list[Report], params: dict) -> Report:
    if len(reports) == 1:
        return reports[0]
    summary, rows = {}, []
    for r in reports:
        k = r.params.get("k")
        for key, val in r.summary.items():
            summary[f"k={k} {key}"] = val
        rows.extend({"k": k, **row} for row in r.rows)
    cols = ["k"] + reports[0].columns if reports[0].columns else []
    return Report(name, params, all(r.ok for r in reports), summary, cols, rows)


# subcommands ----------------------------------------------------------------

def cmd_number(args) -> int:
    value = markov_number(args.k, args.fraction, args.method)
    _emit(args, dumps({"k": args.k, "fraction": args.fraction, "value": value}) if args.format == "json" else f"{value}\n")
    return OK


def cmd_tree(args) -> int:
    nodes = tree_levels(args.k, args.depth)
    if args.format == "json":
        _emit(args, dumps([
            {"path": p, "triple": list(t.as_tuple()), "farey": [f"{a}/{b}" for a, b in (f.left, f.mid, f.right)]}
            for p, t, f in nodes
        ]))
        return OK
    lines = []
    for path, t, f in nodes:
        lines.append(f"{path or '(root)':<{args.depth + 6}} ({t.a}, {t.b}, {t.c})  [{f}]")
    _emit(args, "\n".join(lines) + "\n")
    return OK


def cmd_distance(args) -> int:
    value = markov_distance(args.k, args.src, args.dst, args.side[0].upper())
    if args.format == "json":
        _emit(args, dumps({"k": args.k, "from": list(args.src), "to": list(args.dst), "side": args.side, "distance": value}))
    else:
        _emit(args, f"{value}\n")
    return OK


def cmd_length(args) -> int:
    if args.word:
        w = word_from_list(_load_json(args.word))
    else:
        w = crossing_word_polyline(polyline_from_dict(_load_json(args.polyline)))
    value = arc_length(w, args.k)
    if args.format == "json":
        p = poset_from_word(w, args.k)
        ext = extend_poset(p, args.k)
        _emit(args, dumps({
            "k": args.k,
            "word": w.to_list(),
            "poset": poset_to_dict(p),
            "extended_shape": shape_of(ext) if ext.size else [],
            "length": value,
        }))
    else:
        _emit(args, f"{value}\n")
    return OK


def cmd_poset(args) -> int:
    p = poset_from_shape(args.shape) if args.shape is not None else poset_from_dict(_load_json(args.file))
    if args.count:
        n = weighted_ideal_sum(p) if p.is_weighted else ideal_count(p)
        _emit(args, dumps({"count": n}) if args.format == "json" else f"{n}\n")
    elif args.ideals:
        ideals = [sorted(i) for i in ideals_enumerate(p)]
        _emit(args, dumps({"ideals": ideals, "count": len(ideals)}))
    elif args.extend is not None:
        _emit(args, dumps(poset_to_dict(extend_poset(p, args.extend))))
    else:
        out = poset_to_dict(p)
        if p.size:
            out["shape"] = shape_of(p)
        _emit(args, dumps(out))
    return OK


def cmd_cf(args) -> int:
    if args.numerator:
        _emit(args, f"{cf_numerator(args.seq)}\n")
    else:
        _emit(args, f"{cf_eval(args.seq)}\n")
    return OK


def cmd_resolve(args) -> int:
    p1 = poset_from_dict(_load_json(args.p1))
    p2 = poset_from_dict(_load_json(args.p2))
    if args.type == "0":
        if args.overlap is None:
            raise UsageError("type 0 needs --overlap c,d,c',d'")
        if len(args.overlap) != 4:
            raise UsageError("--overlap takes four integers c,d,c',d'")
        res = resolve_type0(p1, p2, CrossingOverlap(*args.overlap))
    elif args.type == "1":
        if args.index is None:
            raise UsageError("type 1 needs --index i")
        res = resolve_type1(p1, p2, args.index)
    else:
        res = resolve_type2(p1, p2)
    checks = [verify_resolution_identity(p1, p2, res, "dp")]
    if max(p.size for p in (p1, p2) + res.parts()) <= 20:
        checks.append(verify_resolution_identity(p1, p2, res, "enumerate"))
    _emit(args, dumps({"resolution": res.to_dict(), "verification": [c.to_dict() for c in checks]}))
    return OK if all(c.equal for c in checks) else FAILED


def cmd_verify(args) -> int:
    jobs = args.jobs
    if args.check == "aigner":
        report = verify_aigner(args.k or [0, 1, 2, 3], args.max_q, jobs)
    elif args.check == "ptolemy":
        ks = args.k or [0]
        if args.quad:
            reports = [verify_ptolemy(k, quad=args.quad) for k in ks]
        else:
            reports = [verify_ptolemy(k, args.max_coord, args.min_coord, jobs) for k in ks]
        report = _merge("ptolemy", reports, {**reports[0].params, "k": ks})
    elif args.check == "recurrences":
        ks = args.k or [0, 1]
        reports = [verify_recurrences(k, args.max_n) for k in ks]
        report = _merge("recurrences", reports, {"k": ks, "n_max": args.max_n})
    else:
        report = verify_identities(args.seed, args.samples, args.max_h, args.max_total, jobs)
    return _emit_report(args, report)


def cmd_compare(args) -> int:
    # report only: the ordering question is open, so nothing here can fail
    _emit_report(args, compare_orders(args.k, args.k2, args.max_q))
    return OK


def cmd_table(args) -> int:
    _emit(args, table_csv(markov_table(args.k, args.max_q)))
    return OK


# parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kmarkov", description="Exact k-Markov number toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--jobs", type=int, default=None,
                        help="worker processes for sweeps (default: $KMARKOV_JOBS or the number of cores)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=True):
        if formats:
            p.add_argument("--format", choices=["text", "json"], default="text")
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = sub.add_parser("number", help="m^(k) at a rational in [0,1]")
    p.add_argument("fraction", help="p/q, reduced")
    p.add_argument("--k", type=_nonneg, default=0)
    p.add_argument("--method", choices=["tree", "poset", "both"], default="tree")
    common(p)
    p.set_defaults(func=cmd_number)

    p = sub.add_parser("tree", help="k-Markov tree and Farey tree side by side")
    p.add_argument("--k", type=_nonneg, default=0)
    p.add_argument("--depth", type=_nonneg, default=3)
    common(p)
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("distance", help="k-Markov distance between lattice points")
    p.add_argument("--k", type=_nonneg, default=0)
    p.add_argument("--from", dest="src", type=_point, required=True, metavar="X,Y")
    p.add_argument("--to", dest="dst", type=_point, required=True, metavar="X,Y")
    p.add_argument("--side", choices=["left", "right"], default="left")
    common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("length", help="k-Markov length of an arc given as a crossing word or polyline")
    p.add_argument("--k", type=_nonneg, default=0)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--word", metavar="FILE")
    g.add_argument("--polyline", metavar="FILE")
    common(p)
    p.set_defaults(func=cmd_length)

    p = sub.add_parser("poset", help="fence posets from shapes or JSON")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--shape", type=_int_list, metavar="LIST")
    src.add_argument("--file", metavar="FILE")
    act = p.add_mutually_exclusive_group()
    act.add_argument("--count", action="store_true", help="number (or weighted sum) of order ideals")
    act.add_argument("--ideals", action="store_true", help="list every order ideal")
    act.add_argument("--extend", type=_nonneg, metavar="K", help="extended poset for parameter K")
    common(p)
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("cf", help="evaluate a finite continued fraction")
    p.add_argument("seq", type=_int_list, metavar="LIST")
    p.add_argument("--numerator", action="store_true", help="print only the numerator")
    common(p, formats=False)
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("resolve", help="skein resolution of two posets")
    p.add_argument("--type", choices=["0", "1", "2"], required=True)
    p.add_argument("--p1", required=True, metavar="FILE")
    p.add_argument("--p2", required=True, metavar="FILE")
    p.add_argument("--overlap", type=_int_list, metavar="c,d,c',d'")
    p.add_argument("--index", type=int, metavar="i")
    common(p, formats=False)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("verify", help="run a verification sweep")
    vsub = p.add_subparsers(dest="check", required=True)
    for name in ("aigner", "ptolemy", "recurrences", "identities"):
        v = vsub.add_parser(name)
        v.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
        common(v)
        v.set_defaults(func=cmd_verify)
        if name != "identities":
            v.add_argument("--k", type=_int_list, metavar="LIST")
        if name == "aigner":
            v.add_argument("--max-q", type=int, default=30)
        elif name == "ptolemy":
            v.add_argument("--max-coord", type=int, default=3)
            v.add_argument("--min-coord", type=int, default=0)
            v.add_argument("--quad", type=_quad, metavar="X,Y;X,Y;X,Y;X,Y")
        elif name == "recurrences":
            v.add_argument("--max-n", type=int, default=20)
        else:
            v.add_argument("--samples", type=int, default=1000)
            v.add_argument("--max-h", type=int, default=12)
            v.add_argument("--max-total", type=int, default=16)

    p = sub.add_parser("compare-orders", help="pairs ordered differently by m^(k) and m^(k2)")
    p.add_argument("--k", type=_nonneg, required=True)
    p.add_argument("--k2", type=_nonneg, required=True)
    p.add_argument("--max-q", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("table", help="CSV table of m^(k)_{p/q}")
    p.add_argument("--k", type=_int_list, default=[0], metavar="LIST")
    p.add_argument("--max-q", type=int, default=10)
    common(p, formats=False)
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    if args.jobs is None:
        args.jobs = default_jobs()
    elif args.jobs < 1:
        parser.print_usage(sys.stderr)
        print("kmarkov: error: --jobs must be at least 1", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except (UsageError, UnsupportedFeature) as exc:
        print(f"kmarkov: error: {exc}", file=sys.stderr)
        return USAGE
    except InvariantViolation as exc:
        print(f"kmarkov: invariant violated: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
