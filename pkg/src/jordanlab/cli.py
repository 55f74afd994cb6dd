"""Batch command-line front end.  One subcommand per invocation, one report out.

Exit codes: 0 success, 1 negative domain verdict, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import degcalc, groupengine as ge, lpdecomp as lp, towernum as tn, varlab as vl
from .ffarith import FieldError, MatrixOverF, field_create

SCHEMA = "jordanlab/1"
EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _common(p):
    p.add_argument("--in", dest="inp", metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--cap-group", type=_positive, default=ge.DEFAULT_GROUP_CAP)
    p.add_argument("--cap-points", type=_positive, default=vl.DEFAULT_BUDGET)
    p.add_argument("--cap-bits", type=_positive, default=tn.DEFAULT_CAP_BITS)
    p.add_argument("--ktest", type=_positive, default=2)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--dry-run", action="store_true")


def build_parser():
    ap = argparse.ArgumentParser(prog="jordanlab", description=__doc__.splitlines()[0])
    top = ap.add_subparsers(dest="area", required=True)

    f = top.add_parser("field").add_subparsers(dest="cmd", required=True)
    fm = f.add_parser("make")
    _common(fm)
    fm.add_argument("--p", type=int, required=True)
    fm.add_argument("--e", type=_positive, default=1)

    g = top.add_parser("group").add_subparsers(dest="cmd", required=True)
    for name in ("close", "info", "decompose", "classify", "census", "escape"):
        sp = g.add_parser(name)
        _common(sp)
        if name == "decompose":
            sp.add_argument("--p", type=int)
        if name == "classify":
            sp.add_argument("--algebra", choices=("gl", "sl"), default="sl")
            sp.add_argument("--all", action="store_true", help="classify every element")
        if name == "escape":
            sp.add_argument("--variety", required=True, metavar="PATH")
    sw = g.add_parser("sandwich")
    _common(sw)
    sw.add_argument("--q", type=_positive, default=5)
    sw.add_argument("--k", type=_positive, default=2)

    v = top.add_parser("variety").add_subparsers(dest="cmd", required=True)
    vp = v.add_parser("points")
    _common(vp)
    vp.add_argument("--k", type=_positive, default=1)
    vd = v.add_parser("dim")
    _common(vd)

    d = top.add_parser("dimest").add_subparsers(dest="cmd", required=True)
    dr = d.add_parser("run")
    _common(dr)
    dr.add_argument("--family", choices=("SL2", "PGL2"), required=True)
    dr.add_argument("--kind", choices=(lp.UNIPOTENT_CONE, lp.SPLIT_TORUS, lp.NONSPLIT_TORUS_CLASS),
                    required=True)
    dr.add_argument("--q", required=True, help="comma-separated field sizes")

    b = top.add_parser("bounds").add_subparsers(dest="cmd", required=True)
    be = b.add_parser("eval")
    _common(be)
    be.add_argument("rule")
    be.add_argument("params", nargs="*", help="name=value")
    be.add_argument("--output")
    ba = b.add_parser("audit")
    _common(ba)
    ba.add_argument("check", nargs="?", default="ALL")
    bc = b.add_parser("catalog")
    _common(bc)
    bc.add_argument("--max-order", type=_positive, default=10 ** 6)
    bc.add_argument("--p", default="ALL")
    return ap


# -- helpers ---------------------------------------------------------------------

def _load_json(path):
    if not path:
        raise UsageError("--in PATH is required")
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _group(args):
    doc = _load_json(args.inp)
    try:
        return ge.group_from_json(doc, cap=args.cap_group)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad group input: {exc}") from None


def _variety(path):
    doc = _load_json(path)
    try:
        return vl.variety_from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad variety input: {exc}") from None


def _plain(x):
    """Make a report JSON-safe and deterministic."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, tn.TowerExpr):
        return tn.to_text(x)
    if isinstance(x, MatrixOverF):
        return [list(r) for r in x.rows()]
    if isinstance(x, ge.Subgroup):
        return {"order": x.order}
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(v) for v in x)
    if hasattr(x, "__index__") and not isinstance(x, bool):
        return int(x)
    return x


def _emit(args, report, rows=None):
    if args.format == "csv":
        if rows is None:
            raise UsageError("csv output is only available for sweep tables")
        buf = io.StringIO()
        keys = [k for k in rows[0] if not isinstance(rows[0][k], (dict, list))] if rows else []
        w = csv.DictWriter(buf, fieldnames=keys, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: r[k] for k in keys})
        text = buf.getvalue()
    else:
        report = dict(_plain(report), schema=SCHEMA)
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_params(items):
    out = {}
    for it in items:
        if "=" not in it:
            raise UsageError(f"parameter {it!r} is not name=value")
        k, v = it.split("=", 1)
        out[k] = v if not v.lstrip("-").isdigit() else int(v)
    return out


# -- commands --------------------------------------------------------------------

def cmd_field_make(args):
    F = field_create(args.p, args.e)
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    return {"p": F.p, "e": F.e, "q": F.q, "modulus": list(F.modulus), "generator": F.gen,
            "generator_vec": list(F.vec(F.gen))}, EXIT_OK


def cmd_group_close(args):
    G = _group(args)
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    return {"order": G.order, "n": G.n, "field": {"p": G.field.p, "e": G.field.e},
            "generators": [list(g) for g in G.generators]}, EXIT_OK


def cmd_group_info(args):
    G = _group(args)
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    W = G.whole()
    return {"order": G.order, "n": G.n, "field": {"p": G.field.p, "e": G.field.e},
            "center_order": ge.center(W).order, "derived_order": ge.derived_subgroup(W).order,
            "solvable": ge.is_solvable(W), "abelian": ge.is_abelian(W),
            "spectrum": {str(k): v for k, v in ge.order_spectrum(W).items()},
            "classes": len(ge.conjugacy_classes(W))}, EXIT_OK


def cmd_group_decompose(args):
    G = _group(args)
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    try:
        return lp.decompose(G, args.p).to_json(), EXIT_OK
    except lp.VerificationFailed as exc:
        return {"verified": False, "clause": exc.clause, "witness": str(exc.witness)}, EXIT_NEGATIVE


def cmd_group_classify(args):
    G = _group(args)
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    idx = range(G.order) if args.all else G.gens
    out = []
    for i in idx:
        c = lp.classify_element(G.matrix(i), algebra=args.algebra)
        out.append({"element": list(G.elements[i]), **c.to_json()})
    return {"algebra": args.algebra, "elements": out}, EXIT_OK


def cmd_group_census(args):
    G = _group(args)
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    r = lp.unipotent_census(G)
    return r, EXIT_OK if r["half_inequality"] else EXIT_NEGATIVE


def cmd_group_escape(args):
    G = _group(args)
    V = _variety(args.variety)
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    try:
        return lp.escape(G, V, args.ktest), EXIT_OK
    except lp.NotContained as exc:
        return {"error": "NotContained", "detail": str(exc)}, EXIT_NEGATIVE


def cmd_group_sandwich(args):
    if args.dry_run:
        ge.field_of(args.q ** args.k)
        return {"valid": True}, EXIT_OK
    r = lp.sandwich_experiment(args.q, args.k)
    return r, EXIT_OK if r["ok"] else EXIT_NEGATIVE


def cmd_variety_points(args):
    V = _variety(args.inp)
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    pts = vl.points_over(V, args.k, args.cap_points)
    return {"k": args.k, "count": len(pts), "points": [list(p) for p in pts]}, EXIT_OK


def cmd_variety_dim(args):
    V = _variety(args.inp)
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    r = vl.empirical_dimension(V, range(1, args.ktest + 1), args.cap_points)
    return dict(r, heuristic=True), EXIT_OK


def cmd_dimest_run(args):
    try:
        qs = [int(x) for x in args.q.split(",") if x]
    except ValueError:
        raise UsageError("--q takes comma-separated integers") from None
    for q in qs:
        ge.field_of(q)
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    rows = lp.dimest_census(args.family, args.kind, qs)
    ok = all(r["holds"] for r in rows)
    return {"rows": rows}, (EXIT_OK if ok else EXIT_NEGATIVE), rows


def cmd_bounds_eval(args):
    params = _parse_params(args.params)
    if args.rule not in degcalc.REGISTRY:
        raise UsageError(f"unknown rule {args.rule}")
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    r = degcalc.eval_rule(args.rule, params, args.output)
    if isinstance(r, dict):
        return {"rule": args.rule, "outputs": {k: tn.to_text(v) for k, v in r.items()}}, EXIT_OK
    return {"rule": args.rule, "value": tn.to_text(r)}, EXIT_OK


def cmd_bounds_audit(args):
    if args.check != "ALL" and args.check not in degcalc.AUDITS:
        raise UsageError(f"unknown audit {args.check}")
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    entries = degcalc.audit(args.check)
    s = degcalc.summarize(entries)
    code = EXIT_OK if s["FAIL"] == 0 and s["UNDECIDED"] == 0 else EXIT_NEGATIVE
    return {"check": args.check, "summary": s, "entries": entries}, code


def cmd_bounds_catalog(args):
    p = args.p if args.p == "ALL" else int(args.p)
    if args.dry_run:
        return {"valid": True}, EXIT_OK
    entries = lp.lie_catalog(args.max_order, p)
    coll = {f"{o}:{pp}": tags for (o, pp), tags in lp.catalog_collisions(args.max_order).items()
            if p == "ALL" or pp == p}
    return {"max_order": args.max_order, "p": p, "entries": entries, "collisions": coll}, EXIT_OK, entries


COMMANDS = {
    ("field", "make"): cmd_field_make,
    ("group", "close"): cmd_group_close,
    ("group", "info"): cmd_group_info,
    ("group", "decompose"): cmd_group_decompose,
    ("group", "classify"): cmd_group_classify,
    ("group", "census"): cmd_group_census,
    ("group", "escape"): cmd_group_escape,
    ("group", "sandwich"): cmd_group_sandwich,
    ("variety", "points"): cmd_variety_points,
    ("variety", "dim"): cmd_variety_dim,
    ("dimest", "run"): cmd_dimest_run,
    ("bounds", "eval"): cmd_bounds_eval,
    ("bounds", "audit"): cmd_bounds_audit,
    ("bounds", "catalog"): cmd_bounds_catalog,
}

_INPUT_ERRORS = (UsageError, FieldError, ge.GroupError, vl.VarietyError, lp.BadInput,
                 degcalc.DegcalcError, tn.ParseError, lp.LpError)


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.format == "csv" and (args.area, args.cmd) not in (("dimest", "run"), ("bounds", "catalog")):
        print("jordanlab: csv output is only available for sweep tables", file=sys.stderr)
        return EXIT_USAGE
    try:
        res = COMMANDS[(args.area, args.cmd)](args)
        report, code = res[0], res[1]
        rows = res[2] if len(res) > 2 else None
        _emit(args, report, rows)
        return code
    except _INPUT_ERRORS as exc:
        print(f"jordanlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
