"""Registry of explicit degree bounds and constants, and an audit engine for the
inequality chains relating them.

Rules are data: each entry lists its parameters and one or more output
templates in the tower text form.  Parameters that only enter through
concrete integer arithmetic (``dimfV - 1``, integer roots) are produced by the
``derive`` column, which runs on plain integers before substitution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import towernum as tn
from .towernum import TowerExpr, compare, parse, subst

PARAM_NAMES = ("d", "D", "r", "n", "iota", "x", "k", "q", "l", "j", "dimV", "degV", "D1", "D2",
               "mdeg", "degW", "Dp", "dhat", "Delta", "degH", "dimH", "dimfV")


class DegcalcError(Exception):
    pass


class UnknownRule(DegcalcError):
    pass


class MissingParam(DegcalcError):
    pass


class BadType(DegcalcError):
    pass


@dataclass(frozen=True)
class BoundDescriptor:
    """Upper-bound data for a variety (and optionally a morphism)."""
    dim: int
    deg: TowerExpr
    mdeg: TowerExpr | None = None


@dataclass(frozen=True)
class Rule:
    rid: str
    params: tuple
    outputs: dict
    what: str
    derive: dict = field(default_factory=dict)
    monotone: tuple = ()


def _iroot(q: int, m: int):
    """floor and ceil of q**(1/m)."""
    lo = int(round(q ** (1.0 / m)))
    while lo ** m > q:
        lo -= 1
    while (lo + 1) ** m <= q:
        lo += 1
    hi = lo if lo ** m == q else lo + 1
    return lo, hi


def _r29_derive(p):
    lo, hi = _iroot(p["q"], p["dimV"])
    return {"root_lo": max(lo - 1, 0), "root_hi": hi}


_PHI = "pow(mul(2, d, D, add(iota, 1)), mul(x, add(d, 1), pow(d, x)))"

# id, params, outputs, description, derive, monotone params
_TABLE = [
    Rule("R1", ("D1", "D2"), {"deg": "mul(D1, D2)"},
         "degree of an intersection of two varieties", monotone=("D1", "D2")),
    Rule("R2", ("degV", "mdeg", "dimfV"), {"deg": "mul(degV, pow(mdeg, dimfV))"},
         "degree of the closure of the image of V under f", monotone=("degV", "mdeg", "dimfV")),
    Rule("R3", ("degV", "degW", "mdeg", "dimfV"), {"deg": "mul(degV, degW, pow(mdeg, dimfV))"},
         "degree of the preimage of W under f restricted to V", monotone=("degV", "degW", "mdeg", "dimfV")),
    Rule("R4", ("mdeg", "dimfV", "degV"), {"deg": "mul(pow(mdeg, e), degV)"},
         "degree of the locus of exceptional fibres",
         derive={"e": lambda p: {"e": p["dimfV"] - 1}}, monotone=("mdeg", "dimfV", "degV")),
    Rule("R5", ("d", "D"), {"count": "add(1, mul(add(d, 1), pow(D, add(d, 1))))"},
         "number of members needed to realize an intersection", monotone=("d", "D")),
    Rule("R6", ("d", "D"), {"deg": "pow(D, add(d, 1))"},
         "degree of an arbitrary intersection of degree-D varieties in dimension d", monotone=("d", "D")),
    Rule("R7", ("Dp", "D", "dhat"), {"deg": "mul(Dp, pow(D, add(dhat, 1)))"},
         "degree of Y meet an intersection", monotone=("Dp", "D", "dhat")),
    Rule("R8", ("D",), {"torus": "D", "borel": "D"},
         "degree of maximal tori and Borel subgroups", monotone=("D",)),
    Rule("R9", ("dimH",), {"deg": "pow(dimH, dimH)"},
         "degree of a connected unipotent subgroup", monotone=("dimH",)),
    Rule("R10", ("d", "D"), {"deg": "min(D, pow(d, d))"},
         "degree of a maximal connected unipotent subgroup", monotone=("d", "D")),
    Rule("R11", ("n", "d", "D"), {"deg": "min(pow(mul(n, D), add(d, 1)), pow(d, d))"},
         "degree of the unipotent radical", monotone=("n", "d", "D")),
    Rule("R12", ("d", "D"), {"subset": "add(d, 1)", "deg": "D"},
         "size of a determining subset and degree of a centralizer", monotone=("d", "D")),
    Rule("R13", ("degV", "dimV"), {"deg": "pow(degV, add(dimV, 1))"},
         "escape: either the group is this small or lies in a subgroup of this degree",
         monotone=("degV", "dimV")),
    Rule("R14", ("n", "Delta", "d", "D", "degH"), {
        "M": "binom(add(pow(n, 2), Delta), Delta)",
        "M_upper": "pow(add(pow(n, 2), Delta), min(pow(n, 2), Delta))",
        "m": "pow(2, mul(2, binom(add(pow(n, 2), Delta), Delta)))",
        "deg_G": "mul(binom(add(pow(n, 2), Delta), Delta), pow(2, add(binom(add(pow(n, 2), Delta), Delta), pow(n, 2), 4)), Delta, D)",
        "deg_H": "mul(binom(add(pow(n, 2), Delta), Delta), pow(2, add(binom(add(pow(n, 2), Delta), Delta), pow(n, 2), 4)), Delta, degH)",
        "deg_Q": "mul(pow(binom(add(pow(n, 2), Delta), Delta), add(d, 1)), pow(2, add(binom(add(pow(n, 2), Delta), Delta), pow(n, 2), d, 5)), pow(Delta, add(d, 1)), D)",
        "mdeg_beta": "mul(2, binom(add(pow(n, 2), Delta), Delta), Delta)",
    }, "quotient by a subgroup defined in degree Delta", monotone=("n", "Delta", "d", "D", "degH")),
    Rule("R15", ("n", "d", "iota"), {
        "poly_deg": "mul(add(iota, 1), pow(d, d))",
        "mdeg_beta": "mul(2, pow(add(pow(n, 2), mul(add(iota, 1), pow(d, d))), pow(n, 2)), add(iota, 1), pow(d, d))",
        "m": "pow(2, mul(2, pow(add(pow(n, 2), mul(add(iota, 1), pow(d, d))), pow(n, 2))))",
    }, "quotient by the characteristic subgroup over the unipotent radical", monotone=("n", "d", "iota")),
    Rule("R16", ("r",), {"deg": "pow(mul(2, r), mul(pow(2, 16), pow(r, 2)))"},
         "degree of an adjoint group in its adjoint embedding, uniform in the rank", monotone=("r",)),
    Rule("R17", ("r",), {"order": "pow(mul(2, r), r)"},
         "Weyl group order, uniform bound", monotone=("r",)),
    Rule("R18", ("r",), {"order": "add(r, 1)"},
         "order of the weight lattice modulo the root lattice", monotone=("r",)),
    Rule("R19", ("iota", "d"), {"mdeg": "add(iota, 1)", "cap": "d"},
         "maximum degree of the representation on the graded Lie algebra", monotone=("iota", "d")),
    Rule("R20", ("iota", "n"), {"mdeg": "add(iota, 1)", "cap": "add(n, 1)"},
         "maximum degree of the adjoint map", monotone=("iota", "n")),
    Rule("R21", ("d", "degV", "dimV", "D"), {
        "C": "pow(mul(2, d, degV), pow(d, dimV))",
        "threshold": "pow(mul(2, d, D), add(d, 1))",
    }, "dimensional estimate constant and small-group threshold", monotone=("d", "degV", "dimV", "D")),
    Rule("R22", ("d", "degV", "dimV", "k"), {"C": "pow(mul(2, d, degV), mul(k, pow(d, dimV)))"},
         "dimensional estimate in the k-fold product", monotone=("d", "degV", "dimV", "k")),
    Rule("R23", ("d", "degV", "k"), {"C": "mul(k, pow(mul(2, d, degV), pow(d, dm1)))"},
         "crude dimensional estimate in the k-fold product",
         derive={"dm1": lambda p: {"dm1": p["d"] - 1}}, monotone=("d", "degV", "k")),
    Rule("R24", ("x", "d", "D", "iota"), {"phi": _PHI},
         "two-sided centralizer constant", monotone=("x", "d", "D", "iota")),
    Rule("R25", ("d", "D", "r", "n", "iota"), {
        "A1": "pow(mul(2, d, D, r, n, iota), pow(mul(2, d, D, r, iota), mul(10, pow(d, 4))))",
        "B1": "pow(mul(2, d, D, r, n, iota), pow(mul(2, d, D, r, iota), mul(11, pow(d, 4))))",
        "A2": "pow(mul(2, d, D), mul(4, d))",
        "B2": "pow(mul(2, d, D, r), mul(4, pow(d, 2)))",
    }, "largeness and escape thresholds for finding a group of Lie type",
        monotone=("d", "D", "r", "n", "iota")),
    Rule("R26", ("d", "n", "iota", "r", "D"), {
        "deg": "mul(pow(mul(2, d, n, iota), pow(mul(2, d, n, iota), add(mul(pow(2, 20), pow(d, 4), pow(r, 2)), mul(2, d, pow(n, 2))))), pow(D, add(d, 1)))",
    }, "degree after one descent step", monotone=("d", "n", "iota", "r", "D")),
    Rule("R27", ("n",), {"J": "pow(n, pow(n, mul(pow(2, 23), pow(n, 10))))"},
         "bound on the index of the Lie-type layer", monotone=("n",)),
    Rule("R28", ("d", "l", "j", "degV"), {
        "deg_F": "mul(pow(2, d), pow(l, dm1), pow(degV, add(j, 1)))",
        "deg_E": "mul(pow(mul(2, l), d), pow(degV, l))",
    }, "degrees in the inductive step of the dimensional estimate",
        derive={"dm1": lambda p: {"dm1": p["d"] - 1}}, monotone=("d", "l", "j", "degV")),
    Rule("R29", ("q", "d", "dimV"), {
        "lower": "pow(root_lo, d)",
        "upper": "pow(root_hi, d)",
    }, "two-sided bound on the order of the fixed-point group; integer roots rounded outward",
        derive={"roots": _r29_derive}, monotone=("q",)),
    Rule("R30", ("d", "D", "iota"), {"C": "pow(mul(2, d, D, iota), pow(mul(2, d, D, iota), mul(5, pow(d, 4))))"},
         "index of the commutator subgroup chain", monotone=("d", "D", "iota")),
]

REGISTRY = {r.rid: r for r in _TABLE}
_PARSED: dict = {}


def _template(rid, name):
    key = (rid, name)
    if key not in _PARSED:
        _PARSED[key] = parse(REGISTRY[rid].outputs[name])
    return _PARSED[key]


def _norm_params(params):
    out = {}
    for k, v in params.items():
        if k == "type":
            out[k] = v
            continue
        if isinstance(v, str):
            v = parse(v)
        out[k] = v if isinstance(v, TowerExpr) else tn.lit(v)
    return out


def eval_rule(rule_id: str, params: dict, output: str | None = None):
    """Instantiate a rule.  Single-output rules return a TowerExpr; others
    return a dict of named TowerExprs unless ``output`` selects one."""
    if rule_id == "R17" and "type" in params:
        t, r = _split_type(params["type"], params.get("r"))
        return tn.lit(group_data(t, r).weyl_order)
    if rule_id == "R16" and "type" in params:
        t, r = _split_type(params["type"], params.get("r"))
        return group_data(t, r).adjoint_degree
    if rule_id not in REGISTRY:
        raise UnknownRule(rule_id)
    rule = REGISTRY[rule_id]
    p = _norm_params(params)
    missing = [x for x in rule.params if x not in p]
    if missing:
        raise MissingParam(f"{rule_id} needs {', '.join(missing)}")
    env = {x: p[x] for x in rule.params}
    for fn in rule.derive.values():
        ints = {}
        for x in rule.params:
            if not p[x].is_literal:
                raise MissingParam(f"{rule_id} needs a concrete value for {x}")
            ints[x] = p[x].value
        for name, v in fn(ints).items():
            if v < 0:
                raise DegcalcError(f"{rule_id}: derived {name} is negative")
            env[name] = v
    names = [output] if output else list(rule.outputs)
    res = {}
    for name in names:
        if name not in rule.outputs:
            raise UnknownRule(f"{rule_id} has no output {name}")
        res[name] = subst(_template(rule_id, name), env)
    if len(res) == 1:
        return next(iter(res.values()))
    return res


def image_descriptor(degV, mdeg, dimfV: int) -> BoundDescriptor:
    """Descriptor for the closure of f(V), given dim f(V)."""
    deg = eval_rule("R2", {"degV": degV, "mdeg": mdeg, "dimfV": dimfV})
    return BoundDescriptor(dimfV, deg, mdeg if isinstance(mdeg, TowerExpr) else tn.lit(mdeg))


# -- group types ---------------------------------------------------------------

@dataclass(frozen=True)
class GroupTypeData:
    type: str
    rank: int
    dim: int
    weyl_order: int
    adjoint_degree: TowerExpr
    fundamental_bound: int

    @property
    def tag(self):
        return f"{self.type}{self.rank}"


_EXCEPTIONAL = {("E", 6): (78, 51840), ("E", 7): (133, 2903040), ("E", 8): (248, 696729600),
                ("F", 4): (52, 1152), ("G", 2): (14, 12)}
_SPECIAL_DEG = {("A", 1): 16, ("B", 2): 384, ("G", 2): tn.power(2, 343)}


def _split_type(t, r=None):
    t = str(t).strip()
    if len(t) > 1 and t[1:].isdigit():
        return t[0].upper(), int(t[1:])
    if r is None:
        raise BadType(f"missing rank for type {t}")
    return t.upper(), int(r.value if isinstance(r, TowerExpr) else r)


def _valid(t, r):
    if t == "A":
        return r >= 1
    if t == "B":
        return r >= 2
    if t == "C":
        return r >= 3
    if t == "D":
        return r >= 4
    return (t, r) in _EXCEPTIONAL


def group_data(type_tag: str, r: int | None = None) -> GroupTypeData:
    t, r = _split_type(type_tag, r)
    if not _valid(t, r):
        raise BadType(f"no simple type {t}{r}")
    if t == "A":
        dim, weyl = r * r + 2 * r, math.factorial(r + 1)
    elif t in "BC":
        dim, weyl = 2 * r * r + r, 2 ** r * math.factorial(r)
    elif t == "D":
        dim, weyl = 2 * r * r - r, 2 ** (r - 1) * math.factorial(r)
    else:
        dim, weyl = _EXCEPTIONAL[(t, r)]
    generic = eval_rule("R16", {"r": r})
    if (t, r) in _SPECIAL_DEG:
        specific = tn.lit(_SPECIAL_DEG[(t, r)]) if isinstance(_SPECIAL_DEG[(t, r)], int) else _SPECIAL_DEG[(t, r)]
    elif t in "ABCD":
        specific = tn.mul(2 * r + 1, tn.power(2, (2 * r + 1) ** 2), tn.power(2 * r + 2, 2 * r * r + r))
    else:
        specific = tn.power(2, dim ** 3)
    deg = specific if compare(specific, generic) in (tn.LT, tn.EQ) else generic
    return GroupTypeData(t, r, dim, weyl, deg, r + 1)


def audit_types():
    """Default grid: every simple type of rank at most 4."""
    out = [("A", r) for r in range(1, 5)] + [("B", r) for r in range(2, 5)]
    out += [("C", 3), ("C", 4), ("D", 4), ("F", 4), ("G", 2)]
    return [group_data(t, r) for t, r in out]


# -- audits --------------------------------------------------------------------

PASS, FAIL, UNDECIDED, SKIPPED = "PASS", "FAIL", "UNDECIDED", "SKIPPED"


def _verdict(lhs, rhs, relation):
    v = compare(lhs, rhs)
    if v == tn.UNDECIDED:
        return UNDECIDED
    ok = {"<": v == tn.LT, "<=": v in (tn.LT, tn.EQ), ">": v == tn.GT}[relation]
    return PASS if ok else FAIL


def _entry(check, params, lhs, rhs, relation, step=None):
    e = {"check": check, "params": params, "verdict": _verdict(lhs, rhs, relation),
         "relation": relation, "lhs": tn.to_text(lhs), "rhs": tn.to_text(rhs)}
    if step:
        e["step"] = step
    return e


def _type_params(g: GroupTypeData):
    return {"type": g.tag, "d": g.dim, "D": g.adjoint_degree, "r": g.rank, "n": g.dim, "iota": g.dim}


def _printable(p):
    return {k: (tn.to_text(v) if isinstance(v, TowerExpr) else v) for k, v in p.items()}


def _aud1(types):
    out = []
    for g in types:
        p = _type_params(g)
        th = eval_rule("R25", {k: p[k] for k in ("d", "D", "r", "n", "iota")})
        out.append(_entry("AUD1", _printable(p), th["B1"], th["A1"], ">"))
    return out


def _aud2(types):
    out = []
    for g in types:
        p = _type_params(g)
        a1 = eval_rule("R25", {k: p[k] for k in ("d", "D", "r", "n", "iota")}, "A1")
        phi = eval_rule("R24", {"x": g.dim - 1, "d": g.dim, "D": p["D"], "iota": g.dim})
        out.append(_entry("AUD2", _printable(p), a1, tn.power(phi, 5 * g.dim), ">"))
    return out


def _aud3(types):
    out = []
    for g in types:
        p = _type_params(g)
        d, D, iota = g.dim, p["D"], g.dim
        phi2 = eval_rule("R24", {"x": 2, "d": d, "D": D, "iota": iota})
        # dim(V) = 1 is the extreme case of phi(2)^(d/dim V)
        first = tn.factorial(tn.power(phi2, d))
        mid = tn.factorial(tn.power(tn.mul(2, d, D, iota + 1), 2 * (d + 1) * d ** 3))
        last = eval_rule("R30", {"d": d, "D": D, "iota": iota})
        pp = _printable(p) | {"dimV": 1}
        out.append(_entry("AUD3", pp, first, mid, "<=", step=1))
        out.append(_entry("AUD3", pp, mid, last, "<=", step=2))
    return out


def descent_degree(n: int) -> TowerExpr:
    """Degree after n^2 descent steps starting from GL_n, whose closed
    embedding has degree n + 1."""
    d = n * n
    D = tn.lit(n + 1)
    for _ in range(d):
        D = eval_rule("R26", {"d": d, "n": n, "iota": n, "r": n, "D": D})
    return D


def _aud4(ns=(2, 3, 4)):
    out = []
    for n in ns:
        D = descent_degree(n)
        target = tn.power(n, tn.power(n, tn.mul(2 ** 23 - 1, tn.power(n, 10))))
        p = {"n": n, "d": n * n, "iota": n, "r": n, "D0": n + 1, "steps": n * n}
        out.append(_entry("AUD4", p, D, target, "<=", step=1))
        final = tn.mul(D, tn.power(n + 1, n * n))
        out.append(_entry("AUD4", p, final, eval_rule("R27", {"n": n}), "<=", step=2))
    return out


def _aud5(lo=1, hi=100):
    out = []
    for n in range(lo, hi + 1):
        if n < 2:
            out.append({"check": "AUD5", "params": {"n": n}, "verdict": SKIPPED, "relation": "<",
                        "lhs": str(math.factorial(n + 2)), "rhs": tn.to_text(eval_rule("R27", {"n": n}))})
            continue
        out.append(_entry("AUD5", {"n": n}, tn.factorial(n + 2), eval_rule("R27", {"n": n}), "<"))
    return out


def _aud6(types):
    out = []
    grid = [(_printable(_type_params(g)), g.dim, g.dim, g.dim) for g in types]
    grid += [({"n": n, "d": n * n, "iota": n}, n, n * n, n) for n in (2, 3, 4)]
    for p, n, d, iota in grid:
        r15 = eval_rule("R15", {"n": n, "d": d, "iota": iota})
        lhs = tn.mul(r15["mdeg_beta"], tn.add(r15["m"], 1))
        rhs = tn.power(2 * d * n * iota, tn.power(2 * d * n * iota, 2 * d * n * n))
        out.append(_entry("AUD6", p, lhs, rhs, "<="))
    return out


AUDITS = ("AUD1", "AUD2", "AUD3", "AUD4", "AUD5", "AUD6")


def audit(check_id: str = "ALL", types=None):
    """Run one audit or all of them; returns a list of report entries."""
    types = audit_types() if types is None else types
    runners = {"AUD1": lambda: _aud1(types), "AUD2": lambda: _aud2(types), "AUD3": lambda: _aud3(types),
               "AUD4": _aud4, "AUD5": _aud5, "AUD6": lambda: _aud6(types)}
    if check_id == "ALL":
        ids = AUDITS
    elif check_id in runners:
        ids = (check_id,)
    else:
        raise UnknownRule(check_id)
    out = []
    for c in ids:
        out.extend(runners[c]())
    return out


def summarize(entries):
    counts = {PASS: 0, FAIL: 0, UNDECIDED: 0, SKIPPED: 0}
    for e in entries:
        counts[e["verdict"]] += 1
    return counts
