"""Symbolic nonnegative integers built from +, *, ^, !, binomials, min and max,
with a sound comparison procedure for values far beyond machine reach.

Small subtrees are evaluated exactly.  Values of at least ``2**cap`` bits are
bracketed by intervals on iterated base-2 logarithms: a bound at level ``k``
with interval ``[lo, hi]`` means ``log2^(k)(x)`` lies in ``[lo, hi]``.  All
interval endpoints are rounded outward, so an ordering verdict is never wrong;
when the intervals still overlap at the maximum precision the answer is
``UNDECIDED``.
"""
from __future__ import annotations

import math
import re
from enum import Enum

from mpmath.libmp import (
    finf, fninf, fone, from_int, fzero, mpf_add, mpf_ceil, mpf_cmp, mpf_div, mpf_e,
    mpf_exp, mpf_floor, mpf_ln2, mpf_log, mpf_mul, mpf_neg, mpf_perturb, mpf_shift,
    mpf_sub, round_ceiling, round_floor, to_int, to_str,
)

DEFAULT_CAP_BITS = 65536
FOLD_BITS = 4096
MAX_LEVEL = 5
PRECISIONS = (128, 256, 512, 1024)


class TooLarge(Exception):
    pass


class UnboundVariable(Exception):
    pass


class ParseError(ValueError):
    pass


class _Undecided(Exception):
    pass


class Verdict(str, Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"
    UNDECIDED = "UNDECIDED"


LT, EQ, GT, UNDECIDED = Verdict.LT, Verdict.EQ, Verdict.GT, Verdict.UNDECIDED


# -- nodes ------------------------------------------------------------------

class TowerExpr:
    """Immutable expression node.  Build with the module-level constructors
    (``lit``, ``add``, ``mul``, ``power``, ...) which canonicalize, or with
    the arithmetic operators."""

    __slots__ = ("kind", "args", "_hash", "_text")

    def __init__(self, kind: str, args: tuple):
        self.kind = kind
        self.args = args
        self._hash = hash((kind, args))
        self._text = None

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, TowerExpr):
            return NotImplemented
        return self._hash == other._hash and self.kind == other.kind and self.args == other.args

    def __repr__(self):
        return f"TowerExpr({to_text(self)})"

    def __str__(self):
        return to_text(self)

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, other):
        return power(self, other)

    def __rpow__(self, other):
        return power(other, self)

    @property
    def is_literal(self):
        return self.kind == "lit"

    @property
    def value(self):
        if self.kind != "lit":
            raise TypeError("not a literal")
        return self.args[0]


def _as_expr(x) -> TowerExpr:
    if isinstance(x, TowerExpr):
        return x
    if isinstance(x, bool) or not hasattr(x, "__index__"):
        raise TypeError(f"cannot build a tower expression from {x!r}")
    x = int(x)
    if x < 0:
        raise ValueError("tower expressions are nonnegative")
    return TowerExpr("lit", (x,))


def lit(v: int) -> TowerExpr:
    return _as_expr(v)


def var(name: str) -> TowerExpr:
    if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name) or name in _FUNCS:
        raise ValueError(f"bad variable name {name!r}")
    return TowerExpr("var", (name,))


def _sort_key(e: TowerExpr):
    return (_KIND_ORDER[e.kind], to_text(e))


_KIND_ORDER = {"lit": 0, "var": 1, "add": 2, "mul": 3, "pow": 4, "fact": 5, "binom": 6, "min": 7, "max": 8}


def _flatten(kind, xs):
    out = []
    for x in xs:
        x = _as_expr(x)
        if x.kind == kind:
            out.extend(x.args)
        else:
            out.append(x)
    return out


def add(*xs) -> TowerExpr:
    terms = _flatten("add", xs)
    c = 0
    rest = []
    for t in terms:
        if t.kind == "lit":
            c += t.args[0]
        else:
            rest.append(t)
    if c:
        rest.append(lit(c))
    if not rest:
        return lit(0)
    if len(rest) == 1:
        return rest[0]
    return TowerExpr("add", tuple(sorted(rest, key=_sort_key)))


def mul(*xs) -> TowerExpr:
    terms = _flatten("mul", xs)
    c = 1
    rest = []
    for t in terms:
        if t.kind == "lit":
            c *= t.args[0]
        else:
            rest.append(t)
    if c == 0:
        return lit(0)
    if c != 1:
        rest.append(lit(c))
    if not rest:
        return lit(1)
    if len(rest) == 1:
        return rest[0]
    return TowerExpr("mul", tuple(sorted(rest, key=_sort_key)))


def power(b, e) -> TowerExpr:
    b, e = _as_expr(b), _as_expr(e)
    if e.kind == "lit":
        if e.args[0] == 0:
            return lit(1)
        if e.args[0] == 1:
            return b
    if b.kind == "lit":
        bv = b.args[0]
        if bv in (0, 1):
            return b
        if e.kind == "lit" and e.args[0] * bv.bit_length() <= FOLD_BITS:
            return lit(bv ** e.args[0])
    if b.kind == "pow":
        return power(b.args[0], mul(b.args[1], e))
    return TowerExpr("pow", (b, e))


def factorial(x) -> TowerExpr:
    x = _as_expr(x)
    if x.kind == "lit" and x.args[0] <= 300:
        return lit(math.factorial(x.args[0]))
    return TowerExpr("fact", (x,))


def binomial(n, k) -> TowerExpr:
    n, k = _as_expr(n), _as_expr(k)
    if n.kind == "lit" and k.kind == "lit":
        nv, kv = n.args[0], k.args[0]
        if kv > nv:
            return lit(0)
        kk = min(kv, nv - kv)
        if kk <= 64 or kk * max(1, (nv // max(kk, 1)).bit_length()) <= FOLD_BITS:
            return lit(math.comb(nv, kv))
    if k.kind == "lit" and k.args[0] == 0:
        return lit(1)
    return TowerExpr("binom", (n, k))


def _minmax(kind, xs):
    terms = _flatten(kind, xs)
    lits = [t.args[0] for t in terms if t.kind == "lit"]
    rest = {t for t in terms if t.kind != "lit"}
    if lits:
        v = min(lits) if kind == "min" else max(lits)
        if kind == "min" and v == 0:
            return lit(0)
        if not (kind == "max" and v == 0 and rest):
            rest.add(lit(v))
    if not rest:
        raise ValueError(f"{kind} of nothing")
    if len(rest) == 1:
        return next(iter(rest))
    return TowerExpr(kind, tuple(sorted(rest, key=_sort_key)))


def tmin(*xs) -> TowerExpr:
    return _minmax("min", xs)


def tmax(*xs) -> TowerExpr:
    return _minmax("max", xs)


def subst(e: TowerExpr, env: dict) -> TowerExpr:
    """Replace variables by expressions or integers, re-canonicalizing."""
    memo = {}

    def go(x):
        if x in memo:
            return memo[x]
        k = x.kind
        if k == "lit":
            r = x
        elif k == "var":
            r = _as_expr(env[x.args[0]]) if x.args[0] in env else x
        else:
            r = _BUILDERS[k](*[go(a) for a in x.args])
        memo[x] = r
        return r

    return go(_as_expr(e))


def free_vars(e: TowerExpr) -> set:
    out, stack, seen = set(), [e], set()
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        if x.kind == "var":
            out.add(x.args[0])
        elif x.kind != "lit":
            stack.extend(x.args)
    return out


_BUILDERS = {"add": add, "mul": mul, "pow": power, "fact": factorial, "binom": binomial,
             "min": tmin, "max": tmax}
_FUNCS = {"add", "mul", "pow", "fact", "binom", "min", "max"}


# -- text form --------------------------------------------------------------

def _int_text(v: int) -> str:
    # str() of very long ints is capped by the interpreter; split recursively
    if v.bit_length() < 12000:
        return str(v)
    k = int(v.bit_length() * 0.30103) // 2
    hi, lo = divmod(v, 10 ** k)
    return _int_text(hi) + _int_text(lo).zfill(k)


def _text_int(s: str) -> int:
    if len(s) < 4000:
        return int(s)
    k = len(s) // 2
    return _text_int(s[:-k]) * 10 ** k + _text_int(s[-k:])


def to_text(e: TowerExpr) -> str:
    if e._text is not None:
        return e._text
    if e.kind == "lit":
        s = _int_text(e.args[0])
    elif e.kind == "var":
        s = e.args[0]
    else:
        s = f"{e.kind}({', '.join(to_text(a) for a in e.args)})"
    e._text = s
    return s


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def parse(text: str) -> TowerExpr:
    """Parse the prefix text form, e.g. ``pow(n, pow(n, mul(pow(2,23), pow(n,10))))``."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        pos = m.end()
        if m.group(1) is not None:
            toks.append(("int", _text_int(m.group(1))))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2)))
        elif m.group(3) and not m.group(3).isspace():
            toks.append(("sym", m.group(3)))
    i = 0

    def expect(sym):
        nonlocal i
        if i >= len(toks) or toks[i] != ("sym", sym):
            raise ParseError(f"expected {sym!r} at token {i}")
        i += 1

    def node():
        nonlocal i
        if i >= len(toks):
            raise ParseError("unexpected end of input")
        kind, v = toks[i]
        i += 1
        if kind == "int":
            return lit(v)
        if kind != "name":
            raise ParseError(f"unexpected symbol {v!r}")
        if i < len(toks) and toks[i] == ("sym", "("):
            if v not in _FUNCS:
                raise ParseError(f"unknown function {v!r}")
            i += 1
            args = [node()]
            while i < len(toks) and toks[i] == ("sym", ","):
                i += 1
                args.append(node())
            expect(")")
            arity = {"pow": 2, "binom": 2, "fact": 1}.get(v)
            if arity is not None and len(args) != arity:
                raise ParseError(f"{v} takes {arity} argument(s)")
            return _BUILDERS[v](*args)
        return var(v)

    out = node()
    if i != len(toks):
        raise ParseError("trailing input")
    return out


# -- exact evaluation ---------------------------------------------------------

class _Indeterminate(Exception):
    pass


def _small(e: TowerExpr, cap: int, memo: dict):
    """Exact value if it is below 2**cap, else None (value >= 2**cap).
    Raises _Indeterminate when neither can be established cheaply."""
    if e in memo:
        r = memo[e]
        if r is _Indeterminate:
            raise _Indeterminate()
        return r
    try:
        r = _small_raw(e, cap, memo)
    except _Indeterminate:
        memo[e] = _Indeterminate
        raise
    if r is not None and r.bit_length() > cap:
        r = None
    memo[e] = r
    return r


def _small_raw(e, cap, memo):
    k = e.kind
    if k == "lit":
        return e.args[0]
    if k == "var":
        raise UnboundVariable(e.args[0])
    if k == "add":
        vals = [_small(a, cap, memo) for a in e.args]
        if any(v is None for v in vals):
            return None
        return sum(vals)
    if k == "mul":
        vals = [_small(a, cap, memo) for a in e.args]
        if any(v == 0 for v in vals):
            return 0
        if any(v is None for v in vals):
            return None
        bits = sum(v.bit_length() - 1 for v in vals)
        if bits > cap:
            return None
        return math.prod(vals)
    if k == "pow":
        b = _small(e.args[0], cap, memo)
        x = _small(e.args[1], cap, memo)
        if x == 0:
            return 1
        if b is not None and b <= 1:
            return b
        if x is None or b is None:
            if x == 1:
                return b
            return None
        if x * (b.bit_length() - 1) > cap:
            return None
        return b ** x
    if k == "fact":
        x = _small(e.args[0], cap, memo)
        if x is None:
            return None
        if x > cap + 1 or (x > 8 and x * (math.log2(x) - 1.4427) > cap + 2):
            return None
        return math.factorial(x)
    if k == "binom":
        n = _small(e.args[0], cap, memo)
        try:
            kk = _small(e.args[1], cap, memo)
        except _Indeterminate:
            kk = _Indeterminate
        if n is None and kk is None:
            raise _Indeterminate()
        if kk is _Indeterminate:
            raise _Indeterminate()
        if n is None:
            return 1 if kk == 0 else None
        if kk is None or kk > n:
            return 0
        kp = min(kk, n - kk)
        if kp > cap or (kp > 0 and kp * (n.bit_length() - 1 - kp.bit_length()) > cap):
            return None
        return math.comb(n, kk)
    if k == "min":
        vals = []
        for a in e.args:
            v = _small(a, cap, memo)
            if v is not None:
                vals.append(v)
        return min(vals) if vals else None
    if k == "max":
        vals = [_small(a, cap, memo) for a in e.args]
        if any(v is None for v in vals):
            return None
        return max(vals)
    raise TypeError(f"unknown node kind {k}")


def eval_exact(a, bit_cap: int = DEFAULT_CAP_BITS) -> int:
    a = _as_expr(a)
    try:
        v = _small(a, bit_cap, {})
    except _Indeterminate:
        raise TooLarge("value could not be bounded below the bit cap")
    if v is None:
        raise TooLarge(f"value needs more than {bit_cap} bits")
    return v


# -- interval machinery -------------------------------------------------------

class _Ctx:
    def __init__(self, prec: int, cap: int):
        self.prec = prec
        self.cap = cap
        self.ln2_lo = mpf_ln2(prec, round_floor)
        self.ln2_hi = mpf_ln2(prec, round_ceiling)
        self.small_memo = {}
        self.bound_memo = {}
        # every huge value is >= 2**cap, so its level-k bracket can be clamped
        floors = [fninf, from_int(cap)]
        v = cap
        for _ in range(MAX_LEVEL + 1):
            if v >= 1:
                v = v.bit_length() - 1
                floors.append(from_int(v))
            else:
                floors.append(fninf)
        self.floors = floors

    # outward-nudged primitive ops
    def dn(self, x):
        if x in (finf, fninf, fzero):
            return x
        return mpf_perturb(x, 1, self.prec, round_floor)

    def up(self, x):
        if x in (finf, fninf, fzero):
            return x
        return mpf_perturb(x, 0, self.prec, round_ceiling)

    def add(self, a, b, rnd):
        r = mpf_add(a, b, self.prec, rnd)
        return self.dn(r) if rnd == round_floor else self.up(r)

    def mul(self, a, b, rnd):
        r = mpf_mul(a, b, self.prec, rnd)
        return self.dn(r) if rnd == round_floor else self.up(r)

    def log2(self, x, rnd):
        """log2 of a positive mpf; exact on powers of two."""
        if x == finf:
            return finf
        if mpf_cmp(x, from_int(0)) <= 0:
            return fninf
        sign, man, exp, bc = x
        if man == 1:
            return from_int(exp)
        ln = mpf_log(x, self.prec, rnd)
        if rnd == round_floor:
            den = self.ln2_hi if mpf_cmp(ln, from_int(0)) >= 0 else self.ln2_lo
            return self.dn(mpf_div(self.dn(ln), den, self.prec, rnd))
        den = self.ln2_lo if mpf_cmp(ln, from_int(0)) >= 0 else self.ln2_hi
        return self.up(mpf_div(self.up(ln), den, self.prec, rnd))

    def pow2(self, x, rnd):
        if x == fninf:
            return from_int(0)
        if x == finf:
            return finf
        fl = mpf_floor(x)
        ip = to_int(fl)
        frac = mpf_sub(x, fl)
        if frac == from_int(0):
            return mpf_shift(fone, ip)
        ln2 = self.ln2_lo if rnd == round_floor else self.ln2_hi
        t = mpf_mul(frac, ln2, self.prec, rnd)
        r = mpf_exp(t, self.prec, rnd)
        r = self.dn(r) if rnd == round_floor else self.up(r)
        return mpf_shift(r, ip)

    def int_lo(self, v):
        return from_int(v, self.prec, round_floor)

    def int_hi(self, v):
        return from_int(v, self.prec, round_ceiling)

    def log2_int(self, v):
        if v <= 0:
            return fninf, fninf
        if v & (v - 1) == 0:
            x = from_int(v.bit_length() - 1)
            return x, x
        return self.log2(self.int_lo(v), round_floor), self.log2(self.int_hi(v), round_ceiling)


def _lt(a, b):
    return mpf_cmp(a, b) < 0


def _max(*xs):
    m = xs[0]
    for x in xs[1:]:
        if mpf_cmp(x, m) > 0:
            m = x
    return m


def _min(*xs):
    m = xs[0]
    for x in xs[1:]:
        if mpf_cmp(x, m) < 0:
            m = x
    return m


class _Bound:
    __slots__ = ("level", "lo", "hi")

    def __init__(self, level, lo, hi):
        self.level, self.lo, self.hi = level, lo, hi

    def __repr__(self):
        return f"L{self.level}[{to_str(self.lo, 12)}, {to_str(self.hi, 12)}]"


def _lift(ctx, b: _Bound, k: int) -> _Bound:
    lo, hi, lv = b.lo, b.hi, b.level
    while lv < k:
        lo = ctx.log2(lo, round_floor)
        hi = ctx.log2(hi, round_ceiling)
        lv += 1
        if lv > MAX_LEVEL:
            raise _Undecided()
        if b.level >= 1:
            lo = _max(lo, ctx.floors[lv])
    return _Bound(lv, lo, hi)


def _scale_up(ctx, M, level, c_hi):
    """Upper bound, at the given level, for c times the value whose level
    representation is at most M (c >= 1 real, given by an upper bound)."""
    if level == 0:
        return ctx.mul(M, c_hi, round_ceiling)
    lc = ctx.log2(c_hi, round_ceiling)
    if level == 1:
        return ctx.add(M, lc, round_ceiling)
    Mp = _max(M, fone)
    shift = 1 - to_int(mpf_floor(Mp))
    slack = mpf_shift(lc, shift)
    return ctx.add(Mp, slack, round_ceiling)


def _scale(ctx, b: _Bound, level, f_lo, f_hi):
    """Multiply the quantity represented at ``level`` by I=[lo,hi] by a real
    factor in [f_lo, f_hi] with f_lo >= 1."""
    if level == 0:
        return ctx.mul(b.lo, f_lo, round_floor), ctx.mul(b.hi, f_hi, round_ceiling)
    if level == 1:
        return (ctx.add(b.lo, ctx.log2(f_lo, round_floor), round_floor),
                ctx.add(b.hi, ctx.log2(f_hi, round_ceiling), round_ceiling))
    return b.lo, _scale_up(ctx, b.hi, level, f_hi)


def _sum_at(ctx, bounds, level, count):
    """Bound for the sum of ``count`` terms, each represented at ``level``
    and each at most max(hi); lower bound uses the largest single term."""
    if level == 0:
        lo = bounds[0].lo
        hi = bounds[0].hi
        for b in bounds[1:]:
            lo = ctx.add(lo, b.lo, round_floor)
            hi = ctx.add(hi, b.hi, round_ceiling)
        return lo, hi
    lo = _max(*[b.lo for b in bounds])
    hi = _scale_up(ctx, _max(*[b.hi for b in bounds]), level, from_int(count))
    return lo, hi


def _bound(ctx, e: TowerExpr) -> _Bound:
    if e in ctx.bound_memo:
        return ctx.bound_memo[e]
    v = _small(e, ctx.cap, ctx.small_memo)
    if v is not None:
        b = _Bound(0, ctx.int_lo(v), ctx.int_hi(v))
    else:
        b = _huge_bound(ctx, e)
        if b.level > MAX_LEVEL:
            raise _Undecided()
        b = _Bound(b.level, _max(b.lo, ctx.floors[b.level]), b.hi)
        while b.level >= 2 and _lt(b.hi, from_int(FOLD_BITS)):
            b = _Bound(b.level - 1, ctx.pow2(b.lo, round_floor), ctx.pow2(b.hi, round_ceiling))
            b.lo = _max(b.lo, ctx.floors[b.level])
    ctx.bound_memo[e] = b
    return b


def _split(ctx, args):
    exact, huge = [], []
    for a in args:
        v = _small(a, ctx.cap, ctx.small_memo)
        if v is None:
            huge.append(_bound(ctx, a))
        else:
            exact.append(v)
    return exact, huge


def _common(ctx, bounds, k=None):
    k = max([b.level for b in bounds] + ([k] if k is not None else []))
    return k, [_lift(ctx, b, k) for b in bounds]


def _huge_bound(ctx, e) -> _Bound:
    k = e.kind
    if k == "add":
        exact, huge = _split(ctx, e.args)
        count = len(huge) + (1 if sum(exact) > 0 else 0)
        lv, hs = _common(ctx, huge, 1)
        lo, hi = _sum_at(ctx, hs, lv, count)
        return _Bound(lv, lo, hi)
    if k == "mul":
        exact, huge = _split(ctx, e.args)
        c = math.prod(exact)
        lv, hs = _common(ctx, huge, 1)
        if lv == 1:
            clo, chi = ctx.log2_int(c)
            lo, hi = clo, chi
            for b in hs:
                lo = ctx.add(lo, b.lo, round_floor)
                hi = ctx.add(hi, b.hi, round_ceiling)
            return _Bound(1, lo, hi)
        count = len(hs) + (1 if c > 1 else 0)
        lo, hi = _sum_at(ctx, hs, lv - 1, count)
        return _Bound(lv, lo, hi)
    if k == "pow":
        bn, en = e.args
        bv = _small(bn, ctx.cap, ctx.small_memo)
        ev = _small(en, ctx.cap, ctx.small_memo)
        if bv is not None and ev is not None:
            llo, lhi = ctx.log2_int(bv)
            return _Bound(1, ctx.mul(ctx.int_lo(ev), llo, round_floor),
                          ctx.mul(ctx.int_hi(ev), lhi, round_ceiling))
        if bv is not None:
            E = _bound(ctx, en)
            llo, lhi = ctx.log2_int(bv)
            lo, hi = _scale(ctx, E, E.level, llo, lhi)
            return _Bound(E.level + 1, lo, hi)
        B = _bound(ctx, bn)
        if ev is not None:
            lo, hi = _scale(ctx, _Bound(B.level - 1, B.lo, B.hi), B.level - 1,
                            ctx.int_lo(ev), ctx.int_hi(ev))
            return _Bound(B.level, lo, hi)
        E = _bound(ctx, en)
        return _both_huge_power(ctx, B, E)
    if k == "fact":
        xv = _small(e.args[0], ctx.cap, ctx.small_memo)
        if xv is not None:
            # (x/3)^x <= x! <= x^x
            _, l3hi = ctx.log2_int(3)
            lxlo, lxhi = ctx.log2_int(xv)
            lo = ctx.mul(ctx.int_lo(xv), ctx.add(lxlo, mpf_neg(l3hi), round_floor), round_floor)
            hi = ctx.mul(ctx.int_hi(xv), lxhi, round_ceiling)
            return _Bound(1, lo, hi)
        X = _bound(ctx, e.args[0])
        up = _both_huge_power(ctx, X, X)
        lo = _lift(ctx, X, up.level - 1).lo
        return _Bound(up.level, lo, up.hi)
    if k == "binom":
        nv = _small(e.args[0], ctx.cap, ctx.small_memo)
        kv = _small(e.args[1], ctx.cap, ctx.small_memo)
        if nv is not None and kv is not None:
            kp = min(kv, nv - kv)
            nlo, nhi = ctx.log2_int(nv)
            klo, khi = ctx.log2_int(kp)
            q_lo = ctx.add(nlo, mpf_neg(khi), round_floor)
            le = ctx.log2(mpf_e(ctx.prec, round_ceiling), round_ceiling)
            q_hi = ctx.add(ctx.add(nhi, mpf_neg(klo), round_ceiling), le, round_ceiling)
            return _Bound(1, ctx.mul(ctx.int_lo(kp), q_lo, round_floor),
                          ctx.mul(ctx.int_hi(kp), q_hi, round_ceiling))
        if nv is None and kv is not None and kv >= 1:
            N = _bound(ctx, e.args[0])
            _, hi = _scale(ctx, _Bound(N.level - 1, N.lo, N.hi), N.level - 1,
                           ctx.int_lo(kv), ctx.int_hi(kv))
            return _Bound(N.level, N.lo, hi)
        raise _Undecided()
    if k in ("min", "max"):
        exact, huge = _split(ctx, e.args)
        lv, hs = _common(ctx, huge)
        f = _min if k == "min" else _max
        return _Bound(lv, f(*[b.lo for b in hs]), f(*[b.hi for b in hs]))
    raise _Undecided()


def _both_huge_power(ctx, B, E):
    # log2 log2 (b^e) = log2 e + log2 log2 b
    k = max(E.level + 1, B.level, 2)
    Ek = _lift(ctx, E, k - 1)
    Bk = _lift(ctx, B, k)
    lo, hi = _sum_at(ctx, [Ek, Bk], k - 2, 2)
    return _Bound(k, lo, hi)


# -- public comparison ----------------------------------------------------------

def _factors(e):
    return list(e.args) if e.kind == "mul" else [e]


def _cancel(a, b, cap_bits):
    """Drop factors common to both sides when they are known positive, and
    strip a shared power base of at least 2.  Returns a simpler pair or None."""
    fa, fb = _factors(a), _factors(b)
    common = []
    for f in fa:
        if f in fb:
            fb.remove(f)
            common.append(f)
    if common:
        for f in common:
            fa.remove(f)
        if all(compare(f, 0, cap_bits) == GT for f in common):
            return mul(*fa), mul(*fb)
        return None
    if a.kind == "pow" and b.kind == "pow" and a.args[0] == b.args[0]:
        if compare(a.args[0], 2, cap_bits) in (GT, EQ):
            return a.args[1], b.args[1]
    return None


def compare(a, b, cap_bits: int = DEFAULT_CAP_BITS) -> Verdict:
    a, b = _as_expr(a), _as_expr(b)
    if a == b:
        return EQ
    simpler = _cancel(a, b, cap_bits)
    if simpler is not None:
        return compare(*simpler, cap_bits=cap_bits)
    memo = {}
    try:
        va = _small(a, cap_bits, memo)
    except _Indeterminate:
        va = _Indeterminate
    try:
        vb = _small(b, cap_bits, memo)
    except _Indeterminate:
        vb = _Indeterminate
    if va is _Indeterminate or vb is _Indeterminate:
        return UNDECIDED
    if va is not None and vb is not None:
        return LT if va < vb else (GT if va > vb else EQ)
    if va is not None:
        return LT
    if vb is not None:
        return GT
    for prec in PRECISIONS:
        ctx = _Ctx(prec, cap_bits)
        ctx.small_memo = memo
        try:
            ba, bb = _bound(ctx, a), _bound(ctx, b)
            k = max(ba.level, bb.level)
            ba, bb = _lift(ctx, ba, k), _lift(ctx, bb, k)
        except (_Undecided, _Indeterminate):
            return UNDECIDED
        if _lt(ba.hi, bb.lo):
            return LT
        if _lt(bb.hi, ba.lo):
            return GT
        if mpf_cmp(ba.lo, ba.hi) == 0 and mpf_cmp(bb.lo, bb.hi) == 0 and mpf_cmp(ba.lo, bb.lo) == 0:
            if k == 0:
                return EQ
    return UNDECIDED


def bounds(a, cap_bits: int = DEFAULT_CAP_BITS, prec: int = 128):
    """Iterated-log bracket of a value: (level, lo, hi) with float-ish strings,
    for reports.  Level 0 means the value is exact."""
    a = _as_expr(a)
    ctx = _Ctx(prec, cap_bits)
    try:
        b = _bound(ctx, a)
    except (_Undecided, _Indeterminate):
        return None
    return b.level, to_str(b.lo, 20), to_str(b.hi, 20)


def _ilog_floor(v: int, base: int) -> int:
    if base == 2:
        return v.bit_length() - 1
    k = max(0, int((v.bit_length() - 1) / math.log2(base)) - 1)
    p = base ** k
    while p * base <= v:
        p *= base
        k += 1
    while p > v:
        p //= base
        k -= 1
    return k


def _tower(j: int, x: int) -> TowerExpr:
    e = lit(x)
    for _ in range(j):
        e = power(2, e)
    return e


def log_floor(a, base: int, cap_bits: int = DEFAULT_CAP_BITS):
    """Bracket (lo, hi) of TowerExpr values around floor(log_base a)."""
    a = _as_expr(a)
    if base < 2:
        raise ValueError("base must be at least 2")
    memo = {}
    try:
        v = _small(a, cap_bits, memo)
    except _Indeterminate:
        v = _Indeterminate
    if isinstance(v, int):
        if v < 1:
            raise ValueError("log of zero")
        r = lit(_ilog_floor(v, base))
        return r, r
    if a.kind == "pow" and a.args[0].kind == "lit":
        bv = a.args[0].args[0]
        j, t = 0, 1
        while t < bv:
            t *= base
            j += 1
        if t == bv:
            r = mul(a.args[1], j)
            return r, r
    if v is _Indeterminate:
        return lit(0), None
    L = math.log2(base)
    for prec in PRECISIONS:
        ctx = _Ctx(prec, cap_bits)
        ctx.small_memo = memo
        try:
            b = _bound(ctx, a)
        except (_Undecided, _Indeterminate):
            return lit(0), None
        if b.level == 1:
            lb_lo, lb_hi = ctx.log2_int(base)
            lo = to_int(mpf_floor(mpf_div(b.lo, lb_hi, prec, round_floor)))
            hi = to_int(mpf_floor(mpf_div(b.hi, lb_lo, prec, round_ceiling)))
            if lo == hi or prec == PRECISIONS[-1]:
                return lit(max(lo, 0)), lit(hi)
            continue
        j = b.level - 1
        c = math.ceil(math.log2(L)) + 1
        m = to_int(mpf_floor(b.lo)) - c
        lo = _tower(j, m) if m >= 1 else lit(0)
        hi = _tower(j, to_int(mpf_ceil(b.hi)))
        return lo, hi
    return lit(0), None
