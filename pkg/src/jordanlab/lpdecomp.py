"""Structure of finite matrix groups in characteristic p.

The central routine builds a normal series G3 <= G2 <= G1 <= G of a finite
matrix group over a field of characteristic p with G3 a p-group, G2/G3
abelian of order prime to p, G1/G2 a direct product of simple groups of Lie
type in characteristic p, and reports [G:G1].  The series is built
group-theoretically:

* G3 is the p-core.  Any valid series can be enlarged by the p-core without
  breaking a clause, so the largest choice is safe.
* G2 is the preimage of the centre of the solvable radical of G/G3.  It is
  abelian by construction, and its p-part would be a normal p-subgroup of a
  group with trivial p-core, hence trivial.
* G1 is the preimage of the product of those minimal normal subgroups of
  G/G2 whose simple factors are recognised as Lie type in characteristic p.

Every clause is checked before a report is returned; a failed check raises
VerificationFailed with a witness.  The module also carries element
classification, the regular-unipotent census, field finding for type A,
the Frobenius sandwich experiment, the escape iteration and the
dimension-estimate harnesses.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from . import degcalc
from . import towernum as tn
from .ffarith import (
    Field, MatrixOverF, NotInvertible, charpoly, factorize, field_create, hasse_derivative,
    mat_det, mat_identity, mat_inv, mat_mul, mat_pow, mat_rank, mat_sub,
)
from .groupengine import (
    AbstractQuotient, FiniteMatrixGroup, Subgroup, SL, center, conjugacy_classes,
    derived_subgroup, is_abelian, is_normal, is_p_group, is_simple, minimal_normals, normal_closure,
    order_spectrum, p_core, solvable_radical, trivial, _with_gens,
)
from .varlab import (
    VarietySpec, _embedding, adjoint_matrix, empirical_dimension, extension, points_over,
)


class LpError(Exception):
    pass


class VerificationFailed(LpError):
    def __init__(self, clause, witness):
        super().__init__(f"clause ({clause}) failed: {witness}")
        self.clause, self.witness = clause, witness


class BadInput(LpError):
    pass


class UnsupportedType(LpError):
    pass


class NoMatch(LpError):
    pass


class NoRegularUnipotent(LpError):
    pass


class NotAField(LpError):
    pass


class InclusionFailed(LpError):
    def __init__(self, which, witness):
        super().__init__(f"inclusion {which} fails at {witness}")
        self.which, self.witness = which, witness


class NotContained(LpError):
    pass


SCHEMA = "jordanlab/1"


# -- element-level ------------------------------------------------------------------

def _gl_order(F: Field, n: int) -> int:
    q = F.q
    out = q ** (n * (n - 1) // 2)
    for i in range(1, n + 1):
        out *= q ** i - 1
    return out


def matrix_order(g: MatrixOverF) -> int:
    """Multiplicative order, found by trimming prime factors of |GL_n(q)|."""
    F, n, a = g.field, g.n, g.entries
    one = mat_identity(n)
    N = _gl_order(F, n)
    if mat_pow(F, n, a, N) != one:
        raise NotInvertible("matrix is singular")
    for ell in factorize(N):
        while N % ell == 0 and mat_pow(F, n, a, N // ell) == one:
            N //= ell
    return N


def _is_unipotent(F, n, a) -> bool:
    m = mat_sub(F, a, mat_identity(n))
    return mat_pow(F, n, m, n) == (0,) * (n * n)


def jordan_chevalley(g: MatrixOverF):
    """Multiplicative Jordan decomposition g = s u = u s via CRT exponents."""
    F, n = g.field, g.n
    if mat_det(F, n, g.entries) == 0:
        raise NotInvertible("matrix is singular")
    p = F.p
    order = matrix_order(g)
    pa = 1
    while order % (pa * p) == 0:
        pa *= p
    m = order // pa
    # u = g^(m m') with m m' = 1 mod p^a; s = g^(p^a c) with p^a c = 1 mod m
    eu = m * pow(m, -1, pa) if pa > 1 else 0
    es = pa * pow(pa, -1, m) if m > 1 else 0
    s = MatrixOverF(F, n, mat_pow(F, n, g.entries, es))
    u = MatrixOverF(F, n, mat_pow(F, n, g.entries, eu))
    return s, u


def jc_uniqueness(g: MatrixOverF, limit: int = 1000):
    """All commuting (semisimple, unipotent) factorizations inside <g>."""
    F, n, p = g.field, g.n, g.field.p
    powers = [mat_identity(n)]
    while True:
        nxt = mat_mul(F, n, powers[-1], g.entries)
        if nxt == powers[0]:
            break
        powers.append(nxt)
        if len(powers) > limit:
            raise BadInput("cyclic group too large for the uniqueness scan")
    N = len(powers)
    orders = [N // math.gcd(N, k) for k in range(N)]
    out = []
    for i in range(N):
        if orders[i] % p == 0:
            continue
        for j in range(N):
            o = orders[j]
            while o % p == 0:
                o //= p
            if o != 1:
                continue
            if (i + j) % N == 1 % N:
                out.append((MatrixOverF(F, n, powers[i]), MatrixOverF(F, n, powers[j])))
    return out


@dataclass
class ElementClass:
    is_unipotent: bool
    is_semisimple: bool
    is_regular: bool
    is_regular_semisimple: bool
    is_regular_unipotent: bool
    adjoint_charpoly: list
    hasse_value: int
    rank: int

    def to_json(self):
        return dict(self.__dict__)


def _algebra_rank(n: int, algebra: str, type_data=None) -> int:
    if type_data is not None:
        return type_data.rank
    return n if algebra.lower().startswith("gl") else n - 1


def classify_element(g: MatrixOverF, group_type_data=None, algebra: str = "sl") -> ElementClass:
    F, n = g.field, g.n
    if mat_det(F, n, g.entries) == 0:
        raise BadInput("element is not invertible")
    if group_type_data is not None and group_type_data.type != "A" and algebra == "sl":
        raise BadInput("regularity tests need a type A realization")
    r = _algebra_rank(n, algebra, group_type_data)
    unip = _is_unipotent(F, n, g.entries)
    order = matrix_order(g)
    ss = order % F.p != 0
    ad = adjoint_matrix(F, n, g.entries, algebra)
    m = math.isqrt(len(ad))
    cp = charpoly(MatrixOverF(F, m, ad))
    hv = hasse_derivative(cp, r).evaluate((1,))
    rss = ss and hv != 0
    run = unip and mat_rank(F, n, n, mat_sub(F, g.entries, mat_identity(n))) == n - 1
    return ElementClass(unip, ss, rss or run, rss, run, cp.coeffs(), hv, r)


def eigenvalue_one_multiplicity(cp) -> int:
    """Multiplicity of 1 as a root, by repeated synthetic division by t - 1."""
    F = cp.field
    c = cp.coeffs()
    k = 0
    while len(c) > 1 and _sum(F, c) == 0:
        out = [0] * (len(c) - 1)
        acc = 0
        for i in range(len(c) - 1, 0, -1):
            acc = F.add(acc, c[i])
            out[i - 1] = acc
        c = out
        k += 1
    return k


def _sum(F, xs):
    s = 0
    for x in xs:
        s = F.add(s, x)
    return s


def unipotent_census(G: FiniteMatrixGroup, type_tag: str = "A") -> dict:
    if not str(type_tag).upper().startswith("A"):
        raise UnsupportedType("regular-unipotent census supports type A only")
    F, n = G.field, G.n
    one = mat_identity(n)
    zero = (0,) * (n * n)
    un = run = 0
    for a in G.elements:
        m = mat_sub(F, a, one)
        if mat_pow(F, n, m, n) != zero:
            continue
        un += 1
        if mat_rank(F, n, n, m) == n - 1:
            run += 1
    ratio = run / un
    return {"count_un": un, "count_run": run, "ratio": ratio,
            "half_inequality": 2 * run >= un, "degenerate": G.order == 1}


# -- Lie-type catalogue ---------------------------------------------------------------

CATALOG_MAX = 10 ** 12


def _prime_powers(limit: int):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    out = []
    for p in range(2, limit + 1):
        if sieve[p]:
            q = p
            while q <= limit:
                out.append((q, p))
                q *= p
    return sorted(out)


def _prod(xs):
    out = 1
    for x in xs:
        out *= x
    return out


def _family_orders():
    """(family, rank_min, admissible(q, p), order(r, q)) per family."""
    A = lambda r, q: q ** (r * (r + 1) // 2) * _prod(q ** (i + 1) - 1 for i in range(1, r + 1)) // math.gcd(r + 1, q - 1)
    A2 = lambda r, q: q ** (r * (r + 1) // 2) * _prod(q ** (i + 1) - (-1) ** (i + 1) for i in range(1, r + 1)) // math.gcd(r + 1, q + 1)
    B = lambda r, q: q ** (r * r) * _prod(q ** (2 * i) - 1 for i in range(1, r + 1)) // math.gcd(2, q - 1)
    D = lambda r, q: q ** (r * (r - 1)) * (q ** r - 1) * _prod(q ** (2 * i) - 1 for i in range(1, r)) // math.gcd(4, q ** r - 1)
    D2 = lambda r, q: q ** (r * (r - 1)) * (q ** r + 1) * _prod(q ** (2 * i) - 1 for i in range(1, r)) // math.gcd(4, q ** r + 1)
    odd_pow = lambda base: (lambda q, p: p == base and round(math.log(q, base)) % 2 == 1 and q > base)
    anyq = lambda q, p: True
    E = lambda exps, top, g: (lambda r, q: q ** top * _prod(q ** i - 1 for i in exps) // g(q))
    return [
        ("A", 1, anyq, A, None),
        ("2A", 2, anyq, A2, None),
        ("B", 2, anyq, B, None),
        ("C", 3, anyq, B, None),
        ("D", 4, anyq, D, None),
        ("2D", 4, anyq, D2, None),
        ("2B", 2, odd_pow(2), lambda r, q: q * q * (q * q + 1) * (q - 1), 2),
        ("G", 2, anyq, lambda r, q: q ** 6 * (q ** 6 - 1) * (q ** 2 - 1), 2),
        ("2G", 2, odd_pow(3), lambda r, q: q ** 3 * (q ** 3 + 1) * (q - 1), 2),
        ("F", 4, anyq, lambda r, q: q ** 24 * (q ** 12 - 1) * (q ** 8 - 1) * (q ** 6 - 1) * (q ** 2 - 1), 4),
        ("2F", 4, odd_pow(2), lambda r, q: q ** 12 * (q ** 6 + 1) * (q ** 4 - 1) * (q ** 3 + 1) * (q - 1), 4),
        ("3D", 4, anyq, lambda r, q: q ** 12 * (q ** 8 + q ** 4 + 1) * (q ** 6 - 1) * (q ** 2 - 1), 4),
        ("E", 6, anyq, E((2, 5, 6, 8, 9, 12), 36, lambda q: math.gcd(3, q - 1)), 6),
        ("2E", 6, anyq, lambda r, q: q ** 36 * (q ** 12 - 1) * (q ** 9 + 1) * (q ** 8 - 1) * (q ** 6 - 1)
         * (q ** 5 + 1) * (q ** 2 - 1) // math.gcd(3, q + 1), 6),
        ("E", 7, anyq, E((2, 6, 8, 10, 12, 14, 18), 63, lambda q: math.gcd(2, q - 1)), 7),
        ("E", 8, anyq, E((2, 8, 12, 14, 18, 20, 24, 30), 120, lambda q: 1), 8),
    ]


# members of the families above that are not simple
_NOT_SIMPLE = {("A", 1, 2), ("A", 1, 3), ("2A", 2, 2), ("B", 2, 2), ("G", 2, 2), ("2B", 2, 2),
               ("2G", 2, 3), ("2F", 4, 2)}


def _tag(fam, r, q):
    return f"{fam}{r}({q})"


def _build_catalog(max_order: int):
    pps = _prime_powers(max(20000, math.isqrt(math.isqrt(max_order)) + 2))
    entries = []
    for fam, rmin, ok, order_fn, fixed_rank in _family_orders():
        r = rmin
        while True:
            any_q = False
            for q, p in pps:
                if not ok(q, p) or (fam, r, q) in _NOT_SIMPLE:
                    if (fam, r, q) in _NOT_SIMPLE and order_fn(r, q) <= max_order:
                        any_q = True
                    continue
                o = order_fn(r, q)
                if o > max_order:
                    break
                any_q = True
                entries.append({"tag": _tag(fam, r, q), "family": fam, "rank": r, "q": q, "p": p,
                                "order": o})
            if fixed_rank is not None or not any_q:
                break
            r += 1
    tits = 17971200
    if tits <= max_order:
        entries.append({"tag": "2F4(2)'", "family": "2F", "rank": 4, "q": 2, "p": 2, "order": tits})
    entries.sort(key=lambda e: (e["order"], e["p"], e["tag"]))
    return entries


def catalog_path() -> Path:
    base = os.environ.get("JORDANLAB_CACHE") or os.path.join(
        os.environ.get("XDG_CACHE_HOME", os.path.expanduser("~/.cache")), "jordanlab")
    return Path(base) / "lie_catalog.json"


@lru_cache(maxsize=1)
def _full_catalog():
    path = catalog_path()
    try:
        doc = json.loads(path.read_text())
        if doc.get("max_order") == CATALOG_MAX:
            return tuple(doc["entries"])
    except (OSError, ValueError, KeyError):
        pass
    entries = _build_catalog(CATALOG_MAX)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"max_order": CATALOG_MAX, "entries": entries}))
        tmp.replace(path)
    except OSError:
        pass
    return tuple(entries)


def lie_catalog(max_order: int, p="ALL") -> list:
    if max_order > CATALOG_MAX:
        raise LpError(f"catalog limited to orders <= {CATALOG_MAX}")
    return [dict(e) for e in _full_catalog()
            if e["order"] <= max_order and (p == "ALL" or e["p"] == p)]


def catalog_collisions(max_order: int) -> dict:
    """(order, p) -> tags, for keys carrying more than one entry."""
    by = {}
    for e in lie_catalog(max_order):
        by.setdefault((e["order"], e["p"]), []).append(e["tag"])
    return {k: v for k, v in by.items() if len(v) > 1}


@lru_cache(maxsize=None)
def _psl_spectrum(n: int, q: int):
    G = SL(n, q)
    W = G.whole()
    Z = center(W)
    Q = AbstractQuotient(W, Z)
    return order_spectrum(Q)


def _materializable(entry) -> bool:
    if entry["family"] != "A":
        return False
    n, q = entry["rank"] + 1, entry["q"]
    return _gl_order(field_create(entry["p"], round(math.log(q, entry["p"]))), n) // (q - 1) <= 200_000


def candidate_spectrum(entry):
    if not _materializable(entry):
        return None
    return _psl_spectrum(entry["rank"] + 1, entry["q"])


def recognize_simple(order: int, p="ALL", spectrum=None) -> dict:
    if order < 60:
        raise NoMatch(f"no nonabelian simple group of order {order}")
    cands = [e for e in _full_catalog() if e["order"] == order and (p == "ALL" or e["p"] == p)]
    if not cands:
        raise NoMatch(f"no Lie-type group of order {order} in characteristic {p}")
    out = []
    for e in cands:
        m = dict(e)
        if spectrum is not None:
            sp = candidate_spectrum(e)
            m["spectrum_match"] = None if sp is None else (
                {int(k): v for k, v in sp.items()} == {int(k): v for k, v in spectrum.items()})
        out.append(m)
    if spectrum is not None:
        out.sort(key=lambda m: {True: 0, None: 1, False: 2}[m["spectrum_match"]])
        out = [m for m in out if m["spectrum_match"] is not False] or out
    ambiguous = len(out) > 1 and not (spectrum is not None and sum(m["spectrum_match"] is True for m in out) == 1
                                      and len([m for m in out if m["spectrum_match"] is not False]) == 1)
    return {"matches": out, "ambiguous": ambiguous}


# -- decomposition -----------------------------------------------------------------

@dataclass
class DecompositionReport:
    group: FiniteMatrixGroup
    p: int
    G3: Subgroup
    G2: Subgroup
    G1: Subgroup
    factors: list
    clauses: dict
    certificates: dict

    @property
    def index(self) -> int:
        return self.group.order // self.G1.order

    def to_json(self) -> dict:
        G = self.group

        def series(name, H):
            gens = _with_gens(G, H.elements).gens if H.order > 1 else ()
            return {"name": name, "order": H.order, "generators_as_words": [G.word(g) for g in gens]}

        return {
            "schema": SCHEMA,
            "field": {"p": G.field.p, "e": G.field.e}, "n": G.n, "p": self.p,
            "gamma_order": G.order,
            "series": [series("Gamma", G.whole()), series("Gamma1", self.G1),
                       series("Gamma2", self.G2), series("Gamma3", self.G3)],
            "clauses": self.clauses,
            "certificates": self.certificates,
        }


def _commutator(U, a, b):
    return U.mul(U.mul(U.inv(a), U.inv(b)), U.mul(a, b))


def _lift(Q, H: Subgroup, U) -> Subgroup:
    """Preimage of a subgroup of Q (Q may be U itself)."""
    if Q is U:
        return H
    return Q.preimage(H)


def decompose(G: FiniteMatrixGroup, p: int | None = None) -> DecompositionReport:
    p = p or G.field.p
    if p != G.field.p:
        raise BadInput(f"p={p} is not the characteristic of {G.field}")
    W = G.whole()
    G3 = p_core(W, p)
    Q = G if G3.order == 1 else AbstractQuotient(W, G3)
    S = solvable_radical(Q.whole())
    Z = center(S)
    G2 = _lift(Q, Z, G)
    Qb = G if G2.order == 1 else AbstractQuotient(W, G2)
    QbW = Qb.whole()
    chosen, factors, rejected = [], [], []
    for M in (minimal_normals(QbW) if Qb.order > 1 else []):
        if is_abelian(M):
            continue
        parts = minimal_normals(M)
        ids = []
        for T in parts:
            spec = order_spectrum(T)
            try:
                rec = recognize_simple(T.order, p, spec)
            except NoMatch:
                rec = None
            ids.append((T, spec, rec))
        if all(rec is not None for _, _, rec in ids):
            chosen.append(M)
            for T, spec, rec in ids:
                factors.append({"subgroup": T, "order": T.order, "spectrum": spec, "recognition": rec})
        else:
            rejected.append({"order": M.order, "factor_orders": [T.order for T, _, _ in ids]})
    if chosen:
        N = normal_closure(QbW, [g for M in chosen for g in M.gens])
    else:
        N = trivial(Qb)
    G1 = _lift(Qb, N, G)
    report = DecompositionReport(G, p, G3, G2, G1, factors, {}, {})
    _certify(report, Qb, N, rejected)
    return report


def _certify(rep: DecompositionReport, Qb, N, rejected):
    G, p = rep.group, rep.p
    U = G
    W = G.whole()
    G3, G2, G1 = rep.G3, rep.G2, rep.G1
    # normality and nesting
    for name, H in (("Gamma3", G3), ("Gamma2", G2), ("Gamma1", G1)):
        if not is_normal(W, H):
            raise VerificationFailed("normality", name)
    if not (G3.elements <= G2.elements <= G1.elements):
        raise VerificationFailed("normality", "series is not nested")
    # (d)
    if not is_p_group(G3, p):
        raise VerificationFailed("d", f"|Gamma3| = {G3.order}")
    # (c): commutators of generators of G2 lie in G3 (G3 normal, so this is enough)
    gens2 = _with_gens(U, G2.elements).gens
    for a in gens2:
        for b in gens2:
            c = _commutator(U, a, b)
            if c not in G3.elements:
                raise VerificationFailed("c", G.word(c))
    ord_c = G2.order // G3.order
    if math.gcd(ord_c, p) != 1:
        raise VerificationFailed("c", f"|Gamma2/Gamma3| = {ord_c} divisible by {p}")
    # (b): N is the internal direct product of the recognised simple factors
    facs = []
    prod = 1
    for f in rep.factors:
        T = f["subgroup"]
        if not is_simple(T):
            raise VerificationFailed("b", f"factor of order {T.order} is not simple")
        rec = f["recognition"]
        if rec is None or not rec["matches"]:
            raise VerificationFailed("b", f"factor of order {T.order} not of Lie type in char {p}")
        if any(m.get("spectrum_match") is False for m in rec["matches"]) and \
                not any(m.get("spectrum_match") in (True, None) for m in rec["matches"]):
            raise VerificationFailed("b", f"spectrum mismatch for order {T.order}")
        prod *= T.order
        facs.append(T)
    if prod != N.order:
        raise VerificationFailed("b", f"|N| = {N.order} but factor orders multiply to {prod}")
    for i, A in enumerate(facs):
        for B in facs[i + 1:]:
            if A.elements & B.elements != {0}:
                raise VerificationFailed("b", "simple factors intersect")
            for a in A.gens:
                for b in B.gens:
                    if Qb.mul(a, b) != Qb.mul(b, a):
                        raise VerificationFailed("b", "simple factors do not commute")
    if G1.order // G2.order != N.order:
        raise VerificationFailed("b", "Gamma1/Gamma2 has the wrong order")
    # (a)
    n = G.n
    index = G.order // G1.order
    J = degcalc.eval_rule("R27", {"n": n})
    jv = tn.compare(tn.lit(index), J)
    collins = math.factorial(n + 2)
    if jv not in (tn.Verdict.LT, tn.Verdict.EQ):
        raise VerificationFailed("a", f"index {index} not below J'({n}): {jv.value}")
    rep.clauses = {
        "a": {"index": index, "J_prime": tn.to_text(J), "J_prime_verdict": jv.value,
              "collins_reference": {"value": collins, "index_le": index <= collins}},
        "b": [{"order": f["order"],
               "identified": [m["tag"] for m in f["recognition"]["matches"]],
               "ambiguous": f["recognition"]["ambiguous"],
               "spectrum_checked": any(m.get("spectrum_match") is True for m in f["recognition"]["matches"]),
               "spectrum": {str(k): v for k, v in f["spectrum"].items()}}
              for f in rep.factors],
        "c": {"order": ord_c, "abelian": True, "coprime": True},
        "d": {"order": G3.order, "is_p_group": True},
    }
    rep.certificates = {
        "normal": {"Gamma3": True, "Gamma2": True, "Gamma1": True},
        "nested": True,
        "direct_product": {"factors": len(facs), "order": N.order},
        "left_above_Gamma1": rejected,
        "certified": True,
    }


def decompose_json(G: FiniteMatrixGroup, p=None) -> dict:
    return decompose(G, p).to_json()


# -- field finding ------------------------------------------------------------------

def _flag_basis(F, n, u):
    """Columns v_1..v_n with v_i = (u - I) v_{i+1}, v_n outside ker (u-I)^(n-1)."""
    N = mat_sub(F, u, mat_identity(n))
    Nk = mat_pow(F, n, N, n - 1)
    vn = None
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        if any(Nk[i * n + j] for i in range(n)):
            vn = e
            break
    cols = [vn]
    for _ in range(n - 1):
        v = cols[0]
        cols.insert(0, [_sum(F, (F.mul(N[i * n + k], v[k]) for k in range(n))) for i in range(n)])
    return tuple(cols[j][i] for i in range(n) for j in range(n))


def find_field_typeA(G: FiniteMatrixGroup) -> dict:
    F, n = G.field, G.n
    u = None
    one = mat_identity(n)
    for a in G.elements:
        m = mat_sub(F, a, one)
        # the identity is never a witness, which also rules out n = 1
        if a != one and mat_pow(F, n, m, n) == (0,) * (n * n) and mat_rank(F, n, n, m) == n - 1:
            u = a
            break
    if u is None:
        raise NoRegularUnipotent("group has no regular unipotent element")
    P = _flag_basis(F, n, u)
    Pi = mat_inv(F, n, P)
    witness = []
    for a in G.elements:
        b = mat_mul(F, n, mat_mul(F, n, Pi, a), P)
        d = mat_sub(F, b, one)
        if all(x == 0 for i, x in enumerate(d) if i != n - 1):
            witness.append(a)
    ws = set(witness)
    for a in witness:
        for b in witness:
            if mat_mul(F, n, a, b) not in ws:
                raise NotAField("root subgroup points are not closed under multiplication")
    q = len(witness)
    k = q
    while k % F.p == 0:
        k //= F.p
    if k != 1:
        raise NotAField(f"|Gamma cap V| = {q} is not a power of {F.p}")
    return {"q": q, "witness": sorted(witness), "regular_unipotent": u, "base_change": P}


# -- Frobenius sandwich ---------------------------------------------------------------

def frobenius_fixed(G: FiniteMatrixGroup, q: int) -> Subgroup:
    F = G.field
    els = [i for i, a in enumerate(G.elements) if all(F.pow(x, q) == x for x in a)]
    return _with_gens(G, els)


def frobenius_sandwich(gamma, ambient: FiniteMatrixGroup, q: int, d: int, dim_v: int = 1,
                       raise_on_failure: bool = False) -> dict:
    """Check [G^F, G^F] <= Gamma <= G^F inside an enumerated ambient group.

    ``gamma`` is a list of matrices (entry tuples or MatrixOverF) over the
    ambient field; ``d`` is the dimension of the algebraic group.
    """
    F = ambient.field
    if q <= 1 or F.q % q or round(math.log(F.q, q)) < 1:
        raise BadInput("q must be a power of p dividing the ambient field size")
    GF = frobenius_fixed(ambient, q)
    DGF = derived_subgroup(GF)
    idx = set()
    for g in gamma:
        ent = g.entries if isinstance(g, MatrixOverF) else tuple(g)
        if ent not in ambient.index:
            raise BadInput("Gamma element not in the ambient group")
        idx.add(ambient.index[ent])
    upper = next((i for i in sorted(idx) if i not in GF.elements), None)
    lower = next((i for i in sorted(DGF.elements) if i not in idx), None)
    lo_b = degcalc.eval_rule("R29", {"q": q, "d": d, "dimV": dim_v}, "lower")
    hi_b = degcalc.eval_rule("R29", {"q": q, "d": d, "dimV": dim_v}, "upper")
    lo_ok = tn.compare(lo_b, GF.order) in (tn.Verdict.LT, tn.Verdict.EQ)
    hi_ok = tn.compare(tn.lit(GF.order), hi_b) in (tn.Verdict.LT, tn.Verdict.EQ)
    rep = {
        "q": q, "GF_order": GF.order, "derived_order": DGF.order, "gamma_order": len(idx),
        "upper_inclusion": upper is None, "lower_inclusion": lower is None,
        "upper_witness": None if upper is None else list(ambient.elements[upper]),
        "lower_witness": None if lower is None else list(ambient.elements[lower]),
        "order_bounds": {"lower": tn.to_text(lo_b), "upper": tn.to_text(hi_b),
                         "lower_ok": lo_ok, "upper_ok": hi_ok},
    }
    rep["ok"] = rep["upper_inclusion"] and rep["lower_inclusion"] and lo_ok and hi_ok
    if raise_on_failure and upper is not None:
        raise InclusionFailed("Gamma <= G^F", rep["upper_witness"])
    if raise_on_failure and lower is not None:
        raise InclusionFailed("[G^F,G^F] <= Gamma", rep["lower_witness"])
    return rep


def pgl2_adjoint(q: int) -> FiniteMatrixGroup:
    """PGL_2(q) as the adjoint image of GL_2(q) acting on sl_2 (p odd)."""
    from .groupengine import field_of, gl_generators, sl_generators
    F = field_of(q)
    gens = [adjoint_matrix(F, 2, g, "sl") for g in gl_generators(F, 2) + sl_generators(F, 2)]
    return FiniteMatrixGroup(F, 3, gens)


def psl2_adjoint_gens(q: int, field: Field = None):
    """Adjoint images of transvection generators of SL_2(q), optionally over
    an extension field."""
    from .groupengine import sl_generators, field_of
    F = field_of(q)
    K = field or F
    emb = _embedding(F, K)
    out = []
    for g in sl_generators(F, 2):
        out.append(adjoint_matrix(K, 2, tuple(emb[x] for x in g), "sl"))
    return out


def sandwich_experiment(q: int = 5, k: int = 2) -> dict:
    """Adjoint image of SL_2(q) inside PGL_2 realised over F_{q^k}."""
    amb = pgl2_adjoint(q ** k)
    K = amb.field
    gamma = FiniteMatrixGroup(K, 3, psl2_adjoint_gens(q, K))
    rep = frobenius_sandwich(gamma.elements, amb, q, d=GROUP_DIM, dim_v=1)
    rep["ambient_order"] = amb.order
    return rep


# -- escape -------------------------------------------------------------------------

def _matrix_points(V: VarietySpec, n: int, k: int):
    """Points of V over F_{q^k} as n x n entry tuples."""
    pts = points_over(V, k)
    if V.ambient_vars == n * n:
        return pts
    m = n + 1
    if V.ambient_vars != m * m:
        raise BadInput("variety is not in n x n or embedded coordinates")
    return [tuple(p[i * m + j] for i in range(n) for j in range(n)) for p in pts]


def escape(G: FiniteMatrixGroup, V: VarietySpec, K_test: int = 2, dim_v: int | None = None) -> dict:
    """Either |Gamma| is small compared to deg(V)^(dim V + 1), or intersecting
    translates of V stabilises at a proper subvariety whose stabiliser
    contains Gamma."""
    F, n = G.field, G.n
    if V.field is not F:
        raise BadInput("variety and group over different fields")
    for a in G.elements:
        pt = a if V.ambient_vars == n * n else _embed_point(F, n, a)
        if not V.contains(pt):
            raise NotContained(f"group element {list(a)} is not on V")
    if dim_v is None:
        est = empirical_dimension(V, range(1, K_test + 1))
        dim_v = est["dimension"]
    deg = V.deg_bound()
    bound = degcalc.eval_rule("R13", {"degV": deg, "dimV": dim_v})
    bound_int = tn.eval_exact(bound)
    base = {"deg_V": deg, "dim_V": dim_v, "bound": tn.to_text(bound), "bound_value": bound_int,
            "gamma_order": G.order, "K_test": K_test, "heuristic_equality": True}
    if G.order <= bound_int:
        return dict(base, branch="Small", steps=0)
    K = extension(F, K_test)
    emb = _embedding(F, K)
    gam = [tuple(emb[x] for x in a) for a in G.elements]
    P = set(_matrix_points(V, n, K_test))
    tracked = deg
    steps = 0
    while True:
        moved = None
        for g in gam:
            img = {mat_mul(K, n, x, g) for x in P}
            if img != P:
                moved = img
                break
        if moved is None:
            break
        P &= moved
        tracked = tracked * tracked
        steps += 1
        if len(P) <= tracked:
            return dict(base, branch="Small", steps=steps, points=len(P), tracked_degree=tracked)
    # stable: Gamma stabilises the point set; verify containment exactly
    for g in gam:
        if {mat_mul(K, n, x, g) for x in P} != P:
            raise LpError("stabiliser containment failed")
    return dict(base, branch="Subgroup", steps=steps, stable_points=len(P),
                gamma_in_H=True, H="stabiliser of the stable translate intersection")


def _embed_point(F, n, a):
    m = n + 1
    out = [0] * (m * m)
    for i in range(n):
        for j in range(n):
            out[i * m + j] = a[i * n + j]
    out[-1] = F.inv(mat_det(F, n, a))
    return tuple(out)


# -- dimension estimates ---------------------------------------------------------------

UNIPOTENT_CONE, SPLIT_TORUS, NONSPLIT_TORUS_CLASS, CONJ_CLASS = (
    "UNIPOTENT_CONE", "SPLIT_TORUS", "NONSPLIT_TORUS_CLASS", "CONJ_CLASS")

GROUP_DIM = 3
ADJOINT_DEGREE_A1 = 16
# degrees of the test varieties: the unipotent cone is cut out by a trace and
# a determinant condition (degree 2); tori are bounded by the group degree
VARIETY_DATA = {UNIPOTENT_CONE: (2, 2), SPLIT_TORUS: (ADJOINT_DEGREE_A1, 1),
                NONSPLIT_TORUS_CLASS: (ADJOINT_DEGREE_A1, 1)}


@lru_cache(maxsize=None)
def family_group(family: str, q: int) -> FiniteMatrixGroup:
    if family == "SL2":
        return SL(2, q)
    if family == "PGL2":
        return pgl2_adjoint(q)
    raise BadInput(f"unknown family {family}")


def phi(x: int, d: int = GROUP_DIM, D: int = ADJOINT_DEGREE_A1, iota: int = GROUP_DIM) -> int:
    return degcalc.eval_rule("R24", {"x": x, "d": d, "D": D, "iota": iota})


def _elliptic(G: FiniteMatrixGroup, q: int) -> int:
    """First element of order q+1 (a generator of a nonsplit torus)."""
    for i in range(G.order):
        if G.element_order(i) == q + 1:
            return i
    raise LpError("no element of order q+1")


def _centralizer_count(G: FiniteMatrixGroup, x: int) -> int:
    F, n = G.field, G.n
    a = G.elements[x]
    return sum(1 for b in G.elements if mat_mul(F, n, a, b) == mat_mul(F, n, b, a))


def _class_size(G: FiniteMatrixGroup, x: int) -> int:
    seen = {x}
    stack = [x]
    while stack:
        y = stack.pop()
        for t in G.gens:
            z = G.conj(y, t)
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return len(seen)


def dim_centralizer(G: FiniteMatrixGroup, x: int, family: str) -> int:
    F = G.field
    a = G.elements[x]
    ad = a if family == "PGL2" else adjoint_matrix(F, 2, a, "sl")
    return GROUP_DIM - mat_rank(F, 3, 3, mat_sub(F, ad, mat_identity(3)))


def centralizer_bounds(G: FiniteMatrixGroup, x: int, family: str) -> dict:
    """Two-sided phi bounds and the orbit-stabiliser identity for one element.

    phi(d-d')^(-1) |G|^(d'/d) <= |C(x)| <= phi(d-d') |G|^(d'/d), checked after
    raising both sides to the d-th power so only integers are compared.
    """
    d = GROUP_DIM
    dp = dim_centralizer(G, x, family)
    C = _centralizer_count(G, x)
    cl = _class_size(G, x)
    ph = tn.eval_exact(phi(d - dp))
    order = G.order
    lower = order ** dp <= (ph * C) ** d
    upper = C ** d <= ph ** d * order ** dp
    return {"element": list(G.elements[x]), "dim_centralizer": dp, "centralizer": C,
            "class_size": cl, "orbit_stabilizer": C * cl == order,
            "phi_bits": ph.bit_length(), "lower_ok": lower, "upper_ok": upper}


def class_representatives(G: FiniteMatrixGroup):
    return [c[0] for c in conjugacy_classes(G.whole())]


def dimest_census(family: str, variety_kind: str, q_list, x=None) -> list:
    rows = []
    for q in q_list:
        G = family_group(family, q)
        F, n = G.field, G.n
        one = mat_identity(n)
        extra = {}
        if variety_kind == UNIPOTENT_CONE:
            zero = (0,) * (n * n)
            count = sum(1 for a in G.elements if mat_pow(F, n, mat_sub(F, a, one), n) == zero)
            degV, dimV = VARIETY_DATA[variety_kind]
        elif variety_kind == SPLIT_TORUS:
            count = sum(1 for a in G.elements if all(a[i * n + j] == 0 for i in range(n)
                                                      for j in range(n) if i != j))
            degV, dimV = VARIETY_DATA[variety_kind]
            extra = centralizer_bounds(G, _first_split_regular(G, q), family)
        elif variety_kind == NONSPLIT_TORUS_CLASS:
            e = _elliptic(G, q)
            count = _centralizer_count(G, e)
            degV, dimV = VARIETY_DATA[variety_kind]
            extra = centralizer_bounds(G, e, family)
        elif variety_kind == CONJ_CLASS:
            xi = G.index_of(x)
            cb = centralizer_bounds(G, xi, family)
            count = cb["class_size"]
            degV, dimV = ADJOINT_DEGREE_A1, GROUP_DIM - cb["dim_centralizer"]
            extra = cb
        else:
            raise BadInput(f"unknown variety kind {variety_kind}")
        C = degcalc.eval_rule("R21", {"d": GROUP_DIM, "degV": degV, "dimV": dimV, "D": ADJOINT_DEGREE_A1}, "C")
        Cv = tn.eval_exact(C)
        # count <= C |G|^(dimV/d)  <=>  count^d <= C^d |G|^dimV
        ok = count ** GROUP_DIM <= Cv ** GROUP_DIM * G.order ** dimV
        row = {"family": family, "kind": variety_kind, "q": q, "group_order": G.order,
               "count": count, "dimV": dimV, "degV": degV, "C": tn.to_text(C), "holds": ok,
               "exponent": math.log(count) / math.log(G.order) if count > 1 else 0.0,
               "target_exponent": dimV / GROUP_DIM}
        if extra:
            row["centralizer"] = extra
        rows.append(row)
    return rows


def _first_split_regular(G, q):
    n = G.n
    for i, a in enumerate(G.elements):
        if all(a[r * n + c] == 0 for r in range(n) for c in range(n) if r != c) and \
                dim_centralizer(G, i, "PGL2" if n == 3 else "SL2") == 1:
            return i
    raise LpError("no regular split element")
