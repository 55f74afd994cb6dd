"""Affine varieties over finite fields as explicit polynomial systems.

Points are found by a depth-first search over the coordinates in declaration
order.  Whenever a polynomial has a single unassigned variable in which it is
linear, that variable is solved for instead of scanned, which makes the closed
GL_n embedding (determinant times the last corner entry equals one) and its
linear sections cheap to enumerate.
"""
from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass
from functools import lru_cache

from .ffarith import (
    Field, FieldElement, MatrixOverF, NotInvertible, Poly, field_create, mat_det,
    mat_identity, mat_inv, mat_mul, nullspace, row_reduce,
)


class VarietyError(Exception):
    pass


class BudgetExceeded(VarietyError):
    pass


class AmbientMismatch(VarietyError):
    pass


class NoPoints(VarietyError):
    pass


class BadCharacteristic(VarietyError):
    pass


class CapExceeded(VarietyError):
    pass


class NotAGroupPoint(VarietyError):
    pass


DEFAULT_BUDGET = 10 ** 7


def matrix_var_names(m: int):
    sep = "_" if m >= 10 else ""
    return tuple(f"x{i}{sep}{j}" for i in range(1, m + 1) for j in range(1, m + 1))


def default_names(nvars: int):
    m = math.isqrt(nvars)
    if m * m == nvars and m > 1:
        return matrix_var_names(m)
    return tuple(f"x{i}" for i in range(1, nvars + 1))


@dataclass(frozen=True, eq=False)
class VarietySpec:
    field: Field
    ambient_vars: int
    polys: tuple
    names: tuple = ()

    def __post_init__(self):
        names = self.names or default_names(self.ambient_vars)
        if len(names) != self.ambient_vars:
            raise VarietyError("name count does not match ambient dimension")
        object.__setattr__(self, "names", tuple(names))
        for f in self.polys:
            if f.variables != self.names or f.field is not self.field:
                raise VarietyError("polynomial ring does not match the variety")
        object.__setattr__(self, "polys", tuple(self.polys))

    def contains(self, point) -> bool:
        return all(f.evaluate(point) == 0 for f in self.polys)

    def deg_bound(self) -> int:
        """Product of the degrees of the defining polynomials (Bezout)."""
        out = 1
        for f in self.polys:
            d = f.degree()
            if isinstance(d, int) and d > 0:
                out *= d
        return out


@dataclass(frozen=True, eq=False)
class MorphismSpec:
    source_vars: int
    target_vars: int
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != self.target_vars:
            raise VarietyError("component count must equal target dimension")

    @property
    def mdeg(self):
        return max((c.degree() for c in self.components if not c.is_zero()), default=0)

    def __call__(self, point):
        return tuple(c.evaluate(point) for c in self.components)


# -- expression grammar -------------------------------------------------------

_TOK = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def parse_poly(text: str, F: Field, names) -> Poly:
    """Parse integers, variables and + - * ^ with parentheses."""
    toks = []
    for m in _TOK.finditer(text):
        if m.group(1) is not None:
            toks.append(("n", int(m.group(1))))
        elif m.group(2) is not None:
            toks.append(("v", m.group(2)))
        elif m.group(3) is not None:
            toks.append(("s", m.group(3)))
    names = tuple(names)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take():
        nonlocal pos
        pos += 1
        return toks[pos - 1]

    def expr():
        sign = 1
        if peek() in (("s", "-"), ("s", "+")):
            sign = -1 if take()[1] == "-" else 1
        acc = term()
        if sign < 0:
            acc = -acc
        while peek() in (("s", "+"), ("s", "-")):
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = factor()
        while peek() == ("s", "*"):
            take()
            acc = acc * factor()
        return acc

    def factor():
        b = atom()
        if peek() == ("s", "^"):
            take()
            kind, v = take()
            if kind != "n":
                raise VarietyError("exponent must be an integer")
            b = b ** v
        return b

    def atom():
        kind, v = take() if pos < len(toks) else (None, None)
        if kind == "n":
            return Poly.constant(F, names, v)
        if kind == "v":
            if v not in names:
                raise VarietyError(f"unknown variable {v}")
            return Poly.var(F, names, v)
        if (kind, v) == ("s", "("):
            e = expr()
            if take() != ("s", ")"):
                raise VarietyError("expected )")
            return e
        if (kind, v) == ("s", "-"):
            return -atom()
        raise VarietyError(f"unexpected token {v!r}")

    out = expr()
    if pos != len(toks):
        raise VarietyError("trailing input in polynomial")
    return out


def variety_from_json(doc) -> VarietySpec:
    if isinstance(doc, str):
        doc = json.loads(doc)
    F = field_create(doc["field"]["p"], doc["field"].get("e", 1))
    n = doc["vars"]
    names = tuple(doc.get("names") or default_names(n))
    return VarietySpec(F, n, tuple(parse_poly(s, F, names) for s in doc["polys"]), names)


def variety(F: Field, nvars: int, polys, names=None) -> VarietySpec:
    names = tuple(names or default_names(nvars))
    ps = tuple(parse_poly(p, F, names) if isinstance(p, str) else p for p in polys)
    return VarietySpec(F, nvars, ps, names)


# -- embedding into extensions ------------------------------------------------

@lru_cache(maxsize=None)
def _embedding(F: Field, K: Field):
    """Images in K of all elements of F (F a subfield of K)."""
    if F.p != K.p or K.e % F.e:
        raise VarietyError(f"{F} is not a subfield of {K}")
    if F.e == 1:
        return tuple(range(F.q))
    mod = F.modulus
    root = None
    for a in range(K.q):
        s, pw = 0, 1
        for c in mod:
            s = K.add(s, K.mul(c, pw))
            pw = K.mul(pw, a)
        if s == 0:
            root = a
            break
    imgs = []
    for v in range(F.q):
        s, pw = 0, 1
        for c in F.vec(v):
            s = K.add(s, K.mul(c, pw))
            pw = K.mul(pw, root)
        imgs.append(s)
    return tuple(imgs)


def extension(F: Field, k: int) -> Field:
    return field_create(F.p, F.e * k)


def _compile(polys, F: Field, K: Field):
    emb = _embedding(F, K)
    return [[(emb[c], m) for m, c in f.terms.items()] for f in polys]


def _eval_compiled(K, terms, pt):
    s = 0
    for c, m in terms:
        v = c
        for x, e in zip(pt, m):
            if e:
                if x == 0:
                    v = 0
                    break
                v = K.mul(v, K.pow(x, e))
        if v:
            s = K.add(s, v)
    return s


def _search(K: Field, nvars: int, compiled, budget: int):
    """All points of a polynomial system over K, in lexicographic order."""
    vars_of = [frozenset(i for _, m in t for i, e in enumerate(m) if e) for t in compiled]
    last = [max(vs) if vs else -1 for vs in vars_of]
    # polys checked (or solved) when their largest variable is assigned
    by_last = {}
    for idx, l in enumerate(last):
        by_last.setdefault(l, []).append(idx)
    for idx in by_last.get(-1, []):
        if _eval_compiled(K, compiled[idx], ()) != 0:
            return []
    linear_in_last = {}
    for idx, l in enumerate(last):
        if l >= 0 and all(m[l] <= 1 for _, m in compiled[idx]):
            linear_in_last.setdefault(l, []).append(idx)
    out = []
    pt = [0] * nvars
    visited = 0

    def candidates(i):
        lin = linear_in_last.get(i)
        if lin:
            idx = lin[0]
            a = b = 0
            for c, m in compiled[idx]:
                v = c
                for j, e in enumerate(m[:i]):
                    if e:
                        v = K.mul(v, K.pow(pt[j], e)) if pt[j] else 0
                        if not v:
                            break
                if v:
                    if m[i]:
                        a = K.add(a, v)
                    else:
                        b = K.add(b, v)
            if a:
                return (K.mul(K.neg(b), K.inv(a)),)
            if b:
                return ()
        return range(K.q)

    def rec(i):
        nonlocal visited
        if i == nvars:
            out.append(tuple(pt))
            return
        for x in candidates(i):
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"point search exceeded budget {budget}")
            pt[i] = x
            ok = True
            for idx in by_last.get(i, ()):
                if _eval_compiled(K, compiled[idx], pt) != 0:
                    ok = False
                    break
            if ok:
                rec(i + 1)
        pt[i] = 0

    rec(0)
    return out


def points_over(V: VarietySpec, k: int = 1, budget: int = DEFAULT_BUDGET):
    """Exact sorted list of points of V over the degree-k extension."""
    K = extension(V.field, k)
    return _points_cached(V, K, budget)


_POINT_CACHE: dict = {}


def _points_cached(V, K, budget):
    key = (id(V), K.p, K.e)
    hit = _POINT_CACHE.get(key)
    if hit is not None and hit[0] is V:
        return hit[1]
    pts = _search(K, V.ambient_vars, _compile(V.polys, V.field, K), budget)
    if len(_POINT_CACHE) > 256:
        _POINT_CACHE.clear()
    _POINT_CACHE[key] = (V, pts)
    return pts


# -- constructions ----------------------------------------------------------------

def gln_embed(n: int, F: Field) -> VarietySpec:
    """GL_n inside Mat_{n+1}: zero border, det(top-left n x n) * x_{n+1,n+1} = 1."""
    if n < 1:
        raise VarietyError("n must be at least 1")
    m = n + 1
    names = matrix_var_names(m)
    X = [[Poly.var(F, names, names[i * m + j]) for j in range(m)] for i in range(m)]
    polys = []
    for i in range(n):
        polys.append(X[i][n])
        polys.append(X[n][i])
    polys.append(_det_poly([row[:n] for row in X[:n]], F, names) * X[n][n] - 1)
    return VarietySpec(F, m * m, tuple(polys), names)


def _det_poly(rows, F, names):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Poly(F, names)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det_poly(minor, F, names)
        total = total + term if j % 2 == 0 else total - term
    return total


def embed_matrix(F: Field, n: int, entries) -> tuple:
    """Point of gln_embed(n) for an invertible n x n matrix."""
    det = mat_det(F, n, entries)
    if det == 0:
        raise NotInvertible("singular matrix")
    m = n + 1
    out = [0] * (m * m)
    for i in range(n):
        for j in range(n):
            out[i * m + j] = entries[i * n + j]
    out[-1] = F.inv(det)
    return tuple(out)


UNION, INTERSECT = "UNION", "INTERSECT"


def set_ops(V: VarietySpec, W: VarietySpec, op: str) -> VarietySpec:
    if V.field is not W.field or V.ambient_vars != W.ambient_vars or V.names != W.names:
        raise AmbientMismatch("varieties live in different ambient spaces")
    if op == INTERSECT:
        return VarietySpec(V.field, V.ambient_vars, V.polys + W.polys, V.names)
    if op == UNION:
        # an empty system is the whole space, and so is any union with it
        prods = tuple(f * g for f in V.polys for g in W.polys)
        return VarietySpec(V.field, V.ambient_vars, prods, V.names)
    raise VarietyError(f"unknown set operation {op}")


def preimage(f: MorphismSpec, W: VarietySpec, X: VarietySpec) -> VarietySpec:
    """{x in X : f(x) in W} as the system W o f together with X's equations."""
    if f.source_vars != X.ambient_vars or f.target_vars != W.ambient_vars:
        raise AmbientMismatch("morphism does not match the varieties")
    if W.field is not X.field:
        raise AmbientMismatch("different base fields")
    for c in f.components:
        if c.variables != X.names:
            raise AmbientMismatch("morphism components not in X's coordinates")
    comp = list(f.components)
    pulled = tuple(g.substitute(comp) for g in W.polys)
    return VarietySpec(X.field, X.ambient_vars, X.polys + pulled, X.names)


def empirical_dimension(V: VarietySpec, k_range, budget: int = DEFAULT_BUDGET):
    """Least-squares slope of log_q |V(F_{q^k})| against k."""
    ks = list(k_range)
    q = V.field.q
    counts = [len(points_over(V, k, budget)) for k in ks]
    if any(c == 0 for c in counts):
        raise NoPoints("variety has no points over some extension")
    ys = [math.log(c, q) for c in counts]
    if len(ks) == 1:
        slope = ys[0] / ks[0]
        resid = 0.0
    else:
        mk = sum(ks) / len(ks)
        my = sum(ys) / len(ys)
        sxx = sum((k - mk) ** 2 for k in ks)
        slope = sum((k - mk) * (y - my) for k, y in zip(ks, ys)) / sxx
        resid = max(abs(y - (my + slope * (k - mk))) for k, y in zip(ks, ys))
    dim = round(slope)
    return {"dimension": dim, "slope": slope, "residual": resid,
            "confident": resid < 0.1 and abs(slope - dim) < 0.1, "counts": counts}


# -- adjoint representation ----------------------------------------------------

def _algebra_basis(F: Field, n: int, algebra: str):
    basis = []
    if algebra == "gl":
        for i in range(n):
            for j in range(n):
                m = [0] * (n * n)
                m[i * n + j] = 1
                basis.append(tuple(m))
        return basis
    if algebra != "sl":
        raise VarietyError(f"unknown algebra {algebra}")
    if n % F.p == 0:
        raise BadCharacteristic(f"sl_{n} demo needs p not dividing {n}")
    for i in range(n):
        for j in range(i + 1, n):
            m = [0] * (n * n)
            m[i * n + j] = 1
            basis.append(tuple(m))
    for i in range(n - 1):
        m = [0] * (n * n)
        m[i * n + i] = 1
        m[(i + 1) * n + i + 1] = F.neg(1)
        basis.append(tuple(m))
    for i in range(n):
        for j in range(i):
            m = [0] * (n * n)
            m[i * n + j] = 1
            basis.append(tuple(m))
    return basis


def _coords(F: Field, n: int, algebra: str, Y):
    if algebra == "gl":
        return list(Y)
    out = [Y[i * n + j] for i in range(n) for j in range(i + 1, n)]
    c = 0
    for i in range(n - 1):
        c = F.add(c, Y[i * n + i])
        out.append(c)
    out += [Y[i * n + j] for i in range(n) for j in range(i)]
    return out


def _norm_algebra(a: str) -> str:
    a = a.lower().replace("_n", "").replace("_", "")
    return "gl" if a.startswith("gl") else "sl" if a.startswith("sl") else a


def adjoint_matrix(F: Field, n: int, g, algebra: str = "sl") -> tuple:
    """Raw entries of Ad(g) on the chosen algebra, columns = images of basis."""
    algebra = _norm_algebra(algebra)
    gi = mat_inv(F, n, g)
    basis = _algebra_basis(F, n, algebra)
    cols = [_coords(F, n, algebra, mat_mul(F, n, mat_mul(F, n, g, b), gi)) for b in basis]
    m = len(basis)
    return tuple(cols[j][i] for i in range(m) for j in range(m))


def adjoint_rep(g: MatrixOverF, algebra: str = "sl") -> MatrixOverF:
    """Matrix of x -> g x g^-1 on gl_n or sl_n (basis: E_ij above the
    diagonal, then E_ii - E_{i+1,i+1}, then E_ij below)."""
    F = g.field
    ent = adjoint_matrix(F, g.n, g.entries, algebra)
    return MatrixOverF(F, math.isqrt(len(ent)), ent)


def adjoint_dim(n: int, algebra: str) -> int:
    return n * n if _norm_algebra(algebra) == "gl" else n * n - 1


# -- tiny quotient construction ----------------------------------------------------

DEFAULT_QUOTIENT_CAPS = {"M": 2000, "Lprime": 12, "E": 400, "V": 400, "points": 5000}


def _monomials(nvars: int, maxdeg: int):
    out = []
    for deg in range(maxdeg + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for c in combo:
                e[c] += 1
            out.append(tuple(e))
    return out


def _in_basis(red, piv, v):
    return [v[c] for c in piv]


def _compound(F, A, k):
    """k-th exterior power of a square matrix given as list of rows."""
    n = len(A)
    subsets = list(itertools.combinations(range(n), k))
    out = []
    for S in subsets:
        row = []
        for T in subsets:
            sub = tuple(A[i][j] for i in S for j in T)
            row.append(mat_det(F, k, sub) if k else 1)
        out.append(row)
    return out, subsets


def _rows_mul(F, A, B):
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        r = []
        for j in range(p):
            s = 0
            for t in range(m):
                if A[i][t] and B[t][j]:
                    s = F.add(s, F.mul(A[i][t], B[t][j]))
            r.append(s)
        out.append(r)
    return out


def _rows_inv(F, A):
    n = len(A)
    flat = mat_inv(F, n, tuple(x for r in A for x in r))
    return [list(flat[i * n:(i + 1) * n]) for i in range(n)]


def quotient_embed_tiny(G: VarietySpec, H_polys, caps=None, points=None):
    """Run the quotient-by-normal-subgroup construction on the F_q-points of a
    small group G in the GL_n embedding, returning beta(g) for every point.

    Steps: monomials L of degree <= Delta in the matrix coordinates, right
    translations rho_g(f)(x) = f(xg), the invariant span L' of the
    translates of the H equations, W = elements of L' vanishing on H, the
    exterior power E = wedge^{dim W} L' with the line wedge W, the H-weight
    decomposition of E, and beta(g)(v) = alpha(g) v alpha(g)^-1 on the sum of
    End(E_chi) over the G-orbit of the character of wedge W.
    """
    caps = dict(DEFAULT_QUOTIENT_CAPS, **(caps or {}))
    F = G.field
    m = math.isqrt(G.ambient_vars)
    if m * m != G.ambient_vars:
        raise VarietyError("group must live in square-matrix coordinates")
    n = m - 1
    names = G.names
    H_polys = [parse_poly(h, F, names) if isinstance(h, str) else h for h in H_polys]
    delta = max([h.degree() for h in H_polys if not h.is_zero()] + [1])
    monos = _monomials(G.ambient_vars, delta)
    M_actual = len(monos)
    M_formula = math.comb(n * n + delta, delta)
    if M_actual > caps["M"]:
        raise CapExceeded(f"monomial space of dimension {M_actual} exceeds cap {caps['M']}")
    if points is None:
        pts = points_over(G, 1)
    else:
        pts = [tuple(p) for p in points]
        for p in pts:
            if not G.contains(p):
                raise NotAGroupPoint(f"{p} is not a point of G")
    if len(pts) > caps["points"]:
        raise CapExceeded("too many group points")
    mono_index = {e: i for i, e in enumerate(monos)}
    H_vars = [Poly.var(F, names, v) for v in names]

    def vec_of(f):
        v = [0] * M_actual
        for e, c in f.terms.items():
            v[mono_index[e]] = c
        return v

    def translate_images(g):
        # (x g)_{ij} = sum_k x_{ik} g_{kj}
        imgs = []
        for i in range(m):
            for j in range(m):
                s = Poly(F, names)
                for k in range(m):
                    c = g[k * m + j]
                    if c:
                        s = s + H_vars[i * m + k] * FieldElement(F, c)
                imgs.append(s)
        return imgs

    translates = {}
    for g in pts:
        imgs = translate_images(g)
        translates[g] = imgs
    gens = []
    for g in pts:
        for h in H_polys:
            gens.append(vec_of(h.substitute(translates[g])))
    red, piv = row_reduce(F, gens, M_actual)
    dimL = len(red)
    if dimL > caps["Lprime"]:
        raise CapExceeded(f"invariant subspace of dimension {dimL} exceeds cap {caps['Lprime']}")
    basis_polys = []
    for row in red:
        terms = {monos[i]: c for i, c in enumerate(row) if c}
        basis_polys.append(Poly(F, names, terms))

    # rho(g) on L' in column convention: column i = coordinates of rho_g(l_i)
    rho = {}
    for g in pts:
        cols = [_in_basis(red, piv, vec_of(b.substitute(translates[g]))) for b in basis_polys]
        rho[g] = [[cols[j][i] for j in range(dimL)] for i in range(dimL)]

    H_pts = [g for g in pts if all(h.evaluate(g) == 0 for h in H_polys)]
    # W: elements of L' vanishing on the H points
    cond = [[b.evaluate(h) for b in basis_polys] for h in H_pts]
    W = nullspace(F, cond, dimL) if cond else [tuple(1 if i == j else 0 for i in range(dimL)) for j in range(dimL)]
    k = len(W)
    dimE = math.comb(dimL, k)
    if dimE > caps["E"]:
        raise CapExceeded(f"wedge space of dimension {dimE} exceeds cap {caps['E']}")
    subsets = list(itertools.combinations(range(dimL), k))
    wedge = [mat_det(F, k, tuple(W[r][c] for r in range(k) for c in S)) if k else 1 for S in subsets]
    alpha = {g: _compound(F, rho[g], k)[0] for g in pts}

    # H-weight decomposition of E
    spaces = [[tuple(1 if i == j else 0 for i in range(dimE)) for j in range(dimE)]]
    for h in H_pts:
        A = alpha[h]
        new = []
        for sp in spaces:
            # restrict alpha(h) to sp and split by eigenvalue
            for lam in range(1, F.q):
                vecs = _eigvecs_in(F, A, sp, lam)
                if vecs:
                    new.append(vecs)
        if sum(len(s) for s in new) != dimE:
            raise VarietyError("H does not act diagonalizably on the wedge space")
        spaces = new

    def character(v):
        out = []
        for h in H_pts:
            Av = _apply(F, alpha[h], v)
            i = next(i for i, x in enumerate(v) if x)
            lam = F.mul(Av[i], F.inv(v[i]))
            out.append(lam)
        return tuple(out)

    chars = [character(sp[0]) for sp in spaces]
    chi0 = character(wedge)
    orbit = set()
    for g in pts:
        orbit.add(character(_apply(F, alpha[g], wedge)))
    blocks = [i for i, c in enumerate(chars) if c in orbit]
    P_cols = [v for sp in spaces for v in sp]
    P = [[P_cols[j][i] for j in range(dimE)] for i in range(dimE)]
    Pinv = _rows_inv(F, P)
    offsets, o = [], 0
    for sp in spaces:
        offsets.append(o)
        o += len(sp)
    positions = []
    for b in blocks:
        s, sz = offsets[b], len(spaces[b])
        positions += [(s + i, s + j) for i in range(sz) for j in range(sz)]
    dimV = len(positions)
    if dimV > caps["V"]:
        raise CapExceeded(f"representation space of dimension {dimV} exceeds cap {caps['V']}")
    beta = {}
    for g in pts:
        Ap = _rows_mul(F, _rows_mul(F, Pinv, alpha[g]), P)
        Api = _rows_inv(F, Ap)
        cols = []
        for (a, b) in positions:
            # Ap * E_ab * Ap^-1 has entries Ap[i][a] * Api[b][j]
            cols.append([F.mul(Ap[i][a], Api[b][j]) for (i, j) in positions])
        beta[g] = tuple(cols[c][r] for r in range(dimV) for c in range(dimV))
    ident = mat_identity(dimV)
    kernel = sorted(g for g in pts if beta[g] == ident)
    return {
        "field": (F.p, F.e), "n": n, "Delta": delta,
        "M_actual": M_actual, "M_formula": M_formula,
        "dim_Lprime": dimL, "dim_W": k, "dim_E": dimE, "dim_V": dimV,
        "Lprime_basis": [repr(b) for b in basis_polys],
        "weight_spaces": [len(s) for s in spaces], "orbit_size": len(blocks),
        "chi0": chi0, "points": pts, "H_points": sorted(H_pts),
        "beta": beta, "kernel": kernel, "kernel_matches_H": kernel == sorted(H_pts),
    }


def _apply(F, A, v):
    return [_dot(F, row, v) for row in A]


def _dot(F, a, b):
    s = 0
    for x, y in zip(a, b):
        if x and y:
            s = F.add(s, F.mul(x, y))
    return s


def _eigvecs_in(F, A, sp, lam):
    """Basis of {v in span(sp) : A v = lam v}."""
    k = len(sp)
    n = len(A)
    # unknown coefficients c with v = sum c_i sp_i; (A - lam) v = 0
    images = [_apply(F, A, v) for v in sp]
    rows = []
    for r in range(n):
        rows.append([F.sub(images[i][r], F.mul(lam, sp[i][r])) for i in range(k)])
    sol = nullspace(F, rows, k)
    out = []
    for c in sol:
        v = [0] * n
        for i, ci in enumerate(c):
            if ci:
                for r in range(n):
                    v[r] = F.add(v[r], F.mul(ci, sp[i][r]))
        out.append(tuple(v))
    return out


def beta_is_homomorphism(result) -> bool:
    """Check beta(g) beta(h) = beta(gh) on all pairs of supplied points."""
    F = field_create(*result["field"])
    m = result["n"] + 1
    beta = result["beta"]
    dimV = result["dim_V"]
    for g in result["points"]:
        for h in result["points"]:
            gh = mat_mul(F, m, g, h)
            if gh not in beta:
                continue
            if mat_mul(F, dimV, beta[g], beta[h]) != beta[gh]:
                return False
    return True
