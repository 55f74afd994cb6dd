"""Finite groups by exhaustive enumeration.

Every group lives in a *universe*: a finite set of elements indexed 0..N-1 with
identity 0 and a multiplication on indices.  Closed matrix groups and coset
quotients are universes.  A subgroup is a frozen set of universe indices plus a
generating list, so the same routines (classes, closures, cores, radicals)
work unchanged inside a matrix group or inside any of its quotients.
"""
from __future__ import annotations

import math
from collections import Counter, deque

from .ffarith import (
    Field, MatrixOverF, NotInvertible, factorize, field_create, mat_det, mat_encode,
    mat_identity, mat_inv, mat_mul,
)

DEFAULT_GROUP_CAP = 2_000_000


class GroupError(Exception):
    pass


class CapExceeded(GroupError):
    pass


class NotNormal(GroupError):
    pass


class NotInGroup(GroupError):
    pass


# -- universes -------------------------------------------------------------------

class Universe:
    order: int
    gens: tuple

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def conj(self, x: int, t: int) -> int:
        """t^-1 x t."""
        return self.mul(self.mul(self.inv(t), x), t)

    def power(self, x: int, k: int) -> int:
        r, b = 0, x
        while k:
            if k & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            k >>= 1
        return r

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            k += 1
        return k

    def whole(self) -> "Subgroup":
        return Subgroup(self, frozenset(range(self.order)), self.gens)


class FiniteMatrixGroup(Universe):
    """Closure of invertible matrices; elements indexed in BFS layers, each layer
    sorted by canonical bytes, so index 0 is the identity."""

    def __init__(self, field: Field, n: int, generators, cap: int = DEFAULT_GROUP_CAP):
        self.field, self.n = field, n
        gens = []
        for g in generators:
            ent = g.entries if isinstance(g, MatrixOverF) else tuple(g)
            if len(ent) != n * n:
                raise GroupError("generator has wrong size")
            if mat_det(field, n, ent) == 0:
                raise NotInvertible("generator is singular")
            gens.append(tuple(ent))
        self.generators = tuple(gens)
        one = mat_identity(n)
        elems, index = [one], {one: 0}
        parent, via = [-1], [-1]
        layer = [one]
        while layer:
            found = {}
            for x in layer:
                ix = index[x]
                for gi, g in enumerate(gens):
                    y = mat_mul(field, n, x, g)
                    if y not in index and y not in found:
                        found[y] = (ix, gi)
            if len(elems) + len(found) > cap:
                raise CapExceeded(f"group order exceeds cap {cap}")
            layer = sorted(found, key=lambda m: mat_encode(field, m))
            for y in layer:
                index[y] = len(elems)
                elems.append(y)
                parent.append(found[y][0])
                via.append(found[y][1])
        self.elements = elems
        self.index = index
        self._parent, self._via = parent, via
        self.order = len(elems)
        self.gens = tuple(index[g] for g in gens)
        self._inv = [None] * self.order
        self._inv[0] = 0

    def mul(self, a, b):
        return self.index[mat_mul(self.field, self.n, self.elements[a], self.elements[b])]

    def inv(self, a):
        r = self._inv[a]
        if r is None:
            r = self.index[mat_inv(self.field, self.n, self.elements[a])]
            self._inv[a] = r
            self._inv[r] = a
        return r

    def matrix(self, i: int) -> MatrixOverF:
        return MatrixOverF(self.field, self.n, self.elements[i])

    def index_of(self, g) -> int:
        ent = g.entries if isinstance(g, MatrixOverF) else tuple(g)
        try:
            return self.index[ent]
        except KeyError:
            raise NotInGroup("matrix is not in the group") from None

    def word(self, i: int) -> list:
        """Generator indices whose product (left to right) is element i."""
        w = []
        while i:
            w.append(self._via[i])
            i = self._parent[i]
        return w[::-1]

    def __repr__(self):
        return f"FiniteMatrixGroup({self.field}, n={self.n}, order={self.order})"


def close(generators, field: Field = None, cap: int = DEFAULT_GROUP_CAP) -> FiniteMatrixGroup:
    gens = list(generators)
    if not gens:
        raise GroupError("need at least one generator")
    if field is None:
        field = gens[0].field
    n = gens[0].n if isinstance(gens[0], MatrixOverF) else math.isqrt(len(gens[0]))
    return FiniteMatrixGroup(field, n, gens, cap)


def group_from_json(doc, cap: int = DEFAULT_GROUP_CAP) -> FiniteMatrixGroup:
    """{field:{p,e}, n, generators:[[coefficient vectors or field ints, row-major]]}"""
    F = field_create(doc["field"]["p"], doc["field"].get("e", 1))
    n = doc["n"]
    gens = []
    for g in doc["generators"]:
        flat = [x for row in g for x in row] if g and isinstance(g[0], list) and len(g) == n \
            and all(isinstance(r, list) and len(r) == n for r in g) else g
        ent = tuple(F.from_vec(x) if isinstance(x, list) else F.from_int(x) for x in flat)
        gens.append(ent)
    return FiniteMatrixGroup(F, n, gens, cap)


class AbstractQuotient(Universe):
    """Cosets of a normal subgroup N of G (both inside one universe)."""

    def __init__(self, G: "Subgroup", N: "Subgroup"):
        U = G.universe
        if N.universe is not U or not N.elements <= G.elements:
            raise GroupError("N must be a subgroup of G")
        if not is_normal(G, N):
            raise NotNormal("subgroup is not normal")
        self.parent, self.group, self.kernel = U, G, N
        coset_of = {}
        reps = []
        Nl = sorted(N.elements)
        for x in sorted(G.elements):
            if x in coset_of:
                continue
            c = len(reps)
            reps.append(x)
            for h in Nl:
                coset_of[U.mul(x, h)] = c
        self.reps = reps
        self.coset_of = coset_of
        self.order = len(reps)
        gens = []
        for g in G.gens:
            c = coset_of[g]
            if c and c not in gens:
                gens.append(c)
        self.gens = tuple(gens)
        self._inv = {}
        if self.order * N.order != G.order:
            raise GroupError("coset count does not match Lagrange")

    def mul(self, a, b):
        return self.coset_of[self.parent.mul(self.reps[a], self.reps[b])]

    def inv(self, a):
        r = self._inv.get(a)
        if r is None:
            r = self.coset_of[self.parent.inv(self.reps[a])]
            self._inv[a] = r
        return r

    def proj(self, x: int) -> int:
        return self.coset_of[x]

    def section(self, c: int) -> int:
        return self.reps[c]

    def preimage(self, H: "Subgroup") -> "Subgroup":
        """Full preimage in G of a subgroup of the quotient."""
        els = frozenset(x for x, c in self.coset_of.items() if c in H.elements)
        gens = tuple(self.reps[c] for c in H.gens) + tuple(self.kernel.gens)
        return Subgroup(self.parent, els, gens)

    def image(self, H: "Subgroup") -> "Subgroup":
        return Subgroup(self, frozenset(self.coset_of[x] for x in H.elements),
                        tuple(sorted({self.coset_of[g] for g in H.gens} - {0})))

    def __repr__(self):
        return f"AbstractQuotient(order={self.order})"


def quotient(G: "Subgroup", N: "Subgroup") -> AbstractQuotient:
    Q = AbstractQuotient(G, N)
    U = G.universe
    for a in G.gens:
        for b in G.gens:
            if Q.proj(U.mul(a, b)) != Q.mul(Q.proj(a), Q.proj(b)):
                raise GroupError("projection is not a homomorphism")
    return Q


# -- subgroups ------------------------------------------------------------------

class Subgroup:
    __slots__ = ("universe", "elements", "gens", "note")

    def __init__(self, universe: Universe, elements, gens=(), note=None):
        self.universe = universe
        self.elements = frozenset(elements)
        self.gens = tuple(g for g in gens if g != 0)
        self.note = note

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.universe is self.universe \
            and other.elements == self.elements

    def __hash__(self):
        return hash(self.elements)

    def sorted(self):
        return sorted(self.elements)

    def __repr__(self):
        return f"Subgroup(order={self.order})"


def trivial(U: Universe) -> Subgroup:
    return Subgroup(U, frozenset((0,)), ())


def _extend(U: Universe, elements: set, gens: list, new) -> set:
    """Closure of a subgroup's elements together with new generators."""
    gens = gens + [g for g in new if g not in gens]
    out = set(elements)
    queue = deque()
    for g in new:
        if g not in out:
            out.add(g)
            queue.append(g)
    # every product of an old element with a new generator must be added
    if queue:
        queue.extend(elements)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = U.mul(x, g)
            if y not in out:
                out.add(y)
                queue.append(y)
    return out


def generate(U: Universe, gens) -> Subgroup:
    gens = [g for g in dict.fromkeys(gens) if g != 0]
    els = {0}
    used = []
    for g in gens:
        if g not in els:
            els = _extend(U, els, used, [g])
            used.append(g)
    return Subgroup(U, els, tuple(used))


def _lagrange(G: Subgroup, H: Subgroup) -> Subgroup:
    if G.order % H.order:
        raise GroupError("Lagrange violated: subgroup order does not divide group order")
    return H


def is_normal(G: Subgroup, N: Subgroup) -> bool:
    U = G.universe
    gens_N = N.gens or tuple(N.elements)
    return all(U.conj(x, t) in N.elements for x in gens_N for t in G.gens)


def is_abelian(G: Subgroup) -> bool:
    U = G.universe
    return all(U.mul(a, b) == U.mul(b, a) for a in G.gens for b in G.gens)


def conjugacy_classes(G: Subgroup) -> list:
    """Classes as sorted lists, ordered by smallest member."""
    U = G.universe
    seen = set()
    out = []
    for x in sorted(G.elements):
        if x in seen:
            continue
        cls = {x}
        queue = [x]
        while queue:
            y = queue.pop()
            for t in G.gens:
                z = U.conj(y, t)
                if z not in cls:
                    cls.add(z)
                    queue.append(z)
        seen |= cls
        out.append(sorted(cls))
    return out


def centralizer(G: Subgroup, X) -> Subgroup:
    U = G.universe
    X = list(X)
    els = [g for g in G.elements if all(U.mul(g, x) == U.mul(x, g) for x in X)]
    return _lagrange(G, _with_gens(U, els))


def center(G: Subgroup) -> Subgroup:
    return centralizer(G, G.gens)


def _with_gens(U: Universe, elements) -> Subgroup:
    """Subgroup from a known element set, with a greedy generating list."""
    els = frozenset(elements)
    gens, have = [], {0}
    for x in sorted(els):
        if x not in have:
            have = _extend(U, have, gens, [x])
            gens.append(x)
        if len(have) == len(els):
            break
    if have != set(els):
        raise GroupError("element set is not a subgroup")
    return Subgroup(U, els, tuple(gens))


def normal_closure(G: Subgroup, X) -> Subgroup:
    """Subgroup generated by X and its conjugates.  Conjugating each new
    generator by every generator of G suffices for invariance."""
    U = G.universe
    gens = []
    els = {0}
    pending = list(X)
    while pending:
        x = pending.pop()
        if x in els:
            continue
        els = _extend(U, els, gens, [x])
        gens.append(x)
        pending.extend(U.conj(x, t) for t in G.gens)
    return _lagrange(G, Subgroup(U, els, tuple(gens)))


def derived_subgroup(G: Subgroup) -> Subgroup:
    U = G.universe
    comms = []
    for i, a in enumerate(G.gens):
        for b in G.gens[i + 1:]:
            c = U.mul(U.mul(U.inv(a), U.inv(b)), U.mul(a, b))
            if c:
                comms.append(c)
    return normal_closure(G, comms)


def is_solvable(G: Subgroup) -> bool:
    H = G
    while H.order > 1:
        D = derived_subgroup(H)
        if D.order == H.order:
            return False
        H = D
    return True


def is_p_group(G: Subgroup, p: int) -> bool:
    n = G.order
    while n % p == 0:
        n //= p
    return n == 1


def normalizer(G: Subgroup, H: Subgroup) -> Subgroup:
    U = G.universe
    gens_H = H.gens or tuple(H.elements)
    els = [g for g in G.elements if all(U.conj(h, g) in H.elements for h in gens_H)]
    return _with_gens(U, els)


def sylow(G: Subgroup, l: int) -> Subgroup:
    """Deterministic Sylow l-subgroup grown from the first l-element.

    An l-subgroup P that is not Sylow is properly contained in its normalizer's
    l-part, so some y in N(P) \\ P with y^(l^k) in P always extends it.
    """
    U = G.universe
    target = 1
    n = G.order
    while n % l == 0:
        n //= l
        target *= l
    if target == 1:
        return Subgroup(U, {0}, (), note="BadPrime")
    steps = target.bit_length() + 1
    P = trivial(U)
    while P.order < target:
        N = normalizer(G, P) if P.order > 1 else G
        y = None
        for x in sorted(N.elements):
            if x in P.elements:
                continue
            z = x
            for _ in range(steps):
                if z in P.elements:
                    break
                z = U.power(z, l)
            if z in P.elements:
                y = x
                break
        if y is None:
            raise GroupError("Sylow growth stalled")
        P = Subgroup(U, _extend(U, set(P.elements), list(P.gens), [y]), P.gens + (y,))
    return _lagrange(G, P)


def core(G: Subgroup, H: Subgroup) -> Subgroup:
    """Largest normal subgroup of G inside H."""
    U = G.universe
    C = set(H.elements)
    changed = True
    while changed:
        changed = False
        for t in G.gens:
            keep = {x for x in C if U.conj(x, U.inv(t)) in C}
            if len(keep) != len(C):
                C, changed = keep, True
    return _lagrange(G, _with_gens(U, C))


def p_core(G: Subgroup, p: int) -> Subgroup:
    if G.order % p:
        return trivial(G.universe)
    return core(G, sylow(G, p))


def _prime(k: int) -> bool:
    return k > 1 and all(k % d for d in range(2, math.isqrt(k) + 1))


def minimal_normals(G: Subgroup) -> list:
    """Inclusion-minimal normal closures of class representatives.

    Every minimal normal subgroup is the closure of any of its elements of
    prime order, so only prime-order representatives are needed.
    """
    U = G.universe
    closures = []
    for cls in conjugacy_classes(G)[1:]:
        x = cls[0]
        if not _prime(U.element_order(x)):
            continue
        N = normal_closure(G, [x])
        if all(N.elements != c.elements for c in closures):
            closures.append(N)
    mins = [N for N in closures if not any(M.elements < N.elements for M in closures)]
    return sorted(mins, key=lambda N: (N.order, sorted(N.elements)))


def solvable_radical(G: Subgroup) -> Subgroup:
    """Iteratively lift the abelian minimal normal subgroups of G/R."""
    U = G.universe
    R = trivial(U)
    while True:
        if R.order == G.order:
            return R
        if R.order == 1:
            Q, QG = None, G
        else:
            Q = AbstractQuotient(G, R)
            QG = Q.whole()
        ab = [M for M in minimal_normals(QG) if is_abelian(M)]
        if not ab:
            return _lagrange(G, R)
        gens = [g for M in ab for g in M.gens]
        if Q is None:
            R = normal_closure(G, gens)
        else:
            img = generate(Q, gens)
            R = Q.preimage(img)


def socle(G: Subgroup) -> dict:
    mins = minimal_normals(G) if G.order > 1 else []
    U = G.universe
    gens = [g for M in mins for g in M.gens]
    S = normal_closure(G, gens) if gens else trivial(U)
    factors = []
    for M in mins:
        ab = is_abelian(M)
        entry = {"subgroup": M, "order": M.order, "abelian": ab}
        if not ab:
            entry["simple_factors"] = [
                {"subgroup": T, "order": T.order, "spectrum": order_spectrum(T),
                 "simple": is_simple(T)}
                for T in minimal_normals(M)]
        factors.append(entry)
    return {"socle": S, "factors": factors}


def is_simple(G: Subgroup) -> bool:
    if G.order == 1:
        return False
    mins = minimal_normals(G)
    return len(mins) == 1 and mins[0].order == G.order


def order_spectrum(G) -> dict:
    """Multiset of element orders as {order: count}."""
    if isinstance(G, Universe):
        G = G.whole()
    U = G.universe
    c = Counter(U.element_order(x) for x in G.elements)
    return dict(sorted(c.items()))


CENTER, CENTRALIZER, DERIVED, NORMAL_CLOSURE, SYLOW = (
    "CENTER", "CENTRALIZER", "DERIVED", "NORMAL_CLOSURE", "SYLOW")


def subgroup_query(G: Subgroup, kind: str, args=None) -> Subgroup:
    if kind == CENTER:
        H = center(G)
    elif kind == CENTRALIZER:
        H = centralizer(G, args)
    elif kind == DERIVED:
        H = derived_subgroup(G)
    elif kind == NORMAL_CLOSURE:
        H = normal_closure(G, args if isinstance(args, (list, tuple)) else [args])
    elif kind == SYLOW:
        H = sylow(G, args)
    else:
        raise GroupError(f"unknown subgroup kind {kind}")
    return _lagrange(G, H)


def as_matrix_group(U: FiniteMatrixGroup, H: Subgroup) -> FiniteMatrixGroup:
    """Re-close a subgroup of a matrix group as a standalone matrix group."""
    gens = [U.elements[g] for g in H.gens] or [mat_identity(U.n)]
    return FiniteMatrixGroup(U.field, U.n, gens)


# -- standard families ---------------------------------------------------------------

def gl_generators(F: Field, n: int):
    """Two generators of GL_n(F): diag(w,1,...,1) and the cycle-with-transvection."""
    w = F.gen
    a = list(mat_identity(n))
    a[0] = w
    if n == 1:
        return [tuple(a)]
    b = [0] * (n * n)
    neg1 = F.neg(1)
    b[0 * n + 0] = neg1
    b[0 * n + n - 1] = 1
    for i in range(1, n):
        b[i * n + i - 1] = neg1
    return [tuple(a), tuple(b)]


def sl_generators(F: Field, n: int):
    """Elementary transvections for all field generators along a path, enough
    to generate SL_n(F)."""
    gens = []
    basis = [F.from_vec([1 if i == j else 0 for i in range(F.e)]) for j in range(F.e)]
    for i in range(n):
        for j in range(n):
            if i != j:
                for c in basis:
                    m = list(mat_identity(n))
                    m[i * n + j] = c
                    gens.append(tuple(m))
    return gens


def GL(n: int, q: int, cap: int = DEFAULT_GROUP_CAP) -> FiniteMatrixGroup:
    F = field_of(q)
    gens = gl_generators(F, n)
    if n > 1:
        gens = gens + sl_generators(F, n)[:1]
    return FiniteMatrixGroup(F, n, gens, cap)


def SL(n: int, q: int, cap: int = DEFAULT_GROUP_CAP) -> FiniteMatrixGroup:
    return FiniteMatrixGroup(field_of(q), n, sl_generators(field_of(q), n), cap)


def field_of(q: int) -> Field:
    fac = factorize(q)
    if len(fac) != 1:
        raise GroupError(f"{q} is not a prime power")
    (p, e), = fac.items()
    return field_create(p, e)
