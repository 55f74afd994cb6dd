"""Finite field arithmetic over GF(p^e), sparse polynomials and dense matrices.

Field elements are stored as plain integers ``0 <= v < q``: the base-p digits
of ``v`` (least significant first) are the coefficients of the element as a
polynomial in the generator ``t`` modulo the field's modulus.  The wrapper
classes below are for the public API; the hot loops elsewhere in the package
work directly on integers and tuples through the ``Field`` tables.
"""
from __future__ import annotations

import math
from functools import lru_cache

DEFAULT_FIELD_CAP = 1 << 20


class FieldError(Exception):
    pass


class NotPrime(FieldError):
    pass


class CapExceeded(FieldError):
    pass


class BadQ(FieldError):
    pass


class NotInvertible(FieldError):
    pass


class _NegInf:
    """Degree of the zero polynomial.  Compares below every integer."""

    __slots__ = ()

    def __lt__(self, other):
        return not isinstance(other, _NegInf)

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return isinstance(other, _NegInf)

    def __eq__(self, other):
        return isinstance(other, _NegInf)

    def __hash__(self):
        return hash("NEG_INF")

    def __repr__(self):
        return "NEG_INF"


NEG_INF = _NegInf()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for s in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % s == 0:
            return n == s
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int):
    """Return (p, e) with q = p^e, or None."""
    if q < 2:
        return None
    f = factorize(q)
    if len(f) != 1:
        return None
    (p, e), = f.items()
    return p, e


# -- dense univariate helpers over GF(p), coefficient lists low degree first --

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = list(a)
    inv = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv % p
        if c:
            s = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[s + i] = (a[s + i] - c * mi) % p
        a.pop()
        _ptrim(a)
    return _ptrim(a)


def _pmulmod(a, b, m, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, m, p)


def _ppowmod(a, k, m, p):
    r = [1]
    while k:
        if k & 1:
            r = _pmulmod(r, a, m, p)
        a = _pmulmod(a, a, m, p)
        k >>= 1
    return r


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _irreducible(f, p):
    e = len(f) - 1
    t = [0, 1]
    if _ppowmod(t, p ** e, f, p) != _pmod(t, f, p):
        return False
    for r in factorize(e):
        h = _ppowmod(t, p ** (e // r), f, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, _ptrim(diff), p)) > 1:
            return False
    return True


def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Least monic irreducible of degree e over GF(p), ordered by the integer
    whose base-p digits are the lower coefficients."""
    if e == 1:
        return (0, 1)
    for code in range(p ** e):
        low = [(code // p ** i) % p for i in range(e)]
        if low[0] == 0:
            continue
        f = low + [1]
        if _irreducible(f, p):
            return tuple(f)
    raise FieldError("no irreducible polynomial found")  # unreachable


class Field:
    __slots__ = ("p", "e", "q", "modulus", "gen", "_exp", "_log", "_addt", "_mult",
                 "_digits", "_width", "_neg")

    def __init__(self, p: int, e: int = 1, cap: int = DEFAULT_FIELD_CAP):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if e < 1:
            raise FieldError("extension degree must be >= 1")
        q = p ** e
        if q > cap:
            raise CapExceeded(f"field size {q} exceeds cap {cap}")
        self.p, self.e, self.q = p, e, q
        self.modulus = least_irreducible(p, e)
        self._digits = None
        self._width = max(1, ((p - 1).bit_length() + 7) // 8)
        self._build_tables()

    # construction -------------------------------------------------------

    def _mul_poly(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da = [(a // p ** i) % p for i in range(e)]
        db = [(b // p ** i) % p for i in range(e)]
        prod = _pmod(_pmulmod(da, db, list(self.modulus), p), list(self.modulus), p)
        return sum(c * p ** i for i, c in enumerate(prod))

    def _pow_slow(self, a, k):
        r = 1
        while k:
            if k & 1:
                r = (r * a) % self.p if self.e == 1 else self._mul_poly(r, a)
            a = (a * a) % self.p if self.e == 1 else self._mul_poly(a, a)
            k >>= 1
        return r

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        primes = list(factorize(q - 1))
        self.gen = 1
        for g in range(1, q):
            if all(self._pow_slow(g, (q - 1) // r) != 1 for r in primes):
                self.gen = g
                break
        exp = [1]
        for _ in range(q - 2):
            x = exp[-1]
            exp.append((x * self.gen) % p if e == 1 else self._mul_poly(x, self.gen))
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp + exp
        self._log = log
        if e > 1:
            self._digits = [tuple((v // p ** i) % p for i in range(e)) for v in range(q)]
        self._neg = [self._neg_slow(v) for v in range(q)]
        self._addt = None
        self._mult = None
        if q <= 1024:
            self._addt = [[self._add_slow(a, b) for b in range(q)] for a in range(q)]
            self._mult = [[self._mul_slow(a, b) for b in range(q)] for a in range(q)]

    def _add_slow(self, a, b):
        p = self.p
        if self.e == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        r, m = 0, 1
        while a or b:
            r += ((a % p + b % p) % p) * m
            a //= p
            b //= p
            m *= p
        return r

    def _neg_slow(self, a):
        p = self.p
        if self.e == 1:
            return (-a) % p
        r, m = 0, 1
        while a:
            r += ((-(a % p)) % p) * m
            a //= p
            m *= p
        return r

    def _mul_slow(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    # integer-level arithmetic -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._addt is not None:
            return self._addt[a][b]
        return self._add_slow(a, b)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if k == 0:
            return 1
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("inverse of zero")
            return 0
        return self._exp[(self._log[a] * k) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of an integer in the prime subfield."""
        return n % self.p

    def vec(self, a: int) -> tuple[int, ...]:
        if self.e == 1:
            return (a,)
        return self._digits[a]

    def from_vec(self, v) -> int:
        v = list(v)
        if len(v) > self.e or any(not 0 <= c < self.p for c in v):
            raise FieldError(f"bad coefficient vector {v}")
        return sum(c * self.p ** i for i, c in enumerate(v))

    def elem(self, v) -> "FieldElement":
        if isinstance(v, int):
            if not 0 <= v < self.q:
                raise FieldError(f"element index {v} out of range")
            return FieldElement(self, v)
        return FieldElement(self, self.from_vec(v))

    def elements(self):
        return [FieldElement(self, v) for v in range(self.q)]

    def order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        return (self.q - 1) // math.gcd(self._log[a], self.q - 1)

    def encode(self, a: int) -> bytes:
        w = self._width
        return b"".join(c.to_bytes(w, "little") for c in self.vec(a))

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (field_create, (self.p, self.e))


@lru_cache(maxsize=None)
def _field_cached(p, e, cap):
    return Field(p, e, cap)


def field_create(p: int, e: int = 1, cap: int = DEFAULT_FIELD_CAP) -> Field:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise FieldError("extension degree must be >= 1")
    if p ** e > cap:
        raise CapExceeded(f"field size {p ** e} exceeds cap {cap}")
    return _field_cached(p, e, max(cap, DEFAULT_FIELD_CAP))


class FieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        self.field = field
        self.value = value

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.value, self.field.inv(o)))

    def __pow__(self, k: int):
        return FieldElement(self.field, self.field.pow(self.value, k))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return other.field is self.field and other.value == self.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.e, self.value))

    @property
    def vec(self):
        return self.field.vec(self.value)

    def __repr__(self):
        if self.field.e == 1:
            return str(self.value)
        terms = []
        for i, c in enumerate(self.vec):
            if c:
                terms.append(str(c) if i == 0 else (f"{c}*t" if i == 1 else f"{c}*t^{i}").replace("1*", "", 1 if c == 1 else 0))
        return "+".join(reversed(terms)) or "0"


def _check_power_of_p(field: Field, q: int) -> int:
    p = field.p
    k, r = 0, q
    if r < 1:
        raise BadQ(f"{q} is not a power of {p}")
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise BadQ(f"{q} is not a power of {p}")
    return k


# -- matrices ---------------------------------------------------------------
# Raw matrices are row-major tuples of field integers; ``n`` is carried
# alongside.  These helpers are shared by groupengine and varlab.

def mat_identity(n: int) -> tuple[int, ...]:
    return tuple(1 if i == j else 0 for i in range(n) for j in range(n))


def mat_mul(F: Field, n: int, a, b) -> tuple[int, ...]:
    if F.e == 1:
        p = F.p
        if n == 2:
            a0, a1, a2, a3 = a
            b0, b1, b2, b3 = b
            return ((a0 * b0 + a1 * b2) % p, (a0 * b1 + a1 * b3) % p,
                    (a2 * b0 + a3 * b2) % p, (a2 * b1 + a3 * b3) % p)
        out = []
        for i in range(n):
            row = a[i * n:(i + 1) * n]
            for j in range(n):
                out.append(sum(row[k] * b[k * n + j] for k in range(n)) % p)
        return tuple(out)
    add, mul = F.add, F.mul
    if F._mult is not None:
        mt, at = F._mult, F._addt
        if n == 2:
            a0, a1, a2, a3 = a
            b0, b1, b2, b3 = b
            return (at[mt[a0][b0]][mt[a1][b2]], at[mt[a0][b1]][mt[a1][b3]],
                    at[mt[a2][b0]][mt[a3][b2]], at[mt[a2][b1]][mt[a3][b3]])
        out = []
        for i in range(n):
            row = a[i * n:(i + 1) * n]
            for j in range(n):
                s = 0
                for k in range(n):
                    s = at[s][mt[row[k]][b[k * n + j]]]
                out.append(s)
        return tuple(out)
    out = []
    for i in range(n):
        for j in range(n):
            s = 0
            for k in range(n):
                s = add(s, mul(a[i * n + k], b[k * n + j]))
            out.append(s)
    return tuple(out)


def mat_add(F: Field, a, b):
    return tuple(F.add(x, y) for x, y in zip(a, b))


def mat_sub(F: Field, a, b):
    return tuple(F.sub(x, y) for x, y in zip(a, b))


def mat_scale(F: Field, c: int, a):
    return tuple(F.mul(c, x) for x in a)


def mat_pow(F: Field, n: int, a, k: int):
    if k < 0:
        a = mat_inv(F, n, a)
        k = -k
    r = mat_identity(n)
    while k:
        if k & 1:
            r = mat_mul(F, n, r, a)
        a = mat_mul(F, n, a, a)
        k >>= 1
    return r


def row_reduce(F: Field, rows, ncols: int):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def mat_rank(F: Field, n_rows: int, n_cols: int, a) -> int:
    rows = [a[i * n_cols:(i + 1) * n_cols] for i in range(n_rows)]
    return len(row_reduce(F, rows, n_cols)[1])


def mat_det(F: Field, n: int, a) -> int:
    m = [list(a[i * n:(i + 1) * n]) for i in range(n)]
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = F.neg(det)
        det = F.mul(det, m[c][c])
        inv = F.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c]:
                f = F.mul(m[i][c], inv)
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[c])]
    return det


def mat_inv(F: Field, n: int, a):
    rows = [list(a[i * n:(i + 1) * n]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    red, piv = row_reduce(F, rows, n)
    if len(piv) < n or piv[-1] >= n:
        raise NotInvertible("singular matrix")
    return tuple(x for r in red for x in r[n:])


def nullspace(F: Field, rows, ncols: int):
    """Basis of {x : rows . x = 0}."""
    red, piv = row_reduce(F, rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, c in zip(red, piv):
            v[c] = F.neg(r[f])
        basis.append(tuple(v))
    return basis


class MatrixOverF:
    __slots__ = ("field", "n", "entries")

    def __init__(self, field: Field, n: int, entries):
        entries = tuple(entries)
        if len(entries) != n * n:
            raise FieldError("entry count does not match size")
        self.field = field
        self.n = n
        self.entries = entries

    @classmethod
    def from_rows(cls, field: Field, rows):
        n = len(rows)
        flat = []
        for r in rows:
            if len(r) != n:
                raise FieldError("matrix must be square")
            for x in r:
                if isinstance(x, FieldElement):
                    flat.append(x.value)
                elif isinstance(x, (list, tuple)):
                    flat.append(field.from_vec(x))
                else:
                    flat.append(field.from_int(x) if field.e == 1 else _int_entry(field, x))
        return cls(field, n, flat)

    @classmethod
    def identity(cls, field: Field, n: int):
        return cls(field, n, mat_identity(n))

    def rows(self):
        n = self.n
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def __getitem__(self, ij):
        i, j = ij
        return FieldElement(self.field, self.entries[i * self.n + j])

    def __mul__(self, other):
        if isinstance(other, MatrixOverF):
            self._same(other)
            return MatrixOverF(self.field, self.n, mat_mul(self.field, self.n, self.entries, other.entries))
        if isinstance(other, FieldElement):
            return MatrixOverF(self.field, self.n, mat_scale(self.field, other.value, self.entries))
        if isinstance(other, int):
            return MatrixOverF(self.field, self.n, mat_scale(self.field, self.field.from_int(other), self.entries))
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        self._same(other)
        return MatrixOverF(self.field, self.n, mat_add(self.field, self.entries, other.entries))

    def __sub__(self, other):
        self._same(other)
        return MatrixOverF(self.field, self.n, mat_sub(self.field, self.entries, other.entries))

    def __pow__(self, k: int):
        return MatrixOverF(self.field, self.n, mat_pow(self.field, self.n, self.entries, k))

    def _same(self, other):
        if other.field is not self.field or other.n != self.n:
            raise FieldError("matrix shape or field mismatch")

    def det(self) -> FieldElement:
        return FieldElement(self.field, mat_det(self.field, self.n, self.entries))

    def inverse(self):
        return MatrixOverF(self.field, self.n, mat_inv(self.field, self.n, self.entries))

    def rank(self) -> int:
        return mat_rank(self.field, self.n, self.n, self.entries)

    def is_identity(self) -> bool:
        return self.entries == mat_identity(self.n)

    def to_bytes(self) -> bytes:
        return b"".join(self.field.encode(x) for x in self.entries)

    def __eq__(self, other):
        return isinstance(other, MatrixOverF) and other.field is self.field and other.n == self.n \
            and other.entries == self.entries

    def __hash__(self):
        return hash((self.n, self.entries))

    def __repr__(self):
        return f"MatrixOverF({self.field!r}, {self.rows()})"


def _int_entry(field, x):
    if not 0 <= x < field.q:
        raise FieldError(f"entry {x} out of range")
    return x


def mat_encode(F: Field, entries) -> bytes:
    """Canonical byte key: row-major, each entry as its coefficient vector
    (little-endian in p), each coefficient in a fixed byte width."""
    return b"".join(F.encode(x) for x in entries)


def frobenius_power(x, q: int):
    if isinstance(x, FieldElement):
        _check_power_of_p(x.field, q)
        return FieldElement(x.field, x.field.pow(x.value, q))
    if isinstance(x, MatrixOverF):
        _check_power_of_p(x.field, q)
        F = x.field
        return MatrixOverF(F, x.n, tuple(F.pow(v, q) for v in x.entries))
    raise TypeError("expected FieldElement or MatrixOverF")


# -- polynomials ------------------------------------------------------------

class Poly:
    """Sparse multivariate polynomial: exponent tuple -> nonzero field integer."""

    __slots__ = ("field", "variables", "terms")

    def __init__(self, field: Field, variables, terms=None):
        self.field = field
        self.variables = tuple(variables)
        t = {}
        if terms:
            nv = len(self.variables)
            for mono, c in terms.items():
                if isinstance(c, FieldElement):
                    c = c.value
                mono = tuple(mono)
                if len(mono) != nv:
                    raise FieldError("monomial length does not match variables")
                if c:
                    t[mono] = c
        self.terms = t

    @classmethod
    def constant(cls, field, variables, c: int):
        c = c.value if isinstance(c, FieldElement) else field.from_int(c)
        return cls(field, variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, field, variables, name):
        i = list(variables).index(name)
        mono = tuple(1 if j == i else 0 for j in range(len(variables)))
        return cls(field, variables, {mono: 1})

    @classmethod
    def univariate(cls, field, coeffs, name="t"):
        """From field-integer coefficients, lowest degree first."""
        return cls(field, (name,), {(i,): c for i, c in enumerate(coeffs) if c})

    def _new(self, terms):
        p = Poly(self.field, self.variables)
        p.terms = terms
        return p

    def _check(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.field, self.variables,
                                  other if isinstance(other, (int, FieldElement)) else 0)
        if other.field is not self.field or other.variables != self.variables:
            raise FieldError("polynomials over different rings")
        return other

    def is_zero(self):
        return not self.terms

    def degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(m) for m in self.terms)

    def __add__(self, other):
        other = self._check(other)
        F = self.field
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = F.add(t.get(m, 0), c)
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return self._new({m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        F = self.field
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = F.add(t.get(m, 0), F.mul(c1, c2))
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return self._new(t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        r = Poly.constant(self.field, self.variables, 1)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field is other.field and self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def evaluate(self, point) -> int:
        """Evaluate at a tuple of field integers (one per variable)."""
        F = self.field
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, k in zip(point, m):
                if k:
                    v = F.mul(v, F.pow(x, k))
                    if not v:
                        break
            total = F.add(total, v)
        return total

    def substitute(self, images) -> "Poly":
        """Compose with polynomials: variable i -> images[i] (all in one ring)."""
        if len(images) != len(self.variables):
            raise FieldError("need one image per variable")
        ring = images[0]
        out = Poly(self.field, ring.variables)
        cache = {}
        for m, c in self.terms.items():
            term = Poly.constant(self.field, ring.variables, FieldElement(self.field, c))
            for i, k in enumerate(m):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    # univariate conveniences
    def coeffs(self):
        if len(self.variables) != 1:
            raise FieldError("not univariate")
        if not self.terms:
            return []
        d = self.degree()
        return [self.terms.get((i,), 0) for i in range(d + 1)]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = FieldElement(self.field, self.terms[m])
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, m) if k)
            if mono:
                parts.append(mono if self.terms[m] == 1 else f"{c!r}*{mono}")
            else:
                parts.append(repr(c))
        return " + ".join(parts)


def charpoly(M: MatrixOverF, name: str = "t") -> Poly:
    """det(tI - M) via the division-free Berkowitz recursion."""
    F, n = M.field, M.n
    A = M.rows()
    # coefficients highest degree first
    C = [1, F.neg(A[0][0])]
    for r in range(1, n):
        row = A[r][:r]
        col = [A[i][r] for i in range(r)]
        vec = [1, F.neg(A[r][r])]
        v = col
        for _ in range(r):
            s = 0
            for x, y in zip(row, v):
                s = F.add(s, F.mul(x, y))
            vec.append(F.neg(s))
            v = [_dot(F, A[i][:r], v) for i in range(r)]
        newC = []
        for i in range(r + 2):
            s = 0
            for j in range(len(C)):
                if 0 <= i - j < len(vec):
                    s = F.add(s, F.mul(vec[i - j], C[j]))
            newC.append(s)
        C = newC
    return Poly.univariate(F, list(reversed(C)), name)


def _dot(F, a, b):
    s = 0
    for x, y in zip(a, b):
        if x and y:
            s = F.add(s, F.mul(x, y))
    return s


def poly_eval_matrix(f: Poly, M: MatrixOverF) -> MatrixOverF:
    """Horner evaluation of a univariate polynomial at a square matrix."""
    F, n = M.field, M.n
    acc = (0,) * (n * n)
    for c in reversed(f.coeffs()):
        acc = mat_mul(F, n, acc, M.entries)
        acc = mat_add(F, acc, mat_scale(F, c, mat_identity(n)))
    return MatrixOverF(F, n, acc)


def hasse_derivative(f: Poly, r: int) -> Poly:
    if r < 0:
        raise ValueError("order must be nonnegative")
    if len(f.variables) != 1:
        raise FieldError("not univariate")
    F = f.field
    t = {}
    for (i,), c in f.terms.items():
        if i >= r:
            b = math.comb(i, r) % F.p
            if b:
                v = F.mul(F.from_int(b), c)
                if v:
                    t[(i - r,)] = v
    out = Poly(F, f.variables)
    out.terms = t
    return out
