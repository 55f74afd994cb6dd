import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from jordanlab.ffarith import (
    NEG_INF, BadQ, CapExceeded, FieldElement, MatrixOverF, NotInvertible, NotPrime, Poly,
    charpoly, field_create, frobenius_power, hasse_derivative, mat_encode, nullspace,
    poly_eval_matrix, row_reduce,
)

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (11, 1)]


# -- independent GF(p)[t] helpers used as oracles -----------------------------

def _pmul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _monic(p, d):
    for tail in itertools.product(range(p), repeat=d):
        yield list(tail) + [1]


def _irreducible_by_products(f, p):
    """f has no monic factor of degree 1..deg/2, by multiplying out all pairs."""
    d = len(f) - 1
    for k in range(1, d // 2 + 1):
        for g in _monic(p, k):
            for h in _monic(p, d - k):
                if _pmul(g, h, p) == f:
                    return False
    return True


def test_prime_field_modulus():
    F = field_create(5, 1)
    assert F.q == 5 and F.modulus == (0, 1)


def test_gf16_modulus_is_least_irreducible():
    F = field_create(2, 4)
    assert list(F.modulus) == [1, 1, 0, 0, 1]
    # oracle: scan monic quartics in lexicographic order of coefficient tuples
    first = None
    for tail in itertools.product(range(2), repeat=4):
        f = list(reversed(tail)) + [1]
        if _irreducible_by_products(f, 2):
            first = f
            break
    assert list(F.modulus) == first


def test_gf9_modulus_irreducible():
    F = field_create(3, 2)
    assert _irreducible_by_products(list(F.modulus), 3)


def test_composite_rejected():
    with pytest.raises(NotPrime):
        field_create(4, 1)


def test_cap():
    with pytest.raises(CapExceeded):
        field_create(2, 21)


def test_field_is_cached():
    assert field_create(3, 2) is field_create(3, 2)


@pytest.mark.parametrize("p,e", FIELDS)
def test_generator_has_full_order(p, e):
    F = field_create(p, e)
    seen = set()
    x = 1
    for _ in range(F.q - 1):
        seen.add(x)
        x = F.mul(x, F.gen)
    assert len(seen) == F.q - 1


@pytest.mark.parametrize("p,e", FIELDS)
def test_field_axioms_sampled(p, e):
    F = field_create(p, e)
    rng = random.Random(p * 100 + e)
    for _ in range(1200):
        a, b, c = (rng.randrange(F.q) for _ in range(3))
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
        assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("p,e", [(2, 3), (3, 2), (5, 2)])
def test_multiplication_matches_polynomial_reduction(p, e):
    F = field_create(p, e)
    mod = list(F.modulus)

    def reduce(f):
        f = f[:]
        for i in range(len(f) - 1, e - 1, -1):
            c = f[i]
            if c:
                for j in range(e + 1):
                    f[i - e + j] = (f[i - e + j] - c * mod[j]) % p
        return (f + [0] * e)[:e]

    for a in range(F.q):
        for b in range(F.q):
            want = reduce(_pmul(list(F.vec(a)), list(F.vec(b)), p))
            assert list(F.vec(F.mul(a, b))) == want


@pytest.mark.parametrize("p,e", FIELDS)
def test_frobenius_full_power_is_identity(p, e):
    F = field_create(p, e)
    for v in range(F.q):
        assert frobenius_power(FieldElement(F, v), F.q).value == v


def test_frobenius_examples():
    F5 = field_create(5)
    for v in range(5):
        assert frobenius_power(F5.elem(v), 5) == F5.elem(v)
    F9 = field_create(3, 2)
    g = F9.elem(F9.gen)
    g3 = frobenius_power(g, 3)
    assert g3 != g and g3 == g * g * g
    F8 = field_create(2, 3)
    for x in range(8):
        for y in range(8):
            lhs = frobenius_power(F8.elem(x) + F8.elem(y), 2)
            rhs = frobenius_power(F8.elem(x), 2) + frobenius_power(F8.elem(y), 2)
            assert lhs == rhs
    with pytest.raises(BadQ):
        frobenius_power(g, 6)


def test_frobenius_matrix():
    F9 = field_create(3, 2)
    M = MatrixOverF(F9, 2, (F9.gen, 1, 0, 2))
    assert frobenius_power(M, 9) == M
    assert frobenius_power(M, 3).entries == tuple(F9.pow(x, 3) for x in M.entries)


def _t(F, coeffs):
    return Poly.univariate(F, [F.from_int(c) for c in coeffs])


def test_charpoly_examples():
    F5 = field_create(5)
    assert charpoly(MatrixOverF.identity(F5, 2)) == _t(F5, [1, -2, 1])
    # cofactor oracle for [[0,1],[1,0]]: det(tI - M) = t^2 - 1
    assert charpoly(MatrixOverF(F5, 2, (0, 1, 1, 0))) == _t(F5, [-1, 0, 1])
    F7 = field_create(7)
    assert charpoly(MatrixOverF(F7, 2, (2, 0, 0, 3))) == _t(F7, [6, -5, 1])


def _cofactor_charpoly(F, M):
    """Oracle: expand det(tI - M) with polynomial entries (lists, low first)."""
    n = M.n

    def padd(a, b):
        out = [0] * max(len(a), len(b))
        for i, x in enumerate(a):
            out[i] = F.add(out[i], x)
        for i, x in enumerate(b):
            out[i] = F.add(out[i], x)
        return out

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
        return out

    A = [[([F.neg(M.entries[i * n + j]), 1] if i == j else [F.neg(M.entries[i * n + j])])
          for j in range(n)] for i in range(n)]

    def det(rows):
        if len(rows) == 1:
            return rows[0][0]
        total = [0]
        for j in range(len(rows)):
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            term = pmul(rows[0][j], det(minor))
            if j % 2:
                term = [F.neg(x) for x in term]
            total = padd(total, term)
        return total

    c = det(A)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(3, 1), (5, 1), (2, 2), (3, 2)]), st.integers(1, 4), st.data())
def test_charpoly_matches_cofactor_and_cayley_hamilton(pe, n, data):
    F = field_create(*pe)
    ent = data.draw(st.lists(st.integers(0, F.q - 1), min_size=n * n, max_size=n * n))
    M = MatrixOverF(F, n, ent)
    cp = charpoly(M)
    assert cp.coeffs() == _cofactor_charpoly(F, M)
    assert poly_eval_matrix(cp, M).entries == (0,) * (n * n)


def test_hasse_examples():
    F5 = field_create(5)
    assert hasse_derivative(_t(F5, [0, 0, 1]), 1) == _t(F5, [0, 2])
    assert hasse_derivative(_t(F5, [0, 0, 0, 0, 0, 1]), 1).is_zero()
    cube = _t(F5, [-1, 1]) ** 3
    # term-by-term oracle: (t-1)^3 = t^3 - 3t^2 + 3t - 1; C(3,2)=3, C(2,2)=1
    assert hasse_derivative(cube, 2) == _t(F5, [-3, 3])
    assert hasse_derivative(cube, 2) == _t(F5, [2, 3])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=6),
       st.lists(st.integers(0, 6), min_size=1, max_size=6), st.integers(0, 5))
def test_hasse_leibniz(fc, gc, r):
    F = field_create(7)
    f, g = _t(F, fc), _t(F, gc)
    lhs = hasse_derivative(f * g, r)
    rhs = Poly(F, ("t",))
    for i in range(r + 1):
        rhs = rhs + hasse_derivative(f, i) * hasse_derivative(g, r - i)
    assert lhs == rhs


def test_degree_sentinel():
    F = field_create(3)
    z = Poly(F, ("x", "y"))
    assert z.degree() is NEG_INF
    assert NEG_INF < 0 and not (NEG_INF > -10 ** 9)


def test_poly_substitute_and_evaluate():
    F = field_create(7)
    names = ("x", "y")
    x, y = Poly.var(F, names, "x"), Poly.var(F, names, "y")
    f = x * x * y + 3 * y + 1
    assert f.evaluate((2, 5)) == (4 * 5 + 15 + 1) % 7
    g = f.substitute([y, x])
    assert g.evaluate((2, 5)) == f.evaluate((5, 2))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(2, 1), (5, 1), (2, 3), (3, 2)]), st.integers(1, 4), st.data())
def test_matrix_inverse_iff_det(pe, n, data):
    F = field_create(*pe)
    ent = data.draw(st.lists(st.integers(0, F.q - 1), min_size=n * n, max_size=n * n))
    M = MatrixOverF(F, n, ent)
    if M.det().value == 0:
        with pytest.raises(NotInvertible):
            M.inverse()
        assert M.rank() < n
    else:
        assert (M * M.inverse()).is_identity()
        assert M.rank() == n


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.data())
def test_matrix_associative(n, data):
    F = field_create(3, 2)
    draw = lambda: MatrixOverF(F, n, data.draw(st.lists(st.integers(0, 8), min_size=n * n, max_size=n * n)))
    A, B, C = draw(), draw(), draw()
    assert (A * B) * C == A * (B * C)
    assert ((A * B).det()) == A.det() * B.det()


def test_nullspace_and_rref():
    F = field_create(5)
    rows = [[1, 2, 3], [2, 4, 0]]
    red, piv = row_reduce(F, rows, 3)
    assert piv == [0, 2]
    for v in nullspace(F, rows, 3):
        for r in rows:
            assert sum(a * b for a, b in zip(r, v)) % 5 == 0


def test_canonical_bytes():
    F5 = field_create(5)
    M = MatrixOverF(F5, 2, (1, 2, 3, 4))
    assert M.to_bytes() == bytes([1, 2, 3, 4]) == mat_encode(F5, M.entries)
    F9 = field_create(3, 2)
    x = F9.from_vec([2, 1])
    assert mat_encode(F9, (x,)) == bytes([2, 1])
    F = field_create(257)
    assert mat_encode(F, (256,)) == (256).to_bytes(2, "little")
