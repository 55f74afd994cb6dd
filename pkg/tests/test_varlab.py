import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from jordanlab.ffarith import MatrixOverF, Poly, field_create, mat_inv, mat_mul
from jordanlab.varlab import (
    INTERSECT, UNION, AmbientMismatch, BadCharacteristic, BudgetExceeded, CapExceeded,
    MorphismSpec, NoPoints, NotAGroupPoint, VarietyError, adjoint_rep, beta_is_homomorphism,
    embed_matrix, empirical_dimension, gln_embed, parse_poly, points_over, preimage,
    quotient_embed_tiny, set_ops, variety, variety_from_json,
)


def brute(V):
    """Oracle: test every tuple in F^n by evaluation."""
    F = V.field
    return sorted(p for p in itertools.product(range(F.q), repeat=V.ambient_vars) if V.contains(p))


def test_gl1_embedding():
    F = field_create(5)
    V = gln_embed(1, F)
    assert len(V.polys) == 3
    assert len(points_over(V)) == 4 == len(brute(V))


def test_gl2_counts():
    F = field_create(3)
    V = gln_embed(2, F)
    assert len(points_over(V)) == 48
    # |GL2(F_9)| = (81 - 1)(81 - 9)
    assert len(points_over(V, 2)) == 80 * 72 == 5760


def test_gl2_points_match_matrix_enumeration():
    F = field_create(3)
    V = gln_embed(2, F)
    want = []
    for e in itertools.product(range(3), repeat=4):
        if (e[0] * e[3] - e[1] * e[2]) % 3:
            want.append(embed_matrix(F, 2, e))
    assert sorted(want) == points_over(V)


def test_membership_example():
    F = field_create(7)
    V = gln_embed(3, F)
    pt = embed_matrix(F, 3, (2, 0, 0, 0, 3, 0, 0, 0, F.inv(6)))
    assert V.contains(pt)
    assert pt[-1] == 1  # det = 2 * 3 * 6^-1 = 1
    bad = list(pt)
    bad[3] = 1  # nonzero border entry
    assert not V.contains(bad)


def test_small_examples():
    F5 = field_create(5)
    assert points_over(variety(F5, 1, ["x1^2 - 1"])) == [(1,), (4,)]
    F3 = field_create(3)
    assert len(points_over(variety(F3, 2, ["x1 + x2"]))) == 3


def test_points_sorted_and_deterministic():
    F = field_create(5)
    V = variety(F, 3, ["x1*x2 - x3", "x1^2 + x3 - 2"])
    pts = points_over(V)
    assert pts == sorted(pts) == brute(V)


def test_budget():
    F = field_create(7)
    with pytest.raises(BudgetExceeded):
        points_over(variety(F, 6, []), budget=1000)


def test_set_ops_examples():
    F = field_create(5)
    X = variety(F, 2, ["x1"])
    Y = variety(F, 2, ["x2"])
    assert points_over(set_ops(X, Y, INTERSECT)) == [(0, 0)]
    A = variety(F, 1, ["x1"])
    B = variety(F, 1, ["x1 - 1"])
    U = set_ops(A, B, UNION)
    assert len(U.polys) == 1 and points_over(U) == [(0,), (1,)]
    with pytest.raises(AmbientMismatch):
        set_ops(X, A, UNION)


def test_borel_meet_sl2():
    F = field_create(5)
    SL = variety(F, 4, ["x11*x22 - x12*x21 - 1"])
    B = variety(F, 4, ["x21"])
    pts = points_over(set_ops(B, SL, INTERSECT))
    # oracle: a in F*, b free, d = a^-1
    assert len(pts) == 4 * 5 == 20


def _rand_variety(rng, F, n):
    names = tuple(f"x{i}" for i in range(1, n + 1))
    polys = []
    for _ in range(rng.randint(0, 2)):
        f = Poly(F, names)
        for _ in range(rng.randint(1, 3)):
            t = Poly.constant(F, names, rng.randrange(F.q))
            for v in names:
                t = t * Poly.var(F, names, v) ** rng.randint(0, 2)
            f = f + t
        polys.append(f)
    return variety(F, n, polys, names)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from([(2, 1), (3, 1), (5, 1)]), st.integers(1, 2))
def test_point_set_algebra(seed, pe, k):
    rng = random.Random(seed)
    F = field_create(*pe)
    V, W = _rand_variety(rng, F, 2), _rand_variety(rng, F, 2)
    pv, pw = set(points_over(V, k)), set(points_over(W, k))
    assert set(points_over(set_ops(V, W, INTERSECT), k)) == pv & pw
    assert set(points_over(set_ops(V, W, UNION), k)) == pv | pw
    if k == 1:
        assert points_over(V) == brute(V)


def test_preimage_examples():
    F5 = field_create(5)
    X = variety(F5, 1, [])
    W = variety(F5, 1, ["x1 - 1"])
    sq = MorphismSpec(1, 1, (parse_poly("x1^2", F5, X.names),))
    assert sq.mdeg == 2
    assert points_over(preimage(sq, W, X)) == [(1,), (4,)]
    ident = MorphismSpec(1, 1, (parse_poly("x1", F5, X.names),))
    assert points_over(preimage(ident, W, X)) == points_over(W)

    F3 = field_create(3)
    G = variety(F3, 4, [])
    det = MorphismSpec(4, 1, (parse_poly("x11*x22 - x12*x21", F3, G.names),))
    one = variety(F3, 1, ["x1 - 1"])
    assert len(points_over(preimage(det, one, G))) == 24
    with pytest.raises(AmbientMismatch):
        preimage(det, one, X)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_preimage_membership(seed):
    rng = random.Random(seed)
    F = field_create(3)
    X = _rand_variety(rng, F, 2)
    W = _rand_variety(rng, F, 2)
    comps = tuple(_rand_variety(rng, F, 2).polys[:1] or (Poly.var(F, X.names, "x1"),)) * 2
    f = MorphismSpec(2, 2, comps[:2])
    got = set(points_over(preimage(f, W, X)))
    want = {x for x in itertools.product(range(3), repeat=2) if X.contains(x) and W.contains(f(x))}
    assert got == want


def test_empirical_dimension():
    F3 = field_create(3)
    line = variety(F3, 2, ["x1 + x2"])
    assert empirical_dimension(line, [1, 2, 3])["dimension"] == 1
    SL = variety(F3, 4, ["x11*x22 - x12*x21 - 1"])
    r = empirical_dimension(SL, [1, 2, 3])
    # |SL2(F_{3^k})| = 3^k (3^{2k} - 1)
    assert r["counts"] == [3 ** k * (9 ** k - 1) for k in (1, 2, 3)]
    assert r["dimension"] == 3
    pts = variety(F3, 2, ["x1", "x2 - 1"])
    assert empirical_dimension(pts, [1, 2])["dimension"] == 0
    with pytest.raises(NoPoints):
        empirical_dimension(variety(F3, 1, ["x1^2 + 1"]), [1])


def test_json_and_parse():
    V = variety_from_json('{"field": {"p": 5}, "vars": 2, "polys": ["x1^2 + 2*x2 - 1"]}')
    assert V.contains((1, 0)) and not V.contains((1, 1))
    with pytest.raises(VarietyError):
        parse_poly("x9 + 1", V.field, V.names)


def _sl2_coords(F, Y):
    # basis order e, h, f
    return [Y[1], Y[0], Y[2]]


def test_adjoint_examples():
    F = field_create(5)
    I = MatrixOverF.identity(F, 2)
    assert adjoint_rep(I).is_identity()
    A = adjoint_rep(MatrixOverF(F, 2, (1, 0, 0, 2)))
    assert A.entries == (3, 0, 0, 0, 1, 0, 0, 0, 2)
    with pytest.raises(BadCharacteristic):
        adjoint_rep(MatrixOverF.identity(field_create(2), 2))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=4, max_size=4))
def test_adjoint_matches_direct_conjugation(ent):
    F = field_create(7)
    if (ent[0] * ent[3] - ent[1] * ent[2]) % 7 == 0:
        return
    g = tuple(ent)
    gi = mat_inv(F, 2, g)
    basis = [(0, 1, 0, 0), (1, 0, 0, 6), (0, 0, 1, 0)]
    cols = [_sl2_coords(F, mat_mul(F, 2, mat_mul(F, 2, g, b), gi)) for b in basis]
    want = tuple(cols[j][i] for i in range(3) for j in range(3))
    assert adjoint_rep(MatrixOverF(F, 2, g)).entries == want
    assert adjoint_rep(MatrixOverF(F, 2, g), "gl").n == 4


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=9, max_size=9), st.lists(st.integers(0, 3), min_size=9, max_size=9))
def test_adjoint_homomorphism(a, b):
    F = field_create(2, 2)
    g, h = MatrixOverF(F, 3, a), MatrixOverF(F, 3, b)
    if g.det().value == 0 or h.det().value == 0:
        return
    for alg in ("gl", "sl"):
        assert adjoint_rep(g * h, alg) == adjoint_rep(g, alg) * adjoint_rep(h, alg)


def _torus(F):
    return set_ops(gln_embed(2, F), variety(F, 9, ["x12", "x21"]), INTERSECT)


def test_quotient_torus_mu2():
    F = field_create(7)
    G = _torus(F)
    assert len(points_over(G)) == 36
    r = quotient_embed_tiny(G, ["x11^2 - 1", "x22^2 - 1"])
    assert r["M_actual"] == 55 and r["M_formula"] == 15
    # oracle: diag(a, b) with a, b in {1, 6}
    want = sorted(embed_matrix(F, 2, (a, 0, 0, b)) for a in (1, 6) for b in (1, 6))
    assert sorted(r["kernel"]) == want
    assert r["kernel_matches_H"]
    assert beta_is_homomorphism(r)


def test_quotient_trivial_subgroup_injective():
    F = field_create(7)
    G = _torus(F)
    r = quotient_embed_tiny(G, ["x11 - 1", "x22 - 1"])
    assert len(r["kernel"]) == 1
    assert len({tuple(v) for v in r["beta"].values()}) == 36


def test_quotient_caps_and_points():
    F = field_create(7)
    G = _torus(F)
    with pytest.raises(CapExceeded):
        quotient_embed_tiny(G, ["x11^2 - 1", "x22^2 - 1"], caps={"M": 10})
    with pytest.raises(NotAGroupPoint):
        quotient_embed_tiny(G, ["x11^2 - 1"], points=[(1,) * 9])
