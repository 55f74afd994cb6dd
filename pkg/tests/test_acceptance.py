"""Acceptance run: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""
import math
import random
import sys
import time

import pytest

from jordanlab import towernum as tn
from jordanlab.degcalc import audit, summarize
from jordanlab.ffarith import field_create
from jordanlab.groupengine import GL, SL, as_matrix_group, field_of
from jordanlab.lpdecomp import (
    NONSPLIT_TORUS_CLASS, SPLIT_TORUS, UNIPOTENT_CONE, FiniteMatrixGroup, centralizer_bounds,
    class_representatives, decompose, dimest_census, escape, family_group, sandwich_experiment,
    unipotent_census,
)
from jordanlab.varlab import INTERSECT, embed_matrix, gln_embed, quotient_embed_tiny, set_ops, variety
import corpus
from towergen import Big, depth, gen, oracle_value

LINES = []


def report(n, ok, detail, capsys=None):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES.append(line)
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


def psl2_order(q):
    return q * (q * q - 1) // math.gcd(2, q - 1)


def check_1():
    notes, ok = [], True
    for q in (3, 4, 5, 7, 9):
        t = time.time()
        r = decompose(GL(2, q))
        dt = time.time() - t
        good = dt < 10 and r.certificates["certified"] and r.G3.order == 1 and r.G2.order == q - 1
        if q == 3:
            good = good and r.G1.order == r.G2.order and not r.factors
        else:
            tags = [t for b in r.clauses["b"] for t in b["identified"]]
            good = good and tags == [f"A1({q})"] and r.factors[0]["order"] == psl2_order(q) \
                and r.G1.order == (q - 1) * psl2_order(q)
        ok = ok and good
        notes.append(f"q={q}:{dt:.2f}s")
    return ok, "GL2(q) decompositions " + " ".join(notes)


def check_2():
    C = corpus.build()
    ok = len(C) >= 30
    bad = []
    for name, G in C:
        try:
            r = decompose(G)
            G1 = as_matrix_group(G, r.G1)
            r1 = decompose(G1)
            good = r.certificates.get("certified") and G.order <= 10 ** 5 and r1.G1.order == G1.order
        except Exception as exc:  # a raise here is itself a failure of the criterion
            good = False
            name = f"{name} ({type(exc).__name__})"
        if not good:
            bad.append(name)
    ok = ok and not bad
    return ok, f"{len(C)} corpus groups certified, Gamma1 idempotent" + (f"; failures {bad}" if bad else "")


def check_3():
    ok = True
    for q in (3, 5, 7, 9, 11):
        G = SL(2, q)
        F = G.field
        two = F.from_int(2)
        tr2 = [a for a in G.elements if F.add(a[0], a[3]) == two]
        r = unipotent_census(G)
        ok = ok and r["count_un"] == len(tr2) == q * q and r["count_run"] == q * q - 1 \
            and 2 * r["count_run"] >= r["count_un"]
    return ok, "SL2(q) unipotent census q in 3,5,7,9,11"


def check_4():
    qs = [5, 7, 9, 11, 13, 25, 49]
    t = time.time()
    rows = {k: dimest_census(fam, k, qs) for fam, k in
            (("SL2", UNIPOTENT_CONE), ("PGL2", SPLIT_TORUS), ("PGL2", NONSPLIT_TORUS_CLASS))}
    dt = time.time() - t
    ok = dt < 60 and all(r["holds"] for rs in rows.values() for r in rs)
    closed = {UNIPOTENT_CONE: lambda q: q * q, SPLIT_TORUS: lambda q: q - 1, NONSPLIT_TORUS_CLASS: lambda q: q + 1}
    for k, rs in rows.items():
        for r in rs:
            ok = ok and r["count"] == closed[k](r["q"])
        last = rs[-1]
        ok = ok and abs(last["exponent"] - last["target_exponent"]) < 0.05
    ex = ", ".join(f"{k}={rs[-1]['exponent']:.4f}" for k, rs in rows.items())
    return ok, f"dimension estimates in {dt:.1f}s; exponents at q=49: {ex}"


def check_5():
    ok, n = True, 0
    for q in (5, 7, 9):
        G = family_group("PGL2", q)
        for x in class_representatives(G):
            b = centralizer_bounds(G, x, "PGL2")
            ok = ok and b["lower_ok"] and b["upper_ok"] and b["centralizer"] * b["class_size"] == G.order
            n += 1
    return ok, f"phi-bounds and orbit-stabilizer on {n} PGL2 class representatives"


def check_6():
    r = sandwich_experiment(5, 2)
    ok = r["GF_order"] == 120 and r["derived_order"] == 60 and r["upper_inclusion"] \
        and r["lower_inclusion"] and 4 ** 3 <= r["GF_order"] <= 5 ** 3 and r["ok"]
    return ok, f"|G^F|={r['GF_order']}, |[G^F,G^F]|={r['derived_order']}, 64 <= 120 <= 125"


def check_7():
    t = time.time()
    s = summarize(audit("ALL"))
    dt = time.time() - t
    ok = s["FAIL"] == 0 and s["UNDECIDED"] == 0 and dt < 120
    return ok, f"audits {s} in {dt:.2f}s"


def check_8(pairs=10 ** 4):
    rng = random.Random(20260)
    done = undecided_low = wrong = 0
    while done < pairs:
        a, b = gen(rng, 4), gen(rng, 4)
        try:
            va, vb = oracle_value(a, tn.DEFAULT_CAP_BITS), oracle_value(b, tn.DEFAULT_CAP_BITS)
        except Big:
            continue
        done += 1
        truth = tn.LT if va < vb else tn.GT if va > vb else tn.EQ
        v = tn.compare(a, b)
        if v == tn.UNDECIDED:
            if max(depth(a), depth(b)) < 3:
                undecided_low += 1
            wrong += 1
        elif v != truth:
            wrong += 1
        # a tight cap forces the interval path; any verdict it gives must be right
        w = tn.compare(a, b, cap_bits=32)
        if w != tn.UNDECIDED and w != truth:
            wrong += 1
    ok = wrong == 0 and undecided_low == 0
    return ok, f"{done} tower pairs, {wrong} disagreements, {undecided_low} undecided below depth 3"


def check_9():
    F = field_create(7)
    G = set_ops(gln_embed(2, F), variety(F, 9, ["x12", "x21"]), INTERSECT)
    r = quotient_embed_tiny(G, ["x11^2 - 1", "x22^2 - 1"])
    want = sorted(embed_matrix(F, 2, (a, 0, 0, b)) for a in (1, 6) for b in (1, 6))
    ok = sorted(r["kernel"]) == want and len(r["points"]) == 36
    return ok, f"torus/mu2 kernel has {len(r['kernel'])} points"


def check_10():
    F = field_of(9)
    V = set_ops(variety(F, 4, ["x21"]), variety(F, 4, ["x11*x22 - x12*x21 - 1"]), INTERSECT)
    U = corpus.unitriangular(2, 9)
    r = escape(U, V)
    bound = tn.eval_exact(tn.parse(r["bound"]))
    ok = r["branch"] == "Subgroup" and r["gamma_in_H"] and bound == r["deg_V"] ** (r["dim_V"] + 1)
    triv = FiniteMatrixGroup(F, 2, [(1, 0, 0, 1)])
    s = escape(triv, V)
    ok = ok and s["branch"] == "Small"
    return ok, f"unitriangular -> {r['branch']} (bound {r['bound']}), identity -> {s['branch']}"


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10]


@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n, capsys):
    ok, detail = CHECKS[n - 1]()
    report(n, ok, detail, capsys)


if __name__ == "__main__":
    failed = 0
    for i, fn in enumerate(CHECKS, 1):
        try:
            ok, detail = fn()
        except Exception as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        print(f"criterion {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
