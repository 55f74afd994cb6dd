"""Matrix groups used by the decomposition property suite."""

from jordanlab.ffarith import mat_identity
from jordanlab.groupengine import (
    GL, SL, FiniteMatrixGroup, as_matrix_group, field_of, gl_generators, sylow,
)
from jordanlab.lpdecomp import pgl2_adjoint


def block_diag(n1, a, n2, b):
    n = n1 + n2
    out = [0] * (n * n)
    for i in range(n1):
        for j in range(n1):
            out[i * n + j] = a[i * n1 + j]
    for i in range(n2):
        for j in range(n2):
            out[(n1 + i) * n + n1 + j] = b[i * n2 + j]
    return tuple(out)


def direct_product(G, H):
    """Block-diagonal product of two matrix groups over the same field."""
    gens = [block_diag(G.n, g, H.n, mat_identity(H.n)) for g in G.generators]
    gens += [block_diag(G.n, mat_identity(G.n), H.n, h) for h in H.generators]
    return FiniteMatrixGroup(G.field, G.n + H.n, gens)


def borel(n, q):
    F = field_of(q)
    gens = []
    for i in range(n):
        d = list(mat_identity(n))
        d[i * n + i] = F.gen
        gens.append(tuple(d))
    for i in range(n - 1):
        u = list(mat_identity(n))
        u[i * n + i + 1] = 1
        gens.append(tuple(u))
    if F.e > 1:
        u = list(mat_identity(n))
        u[1] = F.gen
        gens.append(tuple(u))
    return FiniteMatrixGroup(F, n, gens)


def unitriangular(n, q):
    F = field_of(q)
    gens = []
    for i in range(n):
        for j in range(i + 1, n):
            for c in {1, F.gen}:
                u = list(mat_identity(n))
                u[i * n + j] = c
                gens.append(tuple(u))
    return FiniteMatrixGroup(F, n, gens)


def monomial(n, q):
    F = field_of(q)
    gens = []
    d = list(mat_identity(n))
    d[0] = F.gen
    gens.append(tuple(d))
    for k in range(n - 1):
        perm = list(range(n))
        perm[k], perm[k + 1] = perm[k + 1], perm[k]
        m = [0] * (n * n)
        for i, j in enumerate(perm):
            m[i * n + j] = 1
        gens.append(tuple(m))
    return FiniteMatrixGroup(F, n, gens)


def sylow_group(G, l):
    return as_matrix_group(G, sylow(G.whole(), l))


def cyclic(q, n=1):
    F = field_of(q)
    return FiniteMatrixGroup(F, n, gl_generators(F, n)[:1])


def quaternion():
    return sylow_group(SL(2, 3), 2)


def build():
    """List of (name, group) pairs; every order is at most 10^5."""
    C = []
    for q in (2, 3, 4, 5, 7, 8, 9):
        C.append((f"GL2({q})", GL(2, q)))
    for q in (3, 4, 5, 7, 9, 11, 13):
        C.append((f"SL2({q})", SL(2, q)))
    C.append(("PGL2(5)", pgl2_adjoint(5)))
    C.append(("PGL2(7)", pgl2_adjoint(7)))
    C.append(("GL3(2)", GL(3, 2)))
    C.append(("SL3(3)", SL(3, 3)))
    for n, q in ((2, 3), (2, 5), (2, 7), (3, 2), (3, 3), (2, 9)):
        C.append((f"Borel{n}({q})", borel(n, q)))
    for n, q in ((3, 2), (3, 3), (3, 4), (4, 2)):
        C.append((f"Unitri{n}({q})", unitriangular(n, q)))
    for n, q in ((2, 3), (3, 3), (3, 5), (4, 3)):
        C.append((f"Monomial{n}({q})", monomial(n, q)))
    C.append(("Sylow2(GL2(5))", sylow_group(GL(2, 5), 2)))
    C.append(("Sylow3(GL3(3))", sylow_group(GL(3, 3), 3)))
    C.append(("Q8", quaternion()))
    C.append(("C6", cyclic(7)))
    C.append(("C8", cyclic(9)))
    C.append(("SL2(5)xC4", direct_product(SL(2, 5), cyclic(5))))
    C.append(("GL2(3)xGL1(3)", direct_product(GL(2, 3), GL(1, 3))))
    C.append(("SL2(4)xSL2(4)", direct_product(SL(2, 4), SL(2, 4))))
    C.append(("GL2(2)xGL2(2)", direct_product(GL(2, 2), GL(2, 2))))
    C.append(("SL2(5)xBorel2(5)", direct_product(SL(2, 5), borel(2, 5))))
    return C
