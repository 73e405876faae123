"""Small named algebras used as fixtures and CLI presets.

Indices are 0-based: the basis vector written e_1 elsewhere is index 0.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .exactla import Mat, unit_vec
from .structures import LieAlgebra, ThreeLieAlgebra, sort_sign


def a3() -> ThreeLieAlgebra:
    """Three-dimensional 3-Lie algebra with [e1, e2, e3] = e2."""
    return ThreeLieAlgebra(3, {(0, 1, 2): (0, 1, 0)})


def a4() -> ThreeLieAlgebra:
    """The simple 4-dimensional 3-Lie algebra, [e_i, e_j, e_k] = eps_ijkl e_l."""
    table = {}
    for key in itertools.combinations(range(4), 3):
        (l,) = set(range(4)) - set(key)
        s, _ = sort_sign(key + (l,))
        table[key] = tuple(s * int(i == l) for i in range(4))
    return ThreeLieAlgebra(4, table)


def abelian3(dim: int) -> ThreeLieAlgebra:
    return ThreeLieAlgebra(dim, {})


def nijenhuis_matrix(d, c, f) -> Mat:
    """The operator [[d, 0, 0], [0, c, f], [0, 0, c]] on A3."""
    z = Fraction(0)
    return Mat.from_rows([[d, z, z], [z, c, f], [z, z, c]])


def l3() -> LieAlgebra:
    """[e1, e2] = e2 with e3 central."""
    return LieAlgebra(3, {(0, 1): (0, 1, 0)})


def aff2() -> LieAlgebra:
    """Two-dimensional non-abelian Lie algebra, [e1, e2] = e2."""
    return LieAlgebra(2, {(0, 1): (0, 1)})


def heisenberg() -> LieAlgebra:
    """[e1, e2] = e3."""
    return LieAlgebra(3, {(0, 1): (0, 0, 1)})


def sl2() -> LieAlgebra:
    """Basis (h, e, f): [h, e] = 2e, [h, f] = -2f, [e, f] = h."""
    return LieAlgebra(3, {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)})


def gl2() -> LieAlgebra:
    """Basis (E11, E12, E21, E22) with the commutator bracket."""
    units = [(0, 0), (0, 1), (1, 0), (1, 1)]

    def mat(k):
        i, j = units[k]
        return [[int(a == i and b == j) for b in range(2)] for a in range(2)]

    def coords(m):
        return tuple(m[i][j] for i, j in units)

    def mul(p, q):
        return [[sum(p[a][c] * q[c][b] for c in range(2)) for b in range(2)] for a in range(2)]

    table = {}
    for x, y in itertools.combinations(range(4), 2):
        p, q = mat(x), mat(y)
        pq, qp = mul(p, q), mul(q, p)
        table[(x, y)] = coords([[pq[a][b] - qp[a][b] for b in range(2)] for a in range(2)])
    return LieAlgebra(4, table)


def abelian_lie(dim: int) -> LieAlgebra:
    return LieAlgebra(dim, {})


THREE_LIE = {"A3": a3, "A4": a4}
LIE = {"L3": l3, "aff2": aff2, "heisenberg": heisenberg, "sl2": sl2, "gl2": gl2}


def basis(n: int) -> list:
    return [unit_vec(n, i) for i in range(n)]
