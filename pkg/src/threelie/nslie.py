"""NS-Lie and 3-NS-Lie algebras.

A 3-NS-Lie algebra carries two ternary products: ``{x, y, z}`` (skew in the
first two slots only) and ``[[x, y, z]]`` (fully skew).  Their cyclic
combination ``[x, y, z]_* = {x,y,z} + {y,z,x} + {z,x,y} + [[x,y,z]]`` is the
subadjacent 3-Lie bracket.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import NotInvertible, ShapeMismatch, ValidationFailure
from .exactla import ZERO, Mat, Vec, inverse, is_zero, nonzero, unit_vec, vec, vsub
from .report import Report, merge, run_checks
from .structures import (
    LieAlgebra,
    Representation3,
    ThreeLieAlgebra,
    TwoCocycle3,
    _normalize_table,
    _sum_all,
    check_jacobi,
    cocycle3_from_map,
    rep3_from_map,
    sort_sign,
    three_lie_from_map,
)
from .twistop import TwistedOperator, nijenhuis_check, nijenhuis_theta_value
from .errors import NotNijenhuis


def _normalize_curly(entries, dim: int) -> dict:
    out = {}
    for key, value in dict(entries).items():
        key = tuple(int(i) for i in key)
        if len(key) != 3 or any(not 0 <= i < dim for i in key):
            raise ShapeMismatch(f"curly product key {key} invalid")
        if key[0] >= key[1]:
            raise ShapeMismatch(f"curly product key {key}: first two indices must increase")
        v = vec(value)
        if len(v) != dim:
            raise ShapeMismatch("curly product value has the wrong length")
        if not is_zero(v):
            out[key] = v
    return out


def _tensor_eval(t, dim: int, args) -> Vec:
    """Trilinear evaluation against a dense tensor t[i][j][k] -> Vec."""
    acc = [ZERO] * dim
    sup = [[(a, 1)] if isinstance(a, int) else list(nonzero(a)) for a in args]
    for (i, a), (j, b) in itertools.product(sup[0], sup[1]):
        row = t[i][j]
        for k, c in sup[2]:
            val = row[k]
            if val is None:
                continue
            coef = a * b * c
            for p, y in enumerate(val):
                if y:
                    acc[p] += coef * y
    return tuple(acc)


def _bi_eval(t, dim: int, args) -> Vec:
    acc = [ZERO] * dim
    sup = [[(a, 1)] if isinstance(a, int) else list(nonzero(a)) for a in args]
    for (i, a), (j, b) in itertools.product(sup[0], sup[1]):
        val = t[i][j]
        if val is None:
            continue
        coef = a * b
        for p, y in enumerate(val):
            if y:
                acc[p] += coef * y
    return tuple(acc)


@dataclass(frozen=True)
class ThreeNSLieAlgebra:
    dim: int
    curly: dict = field(default_factory=dict)
    bracket: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "curly", _normalize_curly(self.curly, self.dim))
        object.__setattr__(self, "bracket", _normalize_table(self.bracket, 3, self.dim, self.dim, "[[.]] product"))

    def curly_basis(self, i: int, j: int, k: int) -> Vec | None:
        s, (a, b) = sort_sign((i, j)) if i != j else (0, (0, 0))
        if not s:
            return None
        v = self.curly.get((a, b, k))
        if v is None:
            return None
        return v if s == 1 else tuple(-x for x in v)

    def double_basis(self, i: int, j: int, k: int) -> Vec | None:
        s, key = sort_sign((i, j, k))
        if not s or key not in self.bracket:
            return None
        v = self.bracket[key]
        return v if s == 1 else tuple(-x for x in v)

    def tensors(self) -> "NSTensors":
        return NSTensors.of(self)

    def curly_of(self, x, y, z) -> Vec:
        return self.tensors().curly(x, y, z)

    def double_of(self, x, y, z) -> Vec:
        return self.tensors().double(x, y, z)

    def star(self, x, y, z) -> Vec:
        return self.tensors().star(x, y, z)


class NSTensors:
    """Dense lookup tables for fast evaluation of a 3-NS-Lie algebra."""

    def __init__(self, dim, curly, double, star):
        self.dim = dim
        self._c, self._d, self._s = curly, double, star

    @classmethod
    def of(cls, a: ThreeNSLieAlgebra) -> "NSTensors":
        n = a.dim
        r = range(n)
        c = [[[a.curly_basis(i, j, k) for k in r] for j in r] for i in r]
        d = [[[a.double_basis(i, j, k) for k in r] for j in r] for i in r]
        z = (ZERO,) * n
        s = [
            [
                [
                    _opt(_sum_all([c[i][j][k] or z, c[j][k][i] or z, c[k][i][j] or z, d[i][j][k] or z], n))
                    for k in r
                ]
                for j in r
            ]
            for i in r
        ]
        return cls(n, c, d, s)

    def curly(self, x, y, z) -> Vec:
        return _tensor_eval(self._c, self.dim, (x, y, z))

    def double(self, x, y, z) -> Vec:
        return _tensor_eval(self._d, self.dim, (x, y, z))

    def star(self, x, y, z) -> Vec:
        return _tensor_eval(self._s, self.dim, (x, y, z))

    def cyclic(self, x, y, z) -> Vec:
        return _sum_all([self.curly(x, y, z), self.curly(y, z, x), self.curly(z, x, y)], self.dim)


def _opt(v: Vec):
    return None if is_zero(v) else v


def three_ns_from_maps(dim: int, curly_fn, double_fn) -> ThreeNSLieAlgebra:
    e = [unit_vec(dim, i) for i in range(dim)]
    curly = {(i, j, k): curly_fn(e[i], e[j], e[k]) for i, j in itertools.combinations(range(dim), 2) for k in range(dim)}
    double = {(i, j, k): double_fn(e[i], e[j], e[k]) for i, j, k in itertools.combinations(range(dim), 3)}
    return ThreeNSLieAlgebra(dim, curly, double)


def check_3ns(a: ThreeNSLieAlgebra, limit: int = 1) -> Report:
    """All five 3-NS-Lie identities on raw basis tuples.

    The two symmetry identities hold by construction of the storage and are
    re-evaluated anyway; the three compatibility identities are evaluated on
    every basis 5-tuple with no symmetry reduction.
    """
    t = a.tensors()
    n = a.dim
    e = list(range(n))

    def symmetry():
        for i, j, k in itertools.product(e, repeat=3):
            yield "curly_skew", (i, j, k), _sum_all([t.curly(i, j, k), t.curly(j, i, k)], n)
            yield "double_skew", (i, j, k), _sum_all([t.double(i, j, k), t.double(j, i, k)], n)
            yield "double_skew", (i, j, k), _sum_all([t.double(i, j, k), t.double(i, k, j)], n)

    def ns1():
        for x1, x2, x3, x4, x5 in itertools.product(e, repeat=5):
            lhs = t.curly(x1, x2, t.curly(x3, x4, x5))
            rhs = [
                t.curly(t.cyclic(x1, x2, x3), x4, x5),
                t.curly(t.double(x1, x2, x3), x4, x5),
                t.curly(x3, t.cyclic(x1, x2, x4), x5),
                t.curly(x3, t.double(x1, x2, x4), x5),
                t.curly(x3, x4, t.curly(x1, x2, x5)),
            ]
            yield "ns1", (x1, x2, x3, x4, x5), vsub(lhs, _sum_all(rhs, n))

    def ns2():
        for x1, x2, x3, x4, x5 in itertools.product(e, repeat=5):
            lhs = _sum_all([t.curly(t.cyclic(x1, x2, x3), x4, x5), t.curly(t.double(x1, x2, x3), x4, x5)], n)
            rhs = [
                t.curly(x1, x2, t.curly(x3, x4, x5)),
                t.curly(x2, x3, t.curly(x1, x4, x5)),
                t.curly(x3, x1, t.curly(x2, x4, x5)),
            ]
            yield "ns2", (x1, x2, x3, x4, x5), vsub(lhs, _sum_all(rhs, n))

    def ns3():
        for x1, x2, x3, x4, x5 in itertools.product(e, repeat=5):
            lhs = _sum_all([t.double(x1, x2, t.star(x3, x4, x5)), t.curly(x1, x2, t.double(x3, x4, x5))], n)
            rhs = [
                t.double(t.star(x1, x2, x3), x4, x5),
                t.double(x3, t.star(x1, x2, x4), x5),
                t.double(x3, x4, t.star(x1, x2, x5)),
                t.curly(x4, x5, t.double(x1, x2, x3)),
                t.curly(x5, x3, t.double(x1, x2, x4)),
                t.curly(x3, x4, t.double(x1, x2, x5)),
            ]
            yield "ns3", (x1, x2, x3, x4, x5), vsub(lhs, _sum_all(rhs, n))

    return merge(
        "3-NS-Lie identities",
        [
            run_checks("symmetry", symmetry(), limit),
            run_checks("ns1", ns1(), limit),
            run_checks("ns2", ns2(), limit),
            run_checks("ns3", ns3(), limit),
        ],
    )


def _require(report: Report, what: str) -> None:
    if not report.passed:
        raise ValidationFailure(f"{what}: {report.summary()}", report)


def subadjacent(a: ThreeNSLieAlgebra, validate: bool = True) -> ThreeLieAlgebra:
    """[x, y, z]_* = {x,y,z} + {y,z,x} + {z,x,y} + [[x,y,z]]."""
    if validate:
        _require(check_3ns(a), "not a 3-NS-Lie algebra")
    t = a.tensors()
    return three_lie_from_map(a.dim, t.star)


def from_nijenhuis_ns(g: ThreeLieAlgebra, N: Mat) -> ThreeNSLieAlgebra:
    """{x, y, z} = [Nx, Ny, z] and [[x, y, z]] = -N([Nx,y,z] + [x,Ny,z] + [x,y,Nz] - N[x,y,z])."""
    r = nijenhuis_check(g, N)
    if not r.passed:
        raise NotNijenhuis(f"not a Nijenhuis operator: {r.summary()}", r)
    return three_ns_from_maps(
        g.dim,
        lambda x, y, z: g.bracket(N.apply(x), N.apply(y), z),
        lambda x, y, z: nijenhuis_theta_value(g, N, x, y, z),
    )


class LeftMultPackage(NamedTuple):
    algebra: ThreeLieAlgebra
    rep: Representation3
    theta: TwoCocycle3
    op: TwistedOperator


def left_mult_package(a: ThreeNSLieAlgebra, validate: bool = True) -> LeftMultPackage:
    """L(x, y)z = {x, y, z} on the subadjacent algebra, Theta = [[.]], and
    the identity map as a twisted operator."""
    alg = subadjacent(a, validate)
    t = a.tensors()
    rep = rep3_from_map(a.dim, a.dim, t.curly)
    theta = cocycle3_from_map(a.dim, a.dim, t.double)
    return LeftMultPackage(alg, rep, theta, TwistedOperator(alg, rep, theta, Mat.identity(a.dim)))


def from_twisted_ns(op: TwistedOperator) -> ThreeNSLieAlgebra:
    """{u, v, w} = rho(Tu, Tv)w and [[u, v, w]] = Theta(Tu, Tv, Tw) on V."""
    T = op.T
    return three_ns_from_maps(
        op.v_dim,
        lambda u, v, w: op.rho.act(T.apply(u), T.apply(v), w),
        lambda u, v, w: op.theta(T.apply(u), T.apply(v), T.apply(w)),
    )


def compatible_from_invertible(op: TwistedOperator) -> ThreeNSLieAlgebra:
    """{x, y, z} = T rho(x, y) T^-1 z and [[x, y, z]] = T Theta(x, y, z) on g."""
    if op.T.rows != op.T.cols:
        raise NotInvertible("T is not square")
    T = op.T
    Tinv = inverse(T)
    return three_ns_from_maps(
        op.g_dim,
        lambda x, y, z: T.apply(op.rho.act(x, y, Tinv.apply(z))),
        lambda x, y, z: T.apply(op.theta(x, y, z)),
    )


# -- binary NS-Lie algebras ---------------------------------------------------


def _normalize_full_pairs(entries, dim: int) -> dict:
    out = {}
    for key, value in dict(entries).items():
        key = tuple(int(i) for i in key)
        if len(key) != 2 or any(not 0 <= i < dim for i in key):
            raise ShapeMismatch(f"curly product key {key} invalid")
        v = vec(value)
        if len(v) != dim:
            raise ShapeMismatch("curly product value has the wrong length")
        if not is_zero(v):
            out[key] = v
    return out


@dataclass(frozen=True)
class NSLieAlgebra:
    """``curly[(i, j)] = {e_i, e_j}`` (no symmetry), ``bracket`` skew on i < j."""

    dim: int
    curly: dict = field(default_factory=dict)
    bracket: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "curly", _normalize_full_pairs(self.curly, self.dim))
        object.__setattr__(self, "bracket", _normalize_table(self.bracket, 2, self.dim, self.dim, "[[.]] product"))

    def _tables(self):
        n = self.dim
        c = [[self.curly.get((i, j)) for j in range(n)] for i in range(n)]
        d = [[None] * n for _ in range(n)]
        for (i, j), v in self.bracket.items():
            d[i][j] = v
            d[j][i] = tuple(-x for x in v)
        z = (ZERO,) * n
        s = [
            [_opt(_sum_all([c[i][j] or z, tuple(-x for x in (c[j][i] or z)), d[i][j] or z], n)) for j in range(n)]
            for i in range(n)
        ]
        return c, d, s

    def curly_of(self, x, y) -> Vec:
        return _bi_eval(self._tables()[0], self.dim, (x, y))

    def double_of(self, x, y) -> Vec:
        return _bi_eval(self._tables()[1], self.dim, (x, y))

    def star(self, x, y) -> Vec:
        """[x, y]_* = {x, y} - {y, x} + [[x, y]]."""
        return _bi_eval(self._tables()[2], self.dim, (x, y))


def star_algebra(a: NSLieAlgebra) -> LieAlgebra:
    _, _, s = a._tables()
    return LieAlgebra(a.dim, {(i, j): s[i][j] or (ZERO,) * a.dim for i, j in itertools.combinations(range(a.dim), 2)})


def check_ns_binary(a: NSLieAlgebra, limit: int = 1) -> Report:
    """Both NS-Lie identities on basis triples, plus Jacobi for [.,.]_*."""
    c, d, s = a._tables()
    n = a.dim

    def cu(x, y):
        return _bi_eval(c, n, (x, y))

    def db(x, y):
        return _bi_eval(d, n, (x, y))

    def st(x, y):
        return _bi_eval(s, n, (x, y))

    def cases():
        for x, y, z in itertools.product(range(n), repeat=3):
            r1 = _sum_all(
                [cu(cu(x, y), z), tuple(-v for v in cu(x, cu(y, z))), tuple(-v for v in cu(cu(y, x), z)), cu(y, cu(x, z)), cu(db(x, y), z)],
                n,
            )
            yield "nslie1", (x, y, z), r1
            r2 = _sum_all(
                [db(x, st(y, z)), db(y, st(z, x)), db(z, st(x, y)), cu(x, db(y, z)), cu(y, db(z, x)), cu(z, db(x, y))], n
            )
            yield "nslie2", (x, y, z), r2

    r = merge("NS-Lie identities", [run_checks("NS-Lie", cases(), limit), check_jacobi(star_algebra(a), limit)])
    return r
