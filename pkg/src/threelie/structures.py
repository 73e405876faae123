"""Lie and 3-Lie algebras, their representations and 2-cocycles.

Structure constants are stored sparsely on strictly increasing index tuples
only; any other ordering is resolved at evaluation time through the sign of
the sorting permutation, and tuples with a repeated index evaluate to zero.
Constructors canonicalize but never validate: validation is explicit through
the ``check_*`` functions, which return a :class:`~threelie.report.Report`.

Every checker evaluates its identity on basis tuples only.  All identities
are multilinear, so holding on basis tuples is equivalent to holding
everywhere; where both sides are skew in a group of arguments the loop runs
over increasing tuples in that group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ShapeMismatch, ValidationFailure
from .exactla import (
    ZERO,
    Mat,
    Vec,
    block_diag,
    inverse,
    is_zero,
    nonzero,
    unit_vec,
    vec,
    vsub,
    zero_vec,
)
from .report import Report, merge, run_checks


def sort_sign(idx: Sequence[int]) -> tuple[int, tuple]:
    """Sign of the permutation sorting ``idx`` and the sorted tuple.

    Returns ``(0, ())`` when an index repeats.
    """
    a = list(idx)
    if len(set(a)) != len(a):
        return 0, ()
    sign = 1
    for i in range(len(a)):
        for j in range(len(a) - 1 - i):
            if a[j] > a[j + 1]:
                a[j], a[j + 1] = a[j + 1], a[j]
                sign = -sign
    return sign, tuple(a)


def _normalize_table(entries, arity: int, dim: int, out_dim: int, what: str) -> dict:
    table = {}
    for key, value in dict(entries).items():
        key = tuple(int(i) for i in key)
        if len(key) != arity:
            raise ShapeMismatch(f"{what}: key {key} should have {arity} indices")
        if any(not 0 <= i < dim for i in key):
            raise ShapeMismatch(f"{what}: index out of range in {key}")
        if any(key[i] >= key[i + 1] for i in range(arity - 1)):
            raise ShapeMismatch(f"{what}: key {key} is not strictly increasing")
        v = vec(value)
        if len(v) != out_dim:
            raise ShapeMismatch(f"{what}: value for {key} has length {len(v)}, expected {out_dim}")
        if not is_zero(v):
            table[key] = v
    return table


def skew_eval(table: Mapping[tuple, Vec], out_dim: int, args: Sequence[Sequence]) -> Vec:
    """Evaluate a fully skew multilinear map stored on increasing tuples."""
    acc = [ZERO] * out_dim
    supports = [list(nonzero(a)) for a in args]
    for combo in itertools.product(*supports):
        s, key = sort_sign([i for i, _ in combo])
        if not s:
            continue
        val = table.get(key)
        if val is None:
            continue
        c = Fraction(s)
        for _, x in combo:
            c *= x
        for t, y in enumerate(val):
            if y:
                acc[t] += c * y
    return tuple(acc)


def skew_basis(table: Mapping[tuple, Vec], out_dim: int, idx: Sequence[int]) -> Vec:
    s, key = sort_sign(idx)
    if not s or key not in table:
        return zero_vec(out_dim)
    v = table[key]
    return v if s == 1 else tuple(-x for x in v)


@dataclass(frozen=True)
class ThreeLieAlgebra:
    """Skew-symmetric ternary bracket given by ``table[(i, j, k)] = [e_i, e_j, e_k]``."""

    dim: int
    table: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "table", _normalize_table(self.table, 3, self.dim, self.dim, "3-Lie bracket"))

    def basis(self, i: int, j: int, k: int) -> Vec:
        return skew_basis(self.table, self.dim, (i, j, k))

    def bracket(self, x, y, z) -> Vec:
        return skew_eval(self.table, self.dim, (x, y, z))

    def ad(self, x, y) -> Mat:
        """Matrix of ``z -> [x, y, z]``."""
        cols = [self.bracket(x, y, unit_vec(self.dim, k)) for k in range(self.dim)]
        return Mat.from_columns(cols, self.dim)

    def e(self, i: int) -> Vec:
        return unit_vec(self.dim, i)


@dataclass(frozen=True)
class LieAlgebra:
    """Skew-symmetric binary bracket given by ``table[(i, j)] = [e_i, e_j]``."""

    dim: int
    table: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "table", _normalize_table(self.table, 2, self.dim, self.dim, "Lie bracket"))

    def basis(self, i: int, j: int) -> Vec:
        return skew_basis(self.table, self.dim, (i, j))

    def bracket(self, x, y) -> Vec:
        return skew_eval(self.table, self.dim, (x, y))

    def ad(self, x) -> Mat:
        cols = [self.bracket(x, unit_vec(self.dim, k)) for k in range(self.dim)]
        return Mat.from_columns(cols, self.dim)

    def e(self, i: int) -> Vec:
        return unit_vec(self.dim, i)


def _normalize_ops(ops, arity: int, algebra_dim: int, space_dim: int) -> dict:
    out = {}
    for key, m in dict(ops).items():
        key = (key,) if isinstance(key, int) else tuple(int(i) for i in key)
        if len(key) != arity or any(not 0 <= i < algebra_dim for i in key):
            raise ShapeMismatch(f"representation key {key} invalid")
        if arity == 2 and key[0] >= key[1]:
            raise ShapeMismatch(f"representation key {key} is not strictly increasing")
        if not isinstance(m, Mat):
            m = Mat.from_rows(m, space_dim)
        if m.shape != (space_dim, space_dim):
            raise ShapeMismatch(f"operator for {key} has shape {m.shape}, expected {(space_dim, space_dim)}")
        if not m.is_zero():
            out[key] = m
    return out


@dataclass(frozen=True)
class Representation3:
    """``ops[(i, j)]`` is the matrix of rho(e_i, e_j) acting on V (i < j)."""

    algebra_dim: int
    space_dim: int
    ops: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ops", _normalize_ops(self.ops, 2, self.algebra_dim, self.space_dim))

    def basis_op(self, i: int, j: int) -> Mat:
        s, key = sort_sign((i, j))
        if not s or key not in self.ops:
            return Mat.zeros(self.space_dim, self.space_dim)
        m = self.ops[key]
        return m if s == 1 else -m

    def op(self, x, y) -> Mat:
        total = Mat.zeros(self.space_dim, self.space_dim)
        for i, a in nonzero(x):
            for j, b in nonzero(y):
                if i != j:
                    total = total + self.basis_op(i, j).scale(a * b)
        return total

    def act(self, x, y, v) -> Vec:
        acc = [ZERO] * self.space_dim
        if is_zero(v):
            return tuple(acc)
        for i, a in nonzero(x):
            for j, b in nonzero(y):
                s, key = sort_sign((i, j))
                if not s or key not in self.ops:
                    continue
                w = self.ops[key].apply(v)
                c = s * a * b
                for t, y_ in enumerate(w):
                    if y_:
                        acc[t] += c * y_
        return tuple(acc)


@dataclass(frozen=True)
class RepresentationLie:
    """``ops[i]`` is the matrix of rho(e_i) acting on V."""

    algebra_dim: int
    space_dim: int
    ops: dict = field(default_factory=dict)

    def __post_init__(self):
        norm = _normalize_ops(self.ops, 1, self.algebra_dim, self.space_dim)
        object.__setattr__(self, "ops", {k[0]: m for k, m in norm.items()})

    def basis_op(self, i: int) -> Mat:
        return self.ops.get(i) or Mat.zeros(self.space_dim, self.space_dim)

    def op(self, x) -> Mat:
        total = Mat.zeros(self.space_dim, self.space_dim)
        for i, a in nonzero(x):
            if i in self.ops:
                total = total + self.ops[i].scale(a)
        return total

    def act(self, x, v) -> Vec:
        acc = [ZERO] * self.space_dim
        for i, a in nonzero(x):
            if i in self.ops:
                for t, y in enumerate(self.ops[i].apply(v)):
                    if y:
                        acc[t] += a * y
        return tuple(acc)


@dataclass(frozen=True)
class TwoCocycle3:
    """Fully skew trilinear map g x g x g -> V stored on increasing triples."""

    algebra_dim: int
    space_dim: int
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "values", _normalize_table(self.values, 3, self.algebra_dim, self.space_dim, "2-cocycle")
        )

    def basis(self, i, j, k) -> Vec:
        return skew_basis(self.values, self.space_dim, (i, j, k))

    def __call__(self, x, y, z) -> Vec:
        return skew_eval(self.values, self.space_dim, (x, y, z))

    def __add__(self, other: "TwoCocycle3") -> "TwoCocycle3":
        keys = set(self.values) | set(other.values)
        zero = zero_vec(self.space_dim)
        return TwoCocycle3(
            self.algebra_dim,
            self.space_dim,
            {k: tuple(a + b for a, b in zip(self.values.get(k, zero), other.values.get(k, zero))) for k in keys},
        )

    def __neg__(self) -> "TwoCocycle3":
        return TwoCocycle3(self.algebra_dim, self.space_dim, {k: tuple(-x for x in v) for k, v in self.values.items()})


@dataclass(frozen=True)
class TwoCocycleLie:
    """Skew bilinear map g x g -> V stored on increasing pairs."""

    algebra_dim: int
    space_dim: int
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "values", _normalize_table(self.values, 2, self.algebra_dim, self.space_dim, "2-cocycle")
        )

    def basis(self, i, j) -> Vec:
        return skew_basis(self.values, self.space_dim, (i, j))

    def __call__(self, x, y) -> Vec:
        return skew_eval(self.values, self.space_dim, (x, y))


# -- standard objects ---------------------------------------------------------


def abelian3(dim: int) -> ThreeLieAlgebra:
    return ThreeLieAlgebra(dim, {})


def adjoint_rep3(g: ThreeLieAlgebra) -> Representation3:
    return Representation3(
        g.dim, g.dim, {(i, j): g.ad(g.e(i), g.e(j)) for i, j in itertools.combinations(range(g.dim), 2)}
    )


def zero_rep3(algebra_dim: int, space_dim: int) -> Representation3:
    return Representation3(algebra_dim, space_dim, {})


def zero_cocycle3(algebra_dim: int, space_dim: int) -> TwoCocycle3:
    return TwoCocycle3(algebra_dim, space_dim, {})


def adjoint_rep_lie(g: LieAlgebra) -> RepresentationLie:
    return RepresentationLie(g.dim, g.dim, {i: g.ad(g.e(i)) for i in range(g.dim)})


def zero_rep_lie(algebra_dim: int, space_dim: int) -> RepresentationLie:
    return RepresentationLie(algebra_dim, space_dim, {})


def zero_cocycle_lie(algebra_dim: int, space_dim: int) -> TwoCocycleLie:
    return TwoCocycleLie(algebra_dim, space_dim, {})


def rep3_direct_sum(a: Representation3, b: Representation3) -> Representation3:
    if a.algebra_dim != b.algebra_dim:
        raise ShapeMismatch("representations of different algebras")
    n = a.algebra_dim
    return Representation3(
        n,
        a.space_dim + b.space_dim,
        {(i, j): block_diag(a.basis_op(i, j), b.basis_op(i, j)) for i, j in itertools.combinations(range(n), 2)},
    )


def three_lie_from_map(dim: int, fn) -> ThreeLieAlgebra:
    """Tabulate a trilinear skew map given as ``fn(x, y, z) -> Vec``."""
    e = [unit_vec(dim, i) for i in range(dim)]
    return ThreeLieAlgebra(dim, {(i, j, k): fn(e[i], e[j], e[k]) for i, j, k in itertools.combinations(range(dim), 3)})


def cocycle3_from_map(algebra_dim: int, space_dim: int, fn) -> TwoCocycle3:
    e = [unit_vec(algebra_dim, i) for i in range(algebra_dim)]
    return TwoCocycle3(
        algebra_dim,
        space_dim,
        {(i, j, k): fn(e[i], e[j], e[k]) for i, j, k in itertools.combinations(range(algebra_dim), 3)},
    )


def rep3_from_map(algebra_dim: int, space_dim: int, fn) -> Representation3:
    """Tabulate ``fn(x, y, v) -> Vec`` (bilinear skew in x, y; linear in v)."""
    e = [unit_vec(algebra_dim, i) for i in range(algebra_dim)]
    f = [unit_vec(space_dim, k) for k in range(space_dim)]
    return Representation3(
        algebra_dim,
        space_dim,
        {
            (i, j): Mat.from_columns([fn(e[i], e[j], f[k]) for k in range(space_dim)], space_dim)
            for i, j in itertools.combinations(range(algebra_dim), 2)
        },
    )


# -- change of basis ----------------------------------------------------------


def transport_algebra(g: ThreeLieAlgebra, p: Mat) -> ThreeLieAlgebra:
    """The bracket ``P^-1 [Px, Py, Pz]`` (isomorphic to ``g`` via P)."""
    pinv = inverse(p)
    return three_lie_from_map(g.dim, lambda x, y, z: pinv.apply(g.bracket(p.apply(x), p.apply(y), p.apply(z))))


def transport_lie(g: LieAlgebra, p: Mat) -> LieAlgebra:
    pinv = inverse(p)
    e = [unit_vec(g.dim, i) for i in range(g.dim)]
    return LieAlgebra(
        g.dim,
        {(i, j): pinv.apply(g.bracket(p.apply(e[i]), p.apply(e[j]))) for i, j in itertools.combinations(range(g.dim), 2)},
    )


def transport_rep3(rho: Representation3, p: Mat, q: Mat) -> Representation3:
    """``Q^-1 rho(Px, Py) Q``: rho transported along algebra map P and space map Q."""
    qinv = inverse(q)
    return rep3_from_map(
        rho.algebra_dim, rho.space_dim, lambda x, y, v: qinv.apply(rho.act(p.apply(x), p.apply(y), q.apply(v)))
    )


def transport_rep_lie(rho: RepresentationLie, p: Mat, q: Mat) -> RepresentationLie:
    qinv = inverse(q)
    return RepresentationLie(
        rho.algebra_dim,
        rho.space_dim,
        {i: qinv @ rho.op(p.apply(unit_vec(rho.algebra_dim, i))) @ q for i in range(rho.algebra_dim)},
    )


# -- checkers -----------------------------------------------------------------


def _basis(n: int) -> list[Vec]:
    return [unit_vec(n, i) for i in range(n)]


def check_filippov(g: ThreeLieAlgebra, limit: int = 1) -> Report:
    """Fundamental identity on basis tuples x1 < x2, x3 < x4 < x5.

    Both sides are skew in (x1, x2) and in (x3, x4, x5), so these tuples
    suffice.
    """
    e = _basis(g.dim)

    def cases():
        for i1, i2 in itertools.combinations(range(g.dim), 2):
            for i3, i4, i5 in itertools.combinations(range(g.dim), 3):
                x1, x2, x3, x4, x5 = e[i1], e[i2], e[i3], e[i4], e[i5]
                lhs = g.bracket(x1, x2, g.basis(i3, i4, i5))
                rhs = [
                    g.bracket(g.basis(i1, i2, i3), x4, x5),
                    g.bracket(x3, g.basis(i1, i2, i4), x5),
                    g.bracket(x3, x4, g.basis(i1, i2, i5)),
                ]
                yield "filippov", (i1, i2, i3, i4, i5), _minus_all(lhs, rhs)

    return run_checks("filippov identity", cases(), limit)


def check_jacobi(g: LieAlgebra, limit: int = 1) -> Report:
    e = _basis(g.dim)

    def cases():
        for i, j, k in itertools.combinations(range(g.dim), 3):
            x, y, z = e[i], e[j], e[k]
            r = [g.bracket(g.basis(i, j), z), g.bracket(g.basis(j, k), x), g.bracket(g.basis(k, i), y)]
            yield "jacobi", (i, j, k), _sum_all(r, g.dim)

    return run_checks("jacobi identity", cases(), limit)


def _flat(m: Mat) -> tuple:
    return tuple(x for r in m.data for x in r)


def check_rep3(g: ThreeLieAlgebra, rho: Representation3, limit: int = 1) -> Report:
    """Both representation identities, as operator identities on V.

    The first is skew in (x1, x2) and in (x3, x4); the second is skew in
    (x1, x2, x3).
    """
    _require(rho.algebra_dim == g.dim, "representation and algebra dimensions differ")
    n = g.dim
    e = _basis(n)

    def rep1():
        for i1, i2 in itertools.combinations(range(n), 2):
            for i3, i4 in itertools.combinations(range(n), 2):
                lhs = rho.basis_op(i1, i2) @ rho.basis_op(i3, i4)
                rhs = (
                    rho.op(g.basis(i1, i2, i3), e[i4])
                    + rho.op(e[i3], g.basis(i1, i2, i4))
                    + rho.basis_op(i3, i4) @ rho.basis_op(i1, i2)
                )
                yield "rep1", (i1, i2, i3, i4), _flat(lhs - rhs)

    def rep2():
        for i1, i2, i3 in itertools.combinations(range(n), 3):
            for i4 in range(n):
                lhs = rho.op(g.basis(i1, i2, i3), e[i4])
                rhs = (
                    rho.basis_op(i1, i2) @ rho.basis_op(i3, i4)
                    + rho.basis_op(i2, i3) @ rho.basis_op(i1, i4)
                    + rho.basis_op(i3, i1) @ rho.basis_op(i2, i4)
                )
                yield "rep2", (i1, i2, i3, i4), _flat(lhs - rhs)

    return merge("representation identities", [run_checks("rep1", rep1(), limit), run_checks("rep2", rep2(), limit)])


def check_rep_lie(g: LieAlgebra, rho: RepresentationLie, limit: int = 1) -> Report:
    _require(rho.algebra_dim == g.dim, "representation and algebra dimensions differ")

    def cases():
        for i, j in itertools.combinations(range(g.dim), 2):
            a, b = rho.basis_op(i), rho.basis_op(j)
            yield "rep_lie", (i, j), _flat(rho.op(g.basis(i, j)) - (a @ b - b @ a))

    return run_checks("Lie representation identity", cases(), limit)


def check_cocycle3(g: ThreeLieAlgebra, rho: Representation3, theta: TwoCocycle3, limit: int = 1) -> Report:
    """2-cocycle identity on x1 < x2 and y1 < y2 < y3."""
    _require(theta.algebra_dim == g.dim and theta.space_dim == rho.space_dim, "cocycle shape mismatch")
    n = g.dim
    e = _basis(n)

    def cases():
        for a, b in itertools.combinations(range(n), 2):
            for c1, c2, c3 in itertools.combinations(range(n), 3):
                x1, x2, y1, y2, y3 = e[a], e[b], e[c1], e[c2], e[c3]
                plus = [
                    theta(x1, x2, g.basis(c1, c2, c3)),
                    rho.act(x1, x2, theta.basis(c1, c2, c3)),
                ]
                minus = [
                    theta(g.basis(a, b, c1), y2, y3),
                    theta(y1, g.basis(a, b, c2), y3),
                    theta(y1, y2, g.basis(a, b, c3)),
                    rho.act(y2, y3, theta.basis(a, b, c1)),
                    rho.act(y3, y1, theta.basis(a, b, c2)),
                    rho.act(y1, y2, theta.basis(a, b, c3)),
                ]
                yield "cocycle3", (a, b, c1, c2, c3), vsub(_sum_all(plus, rho.space_dim), _sum_all(minus, rho.space_dim))

    return run_checks("3-Lie 2-cocycle identity", cases(), limit)


def check_cocycle_lie(g: LieAlgebra, rho: RepresentationLie, theta: TwoCocycleLie, limit: int = 1) -> Report:
    _require(theta.algebra_dim == g.dim and theta.space_dim == rho.space_dim, "cocycle shape mismatch")
    e = _basis(g.dim)

    def cases():
        for i, j, k in itertools.combinations(range(g.dim), 3):
            x, y, z = e[i], e[j], e[k]
            terms = [
                rho.act(x, theta.basis(j, k)),
                rho.act(y, theta.basis(k, i)),
                rho.act(z, theta.basis(i, j)),
                theta(x, g.basis(j, k)),
                theta(y, g.basis(k, i)),
                theta(z, g.basis(i, j)),
            ]
            yield "cocycle_lie", (i, j, k), _sum_all(terms, rho.space_dim)

    return run_checks("Lie 2-cocycle identity", cases(), limit)


def check_algebra_morphism(src: ThreeLieAlgebra, dst: ThreeLieAlgebra, phi: Mat, limit: int = 1) -> Report:
    """``phi [x, y, z] = [phi x, phi y, phi z]`` on increasing basis triples."""
    _require(phi.shape == (dst.dim, src.dim), "morphism matrix has the wrong shape")
    cols = phi.columns()

    def cases():
        for i, j, k in itertools.combinations(range(src.dim), 3):
            yield "morphism", (i, j, k), vsub(phi.apply(src.basis(i, j, k)), dst.bracket(cols[i], cols[j], cols[k]))

    return run_checks("3-Lie algebra morphism", cases(), limit)


def coboundary1(g: ThreeLieAlgebra, rho: Representation3, theta1: Mat) -> TwoCocycle3:
    """Differential of a 1-cochain g -> V.

    (d theta)(x, y, z) = rho(x, y) theta(z) + rho(z, x) theta(y)
                         + rho(y, z) theta(x) - theta([x, y, z])
    """
    _require(theta1.shape == (rho.space_dim, g.dim), "1-cochain has the wrong shape")

    def fn(x, y, z):
        parts = [
            rho.act(x, y, theta1.apply(z)),
            rho.act(z, x, theta1.apply(y)),
            rho.act(y, z, theta1.apply(x)),
        ]
        return vsub(_sum_all(parts, rho.space_dim), theta1.apply(g.bracket(x, y, z)))

    return cocycle3_from_map(g.dim, rho.space_dim, fn)


def semidirect_bracket(g: ThreeLieAlgebra, rho: Representation3, theta: TwoCocycle3, a, b, c) -> Vec:
    n = g.dim
    x, u = a[:n], a[n:]
    y, v = b[:n], b[n:]
    z, w = c[:n], c[n:]
    top = g.bracket(x, y, z)
    parts = [rho.act(x, y, w), rho.act(z, x, v), rho.act(y, z, u), theta(x, y, z)]
    return top + _sum_all(parts, rho.space_dim)


def semidirect_twisted(
    g: ThreeLieAlgebra, rho: Representation3, theta: TwoCocycle3, validate: bool = True
) -> ThreeLieAlgebra:
    """Theta-twisted semidirect product on g + V (g first, then V)."""
    if validate:
        _validate(check_rep3(g, rho), "representation")
        _validate(check_cocycle3(g, rho, theta), "2-cocycle")
    total = g.dim + rho.space_dim
    return three_lie_from_map(total, lambda a, b, c: semidirect_bracket(g, rho, theta, a, b, c))


def check_semidirect_iso(
    g: ThreeLieAlgebra,
    rho: Representation3,
    theta: TwoCocycle3,
    theta1: Mat,
    psi: Mat | None = None,
    limit: int = 1,
) -> Report:
    """``(x, u) -> (x, u - theta1 x)`` carries the Theta product onto the
    (Theta + d theta1) product.  ``psi`` overrides the map (negative controls).
    """
    n, m = g.dim, rho.space_dim
    src = semidirect_twisted(g, rho, theta, validate=False)
    dst = semidirect_twisted(g, rho, theta + coboundary1(g, rho, theta1), validate=False)
    if psi is None:
        rows = []
        for i in range(n):
            rows.append(tuple(Fraction(int(i == j)) for j in range(n + m)))
        for k in range(m):
            rows.append(tuple(-theta1[k, j] for j in range(n)) + tuple(Fraction(int(k == l)) for l in range(m)))
        psi = Mat(n + m, n + m, rows)
    r = check_algebra_morphism(src, dst, psi, limit)
    r.subject = "semidirect product isomorphism"
    return r


# -- helpers ------------------------------------------------------------------


def _sum_all(vectors, n: int) -> Vec:
    acc = [ZERO] * n
    for v in vectors:
        for i, x in enumerate(v):
            if x:
                acc[i] += x
    return tuple(acc)


def _minus_all(lhs, rhs_terms) -> Vec:
    return vsub(lhs, _sum_all(rhs_terms, len(lhs)))


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ShapeMismatch(message)


def _validate(report: Report, what: str, exc=ValidationFailure) -> None:
    if not report.passed:
        raise exc(f"{what} failed validation: {report.summary()}", report)
