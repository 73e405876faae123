"""Cochain complexes of 3-Lie algebras and of twisted operators.

An n-cochain (n >= 1) on an algebra of dimension ``d`` with values in a
space of dimension ``m`` takes 2n - 1 arguments: n - 1 pairs followed by a
single argument.  Every pair slot is skew.  For n >= 2 the last three
arguments (last pair plus the single one) are taken fully skew, which is the
usual reading of the degree-2 space as maps on the third exterior power.

Coefficients are stored on canonical keys: flat index tuples where each of
the first n - 2 pairs is increasing and the last three indices are strictly
increasing (for n = 1 the key is a single index).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from .errors import FormulaDisagreement, ShapeMismatch, TooLarge
from .exactla import (
    ZERO,
    Mat,
    Vec,
    complement_basis,
    is_zero,
    kernel_basis,
    nonzero,
    rank,
    unit_vec,
    vsub,
    zero_vec,
)
from .structures import Representation3, ThreeLieAlgebra, _sum_all, rep3_from_map, sort_sign
from .twistop import TwistedOperator, induced_bracket

DEFAULT_CAP = 20000


def arity(n: int) -> int:
    return 2 * n - 1


def canonical_keys(n: int, d: int) -> list[tuple]:
    """Canonical coefficient keys of degree ``n`` over a ``d``-dimensional algebra."""
    if n < 1:
        raise ValueError("cochain degree must be at least 1")
    if n == 1:
        return [(i,) for i in range(d)]
    pairs = list(itertools.combinations(range(d), 2))
    triples = list(itertools.combinations(range(d), 3))
    return [sum(ps, ()) + t for ps in itertools.product(pairs, repeat=n - 2) for t in triples]


def key_count(n: int, d: int) -> int:
    if n == 0:
        return comb(d, 2)
    if n == 1:
        return d
    return comb(d, 2) ** (n - 2) * comb(d, 3)


def canonicalize(n: int, idx: Sequence[int]) -> tuple[int, tuple]:
    """Sign and canonical key for a raw basis index tuple (sign 0 if it vanishes)."""
    if n == 1:
        return 1, tuple(idx)
    sign = 1
    out = []
    for p in range(n - 2):
        s, pair = sort_sign(idx[2 * p : 2 * p + 2])
        if not s:
            return 0, ()
        sign *= s
        out.extend(pair)
    s, last = sort_sign(idx[-3:])
    if not s:
        return 0, ()
    return sign * s, tuple(out) + last


@dataclass(frozen=True)
class Cochain:
    degree: int
    source_dim: int
    target_dim: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 1:
            raise ShapeMismatch("use Bivector for degree 0")
        keys = set(canonical_keys(self.degree, self.source_dim))
        clean = {}
        for k, v in dict(self.coeffs).items():
            k = tuple(k)
            if k not in keys:
                raise ShapeMismatch(f"{k} is not a canonical key of degree {self.degree}")
            v = tuple(Fraction(x) for x in v)
            if len(v) != self.target_dim:
                raise ShapeMismatch("coefficient vector has the wrong length")
            if not is_zero(v):
                clean[k] = v
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_linear_map(cls, m: Mat) -> "Cochain":
        return cls(1, m.cols, m.rows, {(j,): m.column(j) for j in range(m.cols)})

    @classmethod
    def from_vector(cls, n: int, d: int, m: int, v: Sequence) -> "Cochain":
        keys = canonical_keys(n, d)
        if len(v) != len(keys) * m:
            raise ShapeMismatch("coordinate vector has the wrong length")
        return cls(n, d, m, {k: tuple(v[i * m : (i + 1) * m]) for i, k in enumerate(keys)})

    def to_vector(self) -> Vec:
        z = zero_vec(self.target_dim)
        out: list = []
        for k in canonical_keys(self.degree, self.source_dim):
            out.extend(self.coeffs.get(k, z))
        return tuple(out)

    def to_matrix(self) -> Mat:
        if self.degree != 1:
            raise ShapeMismatch("only degree-1 cochains are linear maps")
        z = zero_vec(self.target_dim)
        return Mat.from_columns([self.coeffs.get((j,), z) for j in range(self.source_dim)], self.target_dim)

    def is_zero(self) -> bool:
        return not self.coeffs

    def basis_value(self, idx: Sequence[int]) -> Vec:
        s, key = canonicalize(self.degree, idx)
        if not s or key not in self.coeffs:
            return zero_vec(self.target_dim)
        v = self.coeffs[key]
        return v if s == 1 else tuple(-x for x in v)

    def __call__(self, *args) -> Vec:
        if len(args) != arity(self.degree):
            raise ShapeMismatch(f"degree {self.degree} cochain takes {arity(self.degree)} arguments")
        acc = [ZERO] * self.target_dim
        for combo in itertools.product(*(list(nonzero(a)) for a in args)):
            v = self.basis_value([i for i, _ in combo])
            if is_zero(v):
                continue
            c = Fraction(1)
            for _, x in combo:
                c *= x
            for t, y in enumerate(v):
                if y:
                    acc[t] += c * y
        return tuple(acc)

    def __add__(self, other: "Cochain") -> "Cochain":
        _same_space(self, other)
        z = zero_vec(self.target_dim)
        keys = set(self.coeffs) | set(other.coeffs)
        return Cochain(
            self.degree,
            self.source_dim,
            self.target_dim,
            {k: tuple(a + b for a, b in zip(self.coeffs.get(k, z), other.coeffs.get(k, z))) for k in keys},
        )

    def scale(self, c) -> "Cochain":
        c = Fraction(c)
        return Cochain(self.degree, self.source_dim, self.target_dim, {k: tuple(c * x for x in v) for k, v in self.coeffs.items()})

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + other.scale(-1)


def _same_space(a: Cochain, b: Cochain) -> None:
    if (a.degree, a.source_dim, a.target_dim) != (b.degree, b.source_dim, b.target_dim):
        raise ShapeMismatch("cochains live in different spaces")


@dataclass(frozen=True)
class Bivector:
    """An element of g wedge g, stored on pairs i < j."""

    dim: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, c in dict(self.coeffs).items():
            k = tuple(int(i) for i in k)
            if len(k) != 2 or not 0 <= k[0] < k[1] < self.dim:
                raise ShapeMismatch(f"bivector key {k} is not an increasing pair")
            c = Fraction(c)
            if c:
                clean[k] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def wedge(cls, dim: int, i: int, j: int, c=1) -> "Bivector":
        s, key = sort_sign((i, j))
        return cls(dim, {key: s * Fraction(c)} if s else {})

    @classmethod
    def from_vector(cls, dim: int, v: Sequence) -> "Bivector":
        return cls(dim, dict(zip(itertools.combinations(range(dim), 2), v)))

    def to_vector(self) -> Vec:
        return tuple(self.coeffs.get(k, ZERO) for k in itertools.combinations(range(self.dim), 2))

    def terms(self):
        """Pairs (x, y, c) of basis vectors with coefficient c."""
        for (i, j), c in sorted(self.coeffs.items()):
            yield unit_vec(self.dim, i), unit_vec(self.dim, j), c

    def __add__(self, other: "Bivector") -> "Bivector":
        keys = set(self.coeffs) | set(other.coeffs)
        return Bivector(self.dim, {k: self.coeffs.get(k, ZERO) + other.coeffs.get(k, ZERO) for k in keys})

    def scale(self, c) -> "Bivector":
        return Bivector(self.dim, {k: Fraction(c) * v for k, v in self.coeffs.items()})


# -- the Chevalley-Eilenberg differential -------------------------------------


def _differential_value(
    n: int,
    args: Sequence[Vec],
    f: Callable[..., Vec],
    act: Callable[[Vec, Vec, Vec], Vec],
    bracket: Callable[[Vec, Vec, Vec], Vec],
    out_dim: int,
) -> Vec:
    """(df)(x_1, ..., x_{2n+1}) for an n-cochain f given as a callable."""
    x = list(args)  # 0-based: x[i] is x_{i+1}
    terms = []
    sgn = 1 if (n + 1) % 2 == 0 else -1
    # (-1)^{n+1} rho(x_{2n+1}, x_{2n-1}) f(x_1..x_{2n-2}, x_{2n})
    terms.append((sgn, act(x[2 * n], x[2 * n - 2], f(*(x[: 2 * n - 2] + [x[2 * n - 1]])))))
    # (-1)^{n+1} rho(x_{2n}, x_{2n+1}) f(x_1..x_{2n-1})
    terms.append((sgn, act(x[2 * n - 1], x[2 * n], f(*x[: 2 * n - 1]))))
    for k in range(1, n + 1):
        a, b = 2 * k - 2, 2 * k - 1
        rest = x[:a] + x[b + 1 :]
        s = 1 if (k + 1) % 2 == 0 else -1
        terms.append((s, act(x[a], x[b], f(*rest))))
        sk = -s
        for j in range(2 * k, 2 * n + 1):
            br = bracket(x[a], x[b], x[j])
            if is_zero(br):
                continue
            slot = list(x)
            slot[j] = br
            terms.append((sk, f(*(slot[:a] + slot[b + 1 :]))))
    acc = [ZERO] * out_dim
    for s, v in terms:
        for t, y in enumerate(v):
            if y:
                acc[t] += s * y
    return tuple(acc)


def ce_diff(g: ThreeLieAlgebra, rho: Representation3, f: Cochain) -> Cochain:
    """The Chevalley-Eilenberg differential of ``f`` with coefficients in ``rho``."""
    if f.source_dim != g.dim or f.target_dim != rho.space_dim or rho.algebra_dim != g.dim:
        raise ShapeMismatch("cochain does not match the algebra and representation")
    n = f.degree
    e = [unit_vec(g.dim, i) for i in range(g.dim)]
    coeffs = {}
    for key in canonical_keys(n + 1, g.dim):
        coeffs[key] = _differential_value(n, [e[i] for i in key], f, rho.act, g.bracket, rho.space_dim)
    return Cochain(n + 1, g.dim, rho.space_dim, coeffs)


def ce_matrix(g: ThreeLieAlgebra, rho: Representation3, n: int, cap: int = DEFAULT_CAP) -> Mat:
    """Matrix of the differential from degree n to n + 1 in canonical coordinates."""
    m = rho.space_dim
    cols = key_count(n, g.dim) * m
    rows = key_count(n + 1, g.dim) * m
    _guard(rows, cols, cap)
    images = [ce_diff(g, rho, Cochain.from_vector(n, g.dim, m, unit_vec(cols, c))).to_vector() for c in range(cols)]
    return Mat.from_columns(images, rows)


# -- the twisted complex ------------------------------------------------------


def rho_theta(op: TwistedOperator, u, v, x) -> Vec:
    """[Tu, Tv, x] - T(rho(Tv, x)u + rho(x, Tu)v + Theta(x, Tu, Tv))."""
    tu, tv = op.T.apply(u), op.T.apply(v)
    inner = _sum_all([op.rho.act(tv, x, u), op.rho.act(x, tu, v), op.theta(x, tu, tv)], op.v_dim)
    return vsub(op.g.bracket(tu, tv, x), op.T.apply(inner))


def rho_theta_rep(op: TwistedOperator) -> Representation3:
    """rho_Theta as a representation of (V, [.]_T) on g."""
    return rep3_from_map(op.v_dim, op.g_dim, lambda u, v, x: rho_theta(op, u, v, x))


def _check_op_cochain(op: TwistedOperator, f: Cochain) -> None:
    if f.source_dim != op.v_dim or f.target_dim != op.g_dim:
        raise ShapeMismatch("cochain must map V-arguments to g")


def twisted_diff_generic(op: TwistedOperator, f: Cochain) -> Cochain:
    """Differential of (V, [.]_T) with coefficients in (g, rho_Theta)."""
    _check_op_cochain(op, f)
    return ce_diff(induced_bracket(op, validate=False), rho_theta_rep(op), f)


def twisted_diff_expanded(op: TwistedOperator, f: Cochain) -> Cochain:
    """The same differential written out in terms of T, rho and Theta only."""
    _check_op_cochain(op, f)
    n = f.degree
    T, rho, theta, g = op.T, op.rho, op.theta, op.g
    vd, gd = op.v_dim, op.g_dim

    def block(a, b, val):
        # [Ta, Tb, val] - T rho(Tb, val) a - T rho(val, Ta) b - T Theta(val, Ta, Tb)
        ta, tb = T.apply(a), T.apply(b)
        inner = _sum_all([rho.act(tb, val, a), rho.act(val, ta, b), theta(val, ta, tb)], vd)
        return vsub(g.bracket(ta, tb, val), T.apply(inner))

    def graph_bracket(a, b, c):
        ta, tb, tc = T.apply(a), T.apply(b), T.apply(c)
        return _sum_all([rho.act(ta, tb, c), rho.act(tb, tc, a), rho.act(tc, ta, b), theta(ta, tb, tc)], vd)

    e = [unit_vec(vd, i) for i in range(vd)]
    coeffs = {}
    for key in canonical_keys(n + 1, vd):
        u = [e[i] for i in key]
        acc = [ZERO] * gd
        sgn = 1 if (n + 1) % 2 == 0 else -1
        f1 = f(*(u[: 2 * n - 2] + [u[2 * n - 1]]))
        f2 = f(*u[: 2 * n - 1])
        terms = [(sgn, block(u[2 * n], u[2 * n - 2], f1)), (sgn, block(u[2 * n - 1], u[2 * n], f2))]
        for k in range(1, n + 1):
            a, b = 2 * k - 2, 2 * k - 1
            s = 1 if (k + 1) % 2 == 0 else -1
            terms.append((s, block(u[a], u[b], f(*(u[:a] + u[b + 1 :])))))
            for j in range(2 * k, 2 * n + 1):
                slot = list(u)
                slot[j] = graph_bracket(u[a], u[b], u[j])
                terms.append((-s, f(*(slot[:a] + slot[b + 1 :]))))
        for s, v in terms:
            for t, y in enumerate(v):
                if y:
                    acc[t] += s * y
        coeffs[key] = tuple(acc)
    return Cochain(n + 1, vd, gd, coeffs)


def twisted_diff(op: TwistedOperator, f: Cochain, check: bool = True) -> Cochain:
    """The twisted differential; the generic route is authoritative.

    With ``check`` the expanded route is also evaluated and any difference is
    raised as FormulaDisagreement naming the first differing key.
    """
    a = twisted_diff_generic(op, f)
    if check:
        b = twisted_diff_expanded(op, f)
        if a != b:
            z = zero_vec(op.g_dim)
            for key in canonical_keys(f.degree + 1, op.v_dim):
                va, vb = a.coeffs.get(key, z), b.coeffs.get(key, z)
                if va != vb:
                    raise FormulaDisagreement(f"routes differ at {key}", key, va, vb)
    return a


def delta_op(op: TwistedOperator, X: Bivector) -> Cochain:
    """delta(X)v = T(rho(X)v + Theta(X, Tv)) - [X, Tv], as a 1-cochain V -> g."""
    if X.dim != op.g_dim:
        raise ShapeMismatch("bivector lives on a different algebra")
    return Cochain.from_linear_map(delta_matrix(op, X))


def delta_matrix(op: TwistedOperator, X: Bivector) -> Mat:
    cols = []
    for a in range(op.v_dim):
        v = unit_vec(op.v_dim, a)
        tv = op.T.apply(v)
        acc = zero_vec(op.g_dim)
        for x, y, c in X.terms():
            inner = _sum_all([op.rho.act(x, y, v), op.theta(x, y, tv)], op.v_dim)
            val = vsub(op.T.apply(inner), op.g.bracket(x, y, tv))
            acc = tuple(p + c * q for p, q in zip(acc, val))
        cols.append(acc)
    return Mat.from_columns(cols, op.g_dim)


def bracket_action(op: TwistedOperator, X: Bivector) -> Mat:
    """Matrix of z -> [X, z] on g."""
    total = Mat.zeros(op.g_dim, op.g_dim)
    for x, y, c in X.terms():
        total = total + op.g.ad(x, y).scale(c)
    return total


def rep_action(op: TwistedOperator, X: Bivector) -> Mat:
    """Matrix of u -> rho(X)u + Theta(X, Tu) on V."""
    cols = []
    for a in range(op.v_dim):
        u = unit_vec(op.v_dim, a)
        tu = op.T.apply(u)
        acc = zero_vec(op.v_dim)
        for x, y, c in X.terms():
            val = _sum_all([op.rho.act(x, y, u), op.theta(x, y, tu)], op.v_dim)
            acc = tuple(p + c * q for p, q in zip(acc, val))
        cols.append(acc)
    return Mat.from_columns(cols, op.v_dim)


def twisted_matrix(op: TwistedOperator, n: int, cap: int = DEFAULT_CAP) -> Mat:
    """Matrix of D_Theta from degree n to n + 1 (n = 0 is delta)."""
    gd, vd = op.g_dim, op.v_dim
    rows = key_count(n + 1, vd) * gd
    if n == 0:
        cols = key_count(0, gd)
        _guard(rows, cols, cap)
        images = [
            delta_op(op, Bivector.from_vector(gd, unit_vec(cols, c))).to_vector() for c in range(cols)
        ]
        return Mat.from_columns(images, rows)
    cols = key_count(n, vd) * gd
    _guard(rows, cols, cap)
    alg = induced_bracket(op, validate=False)
    rep = rho_theta_rep(op)
    images = [ce_diff(alg, rep, Cochain.from_vector(n, vd, gd, unit_vec(cols, c))).to_vector() for c in range(cols)]
    return Mat.from_columns(images, rows)


@dataclass
class CohomologyResult:
    degree: int
    dim_z: int
    dim_b: int
    dim_h: int
    representatives: list

    def to_json(self) -> dict:
        from .exactla import format_rational

        def rep_json(r):
            if isinstance(r, Bivector):
                return {"args": "pairs", "coeffs": [[list(k), format_rational(c)] for k, c in sorted(r.coeffs.items())]}
            return [{"args": list(k), "value": [format_rational(x) for x in v]} for k, v in sorted(r.coeffs.items())]

        return {
            "degree": self.degree,
            "dim_Z": self.dim_z,
            "dim_B": self.dim_b,
            "dim_H": self.dim_h,
            "representatives": [rep_json(r) for r in self.representatives],
        }


def cohomology_dims(op: TwistedOperator, n: int, cap: int = DEFAULT_CAP) -> CohomologyResult:
    """Dimensions of cocycles, coboundaries and cohomology at degree n, plus
    representatives of a complement of B in Z (reduced against B)."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    gd, vd = op.g_dim, op.v_dim
    length = key_count(n, vd if n else gd) * (gd if n else 1)
    _guard(length, length, cap)
    z_basis = kernel_basis(twisted_matrix(op, n, cap))
    if n == 0:
        b_vectors: list = []
    else:
        prev = twisted_matrix(op, n - 1, cap)
        b_vectors = list(prev.columns())
    dim_b = rank(Mat.from_columns(b_vectors, length)) if b_vectors else 0
    reps = complement_basis(b_vectors, z_basis, length)
    dim_z = len(z_basis)
    if len(reps) != dim_z - dim_b:
        from .errors import ContainmentViolation

        raise ContainmentViolation("coboundaries are not all cocycles")
    if n == 0:
        objs = [Bivector.from_vector(gd, r) for r in reps]
    else:
        objs = [Cochain.from_vector(n, vd, gd, r) for r in reps]
    return CohomologyResult(n, dim_z, dim_b, dim_z - dim_b, objs)


def ce_cocycle_basis(g: ThreeLieAlgebra, rho: Representation3, n: int) -> list[Cochain]:
    """Basis of plain n-cocycles (kernel of the differential at degree n)."""
    m = ce_matrix(g, rho, n)
    return [Cochain.from_vector(n, g.dim, rho.space_dim, v) for v in kernel_basis(m)]


def _guard(rows: int, cols: int, cap: int) -> None:
    if rows > cap or cols > cap:
        raise TooLarge(f"cochain space of size {max(rows, cols)} exceeds the cap {cap}")
