"""Ternary structures induced from binary ones by a trace map.

A trace map is a linear form tau killing brackets.  From a Lie algebra it
produces the 3-Lie bracket tau(x)[y,z] + tau(y)[z,x] + tau(z)[x,y], and
likewise for representations, 2-cocycles, twisted operators and NS-Lie
algebras.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotTrace, ShapeMismatch, ValidationFailure
from .exactla import Mat, Vec, dot, unit_vec, vec, vscale, vsub, zero_vec
from .nslie import NSLieAlgebra, ThreeNSLieAlgebra, check_3ns, check_ns_binary, from_twisted_ns, three_ns_from_maps
from .report import Report, merge, run_checks
from .structures import (
    LieAlgebra,
    Representation3,
    RepresentationLie,
    ThreeLieAlgebra,
    TwoCocycle3,
    TwoCocycleLie,
    _sum_all,
    adjoint_rep_lie,
    check_cocycle_lie,
    check_rep_lie,
    cocycle3_from_map,
    rep3_from_map,
    three_lie_from_map,
    zero_cocycle_lie,
)
from .twistop import TwistedOperator


@dataclass(frozen=True)
class TraceMap:
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", vec(self.coeffs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, x) -> Fraction:
        return dot(self.coeffs, x)

    def scale(self, c) -> "TraceMap":
        return TraceMap(vscale(c, self.coeffs))

    def compose(self, T: Mat) -> "TraceMap":
        """tau o T, a linear form on the source of T."""
        if T.rows != self.dim:
            raise ShapeMismatch("trace map and linear map do not compose")
        return TraceMap(tuple(self(T.column(a)) for a in range(T.cols)))


def check_trace(g, tau: TraceMap, limit: int = 1) -> Report:
    """tau kills [x, y] (Lie algebra) or [x, y]_* (NS-Lie algebra) on basis pairs."""
    if tau.dim != g.dim:
        raise ShapeMismatch("trace map has the wrong length")
    e = [unit_vec(g.dim, i) for i in range(g.dim)]
    if isinstance(g, NSLieAlgebra):
        pairs = itertools.product(range(g.dim), repeat=2)
        value = lambda i, j: g.star(e[i], e[j])
    elif isinstance(g, LieAlgebra):
        pairs = itertools.combinations(range(g.dim), 2)
        value = lambda i, j: g.basis(i, j)
    else:
        raise TypeError("trace maps are checked on Lie or NS-Lie algebras")

    def cases():
        for i, j in pairs:
            yield "trace", (i, j), (tau(value(i, j)),)

    return run_checks("trace map", cases(), limit)


def _require_trace(g, tau: TraceMap) -> None:
    r = check_trace(g, tau)
    if not r.passed:
        raise NotTrace(f"not a trace map: {r.summary()}", r)


def induce_3lie(g: LieAlgebra, tau: TraceMap, validate: bool = True) -> ThreeLieAlgebra:
    if validate:
        _require_trace(g, tau)

    def br(x, y, z):
        return _sum_all([vscale(tau(x), g.bracket(y, z)), vscale(tau(y), g.bracket(z, x)), vscale(tau(z), g.bracket(x, y))], g.dim)

    return three_lie_from_map(g.dim, br)


def induce_rep(g: LieAlgebra, rho: RepresentationLie, tau: TraceMap, validate: bool = True) -> Representation3:
    """rho_tau(x, y) = tau(x) rho(y) - tau(y) rho(x)."""
    if validate:
        _require_trace(g, tau)
    return rep3_from_map(
        g.dim, rho.space_dim, lambda x, y, v: vsub(vscale(tau(x), rho.act(y, v)), vscale(tau(y), rho.act(x, v)))
    )


def induce_cocycle(g: LieAlgebra, theta: TwoCocycleLie, tau: TraceMap, validate: bool = True) -> TwoCocycle3:
    """Theta_tau(x, y, z) = tau(x) Theta(y, z) + tau(y) Theta(z, x) + tau(z) Theta(x, y)."""
    if validate:
        _require_trace(g, tau)
    m = theta.space_dim
    return cocycle3_from_map(
        g.dim,
        m,
        lambda x, y, z: _sum_all([vscale(tau(x), theta(y, z)), vscale(tau(y), theta(z, x)), vscale(tau(z), theta(x, y))], m),
    )


@dataclass(frozen=True)
class BinaryTwistedOperator:
    g: LieAlgebra
    rho: RepresentationLie
    theta: TwoCocycleLie
    T: Mat

    def __post_init__(self):
        if self.rho.algebra_dim != self.g.dim:
            raise ShapeMismatch("representation is not over the given algebra")
        if (self.theta.algebra_dim, self.theta.space_dim) != (self.g.dim, self.rho.space_dim):
            raise ShapeMismatch("cocycle does not match algebra and representation")
        if self.T.shape != (self.g.dim, self.rho.space_dim):
            raise ShapeMismatch("T must map V to g")

    @property
    def v_dim(self) -> int:
        return self.rho.space_dim


def check_twisted_lie(bop: BinaryTwistedOperator, limit: int = 1) -> Report:
    """[Tu, Tv] = T(rho(Tu)v - rho(Tv)u + Theta(Tu, Tv)) on basis pairs u < v."""
    T = bop.T
    e = [unit_vec(bop.v_dim, i) for i in range(bop.v_dim)]
    cols = T.columns()

    def cases():
        for a, b in itertools.combinations(range(bop.v_dim), 2):
            tu, tv = cols[a], cols[b]
            inner = _sum_all([bop.rho.act(tu, e[b]), vscale(-1, bop.rho.act(tv, e[a])), bop.theta(tu, tv)], bop.v_dim)
            yield "twisted_lie", (a, b), vsub(bop.g.bracket(tu, tv), T.apply(inner))

    return run_checks("binary twisted operator identity", cases(), limit)


def validate_binary_context(bop: BinaryTwistedOperator) -> Report:
    from .structures import check_jacobi

    return merge(
        "binary context",
        [check_jacobi(bop.g), check_rep_lie(bop.g, bop.rho), check_cocycle_lie(bop.g, bop.rho, bop.theta)],
    )


def induced_twisted(bop: BinaryTwistedOperator, tau: TraceMap, validate: bool = True) -> TwistedOperator:
    """The same map T in the induced ternary context."""
    if validate:
        _require_trace(bop.g, tau)
        r = check_twisted_lie(bop)
        if not r.passed:
            raise ValidationFailure(f"not a binary twisted operator: {r.summary()}", r)
    return TwistedOperator(
        induce_3lie(bop.g, tau, False),
        induce_rep(bop.g, bop.rho, tau, False),
        induce_cocycle(bop.g, bop.theta, tau, False),
        bop.T,
    )


def binary_twisted_ns(bop: BinaryTwistedOperator) -> NSLieAlgebra:
    """{u, v} = rho(Tu)v and [[u, v]] = Theta(Tu, Tv) on V."""
    n = bop.v_dim
    e = [unit_vec(n, i) for i in range(n)]
    cols = bop.T.columns()
    curly = {(a, b): bop.rho.act(cols[a], e[b]) for a in range(n) for b in range(n)}
    double = {(a, b): bop.theta(cols[a], cols[b]) for a, b in itertools.combinations(range(n), 2)}
    return NSLieAlgebra(n, curly, double)


def induce_3ns(a: NSLieAlgebra, tau: TraceMap, validate: bool = True) -> ThreeNSLieAlgebra:
    """{x,y,z}_tau = tau(x){y,z} - tau(y){x,z}; [[x,y,z]]_tau = cyclic sum of tau(x)[[y,z]]."""
    if validate:
        r = check_ns_binary(a)
        if not r.passed:
            raise ValidationFailure(f"not an NS-Lie algebra: {r.summary()}", r)
        _require_trace(a, tau)
    n = a.dim
    return three_ns_from_maps(
        n,
        lambda x, y, z: vsub(vscale(tau(x), a.curly_of(y, z)), vscale(tau(y), a.curly_of(x, z))),
        lambda x, y, z: _sum_all(
            [vscale(tau(x), a.double_of(y, z)), vscale(tau(y), a.double_of(z, x)), vscale(tau(z), a.double_of(x, y))], n
        ),
    )


def _table_difference(first: ThreeNSLieAlgebra, second: ThreeNSLieAlgebra):
    n = first.dim
    z = zero_vec(n)
    for i, j in itertools.combinations(range(n), 2):
        for k in range(n):
            yield "curly", (i, j, k), vsub(second.curly.get((i, j, k), z), first.curly.get((i, j, k), z))
    for key in itertools.combinations(range(n), 3):
        yield "double", key, vsub(second.bracket.get(key, z), first.bracket.get(key, z))


def predicted_discrepancy(bop: BinaryTwistedOperator, tau: TraceMap, tau_prime: TraceMap):
    """Expected (route 2 - route 1) for each stored key, for arbitrary tau'."""
    n = bop.v_dim
    e = [unit_vec(n, i) for i in range(n)]
    cols = bop.T.columns()
    tt = tau.compose(bop.T)
    diff = [tau_prime(e[a]) - tt(e[a]) for a in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        for k in range(n):
            val = vsub(vscale(diff[i], bop.rho.act(cols[j], e[k])), vscale(diff[j], bop.rho.act(cols[i], e[k])))
            yield "curly", (i, j, k), val
    for i, j, k in itertools.combinations(range(n), 3):
        val = _sum_all(
            [
                vscale(diff[i], bop.theta(cols[j], cols[k])),
                vscale(diff[j], bop.theta(cols[k], cols[i])),
                vscale(diff[k], bop.theta(cols[i], cols[j])),
            ],
            n,
        )
        yield "double", (i, j, k), val


def diagram_check(bop: BinaryTwistedOperator, tau: TraceMap, tau_prime: TraceMap | None = None, limit: int = 1) -> Report:
    """Build the 3-NS-Lie structure on V by both routes and compare tables.

    Route 1 induces the ternary context with tau and reads off the 3-NS-Lie
    algebra of the twisted operator.  Route 2 forms the NS-Lie algebra of the
    binary operator and induces it with tau' (default tau o T).  The report
    lists where the tables differ; ``extra['discrepancy_formula']`` records
    whether the difference matches the predicted closed form.
    """
    if tau_prime is None:
        tau_prime = tau.compose(bop.T)
    route1 = from_twisted_ns(induced_twisted(bop, tau, validate=False))
    route2 = induce_3ns(binary_twisted_ns(bop), tau_prime, validate=False)
    r = run_checks("diagram commutes", _table_difference(route1, route2), limit)
    predicted = dict(((ident, key), val) for ident, key, val in predicted_discrepancy(bop, tau, tau_prime))
    formula = run_checks(
        "discrepancy formula",
        ((ident, key, vsub(val, predicted[(ident, key)])) for ident, key, val in _table_difference(route1, route2)),
    )
    r.extra["discrepancy_formula"] = formula.outcome
    r.extra["route1"] = route1
    r.extra["route2"] = route2
    return r


def adjoint_preset(g: LieAlgebra, T: Mat, theta: TwoCocycleLie | None = None) -> BinaryTwistedOperator:
    """Binary operator on the adjoint representation (V = g)."""
    if theta is None:
        theta = zero_cocycle_lie(g.dim, g.dim)
    return BinaryTwistedOperator(g, adjoint_rep_lie(g), theta, T)


def binary_coboundary(g: LieAlgebra, rho: RepresentationLie, theta1: Mat) -> TwoCocycleLie:
    """(d theta)(x, y) = rho(x)theta(y) - rho(y)theta(x) - theta([x, y])."""
    e = [unit_vec(g.dim, i) for i in range(g.dim)]
    m = rho.space_dim
    vals = {}
    for i, j in itertools.combinations(range(g.dim), 2):
        x, y = e[i], e[j]
        vals[(i, j)] = _sum_all(
            [rho.act(x, theta1.apply(y)), vscale(-1, rho.act(y, theta1.apply(x))), vscale(-1, theta1.apply(g.bracket(x, y)))], m
        )
    return TwoCocycleLie(g.dim, m, vals)


def binary_inverse_cochain_operator(g: LieAlgebra, rho: RepresentationLie, theta0: Mat) -> BinaryTwistedOperator:
    """T = theta0^-1 with Theta = -d theta0 (binary case)."""
    from .exactla import inverse

    d = binary_coboundary(g, rho, theta0)
    neg = TwoCocycleLie(g.dim, rho.space_dim, {k: vscale(-1, v) for k, v in d.values.items()})
    return BinaryTwistedOperator(g, rho, neg, inverse(theta0))
