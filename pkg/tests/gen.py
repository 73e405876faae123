"""Seeded random instances for the property and acceptance suites.

Every generator takes a ``random.Random`` and returns objects that have
been validated by the library checkers, so callers can feed them straight
into constructions.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction as F

from threelie import catalog
from threelie.cohomology import Bivector, Cochain, ce_cocycle_basis, twisted_matrix
from threelie.exactla import Mat, is_invertible, kernel_basis, unit_vec, vscale, vsum, zero_vec
from threelie.induce import (
    BinaryTwistedOperator,
    TraceMap,
    adjoint_preset,
    binary_coboundary,
    binary_inverse_cochain_operator,
    check_trace,
    check_twisted_lie,
)
from threelie.nslie import NSLieAlgebra, check_ns_binary, from_twisted_ns
from threelie.structures import (
    LieAlgebra,
    Representation3,
    RepresentationLie,
    ThreeLieAlgebra,
    TwoCocycle3,
    TwoCocycleLie,
    adjoint_rep3,
    adjoint_rep_lie,
    check_cocycle3,
    check_cocycle_lie,
    check_filippov,
    check_jacobi,
    check_rep3,
    check_rep_lie,
    cocycle3_from_map,
    transport_algebra,
    transport_lie,
    transport_rep3,
    transport_rep_lie,
    zero_cocycle3,
    zero_cocycle_lie,
    zero_rep3,
    zero_rep_lie,
)
from threelie.twistop import (
    TwistedOperator,
    check_admissible,
    check_twisted,
    gauge_transform,
    inverse_cochain_operator,
    nijenhuis_check,
    nijenhuis_package,
    validate_context,
)

VALUES = [F(v) for v in (-2, -1, -1, 0, 0, 0, 0, 1, 1, 2)] + [F(1, 2), F(-3, 2), F(1, 3)]


def rq(rng: random.Random, nonzero: bool = False) -> F:
    while True:
        x = rng.choice(VALUES)
        if x or not nonzero:
            return x


def rvec(rng, n: int) -> tuple:
    return tuple(rq(rng) for _ in range(n))


def rmat(rng, rows: int, cols: int) -> Mat:
    return Mat(rows, cols, [tuple(rq(rng) for _ in range(cols)) for _ in range(rows)])


def rinv(rng, n: int) -> Mat:
    """Random invertible matrix with small entries."""
    while True:
        m = rmat(rng, n, n) + Mat.identity(n)
        if is_invertible(m):
            return m


def combo(rng, vectors, length: int) -> tuple:
    if not vectors:
        return zero_vec(length)
    return vsum([vscale(rq(rng), v) for v in vectors], length)


# -- ternary contexts ---------------------------------------------------------


def cocycle3_basis(g: ThreeLieAlgebra, rho: Representation3) -> list[TwoCocycle3]:
    out = []
    for c in ce_cocycle_basis(g, rho, 2):
        out.append(TwoCocycle3(g.dim, rho.space_dim, dict(c.coeffs)))
    return out


def random_cocycle3(rng, g, rho) -> TwoCocycle3:
    basis = cocycle3_basis(g, rho)
    vals = {}
    for th in basis:
        c = rq(rng)
        for k, v in th.values.items():
            vals[k] = tuple(a + c * b for a, b in zip(vals.get(k, zero_vec(rho.space_dim)), v))
    return TwoCocycle3(g.dim, rho.space_dim, vals)


def a3_rep(rng, m: int) -> Representation3:
    """Representation of A3 with only rho(e1, e3) nonzero."""
    for _ in range(20):
        rho = Representation3(3, m, {(0, 2): rmat(rng, m, m)})
        if check_rep3(catalog.a3(), rho).passed:
            return rho
    return zero_rep3(3, m)


def nilpotent_abelian_rep(rng, d: int, m: int) -> Representation3:
    """Strictly upper-triangular operators with pairwise zero products."""
    ops = {}
    for key in itertools.combinations(range(d), 2):
        rows = [[F(0)] * m for _ in range(m)]
        if m >= 2:
            rows[0][m - 1] = rq(rng)
        ops[key] = Mat.from_rows(rows)
    return Representation3(d, m, ops)


def transport_cocycle3(theta: TwoCocycle3, p: Mat, q: Mat) -> TwoCocycle3:
    from threelie.exactla import inverse

    qinv = inverse(q)
    return cocycle3_from_map(theta.algebra_dim, theta.space_dim, lambda x, y, z: qinv.apply(theta(p.apply(x), p.apply(y), p.apply(z))))


def transport_op(op: TwistedOperator, p: Mat, q: Mat) -> TwistedOperator:
    """The same operator written in new bases of g (via P) and V (via Q)."""
    from threelie.exactla import inverse

    return TwistedOperator(
        transport_algebra(op.g, p),
        transport_rep3(op.rho, p, q),
        transport_cocycle3(op.theta, p, q),
        inverse(p) @ op.T @ q,
    )


def small_context(rng, max_g: int = 3, max_v: int = 2):
    """(g, rho, theta) with dim g <= max_g and dim V <= max_v."""
    kind = rng.randrange(4)
    m = rng.randint(1, max_v)
    if kind == 0 and max_g >= 3:
        g = catalog.a3()
        rho = a3_rep(rng, m)
    elif kind == 1 and max_g >= 3:
        g = catalog.a3()
        rho = zero_rep3(3, m)
    elif kind == 2:
        d = rng.randint(2, max_g)
        g = catalog.abelian3(d)
        rho = nilpotent_abelian_rep(rng, d, m)
    else:
        d = rng.randint(2, max_g)
        g = catalog.abelian3(d)
        rho = zero_rep3(d, m)
    theta = random_cocycle3(rng, g, rho)
    p, q = rinv(rng, g.dim), rinv(rng, rho.space_dim)
    g2, rho2, th2 = transport_algebra(g, p), transport_rep3(rho, p, q), transport_cocycle3(theta, p, q)
    return g2, rho2, th2


def random_nijenhuis(rng):
    """A3 with a random N(d, c, f), dc != 0."""
    d, c, f = rq(rng, True), rq(rng, True), rq(rng)
    return catalog.a3(), catalog.nijenhuis_matrix(d, c, f), (d, c, f)


def random_twisted(rng, small: bool = False) -> TwistedOperator:
    """A validated twisted operator from one of several families, transported."""
    kind = rng.randrange(6)
    if small:
        g, rho, theta = small_context(rng)
        op = TwistedOperator(g, rho, theta, rmat(rng, g.dim, rho.space_dim))
        if not check_twisted(op).passed:
            op = op.with_T(Mat.zeros(g.dim, rho.space_dim))
        return op
    if kind == 0:
        g, N, _ = random_nijenhuis(rng)
        op = nijenhuis_package(g, N).op
    elif kind == 1:
        g = rng.choice([catalog.a3(), catalog.abelian3(3)])
        rho = adjoint_rep3(g) if rng.random() < 0.5 else zero_rep3(3, 3)
        op = inverse_cochain_operator(g, rho, rinv(rng, 3))
    elif kind == 2:
        g, rho, theta = small_context(rng, 3, 2)
        op = TwistedOperator(g, rho, theta, rmat(rng, g.dim, rho.space_dim))
    elif kind == 3:
        g = catalog.a3()
        rho = adjoint_rep3(g)
        op = inverse_cochain_operator(g, rho, rinv(rng, 3))
        op = _maybe_gauge(rng, op)
    elif kind == 4:
        # induced from a binary operator through a trace map
        from threelie.induce import induced_twisted

        bop = random_binary(rng)
        tau = random_trace(rng, bop.g)
        op = induced_twisted(bop, tau)
    else:
        g, N, _ = random_nijenhuis(rng)
        op = _maybe_gauge(rng, nijenhuis_package(g, N).op)
    p, q = rinv(rng, op.g_dim), rinv(rng, op.v_dim)
    return transport_op(op, p, q)


def _maybe_gauge(rng, op: TwistedOperator) -> TwistedOperator:
    th = admissible_cocycle(rng, op)
    return gauge_transform(op, th) if th is not None else op


def one_cocycles(g: ThreeLieAlgebra, rho: Representation3) -> list[Mat]:
    return [c.to_matrix() for c in ce_cocycle_basis(g, rho, 1)]


def admissible_cocycle(rng, op: TwistedOperator):
    basis = one_cocycles(op.g, op.rho)
    for _ in range(10):
        th = Mat.zeros(op.v_dim, op.g_dim)
        for b in basis:
            th = th + b.scale(rq(rng))
        if check_admissible(op, th):
            return th
    return None


# -- binary contexts ----------------------------------------------------------

LIE_FIXTURES = [catalog.l3, catalog.aff2, catalog.heisenberg, catalog.sl2, lambda: catalog.abelian_lie(2), lambda: catalog.abelian_lie(3)]


def lie_cocycle_basis(g: LieAlgebra, rho: RepresentationLie) -> list[TwoCocycleLie]:
    """Kernel of the 2-cocycle condition, solved directly on the coefficients."""
    d, m = g.dim, rho.space_dim
    pairs = list(itertools.combinations(range(d), 2))
    cols = []
    for p in pairs:
        for t in range(m):
            th = TwoCocycleLie(d, m, {p: unit_vec(m, t)})
            cols.append(_lie_cocycle_residuals(g, rho, th))
    if not pairs:
        return []
    length = len(cols[0])
    if length == 0:
        return [TwoCocycleLie(d, m, {p: unit_vec(m, t)}) for p in pairs for t in range(m)]
    kern = kernel_basis(Mat.from_columns(cols, length))
    out = []
    for v in kern:
        vals = {p: tuple(v[i * m : (i + 1) * m]) for i, p in enumerate(pairs)}
        out.append(TwoCocycleLie(d, m, vals))
    return out


def _lie_cocycle_residuals(g, rho, th) -> tuple:
    e = [unit_vec(g.dim, i) for i in range(g.dim)]
    out = []
    for i, j, k in itertools.combinations(range(g.dim), 3):
        x, y, z = e[i], e[j], e[k]
        terms = [
            rho.act(x, th(y, z)),
            vscale(-1, rho.act(y, th(x, z))),
            rho.act(z, th(x, y)),
            vscale(-1, th(g.bracket(x, y), z)),
            th(g.bracket(x, z), y),
            vscale(-1, th(g.bracket(y, z), x)),
        ]
        out.extend(vsum(terms, rho.space_dim))
    return tuple(out)


def random_lie(rng):
    g = rng.choice(LIE_FIXTURES)()
    return transport_lie(g, rinv(rng, g.dim))


def random_rep_lie(rng, g: LieAlgebra, same_dim: bool = False) -> RepresentationLie:
    if same_dim or rng.random() < 0.6:
        rho = adjoint_rep_lie(g) if rng.random() < 0.7 else zero_rep_lie(g.dim, g.dim)
    else:
        rho = zero_rep_lie(g.dim, rng.randint(1, 2))
    return transport_rep_lie(rho, Mat.identity(g.dim), rinv(rng, rho.space_dim))


def random_cocycle_lie(rng, g, rho) -> TwoCocycleLie:
    basis = lie_cocycle_basis(g, rho)
    vals = {}
    for th in basis:
        c = rq(rng)
        for k, v in th.values.items():
            vals[k] = tuple(a + c * b for a, b in zip(vals.get(k, zero_vec(rho.space_dim)), v))
    return TwoCocycleLie(g.dim, rho.space_dim, vals)


def trace_basis(g) -> list[tuple]:
    """Linear forms vanishing on all brackets (of a Lie algebra or the star
    bracket of an NS-Lie algebra)."""
    n = g.dim
    e = [unit_vec(n, i) for i in range(n)]
    br = g.star if isinstance(g, NSLieAlgebra) else g.bracket
    rows = [br(e[i], e[j]) for i, j in itertools.combinations(range(n), 2)]
    rows = [r for r in rows if any(r)]
    if not rows:
        return [unit_vec(n, i) for i in range(n)]
    return kernel_basis(Mat.from_rows(rows))


def random_trace(rng, g) -> TraceMap:
    return TraceMap(combo(rng, trace_basis(g), g.dim))


def random_binary(rng) -> BinaryTwistedOperator:
    """A validated binary twisted operator."""
    kind = rng.randrange(4)
    if kind == 0:
        g = random_lie(rng)
        rho = random_rep_lie(rng, g, same_dim=True)
        bop = binary_inverse_cochain_operator(g, rho, rinv(rng, g.dim))
    elif kind == 1:
        g = random_lie(rng)
        rho = random_rep_lie(rng, g)
        theta = random_cocycle_lie(rng, g, rho)
        bop = BinaryTwistedOperator(g, rho, theta, Mat.zeros(g.dim, rho.space_dim))
    elif kind == 2:
        # Rota-Baxter type operators on L3 found by hand: T = c E33 and friends
        g = catalog.l3()
        c = rq(rng)
        bop = adjoint_preset(g, Mat.from_rows([[0, 0, 0], [0, 0, 0], [0, 0, c]]))
    else:
        g = random_lie(rng)
        # on a one-dimensional module every T satisfies the identity
        rho = zero_rep_lie(g.dim, 1)
        bop = BinaryTwistedOperator(g, rho, zero_cocycle_lie(g.dim, 1), rmat(rng, g.dim, 1))
    assert check_twisted_lie(bop).passed
    return bop


def l3_binary_fixture() -> BinaryTwistedOperator:
    """Nonzero binary twisted operator on L3 (adjoint module, Theta = 0):
    T = E33, the projection onto the centre."""
    return adjoint_preset(catalog.l3(), Mat.from_rows([[0, 0, 0], [0, 0, 0], [0, 0, 1]]))


# -- fixture operators for cohomology -----------------------------------------


def cohomology_fixtures() -> list[tuple[str, TwistedOperator]]:
    """Named operators with dim g <= 3, dim V <= 3."""
    rng = random.Random(1729)
    out = []
    out.append(("nijenhuis_A3_2_3_5", nijenhuis_package(catalog.a3(), catalog.nijenhuis_matrix(2, 3, 5)).op))
    out.append(("A3_ad_zero", TwistedOperator(catalog.a3(), adjoint_rep3(catalog.a3()), zero_cocycle3(3, 3), Mat.zeros(3, 3))))
    out.append(("A3_ad_inverse", inverse_cochain_operator(catalog.a3(), adjoint_rep3(catalog.a3()), Mat.from_rows([[1, 1, 0], [0, 1, 0], [0, 2, 1]]))))
    g, rho, theta = catalog.a3(), a3_rep(random.Random(3), 2), None
    theta = random_cocycle3(rng, g, rho)
    out.append(("A3_rep2_random", TwistedOperator(g, rho, theta, rmat(rng, 3, 2))))
    out.append(("abelian_zero", TwistedOperator(catalog.abelian3(2), zero_rep3(2, 3), zero_cocycle3(2, 3), Mat.zeros(2, 3))))
    out.append(("nijenhuis_A3_1_-1_2_transported", transport_op(nijenhuis_package(catalog.a3(), catalog.nijenhuis_matrix(1, -1, 2)).op, rinv(rng, 3), rinv(rng, 3))))
    for name, op in out:
        assert validate_context(op).passed and check_twisted(op).passed, name
    return out


# -- equivalent infinitesimal deformations ------------------------------------


def _x_conditions_hold(op: TwistedOperator, X: Bivector) -> bool:
    """The parts of the equivalence conditions that involve X alone."""
    from threelie.deform import written_equivalence_conditions

    zero = Mat.zeros(op.g_dim, op.v_dim)
    r = written_equivalence_conditions(op, zero, zero, X, limit=10**6)
    return not [d for d in r.details if not d.identity.startswith("T_")]


def equivalent_pair(op: TwistedOperator, X: Bivector, rng=None):
    """(T1, T1') with T1 a 1-cocycle, T1' = T1 - delta(X) and X[T1] = T1' X_V,
    or None.  With ``rng`` a random solution is taken."""
    from threelie.cohomology import bracket_action, delta_matrix, rep_action
    from threelie.exactla import solve

    if not _x_conditions_hold(op, X):
        return None
    gd, vd = op.g_dim, op.v_dim
    A, B, D = bracket_action(op, X), rep_action(op, X), delta_matrix(op, X)
    size = gd * vd

    def as_map(v):
        return Mat.from_columns([v[j * gd : (j + 1) * gd] for j in range(vd)], gd)

    units = [as_map(unit_vec(size, k)) for k in range(size)]
    images = [A @ m - m @ B for m in units]
    dm = twisted_matrix(op, 1)
    rows = [list(dm.row(r)) for r in range(dm.rows)]
    rhs = [F(0)] * dm.rows
    target = -(D @ B)
    for i in range(gd):
        for j in range(vd):
            rows.append([m[i, j] for m in images])
            rhs.append(target[i, j])
    system = Mat.from_rows(rows, size)
    sol = solve(system, rhs)
    if sol is None:
        return None
    if rng is not None:
        sol = tuple(a + b for a, b in zip(sol, combo(rng, kernel_basis(system), size)))
    T1 = as_map(sol)
    return T1, T1 - D


def equivalence_instances():
    """(name, op, X) triples admitting equivalent pairs; the second kind has
    delta(X) != 0."""
    fixtures = dict(cohomology_fixtures())
    out = [("A3_ad_zero", fixtures["A3_ad_zero"], Bivector.wedge(3, 0, 2))]
    op = fixtures["nijenhuis_A3_1_-1_2_transported"]
    for v in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (-1, -1, -1)]:
        out.append((f"nijenhuis_transported_{v}", op, Bivector.from_vector(3, v)))
    return out
