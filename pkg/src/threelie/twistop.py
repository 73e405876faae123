"""Twisted O-operators on 3-Lie algebras.

A twisted operator is a linear map ``T: V -> g`` together with its context
``(g, rho, Theta)``.  Matrices act on column vectors: column ``j`` of ``T``
holds the coordinates of ``T e_j``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import NamedTuple

from .errors import NotAdmissible, NotNijenhuis, ShapeMismatch, ValidationFailure
from .exactla import Mat, Vec, inverse, is_invertible, is_zero, unit_vec, vsub
from .report import Report, merge, run_checks
from .structures import (
    Representation3,
    ThreeLieAlgebra,
    TwoCocycle3,
    _sum_all,
    check_algebra_morphism,
    check_cocycle3,
    check_filippov,
    check_rep3,
    coboundary1,
    cocycle3_from_map,
    rep3_from_map,
    three_lie_from_map,
)


@dataclass(frozen=True)
class TwistedOperator:
    g: ThreeLieAlgebra
    rho: Representation3
    theta: TwoCocycle3
    T: Mat

    def __post_init__(self):
        if self.rho.algebra_dim != self.g.dim:
            raise ShapeMismatch("representation is not over the given algebra")
        if (self.theta.algebra_dim, self.theta.space_dim) != (self.g.dim, self.rho.space_dim):
            raise ShapeMismatch("cocycle does not match algebra and representation")
        if self.T.shape != (self.g.dim, self.rho.space_dim):
            raise ShapeMismatch(f"T has shape {self.T.shape}, expected {(self.g.dim, self.rho.space_dim)}")

    @property
    def v_dim(self) -> int:
        return self.rho.space_dim

    @property
    def g_dim(self) -> int:
        return self.g.dim

    def with_T(self, T: Mat) -> "TwistedOperator":
        return replace(self, T=T)

    def twisted_sum(self, u, v, w) -> Vec:
        """rho(Tu, Tv)w + rho(Tv, Tw)u + rho(Tw, Tu)v + Theta(Tu, Tv, Tw), in V."""
        tu, tv, tw = self.T.apply(u), self.T.apply(v), self.T.apply(w)
        parts = [
            self.rho.act(tu, tv, w),
            self.rho.act(tv, tw, u),
            self.rho.act(tw, tu, v),
            self.theta(tu, tv, tw),
        ]
        return _sum_all(parts, self.v_dim)


@dataclass(frozen=True)
class TwistedMorphism:
    phi: Mat
    psi: Mat


def check_twisted(op: TwistedOperator, limit: int = 1) -> Report:
    """The twisted operator identity on basis triples u < v < w of V.

    Both sides are skew in (u, v, w), so increasing triples suffice.
    """
    e = [unit_vec(op.v_dim, i) for i in range(op.v_dim)]
    cols = op.T.columns()

    def cases():
        for i, j, k in itertools.combinations(range(op.v_dim), 3):
            lhs = op.g.bracket(cols[i], cols[j], cols[k])
            rhs = op.T.apply(op.twisted_sum(e[i], e[j], e[k]))
            yield "twisted", (i, j, k), vsub(lhs, rhs)

    return run_checks("twisted operator identity", cases(), limit)


def require_twisted(op: TwistedOperator) -> None:
    r = check_twisted(op)
    if not r.passed:
        raise ValidationFailure(f"not a twisted operator: {r.summary()}", r)


def induced_bracket(op: TwistedOperator, validate: bool = True) -> ThreeLieAlgebra:
    """The 3-Lie bracket [u, v, w]_T on V carried by the graph of T."""
    if validate:
        require_twisted(op)
    return three_lie_from_map(op.v_dim, op.twisted_sum)


def check_bracket_morphism(op: TwistedOperator, limit: int = 1) -> Report:
    """T [u, v, w]_T = [Tu, Tv, Tw] on increasing basis triples."""
    r = check_algebra_morphism(induced_bracket(op, validate=False), op.g, op.T, limit)
    r.subject = "T is a bracket morphism"
    return r


def check_twisted_morphism(m: TwistedMorphism, op: TwistedOperator, op2: TwistedOperator, limit: int = 1) -> Report:
    """phi is a 3-Lie morphism and (phi, psi) intertwines rho, Theta and T."""
    phi, psi = m.phi, m.psi
    if phi.shape != (op2.g_dim, op.g_dim) or psi.shape != (op2.v_dim, op.v_dim):
        raise ShapeMismatch("morphism maps have the wrong shape")
    n, vd = op.g_dim, op.v_dim
    eg = [unit_vec(n, i) for i in range(n)]
    ev = [unit_vec(vd, i) for i in range(vd)]
    pc = phi.columns()

    def rho_cases():
        for i, j in itertools.combinations(range(n), 2):
            for a in range(vd):
                lhs = psi.apply(op.rho.act(eg[i], eg[j], ev[a]))
                rhs = op2.rho.act(pc[i], pc[j], psi.apply(ev[a]))
                yield "psi_rho", (i, j, a), vsub(lhs, rhs)

    def theta_cases():
        for i, j, k in itertools.combinations(range(n), 3):
            yield "psi_theta", (i, j, k), vsub(psi.apply(op.theta.basis(i, j, k)), op2.theta(pc[i], pc[j], pc[k]))

    def t_cases():
        for a in range(vd):
            yield "phi_T", (a,), vsub(phi.apply(op.T.apply(ev[a])), op2.T.apply(psi.apply(ev[a])))

    parts = [
        check_algebra_morphism(op.g, op2.g, phi, limit),
        run_checks("psi rho", rho_cases(), limit),
        run_checks("psi theta", theta_cases(), limit),
        run_checks("phi T", t_cases(), limit),
    ]
    return merge("twisted operator morphism", parts)


def coboundary_shift(op: TwistedOperator, theta1: Mat, check: bool = False) -> TwistedOperator:
    """T (Id - theta1 T)^-1 in the context (g, rho, Theta + d theta1).

    Raises NotInvertible when Id - theta1 T is singular.
    """
    if theta1.shape != (op.v_dim, op.g_dim):
        raise ShapeMismatch("theta1 must map g to V")
    m = Mat.identity(op.v_dim) - theta1 @ op.T
    new = TwistedOperator(op.g, op.rho, op.theta + coboundary1(op.g, op.rho, theta1), op.T @ inverse(m))
    if check:
        require_twisted(new)
    return new


def is_one_cocycle(g: ThreeLieAlgebra, rho: Representation3, theta1: Mat) -> bool:
    return not coboundary1(g, rho, theta1).values


def check_admissible(op: TwistedOperator, theta1: Mat) -> bool:
    """Whether the 1-cocycle theta1 makes Id + theta1 T invertible.

    Raises ValidationFailure when theta1 is not a 1-cocycle.
    """
    if theta1.shape != (op.v_dim, op.g_dim):
        raise ShapeMismatch("theta1 must map g to V")
    if not is_one_cocycle(op.g, op.rho, theta1):
        raise ValidationFailure("theta1 is not a 1-cocycle")
    return is_invertible(Mat.identity(op.v_dim) + theta1 @ op.T)


def gauge_transform(op: TwistedOperator, theta1: Mat, check: bool = True) -> TwistedOperator:
    """T (Id + theta1 T)^-1 in the same context.

    With ``check`` the result is verified to be twisted and Id + theta1 T is
    verified to carry [.]_T onto the transformed bracket.
    """
    try:
        ok = check_admissible(op, theta1)
    except ValidationFailure as exc:
        raise NotAdmissible(str(exc)) from exc
    if not ok:
        raise NotAdmissible("Id + theta1 T is not invertible")
    new = op.with_T(op.T @ inverse(Mat.identity(op.v_dim) + theta1 @ op.T))
    if check:
        require_twisted(new)
        r = check_gauge_isomorphism(op, theta1, new)
        if not r.passed:
            raise ValidationFailure(f"gauge isomorphism failed: {r.summary()}", r)
    return new


def check_gauge_isomorphism(op: TwistedOperator, theta1: Mat, new: TwistedOperator | None = None, limit: int = 1) -> Report:
    """Id + theta1 T is a 3-Lie morphism from [.]_T to [.]_{T_theta}."""
    if new is None:
        new = op.with_T(op.T @ inverse(Mat.identity(op.v_dim) + theta1 @ op.T))
    src = induced_bracket(op, validate=False)
    dst = induced_bracket(new, validate=False)
    r = check_algebra_morphism(src, dst, Mat.identity(op.v_dim) + theta1 @ op.T, limit)
    r.subject = "gauge isomorphism"
    return r


def inverse_cochain_operator(g: ThreeLieAlgebra, rho: Representation3, theta0: Mat) -> TwistedOperator:
    """T = theta0^-1 with Theta = -d theta0, for an invertible 1-cochain theta0."""
    T = inverse(theta0)
    return TwistedOperator(g, rho, -coboundary1(g, rho, theta0), T)


# -- Nijenhuis operators ------------------------------------------------------


def _n_mixed(g: ThreeLieAlgebra, N: Mat, x, y, z) -> Vec:
    """[Nx, y, z] + [x, Ny, z] + [x, y, Nz]."""
    return _sum_all(
        [g.bracket(N.apply(x), y, z), g.bracket(x, N.apply(y), z), g.bracket(x, y, N.apply(z))], g.dim
    )


def _n_double(g: ThreeLieAlgebra, N: Mat, x, y, z) -> Vec:
    """[Nx, Ny, z] + [Nx, y, Nz] + [x, Ny, Nz]."""
    nx, ny, nz = N.apply(x), N.apply(y), N.apply(z)
    return _sum_all([g.bracket(nx, ny, z), g.bracket(nx, y, nz), g.bracket(x, ny, nz)], g.dim)


def nijenhuis_theta_value(g: ThreeLieAlgebra, N: Mat, x, y, z) -> Vec:
    """-N([Nx, y, z] + [x, Ny, z] + [x, y, Nz] - N[x, y, z])."""
    inner = vsub(_n_mixed(g, N, x, y, z), N.apply(g.bracket(x, y, z)))
    return tuple(-c for c in N.apply(inner))


def nijenhuis_bracket_value(g: ThreeLieAlgebra, N: Mat, x, y, z) -> Vec:
    inner = vsub(_n_mixed(g, N, x, y, z), N.apply(g.bracket(x, y, z)))
    return vsub(_n_double(g, N, x, y, z), N.apply(inner))


def nijenhuis_check(g: ThreeLieAlgebra, N: Mat, limit: int = 1) -> Report:
    if N.shape != (g.dim, g.dim):
        raise ShapeMismatch("N must be square of the algebra's dimension")
    e = [unit_vec(g.dim, i) for i in range(g.dim)]

    def cases():
        for i, j, k in itertools.combinations(range(g.dim), 3):
            x, y, z = e[i], e[j], e[k]
            lhs = g.bracket(N.apply(x), N.apply(y), N.apply(z))
            inner = vsub(_n_double(g, N, x, y, z), N.apply(_n_mixed(g, N, x, y, z)))
            inner = tuple(a + b for a, b in zip(inner, (N @ N).apply(g.basis(i, j, k))))
            yield "nijenhuis", (i, j, k), vsub(lhs, N.apply(inner))

    return run_checks("Nijenhuis identity", cases(), limit)


class NijenhuisPackage(NamedTuple):
    g_n: ThreeLieAlgebra
    rho: Representation3
    theta: TwoCocycle3
    op: TwistedOperator


def nijenhuis_package(g: ThreeLieAlgebra, N: Mat) -> NijenhuisPackage:
    """Deformed algebra g_N, its representation [Nx, Ny, z] on g, the cocycle
    built from N, and the identity map as a twisted operator."""
    r = nijenhuis_check(g, N)
    if not r.passed:
        raise NotNijenhuis(f"not a Nijenhuis operator: {r.summary()}", r)
    n = g.dim
    g_n = three_lie_from_map(n, lambda x, y, z: nijenhuis_bracket_value(g, N, x, y, z))
    rho = rep3_from_map(n, n, lambda x, y, z: g.bracket(N.apply(x), N.apply(y), z))
    theta = cocycle3_from_map(n, n, lambda x, y, z: nijenhuis_theta_value(g, N, x, y, z))
    return NijenhuisPackage(g_n, rho, theta, TwistedOperator(g_n, rho, theta, Mat.identity(n)))


def validate_package(pkg: NijenhuisPackage) -> Report:
    """Run the four checkers on a Nijenhuis package (nothing is assumed)."""
    return merge(
        "Nijenhuis package",
        [
            check_filippov(pkg.g_n),
            check_rep3(pkg.g_n, pkg.rho),
            check_cocycle3(pkg.g_n, pkg.rho, pkg.theta),
            check_twisted(pkg.op),
        ],
    )


def validate_context(op: TwistedOperator) -> Report:
    return merge(
        "twisted operator context",
        [check_filippov(op.g), check_rep3(op.g, op.rho), check_cocycle3(op.g, op.rho, op.theta)],
    )


def is_zero_map(m: Mat) -> bool:
    return all(is_zero(r) for r in m.data)
