"""Infinitesimal and truncated formal deformations of twisted operators.

A family ``T_t = T + T_1 t + ... + T_k t^k`` is twisted for all t exactly
when every t-coefficient of the twisted identity vanishes:

    sum_{i+j+l=s} [T_i u, T_j v, T_l w]
      = sum_{i+j+l=s} T_i(rho(T_j u, T_l v)w + rho(T_j v, T_l w)u + rho(T_j w, T_l u)v)
        + sum_{i+j+l+m=s} T_i Theta(T_j u, T_l v, T_m w)

The right-hand side reaches degree 4k, so checking s = 0 .. max(3(k+1), 4k)
covers every coefficient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .cohomology import (
    Bivector,
    Cochain,
    bracket_action,
    delta_matrix,
    rep_action,
    twisted_diff,
    twisted_matrix,
)
from .errors import ShapeMismatch, ValidationFailure
from .exactla import ZERO, Mat, Vec, echelon_basis, format_rational, reduce_modulo, unit_vec, vsub, zero_vec
from .report import Report, merge, run_checks
from .structures import _sum_all
from .twistop import TwistedOperator


@dataclass(frozen=True)
class DeformationFamily:
    base: TwistedOperator
    terms: tuple = ()

    def __post_init__(self):
        terms = tuple(self.terms)
        for t in terms:
            if t.shape != self.base.T.shape:
                raise ShapeMismatch("deformation term has the wrong shape")
        object.__setattr__(self, "terms", terms)

    @property
    def order(self) -> int:
        return len(self.terms)

    def coefficient(self, i: int) -> Mat | None:
        if i == 0:
            return self.base.T
        if 1 <= i <= len(self.terms):
            return self.terms[i - 1]
        return None

    def max_degree(self) -> int:
        k = self.order
        return max(3 * (k + 1), 4 * k)


@dataclass(frozen=True)
class EquivalencePair:
    """phi_t = Id + t[X, -] + sum phi_i t^i and
    psi_t = Id + t(rho(X) + Theta(X, T-)) + sum psi_i t^i, for i >= 2."""

    X: Bivector
    higher_phi: tuple = ()
    higher_psi: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "higher_phi", tuple(self.higher_phi))
        object.__setattr__(self, "higher_psi", tuple(self.higher_psi))


def _images(fam: DeformationFamily) -> list[list[Vec]]:
    """images[i][a] = T_i e_a."""
    return [fam.coefficient(i).columns() for i in range(fam.order + 1)]


def _compositions(total: int, parts: int, top: int):
    for c in itertools.product(range(min(total, top) + 1), repeat=parts):
        if sum(c) == total:
            yield c


def coefficient_residual(fam: DeformationFamily, s: int, a: int, b: int, c: int, images=None) -> Vec:
    """LHS - RHS of the t^s coefficient equation at basis vectors (a, b, c)."""
    op = fam.base
    k = fam.order
    img = images or _images(fam)
    vd = op.v_dim
    u, v, w = unit_vec(vd, a), unit_vec(vd, b), unit_vec(vd, c)
    lhs = [op.g.bracket(img[i][a], img[j][b], img[l][c]) for i, j, l in _compositions(s, 3, k)]
    rhs = []
    for i, j, l in _compositions(s, 3, k):
        inner = _sum_all(
            [
                op.rho.act(img[j][a], img[l][b], w),
                op.rho.act(img[j][b], img[l][c], u),
                op.rho.act(img[j][c], img[l][a], v),
            ],
            vd,
        )
        rhs.append(fam.coefficient(i).apply(inner))
    for i, j, l, m in _compositions(s, 4, k):
        rhs.append(fam.coefficient(i).apply(op.theta(img[j][a], img[l][b], img[m][c])))
    gd = op.g_dim
    return vsub(_sum_all(lhs, gd), _sum_all(rhs, gd))


def order_conditions(fam: DeformationFamily, s: int, limit: int = 1) -> Report:
    """The t^s coefficient equation on increasing basis triples of V."""
    if s < 0:
        raise ValueError("order must be non-negative")
    img = _images(fam)
    ident = f"order_{s}"

    def cases():
        for a, b, c in itertools.combinations(range(fam.base.v_dim), 3):
            yield ident, (a, b, c), coefficient_residual(fam, s, a, b, c, img)

    r = run_checks(f"deformation order {s}", cases(), limit)
    r.extra["order"] = s
    return r


def formal_check(fam: DeformationFamily, limit: int = 1) -> Report:
    """Every coefficient equation, plus the deformed bracket family on V."""
    reports = [order_conditions(fam, s, limit) for s in range(fam.max_degree() + 1)]
    r = merge("formal deformation", reports)
    r.extra["orders"] = {rep.extra["order"]: rep.outcome for rep in reports}
    failing = [rep.extra["order"] for rep in reports if not rep.passed]
    if failing:
        r.extra["first_failing_order"] = failing[0]
    r.extra["deformed_brackets"] = {
        str(s): [{"args": list(k), "value": [format_rational(x) for x in v]} for k, v in sorted(tab.items())]
        for s, tab in enumerate(deformed_brackets(fam))
    }
    return r


def infinitesimal_check(base: TwistedOperator, T1: Mat, limit: int = 1) -> Report:
    """Whether T + t T1 is twisted for every t (orders 1 through 4)."""
    fam = DeformationFamily(base, (T1,))
    reports = [order_conditions(fam, s, limit) for s in range(1, 5)]
    r = merge("infinitesimal deformation", reports)
    r.extra["orders"] = {rep.extra["order"]: rep.outcome for rep in reports}
    return r


def printed_residual(base: TwistedOperator, T1: Mat, s: int, a: int, b: int, c: int) -> Vec:
    """Residual of the four separately written infinitesimal conditions.

    These coincide with the coefficient equations at s = 1, 2, 4; at s = 3
    the written form applies T where the expansion produces T1 in the
    rho(T1, T1) terms and the mixed Theta terms.
    """
    op = base
    T = op.T
    vd, gd = op.v_dim, op.g_dim
    u, v, w = unit_vec(vd, a), unit_vec(vd, b), unit_vec(vd, c)
    tu, tv, tw = T.apply(u), T.apply(v), T.apply(w)
    pu, pv, pw = T1.apply(u), T1.apply(v), T1.apply(w)
    rho, th, br = op.rho.act, op.theta, op.g.bracket

    def rho_one():
        return [rho(tu, pv, w), rho(pu, tv, w), rho(tv, pw, u), rho(pv, tw, u), rho(tw, pu, v), rho(pw, tu, v)]

    def theta_one():
        return [th(tu, tv, pw), th(tu, pv, tw), th(pu, tv, tw)]

    def rho_two():
        return [rho(pu, pv, w), rho(pv, pw, u), rho(pw, pu, v)]

    def theta_two():
        return [th(tu, pv, pw), th(pu, tv, pw), th(pu, pv, tw)]

    if s == 1:
        lhs = _sum_all([br(tu, tv, pw), br(tu, pv, tw), br(pu, tv, tw)], gd)
        rhs = _sum_all(
            [
                T.apply(_sum_all(rho_one() + theta_one(), vd)),
                T1.apply(_sum_all([rho(tu, tv, w), rho(tv, tw, u), rho(tw, tu, v), th(tu, tv, tw)], vd)),
            ],
            gd,
        )
    elif s == 2:
        lhs = _sum_all([br(tu, pv, pw), br(pu, tv, pw), br(pu, pv, tw)], gd)
        rhs = _sum_all(
            [T.apply(_sum_all(rho_two() + theta_two(), vd)), T1.apply(_sum_all(rho_one() + theta_one(), vd))], gd
        )
    elif s == 3:
        lhs = br(pu, pv, pw)
        rhs = _sum_all([T.apply(th(pu, pv, pw)), T.apply(_sum_all(rho_two() + theta_two(), vd))], gd)
    elif s == 4:
        lhs = zero_vec(gd)
        rhs = T1.apply(th(pu, pv, pw))
    else:
        raise ValueError("written conditions exist for orders 1 to 4")
    return vsub(lhs, rhs)


def printed_crosscheck(base: TwistedOperator, T1: Mat) -> Report:
    """Compare the written infinitesimal conditions with the coefficient
    equations, triple by triple.  Fails (with location) where they differ."""
    fam = DeformationFamily(base, (T1,))
    img = _images(fam)
    stats = {}
    details = []
    differing = set()
    for s in range(1, 5):
        ident = f"written_vs_expanded_{s}"

        def cases():
            for a, b, c in itertools.combinations(range(base.v_dim), 3):
                p = printed_residual(base, T1, s, a, b, c)
                d = coefficient_residual(fam, s, a, b, c, img)
                yield ident, (a, b, c), vsub(p, d)

        r = run_checks(ident, cases(), limit=1)
        stats.update(r.stats)
        details.extend(r.details)
        if not r.passed:
            differing.add(s)
    rep = Report("fail" if details else "pass", "written infinitesimal conditions", details, stats)
    rep.extra["differing_orders"] = sorted(differing)
    return rep


# -- cohomology classes -------------------------------------------------------


@dataclass(frozen=True)
class CocycleClass:
    representative: Cochain
    coords: tuple

    def __eq__(self, other):
        return isinstance(other, CocycleClass) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)


def one_cocycle_class(base: TwistedOperator, T1: Mat) -> CocycleClass:
    """Canonical representative of T1 modulo degree-1 coboundaries."""
    f = Cochain.from_linear_map(T1)
    if not twisted_diff(base, f).is_zero():
        raise ValidationFailure("T1 is not a 1-cocycle of the twisted complex")
    b = twisted_matrix(base, 0)
    length = base.v_dim * base.g_dim
    echelon, pivots = echelon_basis(list(b.columns()), length)
    coords = reduce_modulo(f.to_vector(), echelon, pivots)
    return CocycleClass(Cochain.from_vector(1, base.v_dim, base.g_dim, coords), coords)


# -- equivalences -------------------------------------------------------------


def _series(first: Mat, higher: Sequence[Mat], n: int) -> list[Mat]:
    out = [Mat.identity(n), first]
    out.extend(higher)
    return out


def _coeff(series: list, i: int):
    return series[i] if 0 <= i < len(series) else None


def morphism_conditions(
    fam: DeformationFamily, fam2: DeformationFamily, pair: EquivalencePair, truncation: int, limit: int = 1
) -> Report:
    """(phi_t, psi_t) is a morphism from T_t to T'_t, coefficient-wise up to
    t^truncation, on basis tuples.  Both families share one context."""
    op = fam.base
    gd, vd = op.g_dim, op.v_dim
    A = bracket_action(op, pair.X)
    B = rep_action(op, pair.X)
    phi = _series(A, pair.higher_phi, gd)
    psi = _series(B, pair.higher_psi, vd)
    eg = [unit_vec(gd, i) for i in range(gd)]
    ev = [unit_vec(vd, i) for i in range(vd)]
    g, rho, theta = op.g, op.rho, op.theta

    def triples(n_parts, s, lens):
        for c in itertools.product(*(range(min(s, L - 1) + 1) for L in lens)):
            if sum(c) == s:
                yield c

    def phi_bracket():
        for s in range(truncation + 1):
            for i, j, k in itertools.combinations(range(gd), 3):
                acc = [
                    g.bracket(phi[a].apply(eg[i]), phi[b].apply(eg[j]), phi[c].apply(eg[k]))
                    for a, b, c in triples(3, s, [len(phi)] * 3)
                ]
                ps = _coeff(phi, s)
                lhs = ps.apply(g.basis(i, j, k)) if ps is not None else zero_vec(gd)
                yield "phi_bracket", (s, i, j, k), vsub(lhs, _sum_all(acc, gd))

    def psi_rho():
        for s in range(truncation + 1):
            for i, j in itertools.combinations(range(gd), 2):
                for u in range(vd):
                    acc = [
                        rho.act(phi[a].apply(eg[i]), phi[b].apply(eg[j]), psi[c].apply(ev[u]))
                        for a, b, c in triples(3, s, [len(phi), len(phi), len(psi)])
                    ]
                    ps = _coeff(psi, s)
                    lhs = ps.apply(rho.act(eg[i], eg[j], ev[u])) if ps is not None else zero_vec(vd)
                    yield "psi_rho", (s, i, j, u), vsub(lhs, _sum_all(acc, vd))

    def psi_theta():
        for s in range(truncation + 1):
            for i, j, k in itertools.combinations(range(gd), 3):
                acc = [
                    theta(phi[a].apply(eg[i]), phi[b].apply(eg[j]), phi[c].apply(eg[k]))
                    for a, b, c in triples(3, s, [len(phi)] * 3)
                ]
                ps = _coeff(psi, s)
                lhs = ps.apply(theta.basis(i, j, k)) if ps is not None else zero_vec(vd)
                yield "psi_theta", (s, i, j, k), vsub(lhs, _sum_all(acc, vd))

    def phi_T():
        for s in range(truncation + 1):
            for u in range(vd):
                lhs, rhs = [], []
                for a in range(s + 1):
                    pa, tb = _coeff(phi, a), fam.coefficient(s - a)
                    if pa is not None and tb is not None:
                        lhs.append(pa.apply(tb.apply(ev[u])))
                    ta, pb = fam2.coefficient(a), _coeff(psi, s - a)
                    if ta is not None and pb is not None:
                        rhs.append(ta.apply(pb.apply(ev[u])))
                yield "phi_T", (s, u), vsub(_sum_all(lhs, gd), _sum_all(rhs, gd))

    return merge(
        "equivalence (expanded)",
        [
            run_checks("phi bracket", phi_bracket(), limit),
            run_checks("psi rho", psi_rho(), limit),
            run_checks("psi theta", psi_theta(), limit),
            run_checks("phi T", phi_T(), limit),
        ],
    )


def written_equivalence_conditions(base: TwistedOperator, T1: Mat, T1p: Mat, X: Bivector, limit: int = 1) -> Report:
    """The separately written infinitesimal equivalence conditions."""
    op = base
    gd, vd = op.g_dim, op.v_dim
    A = bracket_action(op, X)
    B = rep_action(op, X)
    T = op.T
    g, rho, theta = op.g, op.rho, op.theta
    eg = [unit_vec(gd, i) for i in range(gd)]
    ev = [unit_vec(vd, i) for i in range(vd)]

    def theta_x(w):
        acc = zero_vec(vd)
        for x, y, c in X.terms():
            acc = tuple(p + c * q for p, q in zip(acc, theta(x, y, w)))
        return acc

    def rho_x(w):
        acc = zero_vec(vd)
        for x, y, c in X.terms():
            acc = tuple(p + c * q for p, q in zip(acc, rho.act(x, y, w)))
        return acc

    def phi_cases():
        for i, j, k in itertools.combinations(range(gd), 3):
            z1, z2, z3 = eg[i], eg[j], eg[k]
            a1, a2, a3 = A.apply(z1), A.apply(z2), A.apply(z3)
            yield "phi_2", (i, j, k), _sum_all([g.bracket(z1, a2, a3), g.bracket(a1, z2, a3), g.bracket(a1, a2, z3)], gd)
            yield "phi_3", (i, j, k), g.bracket(a1, a2, a3)

    def psi_cases():
        for i, j in itertools.combinations(range(gd), 2):
            z1, z2 = eg[i], eg[j]
            a1, a2 = A.apply(z1), A.apply(z2)
            for a in range(vd):
                u = ev[a]
                bu = B.apply(u)
                yield "psi_1", (i, j, a), vsub(theta_x(T.apply(rho.act(z1, z2, u))), rho.act(z1, z2, theta_x(T.apply(u))))
                yield "psi_2", (i, j, a), _sum_all([rho.act(z1, a2, bu), rho.act(a1, z2, bu), rho.act(a1, a2, u)], vd)
                yield "psi_3", (i, j, a), rho.act(a1, a2, bu)

    def theta_cases():
        for i, j, k in itertools.combinations(range(gd), 3):
            z1, z2, z3 = eg[i], eg[j], eg[k]
            a1, a2, a3 = A.apply(z1), A.apply(z2), A.apply(z3)
            tz = theta.basis(i, j, k)
            lhs = _sum_all([rho_x(tz), theta_x(T.apply(tz))], vd)
            rhs = _sum_all([theta(a1, z2, z3), theta(z1, a2, z3), theta(z1, z2, a3)], vd)
            yield "theta_1", (i, j, k), vsub(lhs, rhs)
            yield "theta_2", (i, j, k), _sum_all([theta(z1, a2, a3), theta(a1, z2, a3), theta(a1, a2, z3)], vd)
            yield "theta_3", (i, j, k), theta(a1, a2, a3)

    def t_cases():
        for a in range(vd):
            u = ev[a]
            lhs = _sum_all([T1.apply(u), A.apply(T.apply(u))], gd)
            rhs = _sum_all([T.apply(B.apply(u)), T1p.apply(u)], gd)
            yield "T_1", (a,), vsub(lhs, rhs)
            yield "T_2", (a,), vsub(A.apply(T1.apply(u)), T1p.apply(B.apply(u)))

    return merge(
        "equivalence (written)",
        [
            run_checks("phi", phi_cases(), limit),
            run_checks("psi", psi_cases(), limit),
            run_checks("theta", theta_cases(), limit),
            run_checks("T", t_cases(), limit),
        ],
    )


def _difference_is_delta(base: TwistedOperator, T1: Mat, T1p: Mat, X: Bivector) -> Report:
    d = delta_matrix(base, X)
    diff = T1 - T1p

    def cases():
        for a in range(base.v_dim):
            yield "difference_is_delta", (a,), vsub(diff.column(a), d.column(a))

    return run_checks("T1 - T1' = delta(X)", cases())


def equivalence_check_infinitesimal(base: TwistedOperator, T1: Mat, T1p: Mat, X: Bivector, limit: int = 1) -> Report:
    """Whether (Id + t[X, -], Id + t(rho(X) + Theta(X, T-))) maps T + tT1 to T + tT1'.

    The written conditions and the full polynomial expansion are both run;
    when they pass, T1 - T1' = delta(X) is checked as well.
    """
    fam, fam2 = DeformationFamily(base, (T1,)), DeformationFamily(base, (T1p,))
    written = written_equivalence_conditions(base, T1, T1p, X, limit)
    expanded = morphism_conditions(fam, fam2, EquivalencePair(X), 3, limit)
    parts = [written, expanded]
    if written.passed and expanded.passed:
        parts.append(_difference_is_delta(base, T1, T1p, X))
    return merge("infinitesimal equivalence", parts)


def equivalence_check_formal(
    fam: DeformationFamily,
    fam2: DeformationFamily,
    pair: EquivalencePair,
    truncation: int | None = None,
    limit: int = 1,
) -> Report:
    """Morphism conditions up to t^truncation (default 3(k+1))."""
    if fam.base != fam2.base:
        raise ShapeMismatch("families deform different operators")
    if truncation is None:
        truncation = 3 * (max(fam.order, fam2.order) + 1)
    parts = [morphism_conditions(fam, fam2, pair, truncation, limit)]
    if parts[0].passed and truncation >= 1:
        t1 = fam.coefficient(1) or Mat.zeros(*fam.base.T.shape)
        t1p = fam2.coefficient(1) or Mat.zeros(*fam.base.T.shape)
        parts.append(_difference_is_delta(fam.base, t1, t1p, pair.X))
    r = merge("formal equivalence", parts)
    r.extra["truncation"] = truncation
    return r


# -- the deformed bracket on V ------------------------------------------------


def deformed_brackets(fam: DeformationFamily) -> list[dict]:
    """Coefficient tables omega_s of [u, v, w]_{T_t} = sum_s omega_s t^s."""
    op = fam.base
    k = fam.order
    img = _images(fam)
    vd = op.v_dim
    out = []
    for s in range(3 * k + 1):
        tab = {}
        for a, b, c in itertools.combinations(range(vd), 3):
            u, v, w = unit_vec(vd, a), unit_vec(vd, b), unit_vec(vd, c)
            parts = []
            for i, j in _compositions(s, 2, k):
                parts += [
                    op.rho.act(img[i][a], img[j][b], w),
                    op.rho.act(img[i][b], img[j][c], u),
                    op.rho.act(img[i][c], img[j][a], v),
                ]
            for i, j, l in _compositions(s, 3, k):
                parts.append(op.theta(img[i][a], img[j][b], img[l][c]))
            val = _sum_all(parts, vd)
            if any(val):
                tab[(a, b, c)] = val
        out.append(tab)
    return out


def check_deformed_bracket(fam: DeformationFamily, limit: int = 1) -> Report:
    """Filippov identity of the deformed bracket, coefficient by coefficient."""
    from .structures import ThreeLieAlgebra

    omegas = [ThreeLieAlgebra(fam.base.v_dim, tab) for tab in deformed_brackets(fam)]
    top = len(omegas) - 1
    vd = fam.base.v_dim
    e = [unit_vec(vd, i) for i in range(vd)]

    def cases():
        for s in range(2 * top + 1):
            for i1, i2 in itertools.combinations(range(vd), 2):
                for i3, i4, i5 in itertools.combinations(range(vd), 3):
                    acc = [ZERO] * vd
                    for p in range(max(0, s - top), min(s, top) + 1):
                        outer, inner = omegas[p], omegas[s - p]
                        terms = [
                            (1, outer.bracket(e[i1], e[i2], inner.basis(i3, i4, i5))),
                            (-1, outer.bracket(inner.basis(i1, i2, i3), e[i4], e[i5])),
                            (-1, outer.bracket(e[i3], inner.basis(i1, i2, i4), e[i5])),
                            (-1, outer.bracket(e[i3], e[i4], inner.basis(i1, i2, i5))),
                        ]
                        for sg, vec_ in terms:
                            for t, y in enumerate(vec_):
                                if y:
                                    acc[t] += sg * y
                    yield "deformed_filippov", (s, i1, i2, i3, i4, i5), tuple(acc)

    return run_checks("deformed bracket", cases(), limit)
