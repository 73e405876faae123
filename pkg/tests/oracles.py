"""Independent reference computations.

Nothing here calls the library's cochain, differential or elimination code.
Structures are unpacked into dense Python lists first, cochains live on the
full tensor space (every index tuple, no canonical keys), the differential
is assembled straight from the defining formula, and ranks come from a
fraction-free Bareiss elimination.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import lcm

# -- rank ---------------------------------------------------------------------


def bareiss_rank(rows) -> int:
    """Rank of a rational matrix given as a list of rows."""
    m = []
    for r in rows:
        r = [Fraction(x) for x in r]
        den = 1
        for x in r:
            den = lcm(den, x.denominator)
        m.append([int(x * den) for x in r])
    if not m or not m[0]:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank, prev = 0, 1
    for col in range(n_cols):
        piv = next((i for i in range(rank, n_rows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, n_rows):
            for j in range(col + 1, n_cols):
                m[i][j] = (m[i][j] * m[rank][col] - m[i][col] * m[rank][j]) // prev
            m[i][col] = 0
        prev = m[rank][col]
        rank += 1
        if rank == n_rows:
            break
    return rank


def nullity(rows, n_cols: int) -> int:
    return n_cols - bareiss_rank(rows) if rows else n_cols


# -- dense unpacking ----------------------------------------------------------


def _skew_sign(idx):
    idx = list(idx)
    if len(set(idx)) < len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


def dense_bracket(g):
    """br[i][j][k] = [e_i, e_j, e_k] as a list over all index triples."""
    d = g.dim
    out = {}
    for idx in itertools.product(range(d), repeat=3):
        s, key = _skew_sign(idx)
        v = g.table.get(key) if s else None
        out[idx] = [s * Fraction(x) for x in v] if v else [Fraction(0)] * d
    return out


def dense_rep(rho):
    """r[(i, j)][a][b]: matrix entries of rho(e_i, e_j) for all ordered pairs."""
    d, m = rho.algebra_dim, rho.space_dim
    out = {}
    for i, j in itertools.product(range(d), repeat=2):
        s, key = _skew_sign((i, j))
        mat = rho.ops.get(key) if s else None
        if mat is None:
            out[(i, j)] = [[Fraction(0)] * m for _ in range(m)]
        else:
            out[(i, j)] = [[s * Fraction(mat[a, b]) for b in range(m)] for a in range(m)]
    return out


def dense_theta(theta):
    d, m = theta.algebra_dim, theta.space_dim
    out = {}
    for idx in itertools.product(range(d), repeat=3):
        s, key = _skew_sign(idx)
        v = theta.values.get(key) if s else None
        out[idx] = [s * Fraction(x) for x in v] if v else [Fraction(0)] * m
    return out


def _mv(mat, v):
    return [sum((mat[a][b] * v[b] for b in range(len(v))), Fraction(0)) for a in range(len(mat))]


def _lin3(table, dim_out, x, y, z):
    acc = [Fraction(0)] * dim_out
    for i, a in enumerate(x):
        if not a:
            continue
        for j, b in enumerate(y):
            if not b:
                continue
            for k, c in enumerate(z):
                if not c:
                    continue
                coef = a * b * c
                for t, w in enumerate(table[(i, j, k)]):
                    acc[t] += coef * w
    return acc


def _rep_act(rtab, m, x, y, v):
    acc = [Fraction(0)] * m
    for i, a in enumerate(x):
        if not a:
            continue
        for j, b in enumerate(y):
            if not b:
                continue
            w = _mv(rtab[(i, j)], v)
            for t in range(m):
                acc[t] += a * b * w[t]
    return acc


def _add(*vs):
    return [sum(c, Fraction(0)) for c in zip(*vs)]


def _neg(v):
    return [-x for x in v]


class TwistedData:
    """Dense data of the 3-Lie algebra (V, [.]_T) and its module (g, rho_Theta)."""

    def __init__(self, op):
        self.gd, self.vd = op.g.dim, op.rho.space_dim
        gd, vd = self.gd, self.vd
        br, rt, th = dense_bracket(op.g), dense_rep(op.rho), dense_theta(op.theta)
        T = [[Fraction(op.T[a, b]) for b in range(vd)] for a in range(gd)]
        self.T = T
        self.br, self.rt, self.th = br, rt, th
        ev = [[Fraction(int(i == j)) for j in range(vd)] for i in range(vd)]
        eg = [[Fraction(int(i == j)) for j in range(gd)] for i in range(gd)]
        Te = [_mv(T, ev[i]) for i in range(vd)]
        self.Te = Te

        # [u, v, w]_T = rho(Tu, Tv)w + rho(Tv, Tw)u + rho(Tw, Tu)v + Theta(Tu, Tv, Tw)
        self.vbr = {}
        for a, b, c in itertools.product(range(vd), repeat=3):
            self.vbr[(a, b, c)] = _add(
                _rep_act(rt, vd, Te[a], Te[b], ev[c]),
                _rep_act(rt, vd, Te[b], Te[c], ev[a]),
                _rep_act(rt, vd, Te[c], Te[a], ev[b]),
                _lin3(th, vd, Te[a], Te[b], Te[c]),
            )
        # rho_Theta(u, v)x = [Tu, Tv, x] - T(rho(Tv, x)u + rho(x, Tu)v + Theta(x, Tu, Tv))
        self.rth = {}
        for a, b in itertools.product(range(vd), repeat=2):
            mat = [[Fraction(0)] * gd for _ in range(gd)]
            for k in range(gd):
                x = eg[k]
                inner = _add(
                    _rep_act(rt, vd, Te[b], x, ev[a]),
                    _rep_act(rt, vd, x, Te[a], ev[b]),
                    _lin3(th, vd, x, Te[a], Te[b]),
                )
                col = _add(_lin3(br, gd, Te[a], Te[b], x), _neg(_mv(T, inner)))
                for r in range(gd):
                    mat[r][k] = col[r]
            self.rth[(a, b)] = mat


# -- full-space cochains --------------------------------------------------------


def _arity(n):
    return 2 * n - 1


def skew_constraints(n, d, m):
    """Rows forcing skewness in every pair and in the last triple, on the full
    space of functions {index tuples} -> K^m, coordinates ordered by
    (tuple, target coordinate)."""
    tuples = list(itertools.product(range(d), repeat=_arity(n)))
    pos = {t: i for i, t in enumerate(tuples)}
    size = len(tuples) * m
    rows = []

    def relation(t, t2, sign):
        for c in range(m):
            row = [0] * size
            row[pos[t] * m + c] += 1
            row[pos[t2] * m + c] -= sign
            if any(row):
                rows.append(row)

    for t in tuples:
        if n >= 2:
            for p in range(n - 2):
                t2 = list(t)
                t2[2 * p], t2[2 * p + 1] = t2[2 * p + 1], t2[2 * p]
                relation(t, tuple(t2), -1)
            last = _arity(n) - 3
            for a, b in ((0, 1), (1, 2)):
                t2 = list(t)
                t2[last + a], t2[last + b] = t2[last + b], t2[last + a]
                relation(t, tuple(t2), -1)
    return tuples, rows


def _kernel_rows(rows, size):
    """Basis of the solution space of rows x = 0, by naive Gauss-Jordan."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(size):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(size) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * size
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -m[i][f]
        basis.append(v)
    return basis


def cochain_space(n, d, m):
    """(tuples, basis vectors of the admissible cochains in full coordinates)."""
    if n == 1:
        tuples = [(i,) for i in range(d)]
        size = d * m
        return tuples, [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    tuples, rows = skew_constraints(n, d, m)
    size = len(tuples) * m
    if not rows:
        return tuples, [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    return tuples, _kernel_rows(rows, size)


def _value(f, pos, m, t):
    i = pos[t] * m
    return f[i : i + m]


def apply_differential(data: TwistedData, n: int, f, src_pos):
    """(D f) on every (2n+1)-tuple, for f in full coordinates of degree n >= 1."""
    vd, gd = data.vd, data.gd
    out_tuples = list(itertools.product(range(vd), repeat=_arity(n + 1)))
    ev = [[Fraction(int(i == j)) for j in range(vd)] for i in range(vd)]
    out = []

    def fval(args):
        """f at a list of V-vectors given as coordinate lists (multilinear)."""
        acc = [Fraction(0)] * gd
        supports = [[(i, c) for i, c in enumerate(a) if c] for a in args]
        for combo in itertools.product(*supports):
            coef = Fraction(1)
            for _, c in combo:
                coef *= c
            v = _value(f, src_pos, gd, tuple(i for i, _ in combo))
            for t in range(gd):
                acc[t] += coef * v[t]
        return acc

    def act(a, b, x):
        return _mv(data.rth[(a, b)], x)

    for u in out_tuples:
        N = 2 * n + 1  # number of arguments, 1-based positions 1..N
        pos1 = lambda k: u[k - 1]
        terms = []
        sgn = (-1) ** (n + 1)
        # (-1)^{n+1} rho(u_{2n+1}, u_{2n-1}) f(u_1..u_{2n-2}, u_{2n})
        args = [ev[pos1(k)] for k in range(1, 2 * n - 1)] + [ev[pos1(2 * n)]]
        terms.append([sgn * x for x in act(pos1(N), pos1(2 * n - 1), fval(args))])
        # (-1)^{n+1} rho(u_{2n}, u_{2n+1}) f(u_1..u_{2n-1})
        args = [ev[pos1(k)] for k in range(1, 2 * n)]
        terms.append([sgn * x for x in act(pos1(2 * n), pos1(N), fval(args))])
        for k in range(1, n + 1):
            rest = [j for j in range(1, N + 1) if j not in (2 * k - 1, 2 * k)]
            s = (-1) ** (k + 1)
            args = [ev[pos1(j)] for j in rest]
            terms.append([s * x for x in act(pos1(2 * k - 1), pos1(2 * k), fval(args))])
            for j in range(2 * k + 1, N + 1):
                b = data.vbr[(pos1(2 * k - 1), pos1(2 * k), pos1(j))]
                args = [b if jj == j else ev[pos1(jj)] for jj in rest]
                terms.append([(-1) ** k * x for x in fval(args)])
        out.extend(_add(*terms))
    return out_tuples, out


def delta_full(data: TwistedData, X):
    """delta(X) as a degree-1 cochain in full coordinates; X given as a full
    skew matrix X[i][j] with X = 1/2 sum X[i][j] e_i ^ e_j."""
    gd, vd = data.gd, data.vd
    ev = [[Fraction(int(i == j)) for j in range(vd)] for i in range(vd)]
    eg = [[Fraction(int(i == j)) for j in range(gd)] for i in range(gd)]
    out = []
    for a in range(vd):
        tv = data.Te[a]
        inner = [Fraction(0)] * vd
        outer = [Fraction(0)] * gd
        for i, j in itertools.product(range(gd), repeat=2):
            c = X[i][j] / 2
            if not c:
                continue
            inner = _add(inner, [c * x for x in _rep_act(data.rt, vd, eg[i], eg[j], ev[a])])
            inner = _add(inner, [c * x for x in _lin3(data.th, vd, eg[i], eg[j], tv)])
            outer = _add(outer, [c * x for x in _lin3(data.br, gd, eg[i], eg[j], tv)])
        out.extend(_add(_mv(data.T, inner), _neg(outer)))
    return out


def bivector_space(d):
    """Full skew d x d matrices, one per pair i < j."""
    out = []
    for i, j in itertools.combinations(range(d), 2):
        X = [[Fraction(0)] * d for _ in range(d)]
        X[i][j], X[j][i] = Fraction(1), Fraction(-1)
        out.append(X)
    return out


def brute_force_cohomology(op, n: int) -> tuple[int, int, int]:
    """(dim Z, dim B, dim H) of the twisted complex at degree n."""
    data = TwistedData(op)
    gd, vd = data.gd, data.vd

    def image_dim_and_cycles(k):
        """Returns (dimension of admissible C^k, rank of D on it)."""
        if k == 0:
            space = bivector_space(gd)
            images = [delta_full(data, X) for X in space]
            return len(space), bareiss_rank(images)
        tuples, basis = cochain_space(k, vd, gd)
        pos = {t: i for i, t in enumerate(tuples)}
        images = [apply_differential(data, k, f, pos)[1] for f in basis]
        # the admissible basis from _kernel_rows is independent, so its size is the dimension
        return len(basis), bareiss_rank(images)

    dim_c, rank_d = image_dim_and_cycles(n)
    dim_z = dim_c - rank_d
    dim_b = image_dim_and_cycles(n - 1)[1] if n >= 1 else 0
    return dim_z, dim_b, dim_z - dim_b
