"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  Vectors are plain tuples of fractions; matrices are
immutable :class:`Mat` values.  Every elimination uses the same pivot rule
(first nonzero entry scanning columns left to right, rows top to bottom) so
results are reproducible bit for bit.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContainmentViolation, NotInvertible, ParseError, ShapeMismatch

Rational = Fraction
Vec = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (ints are accepted as well)."""
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"not a rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ParseError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


def vec(entries: Iterable) -> Vec:
    return tuple(Fraction(e) for e in entries)


def zero_vec(n: int) -> Vec:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vec:
    return tuple(ONE if k == i else ZERO for k in range(n))


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def vadd(a: Sequence, b: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Sequence) -> Vec:
    return tuple(c * x for x in a)


def vsum(vectors: Iterable[Sequence], n: int) -> Vec:
    acc = [ZERO] * n
    for v in vectors:
        for i, x in enumerate(v):
            if x:
                acc[i] += x
    return tuple(acc)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def nonzero(v: Sequence):
    """Yield ``(index, value)`` for the nonzero coordinates of ``v``."""
    for i, x in enumerate(v):
        if x:
            yield i, x


class Mat:
    """Dense immutable matrix over the rationals."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Iterable[Iterable]):
        grid = tuple(tuple(Fraction(x) for x in row) for row in data)
        if len(grid) != rows or any(len(r) != cols for r in grid):
            raise ShapeMismatch(f"matrix data does not have shape {rows}x{cols}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", grid)

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        rows = list(rows)
        if cols is None:
            if not rows:
                raise ShapeMismatch("column count needed for an empty matrix")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Mat":
        columns = list(columns)
        return cls(rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols, [[ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> Vec:
        return self.data[i]

    def column(self, j: int) -> Vec:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[Vec]:
        return [self.column(j) for j in range(self.cols)]

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.data)
        return f"Mat({self.rows}x{self.cols}: [{body}])"

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows, zip(*self.data)) if self.rows else Mat.zeros(self.cols, 0)

    def __add__(self, other: "Mat") -> "Mat":
        _same_shape(self, other)
        return Mat(self.rows, self.cols, [vadd(a, b) for a, b in zip(self.data, other.data)])

    def __sub__(self, other: "Mat") -> "Mat":
        _same_shape(self, other)
        return Mat(self.rows, self.cols, [vsub(a, b) for a, b in zip(self.data, other.data)])

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, [tuple(-x for x in r) for r in self.data])

    def scale(self, c) -> "Mat":
        c = Fraction(c)
        return Mat(self.rows, self.cols, [tuple(c * x for x in r) for r in self.data])

    def __rmul__(self, c) -> "Mat":
        return self.scale(c)

    def apply(self, v: Sequence) -> Vec:
        if len(v) != self.cols:
            raise ShapeMismatch(f"cannot apply {self.rows}x{self.cols} matrix to length-{len(v)} vector")
        support = [(j, x) for j, x in enumerate(v) if x]
        return tuple(sum((r[j] * x for j, x in support), ZERO) for r in self.data)

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
            cols = other.columns()
            return Mat.from_columns([self.apply(c) for c in cols], self.rows)
        return self.apply(other)


def _same_shape(a: Mat, b: Mat) -> None:
    if a.shape != b.shape:
        raise ShapeMismatch(f"shape mismatch {a.shape} vs {b.shape}")


def rref(m: Mat) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in m.data]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        if piv != 1:
            rows[r] = [x / piv for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m: Mat) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Mat) -> list[Vec]:
    """Basis of the right null space, one vector per free column (in order).

    The vector for free column ``f`` has a 1 in position ``f``, zeros in the
    other free positions, and minus the reduced entries in pivot positions.
    """
    rows, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [ZERO] * m.cols
        v[f] = ONE
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def inverse(m: Mat) -> Mat:
    if m.rows != m.cols:
        raise NotInvertible(f"non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    aug = Mat(n, 2 * n, [r + Mat.identity(n).data[i] for i, r in enumerate(m.data)])
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise NotInvertible("matrix is singular")
    return Mat(n, n, [r[n:] for r in rows])


def is_invertible(m: Mat) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def solve(m: Mat, b: Sequence) -> Vec | None:
    """One solution of ``m x = b`` (free variables set to 0), or None."""
    if len(b) != m.rows:
        raise ShapeMismatch("right-hand side has wrong length")
    aug = Mat(m.rows, m.cols + 1, [r + (Fraction(x),) for r, x in zip(m.data, b)])
    rows, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [ZERO] * m.cols
    for row, p in zip(rows, pivots):
        x[p] = row[-1]
    return tuple(x)


def span_rank(vectors: Sequence[Sequence], length: int) -> int:
    if not vectors:
        return 0
    return rank(Mat(len(vectors), length, vectors))


def echelon_basis(vectors: Sequence[Sequence], length: int) -> tuple[list[Vec], list[int]]:
    """RREF rows (as vectors) of the span of ``vectors`` and their pivots."""
    if not vectors:
        return [], []
    rows, pivots = rref(Mat(len(vectors), length, vectors))
    return [tuple(r) for r in rows], pivots


def reduce_modulo(v: Sequence, echelon: Sequence[Sequence], pivots: Sequence[int]) -> Vec:
    """Canonical representative of ``v`` modulo an RREF-spanned subspace."""
    out = list(v)
    for row, p in zip(echelon, pivots):
        c = out[p]
        if c:
            out = [x - c * y for x, y in zip(out, row)]
    return tuple(out)


def complement_basis(sub: Sequence[Sequence], whole: Sequence[Sequence], length: int) -> list[Vec]:
    """Vectors extending a basis of span(sub) to a basis of span(sub + whole).

    Each returned vector is reduced modulo span(sub) and modulo the earlier
    returned vectors, so the result is deterministic.
    """
    echelon, pivots = echelon_basis(sub, length)
    echelon = [list(r) for r in echelon]
    pivots = list(pivots)
    out = []
    for w in whole:
        r = list(reduce_modulo(w, echelon, pivots))
        p = next((i for i, x in enumerate(r) if x), None)
        if p is None:
            continue
        piv = r[p]
        r = [x / piv for x in r]
        for i, row in enumerate(echelon):
            if row[p]:
                c = row[p]
                echelon[i] = [x - c * y for x, y in zip(row, r)]
        echelon.append(r)
        pivots.append(p)
        out.append(tuple(r))
    return out


def quotient_dim(cocycles: Sequence[Sequence], coboundaries: Sequence[Sequence], length: int | None = None) -> int:
    """dim span(cocycles) - dim span(coboundaries), checking containment."""
    if length is None:
        sample = list(cocycles) + list(coboundaries)
        if not sample:
            return 0
        length = len(sample[0])
    rz = span_rank(cocycles, length)
    rb = span_rank(coboundaries, length)
    both = span_rank(list(cocycles) + list(coboundaries), length)
    if both != rz:
        raise ContainmentViolation("coboundaries are not contained in the span of the cocycles")
    return rz - rb


def det(m: Mat) -> Fraction:
    """Determinant by exact elimination (used for admissibility cross-checks)."""
    if m.rows != m.cols:
        raise ShapeMismatch("determinant of a non-square matrix")
    a = [list(r) for r in m.data]
    n = m.rows
    sign = ONE
    result = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return ZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        piv = a[c][c]
        result *= piv
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * result


def block_diag(*blocks: Mat) -> Mat:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    rows = []
    c0 = 0
    for b in blocks:
        for r in b.data:
            rows.append((ZERO,) * c0 + r + (ZERO,) * (m - c0 - b.cols))
        c0 += b.cols
    return Mat(n, m, rows)
