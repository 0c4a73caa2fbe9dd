"""Exact rational scalars, polynomials and dense linear algebra.

Everything here works over :class:`fractions.Fraction`; no floating point is
used anywhere.  Matrices are plain sequences of rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction]
Matrix = Sequence[Sequence[Number]]


class Singular(ValueError):
    """Raised when a linear system has no unique solution."""


class NotSymmetric(ValueError):
    pass


class NoRealRoot(ValueError):
    pass


def Q(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, str or Fraction")
    return Fraction(x)


# ---------------------------------------------------------------------------
# polynomials


class UniPoly:
    """Univariate polynomial with Fraction coefficients, ascending order.

    The zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, c: Number) -> "UniPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UniPoly.const(other)
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __add__(self, other) -> "UniPoly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other) -> "UniPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "UniPoly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "UniPoly":
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        out = UniPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        lead = other.lead
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            if c == 0:
                continue
            quot[i - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] -= c * b
        return UniPoly(quot), UniPoly(rem[:dq])

    def __floordiv__(self, other) -> "UniPoly":
        return self.divmod(_as_poly(other))[0]

    def __mod__(self, other) -> "UniPoly":
        return self.divmod(_as_poly(other))[1]

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "UniPoly":
        return self * (1 / self.lead) if self.coeffs else self

    def compose_neg(self) -> "UniPoly":
        """p(-x)."""
        return UniPoly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))


def _as_poly(p) -> UniPoly:
    return p if isinstance(p, UniPoly) else UniPoly.const(p)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.degree < 1:
        return p
    g = poly_gcd(p, p.derivative())
    return p // g


def cauchy_bound(p: UniPoly) -> Fraction:
    """1 + max |c_i / c_n|; every complex root lies strictly inside."""
    if p.degree < 1:
        return Fraction(1)
    lead = p.lead
    return 1 + max(abs(c / lead) for c in p.coeffs[:-1])


def sturm_chain(p: UniPoly) -> list[UniPoly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def _sign_changes(chain: Sequence[UniPoly], x: Number) -> int:
    prev = 0
    changes = 0
    for q in chain:
        v = q(x)
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if prev and s != prev:
            changes += 1
        prev = s
    return changes


def sturm_count(p: UniPoly, lo: Number, hi: Number, chain: Optional[list[UniPoly]] = None) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi].

    Multiple roots are counted once (the chain is built on the squarefree part).
    """
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if lo >= hi:
        return 0
    if chain is None:
        chain = sturm_chain(squarefree_part(p))
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def isolate_max_root(
    p: UniPoly, lo: Number, hi: Number, width: Number
) -> tuple[Fraction, Fraction]:
    """Rational bracket (l, h] of the largest real root of ``p`` with h - l <= width.

    All real roots must lie in (lo, hi]. Uses Sturm counts and bisection.
    """
    lo, hi, width = Q(lo), Q(hi), Q(width)
    if width <= 0:
        raise ValueError("width must be positive")
    chain = sturm_chain(squarefree_part(p))
    if sturm_count(p, lo, hi, chain) == 0:
        raise NoRealRoot(f"no real root of {p!r} in ({lo}, {hi}]")
    while hi - lo > width:
        mid = (lo + hi) / 2
        if sturm_count(p, mid, hi, chain) > 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def real_root_count(p: UniPoly) -> int:
    b = cauchy_bound(p)
    return sturm_count(p, -b, b)


# ---------------------------------------------------------------------------
# matrices


def to_matrix(rows: Matrix) -> list[list[Fraction]]:
    return [[Q(x) for x in row] for row in rows]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> list[list[Fraction]]:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence[Number]) -> list[Fraction]:
    return [sum((Q(x) * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def transpose(a: Matrix) -> list[list[Fraction]]:
    return [list(col) for col in zip(*a)]


def quad_form(m: Matrix, x: Sequence[Number]) -> Fraction:
    return sum((Q(xi) * yi for xi, yi in zip(x, matvec(m, x))), Fraction(0))


def is_symmetric(m: Matrix) -> bool:
    n = len(m)
    return all(len(row) == n for row in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n)
    )


def solve_linear(a: Matrix, b: Sequence[Number]) -> list[Fraction]:
    """Exact solution of a square system by Gauss-Jordan elimination."""
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("solve_linear needs a square matrix and matching rhs")
    aug = [[Q(x) for x in row] + [Q(bi)] for row, bi in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise Singular(f"matrix is singular (no pivot in column {col})")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        prow = [x / p for x in aug[col]]
        aug[col] = prow
        for r in range(n):
            f = aug[r][col]
            if r != col and f != 0:
                aug[r] = [x - f * y for x, y in zip(aug[r], prow)]
    return [row[n] for row in aug]


def inverse(a: Matrix) -> list[list[Fraction]]:
    n = len(a)
    cols = [solve_linear(a, [int(i == j) for i in range(n)]) for j in range(n)]
    return transpose(cols)


def determinant(a: Matrix) -> Fraction:
    m = to_matrix(a)
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def leading_minors(a: Matrix) -> list[Fraction]:
    return [determinant([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


def is_positive_definite(a: Matrix) -> bool:
    return is_symmetric(a) and all(x > 0 for x in leading_minors(a))


def rank(a: Matrix) -> int:
    """Exact rank via fraction-free (Bareiss) elimination on an integer scaling."""
    rows = [list(r) for r in a]
    if not rows or not rows[0]:
        return 0
    ints = []
    for row in rows:
        fr = [Q(x) for x in row]
        den = 1
        for x in fr:
            den = den * x.denominator // _gcd(den, x.denominator)
        ints.append([int(x * den) for x in fr])
    nr, nc = len(ints), len(ints[0])
    r = 0
    prev = 1
    for c in range(nc):
        piv = next((i for i in range(r, nr) if ints[i][c] != 0), None)
        if piv is None:
            continue
        ints[r], ints[piv] = ints[piv], ints[r]
        p = ints[r][c]
        for i in range(r + 1, nr):
            f = ints[i][c]
            ints[i] = [(p * x - f * y) // prev for x, y in zip(ints[i], ints[r])]
        prev = p
        r += 1
        if r == nr:
            break
    return r


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class PsdResult:
    psd: bool
    witness: Optional[tuple[Fraction, ...]] = None

    def __bool__(self) -> bool:
        return self.psd


def psd_check(m: Matrix) -> PsdResult:
    """Decide positive semidefiniteness by symmetric rational elimination.

    A negative pivot, or a zero pivot with a nonzero entry in its row, yields
    a witness ``x`` with ``x^T m x < 0``.
    """
    if not is_symmetric(m):
        raise NotSymmetric("psd_check requires a symmetric matrix")
    a = to_matrix(m)
    n = len(a)
    # rows of e accumulate the congruence: a_current = e @ m @ e^T
    e = identity(n)
    for k in range(n):
        p = a[k][k]
        if p < 0:
            return PsdResult(False, tuple(e[k]))
        if p == 0:
            j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
            if j is None:
                continue
            b, c = a[k][j], a[j][j]
            s = -(c + 1) / (2 * b)
            # (s e_k + e_j)^T a (s e_k + e_j) = 2 s b + c = -1
            x = tuple(s * u + v for u, v in zip(e[k], e[j]))
            return PsdResult(False, x)
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f == 0:
                continue
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
            for r in range(n):
                a[r][i] -= f * a[r][k]
            e[i] = [x - f * y for x, y in zip(e[i], e[k])]
    return PsdResult(True)


def charpoly(a: Matrix) -> UniPoly:
    """det(xI - a) via exact Hessenberg reduction."""
    h = to_matrix(a)
    n = len(h)
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j] != 0), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for row in h:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        p = h[j + 1][j]
        for i in range(j + 2, n):
            f = h[i][j] / p
            if f == 0:
                continue
            h[i] = [x - f * y for x, y in zip(h[i], h[j + 1])]
            for row in h:
                row[j + 1] += f * row[i]
    x = UniPoly.x()
    polys = [UniPoly.const(1)]
    for k in range(n):
        pk = (x - h[k][k]) * polys[k]
        prod = Fraction(1)
        for i in range(k - 1, -1, -1):
            prod *= h[i + 1][i]
            if prod == 0:
                break
            pk = pk - polys[i] * (prod * h[i][k])
        polys.append(pk)
    return polys[n]


# ---------------------------------------------------------------------------
# rendering


def to_decimal(x: Number, digits: int = 2) -> str:
    """Exact long division of a rational, rounded half-up (away from zero on ties)."""
    x = Q(x)
    neg = x < 0
    x = abs(x)
    scale = 10 ** digits
    num = x.numerator * scale
    q, r = divmod(num, x.denominator)
    if 2 * r >= x.denominator:
        q += 1
    s = str(q).rjust(digits + 1, "0")
    body = s if digits == 0 else f"{s[:-digits]}.{s[-digits:]}"
    # a negative value keeps its sign even when it rounds to zero
    return ("-" if neg else "") + body


def fmt(x: Number) -> str:
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
