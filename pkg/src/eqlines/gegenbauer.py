"""Gegenbauer polynomials and the three-point / multivariate kernels built on them.

The kernels are evaluated in parity form: with ``z = t - u G^-1 v`` and
``w = (1 - u G^-1 u)(1 - v G^-1 v)`` the value is ``sum_j c_j z^j w^((k-j)/2)``
over the coefficients ``c_j`` of the lower-dimensional Gegenbauer polynomial.
Only ``j`` with the parity of ``k`` occur, so no square roots are needed.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Sequence

from .exactmath import Matrix, Number, Q, UniPoly, is_positive_definite, solve_linear

DEFAULT_MAX_K = 10


class BadDimension(ValueError):
    pass


class ImproperGram(ValueError):
    pass


class SwitchingPropertyViolation(AssertionError):
    pass


_cache: dict[Fraction, list[UniPoly]] = {}
_lock = threading.Lock()


def gegenbauer_poly(d: Number, k: int) -> UniPoly:
    """P^d_k with P^d_k(1) = 1.  ``d`` may be any rational >= 2."""
    d = Q(d)
    if d < 2:
        raise BadDimension(f"dimension must be >= 2, got {d}")
    if k < 0:
        raise ValueError("degree must be nonnegative")
    with _lock:
        fam = _cache.setdefault(d, [UniPoly.const(1), UniPoly.x()])
        t = UniPoly.x()
        while len(fam) <= k:
            j = len(fam)
            p = (t * fam[j - 1] * (2 * j + d - 4) - fam[j - 2] * (j - 1)) * (1 / (j + d - 3))
            fam.append(p)
        return fam[k]


def parity_eval(dd: Number, k: int, z: Number, w: Number) -> Fraction:
    """sum over j = k mod 2 of c_j z^j w^((k-j)/2), c_j from P^dd_k."""
    coeffs = gegenbauer_poly(dd, k).coeffs
    z, w = Q(z), Q(w)
    total = Fraction(0)
    for j in range(k % 2, k + 1, 2):
        c = coeffs[j] if j < len(coeffs) else 0
        if c:
            total += c * z**j * w ** ((k - j) // 2)
    return total


def q3(d: Number, k: int, u: Number, v: Number, t: Number) -> Fraction:
    """Three-point kernel Q^d_k(u, v, t)."""
    u, v, t = Q(u), Q(v), Q(t)
    return parity_eval(Q(d) - 1, k, t - u * v, (1 - u * u) * (1 - v * v))


def _bilinear(ginv_v: Sequence[Fraction], u: Sequence[Number]) -> Fraction:
    return sum((Q(a) * b for a, b in zip(u, ginv_v)), Fraction(0))


def qm(
    d: Number,
    m: int,
    k: int,
    G: Matrix,
    u: Sequence[Number],
    v: Sequence[Number],
    t: Number,
    check: bool = True,
) -> Fraction:
    """Multivariate kernel Q^{d,m}_k(G; u, v, t) for a proper m x m Gram matrix G."""
    if len(G) != m or len(u) != m or len(v) != m:
        raise ValueError("G, u, v must have order m")
    if check and not is_positive_definite(G):
        raise ImproperGram("G must be positive definite")
    ginv_u = solve_linear(G, u)
    ginv_v = solve_linear(G, v)
    z = Q(t) - _bilinear(ginv_v, u)
    w = (1 - _bilinear(ginv_u, u)) * (1 - _bilinear(ginv_v, v))
    return parity_eval(Q(d) - m, k, z, w)


def switch_tuple(G: Matrix, u, v, t, lam: Sequence[int], e1: int, e2: int):
    """Apply the switching (lam, e1, e2) to the extended Gram (G; u, v, t)."""
    m = len(G)
    G2 = [[lam[i] * lam[j] * Q(G[i][j]) for j in range(m)] for i in range(m)]
    u2 = [e1 * lam[i] * Q(u[i]) for i in range(m)]
    v2 = [e2 * lam[i] * Q(v[i]) for i in range(m)]
    return G2, u2, v2, e1 * e2 * Q(t)


def switching_conjugate_value(
    d: Number, m: int, k: int, lam: Sequence[int], e1: int, e2: int, G: Matrix, u, v, t
) -> Fraction:
    """qm at the switched tuple; raises if it differs from (e1 e2)^k qm(G; u, v, t)."""
    if any(x not in (1, -1) for x in (*lam, e1, e2)):
        raise ValueError("switching signs must be +1 or -1")
    G2, u2, v2, t2 = switch_tuple(G, u, v, t, lam, e1, e2)
    switched = qm(d, m, k, G2, u2, v2, t2)
    base = qm(d, m, k, G, u, v, t)
    if switched != (e1 * e2) ** k * base:
        raise SwitchingPropertyViolation(f"{switched} != ({e1 * e2})^{k} * {base}")
    return switched
