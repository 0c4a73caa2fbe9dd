"""Two-point LP values and the semidefinite constraint matrices of a configuration.

Basis order everywhere: the all-ones slot first (when present), then the
inner-product vectors in lexicographic order with values sorted decreasingly,
so for an equiangular set +alpha comes before -alpha.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import gram as gm
from .distributions import (
    Configuration,
    class_distribution,
    multipoint,
    three_point,
    two_point,
)
from .exactmath import Matrix, PsdResult, psd_check, quad_form, rank
from .gegenbauer import gegenbauer_poly, q3, qm

MAX_M = 2
ONE = "1"


@dataclass
class ConstraintMatrix:
    kind: str
    matrix: list[list[Fraction]]
    labels: list
    params: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.matrix)

    def psd(self) -> PsdResult:
        return psd_check(self.matrix)

    def rank(self) -> int:
        return rank(self.matrix) if self.matrix else 0

    def entry(self, a, b) -> Fraction:
        return self.matrix[self.labels.index(a)][self.labels.index(b)]


def _zeros(n: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * n for _ in range(n)]


def lp_value(X: Configuration, k: int) -> Fraction:
    """N + sum over t in A of x(t) P^d_k(t)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    P = gegenbauer_poly(X.d, k)
    x = two_point(X)
    return X.N + sum((c * P(t) for t, c in x.items() if t != 1), Fraction(0))


def build_alt_threepoint(X: Configuration, k: int) -> ConstraintMatrix:
    """The (s+1) x (s+1) matrix sum over A'^3 of y(u,v,t) Q^d_k(u,v,t) e_u e_v^T."""
    labels = list(X.values)
    idx = {v: i for i, v in enumerate(labels)}
    M = _zeros(len(labels))
    for (u, v, t), n in three_point(X).items():
        M[idx[u]][idx[v]] += n * q3(X.d, k, u, v, t)
    return ConstraintMatrix("alt-3pt", M, labels, {"k": k})


def build_original_threepoint(X: Configuration, k: int, n: int) -> ConstraintMatrix:
    """Order n+1 matrix sum of y(u,v,t) Q^d_k(u,v,t) (1,u,..,u^n)(1,v,..,v^n)^T."""
    if n < 0:
        raise ValueError("n must be >= 0")
    M = _zeros(n + 1)
    for (u, v, t), c in three_point(X).items():
        w = c * q3(X.d, k, u, v, t)
        if w == 0:
            continue
        pu = [u**i for i in range(n + 1)]
        pv = [v**i for i in range(n + 1)]
        for i in range(n + 1):
            for j in range(n + 1):
                M[i][j] += w * pu[i] * pv[j]
    return ConstraintMatrix("original-3pt", M, list(range(n + 1)), {"k": k, "n": n})


def interpolate_values(coeffs: Sequence, points: Sequence) -> list[Fraction]:
    """f(p) for the polynomial f with the given ascending coefficients."""
    return [sum((Fraction(c) * p**i for i, c in enumerate(coeffs)), Fraction(0)) for p in points]


def original_vs_alt(X: Configuration, k: int, a: Sequence) -> tuple[Fraction, Fraction]:
    """(a^T original a, f^T alt f) where f samples sum a_i x^i on A'."""
    n = len(a) - 1
    orig = build_original_threepoint(X, k, n)
    alt = build_alt_threepoint(X, k)
    f = interpolate_values(a, alt.labels)
    return quad_form(orig.matrix, a), quad_form(alt.matrix, f)


def _vectors(X: Configuration, m: int) -> list[tuple[Fraction, ...]]:
    return list(itertools.product(X.inner_products, repeat=m))


def full_alt_multipoint(X: Configuration, m: int, k: int, G: Matrix) -> ConstraintMatrix:
    """Uncompressed matrix indexed by all of (A')^m."""
    mp = multipoint(X, m, G)
    labels = list(itertools.product(X.values, repeat=m))
    idx = {v: i for i, v in enumerate(labels)}
    M = _zeros(len(labels))
    for (u, v, t), n in mp.full.items():
        M[idx[u]][idx[v]] += n * qm(X.d, m, k, mp.G, u, v, t)
    return ConstraintMatrix("alt-mpt-full", M, labels, {"m": m, "k": k, "G": mp.G})


def build_alt_multipoint(X: Configuration, m: int, k: int, G: Matrix) -> ConstraintMatrix:
    """Compressed multi-point matrix: order s^m + 1 for k = 0 and s^m for k >= 1."""
    if not 1 <= m <= MAX_M:
        raise ValueError(f"m must be in 1..{MAX_M}")
    mp = multipoint(X, m, G)
    Gq = mp.G
    vecs = _vectors(X, m)
    labels = ([ONE] if k == 0 else []) + vecs
    idx = {v: i for i, v in enumerate(labels)}
    M = _zeros(len(labels))
    col1 = tuple(Gq[i][0] for i in range(m))
    for (u, v, t), n in mp.full.items():
        if k == 0:
            # every G_(p) slot collapses onto the all-ones slot
            if 1 in u and u != col1 or 1 in v and v != col1:
                continue
            M[idx[ONE if 1 in u else u]][idx[ONE if 1 in v else v]] += n
        elif 1 not in u and 1 not in v:
            M[idx[u]][idx[v]] += n * qm(X.d, m, k, Gq, u, v, t)
    return ConstraintMatrix("alt-mpt", M, labels, {"m": m, "k": k, "G": Gq})


def default_G(alpha: Fraction, m: int) -> tuple[tuple[Fraction, ...], ...]:
    """All-positive m x m Gram matrix with off-diagonal alpha."""
    return tuple(tuple(Fraction(1) if i == j else alpha for j in range(m)) for i in range(m))


def reduced_labels(alpha: Fraction, m: int, k: int) -> list:
    vecs = [tuple(s * alpha for s in sv) for sv in gm.iter_sign_vectors(m, first_positive=True)]
    return ([ONE] if k == 0 else []) + vecs


def build_reduced(
    X: Configuration, m: int, k: int, G: Optional[Matrix] = None, tables=None
) -> ConstraintMatrix:
    """Switching-reduced matrix with u_1 = v_1 = alpha."""
    if not 1 <= m <= MAX_M:
        raise ValueError(f"m must be in 1..{MAX_M}")
    alpha = X.require_equiangular() if X.N >= 2 else X.alpha
    if alpha is None:
        raise ValueError("alpha must be given for configurations with fewer than two points")
    if tables is None:
        tables = {lvl: class_distribution(X, lvl) for lvl in (m - 2, m - 1, m)}
    return assemble_reduced(alpha, X.d, m, k, G, tables)


def assemble_reduced(alpha, d, m: int, k: int, G: Optional[Matrix], tables) -> ConstraintMatrix:
    """Reduced matrix from class-count tables at levels m-2, m-1, m.

    Table values may be ints or any additive type supporting scalar products
    (the certificate passes formal linear forms here).
    """
    alpha = Fraction(alpha)
    if G is None:
        G = default_G(alpha, m)
    Gq = tuple(tuple(Fraction(x) for x in row) for row in G)
    labels = reduced_labels(alpha, m, k)
    idx = {v: i for i, v in enumerate(labels)}
    vecs = [lab for lab in labels if lab != ONE]
    M = _zeros(len(labels))

    def lower(u):
        rows = [list(r) + [u[i]] for i, r in enumerate(Gq)] + [list(u) + [Fraction(1)]]
        return tables[m - 1].value_of_gram(rows)

    if k == 0:
        M[0][0] += tables[m - 2].value_of_gram(Gq)
        for u in vecs:
            n = lower(u)
            i = idx[u]
            M[0][i] += n
            M[i][0] += n
            M[i][i] += n
    else:
        for u in vecs:
            i = idx[u]
            M[i][i] += lower(u) * qm(d, m, k, Gq, u, u, 1)
    for u in vecs:
        for v in vecs:
            for t in (alpha, -alpha):
                n = tables[m].value(Gq, u, v, t)
                if n:
                    w = 1 if k == 0 else qm(d, m, k, Gq, u, v, t)
                    M[idx[u]][idx[v]] += n * w
    return ConstraintMatrix("reduced", M, labels, {"m": m, "k": k, "G": Gq})


def _alt_entries(X: Configuration, m: int, k: int, G: Matrix) -> dict:
    """Entries of the compressed alternative matrix keyed by label pairs."""
    cm = build_alt_multipoint(X, m, k, G)
    return {
        (a, b): cm.matrix[i][j]
        for i, a in enumerate(cm.labels)
        for j, b in enumerate(cm.labels)
        if cm.matrix[i][j]
    }


def halved_identity_check(
    X: Configuration, m: int, k: int, G: Optional[Matrix] = None
) -> tuple[bool, list[list[Fraction]], list[list[Fraction]]]:
    """Sum of the sign-conjugated alternative matrices over all switchings of G
    against twice the reduced matrix.  Returns (equal, summed, 2 * reduced)."""
    alpha = X.require_equiangular()
    if G is None:
        G = default_G(alpha, m)
    reduced = build_reduced(X, m, k, G)
    idx = {v: i for i, v in enumerate(reduced.labels)}
    total = _zeros(reduced.order)

    def image(label, lam):
        if label == ONE:
            return ONE, 1
        u = tuple(l * x for l, x in zip(lam, label))
        if u[0] == alpha:
            return u, 1
        return tuple(-x for x in u), (-1) ** k

    for lam in itertools.product((1, -1), repeat=m):
        G2 = gm.switch(G, lam).entries
        for (a, b), val in _alt_entries(X, m, k, G2).items():
            ia, sa = image(a, lam)
            ib, sb = image(b, lam)
            total[idx[ia]][idx[ib]] += sa * sb * val
    twice = [[2 * x for x in row] for row in reduced.matrix]
    return total == twice, total, twice


def lp_values(X: Configuration, max_k: int) -> dict[int, Fraction]:
    return {k: lp_value(X, k) for k in range(1, max_k + 1)}


def all_constraints(X: Configuration, max_k: int) -> list[ConstraintMatrix]:
    """Every implemented constraint for m in {1, 2} and 0 <= k <= max_k."""
    out = []
    alpha = X.require_equiangular()
    tables = {lvl: class_distribution(X, lvl) for lvl in (-1, 0, 1, 2)}
    for k in range(max_k + 1):
        out.append(build_alt_threepoint(X, k))
        if X.d - 2 >= 2:
            out.append(build_alt_multipoint(X, 2, k, default_G(alpha, 2)))
        out.append(build_reduced(X, 1, k, tables={l: tables[l] for l in (-1, 0, 1)}))
        if X.d - 2 >= 2:
            out.append(build_reduced(X, 2, k, tables={l: tables[l] for l in (0, 1, 2)}))
    return out
