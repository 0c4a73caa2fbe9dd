"""Distance distributions of concrete configurations, raw and switching-summed.

All counts are over *ordered* tuples.  Counting runs on small integer code
arrays with numpy; every result is an exact Python int.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import perm
from typing import Optional, Sequence

import numpy as np

from . import gram as gm
from .exactmath import Matrix, Number, Q
from .gegenbauer import ImproperGram

WORKERS_ENV = "EQLINES_WORKERS"


class NotEquiangular(ValueError):
    pass


def workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True, eq=False)
class Configuration:
    """A finite set of unit vectors given by its exact Gram matrix."""

    gram: tuple[tuple[Fraction, ...], ...]
    d: int
    alpha: Optional[Fraction] = None

    def __post_init__(self):
        g = tuple(tuple(Q(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(r) != n for r in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][i] != 1 for i in range(n)):
            raise ValueError("Gram matrix must have unit diagonal")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Gram matrix must be symmetric")
        if self.alpha is not None:
            object.__setattr__(self, "alpha", Q(self.alpha))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Configuration)
            and self.gram == other.gram
            and self.d == other.d
            and self.alpha == other.alpha
        )

    def __hash__(self) -> int:
        return hash((self.gram, self.d, self.alpha))

    @property
    def N(self) -> int:
        return len(self.gram)

    @cached_property
    def values(self) -> tuple[Fraction, ...]:
        """A'(X): inner products, 1 first then the rest in decreasing order."""
        off = {x for i, r in enumerate(self.gram) for j, x in enumerate(r) if i != j}
        off.discard(Fraction(1))
        return (Fraction(1),) + tuple(sorted(off, reverse=True))

    @property
    def inner_products(self) -> tuple[Fraction, ...]:
        return self.values[1:]

    @cached_property
    def codes(self) -> np.ndarray:
        index = {v: i for i, v in enumerate(self.values)}
        return np.array([[index[x] for x in row] for row in self.gram], dtype=np.int64)

    @cached_property
    def signs(self) -> np.ndarray:
        """+-1 off the diagonal, 0 on it; requires an equiangular configuration."""
        a = self.require_equiangular()
        s = np.zeros((self.N, self.N), dtype=np.int64)
        for i, row in enumerate(self.gram):
            for j, x in enumerate(row):
                if i != j:
                    s[i, j] = 1 if x == a else -1
        return s

    def require_equiangular(self) -> Fraction:
        a = self.alpha
        if a is None:
            if self.N < 2:
                raise NotEquiangular("cannot infer alpha from fewer than two points")
            a = abs(self.gram[0][1])
        for i, row in enumerate(self.gram):
            for j, x in enumerate(row):
                if i != j and x not in (a, -a):
                    raise NotEquiangular(f"entry ({i},{j}) = {x} is not +-{a}")
        return a

    def switched(self, lam: Sequence[int]) -> "Configuration":
        return Configuration(gm.switch(self.gram, lam).entries, self.d, self.alpha)

    def subset(self, idx: Sequence[int]) -> "Configuration":
        return Configuration(
            tuple(tuple(self.gram[i][j] for j in idx) for i in idx), self.d, self.alpha
        )

    def permuted(self, order: Sequence[int]) -> "Configuration":
        return self.subset(order)


# ---------------------------------------------------------------------------
# raw distributions


def two_point(X: Configuration) -> dict[Fraction, int]:
    """x(t) for t in A'(X); x(1) = N."""
    counts = np.bincount(X.codes.ravel(), minlength=len(X.values))
    return {X.values[i]: int(c) for i, c in enumerate(counts) if c}


def three_point(X: Configuration) -> dict[tuple[Fraction, Fraction, Fraction], int]:
    """y(u, v, t) over all ordered triples in X^3, inner products in A'(X)."""
    s = len(X.values)
    C = X.codes
    total = np.zeros(s**3, dtype=np.int64)
    for b in range(X.N):
        key = (C[b][:, None] * s + C[b][None, :]) * s + C
        total += np.bincount(key.ravel(), minlength=s**3)
    out = {}
    for idx in np.nonzero(total)[0]:
        u, rest = divmod(int(idx), s * s)
        v, t = divmod(rest, s)
        out[(X.values[u], X.values[v], X.values[t])] = int(total[idx])
    return out


@dataclass
class Multipoint:
    """Raw counts N_m(G; u, v, t), N_{m-1}(G; u) and N_{m-2}(G) for one G."""

    m: int
    G: tuple[tuple[Fraction, ...], ...]
    full: dict[tuple, int]
    lower: dict[tuple, int]
    base: int

    def __call__(self, u, v, t) -> int:
        return self.full.get((tuple(Q(x) for x in u), tuple(Q(x) for x in v), Q(t)), 0)


def _ordered_bases(X: Configuration, G: Matrix) -> list[tuple[int, ...]]:
    m = len(G)
    out = []

    def extend(prefix):
        p = len(prefix)
        if p == m:
            out.append(tuple(prefix))
            return
        for j in range(X.N):
            if all(X.gram[prefix[q]][j] == G[q][p] for q in range(p)):
                extend(prefix + [j])

    extend([])
    return out


def multipoint(X: Configuration, m: int, G: Matrix) -> Multipoint:
    """Count ordered (B, c, c') in X^{m+2} whose extended Gram is (G; u, v, t)."""
    Gq = tuple(tuple(Q(x) for x in row) for row in G)
    if len(Gq) != m:
        raise ValueError("G must be m x m")
    if m and not gm.GramMatrix(Gq).is_proper:
        raise ImproperGram("G must be positive definite")
    s = len(X.values)
    C = X.codes
    nu = s**m
    full = np.zeros(nu * nu * s, dtype=np.int64)
    lower = np.zeros(nu, dtype=np.int64)
    bases = _ordered_bases(X, Gq)
    for B in bases:
        ucode = np.zeros(X.N, dtype=np.int64)
        for b in B:
            ucode = ucode * s + C[b]
        lower += np.bincount(ucode, minlength=nu)
        key = (ucode[:, None] * nu + ucode[None, :]) * s + C
        full += np.bincount(key.ravel(), minlength=nu * nu * s)

    def decode(code: int) -> tuple[Fraction, ...]:
        digits = []
        for _ in range(m):
            code, r = divmod(code, s)
            digits.append(X.values[r])
        return tuple(reversed(digits))

    raw = {}
    for idx in np.nonzero(full)[0]:
        uv, t = divmod(int(idx), s)
        u, v = divmod(uv, nu)
        raw[(decode(u), decode(v), X.values[t])] = int(full[idx])
    low = {decode(int(i)): int(lower[i]) for i in np.nonzero(lower)[0]}
    return Multipoint(m, Gq, raw, low, len(bases))


def degeneration_violations(mp: Multipoint) -> list[str]:
    """Check the three degeneration rules for raw multipoint counts; [] when all hold."""
    G = mp.G
    m = mp.m
    cols = [tuple(G[i][p] for i in range(m)) for p in range(m)]
    bad = []
    for (u, v, t), n in mp.full.items():
        if not n:
            continue
        ps = [p for p in range(m) if u[p] == 1]
        qs = [q for q in range(m) if v[q] == 1]
        if ps and qs:
            p, q = ps[0], qs[0]
            if not (u == cols[p] and v == cols[q] and t == G[p][q] and n == mp.base):
                bad.append(f"(a) at {(u, v, t)}")
        elif ps:
            p = ps[0]
            if not (u == cols[p] and t == v[p] and n == mp.lower.get(v, 0)):
                bad.append(f"(b) at {(u, v, t)}")
        elif qs:
            q = qs[0]
            if not (v == cols[q] and t == u[q] and n == mp.lower.get(u, 0)):
                bad.append(f"(b') at {(u, v, t)}")
        if t == 1 and not (u == v and n == mp.lower.get(u, 0)):
            bad.append(f"(c) at {(u, v, t)}")
    # the converse direction: every predicted degenerate count is present
    for p in range(m):
        for v, n in mp.lower.items():
            if mp(cols[p], v, v[p]) != n:
                bad.append(f"(b) missing at u=G_({p}), v={v}")
    for u, n in mp.lower.items():
        if mp(u, u, 1) != n:
            bad.append(f"(c) missing at u=v={u}")
    return bad


# ---------------------------------------------------------------------------
# switching-class distributions


def normal_key(signs: Sequence[Sequence[int]]) -> int:
    """Switching normal form (vertex 0 all positive) of a small sign pattern."""
    return gm.switching_normal_form(gm.pattern_from_signs(signs), len(signs))


@dataclass
class DistributionTable:
    """Switching-class counts N_m[.] for ordered (m+2)-tuples of distinct points.

    ``counts`` maps the switching normal form of the (m+2)-point sign pattern
    to its count; ``raw`` (brute-force path only) maps unnormalized patterns.
    """

    m: int
    N: int
    alpha: Fraction
    counts: dict[int, int]
    raw: Optional[dict[int, int]] = field(default=None, repr=False)

    @property
    def npoints(self) -> int:
        return self.m + 2

    def total(self) -> int:
        return sum(self.counts.values())

    def value_of_signs(self, signs: Sequence[Sequence[int]]) -> int:
        return self.counts.get(normal_key(signs), 0)

    def value(self, G: Matrix, u: Sequence[Number], v: Sequence[Number], t: Number) -> int:
        """N_m[G; u, v, t] for entries +-alpha."""
        return self.value_of_gram(gm.extended_gram(G, u, v, t).entries)

    def value_of_gram(self, rows: Matrix) -> int:
        """Class count of an arbitrary (m+2)-point Gram matrix with entries +-alpha."""
        bits = gm.pattern_from_gram(rows, self.alpha)
        return self.counts.get(gm.switching_normal_form(bits, len(rows)), 0)

    def by_seidel_class(self) -> dict[gm.SwitchingClassKey, set[int]]:
        """Values grouped by switching-and-permutation class (each set should be a singleton)."""
        n = self.npoints
        out: dict[gm.SwitchingClassKey, set[int]] = {}
        for bits in range(1 << ((n - 1) * (n - 2) // 2)):
            key = gm.canonical_key_of_pattern(bits, n)
            out.setdefault(key, set()).add(self.counts.get(bits, 0))
        return out

    def named(self) -> dict[str, int]:
        """y1, y2 for m = 1 and z1, z2, z3 for m = 2."""
        if self.m == 1:
            return {"y1": self.value_of_signs(_s3(1)), "y2": self.value_of_signs(_s3(-1))}
        if self.m == 2:
            return {
                "z1": self.value_of_signs(_s4(1, 1, 1)),
                "z2": self.value_of_signs(_s4(1, 1, -1)),
                "z3": self.value_of_signs(_s4(-1, -1, -1)),
            }
        if self.m == 0:
            return {"x": self.total()}
        return {}


def _s3(t: int) -> list[list[int]]:
    return [[0, 1, 1], [1, 0, t], [1, t, 0]]


def _s4(u2: int, v2: int, t: int) -> list[list[int]]:
    return [[0, 1, 1, 1], [1, 0, u2, v2], [1, u2, 0, t], [1, v2, t, 0]]


def _count_chunk(args) -> dict[int, int]:
    S, npoints, b1s = args
    n = S.shape[0]
    out: dict[int, int] = {}
    if npoints == 3:
        b = gm._bit(3, 1, 2)
        for b1 in b1s:
            P = S * S[b1][:, None] * S[b1][None, :]
            plus = int((P == 1).sum())
            minus = int((P == -1).sum())
            out[0] = out.get(0, 0) + plus
            out[b] = out.get(b, 0) + minus
        return out
    bu, bv, bt = gm._bit(4, 1, 2), gm._bit(4, 1, 3), gm._bit(4, 2, 3)
    for b1 in b1s:
        P = S * S[b1][:, None] * S[b1][None, :]
        ind = {s: (P == s).astype(np.float64) for s in (1, -1)}
        for su in (1, -1):
            for st in (1, -1):
                prod = ind[su] @ ind[st]
                for sv in (1, -1):
                    c = int(round(float((prod * ind[sv]).sum())))
                    key = (bu if su < 0 else 0) | (bv if sv < 0 else 0) | (bt if st < 0 else 0)
                    out[key] = out.get(key, 0) + c
    del n
    return out


def class_distribution(X: Configuration, m: int) -> DistributionTable:
    """Switching-class distribution of ordered (m+2)-tuples of distinct points."""
    alpha = X.require_equiangular() if X.N >= 2 else (X.alpha or Fraction(0))
    npoints = m + 2
    if npoints < 0:
        raise ValueError("m must be >= -2")
    N = X.N
    if npoints == 0:
        # the single empty tuple
        return DistributionTable(m, N, alpha, {0: 1})
    if npoints > N:
        return DistributionTable(m, N, alpha, {})
    if npoints == 1:
        return DistributionTable(m, N, alpha, {0: N})
    if npoints == 2:
        return DistributionTable(m, N, alpha, {0: N * (N - 1)})
    if npoints > 4:
        return class_distribution_bruteforce(X, m)
    S = X.signs
    nw = workers()
    chunks = [list(range(N))[i::nw] for i in range(nw)]
    if nw == 1:
        parts = [_count_chunk((S, npoints, chunks[0]))]
    else:
        with ProcessPoolExecutor(nw) as ex:
            parts = list(ex.map(_count_chunk, [(S, npoints, c) for c in chunks]))
    counts: dict[int, int] = {}
    for part in parts:
        for k, v in part.items():
            counts[k] = counts.get(k, 0) + v
    counts = {k: v for k, v in counts.items() if v}
    return DistributionTable(m, N, alpha, _drop_improper(counts, npoints, m, alpha))


def _drop_improper(counts: dict[int, int], npoints: int, m: int, alpha: Fraction) -> dict[int, int]:
    if m < 2:
        return counts
    out = {}
    for bits, c in counts.items():
        E = gm.gram_from_pattern(bits, npoints, alpha)
        G = [list(r[:m]) for r in E.entries[:m]]
        if gm.GramMatrix.of(G).is_proper:
            out[bits] = c
    return out


def class_distribution_bruteforce(X: Configuration, m: int) -> DistributionTable:
    """Reference scan over every ordered tuple of distinct points."""
    alpha = X.require_equiangular()
    npoints = m + 2
    S = X.signs.tolist()
    counts: dict[int, int] = {}
    raw: dict[int, int] = {}
    pp = gm.pairs(npoints)
    npairs = len(pp)
    for tup in itertools.permutations(range(X.N), npoints):
        bits = 0
        norm = 0
        i0 = tup[0]
        for idx, (a, b) in enumerate(pp):
            ia, ib = tup[a], tup[b]
            bit = 1 << (npairs - 1 - idx)
            if S[ia][ib] < 0:
                bits |= bit
            if a and S[i0][ia] * S[i0][ib] * S[ia][ib] < 0:
                norm |= bit
        counts[norm] = counts.get(norm, 0) + 1
        raw[bits] = raw.get(bits, 0) + 1
    return DistributionTable(m, X.N, alpha, _drop_improper(counts, npoints, m, alpha), raw)


def orbit_sum(mps: dict[tuple, Multipoint], G: Matrix, u, v, t) -> int:
    """Sum raw counts over the switching orbit of (G; u, v, t).

    ``mps`` maps each m x m Gram matrix (as a tuple of tuples) to its raw counts.
    """
    total = 0
    for G2, u2, v2, t2 in gm.switching_orbit(G, u, v, t):
        mp = mps.get(G2)
        if mp is not None:
            total += mp(u2, v2, t2)
    return total


def factorial_identities(X: Configuration, m: int) -> dict[str, tuple[int, int]]:
    """Class sums at levels m, m-1, m-2 against N!/(N-j)!, returned as (lhs, rhs) pairs."""
    N = X.N
    out = {}
    for level in (m, m - 1, m - 2):
        table = class_distribution(X, level)
        out[f"N_{level}"] = (table.total(), perm(N, level + 2))
    return out
