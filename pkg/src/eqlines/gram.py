"""Gram matrices, switching, and switching classes of +-alpha sign patterns.

A sign pattern of order n is stored as an int over the upper-triangle pairs
(0,1), (0,2), ..., (n-2,n-1); the first pair is the most significant bit and a
set bit means -alpha.  Integer order is therefore lexicographic order on the
+/- string with '+' < '-'.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .exactmath import Matrix, Number, Q, is_positive_definite, is_symmetric

MAX_EXHAUSTIVE = 7


class MixedMagnitudes(ValueError):
    pass


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not is_symmetric(self.entries):
            raise ValueError("Gram matrix must be symmetric")
        if any(self.entries[i][i] != 1 for i in range(len(self.entries))):
            raise ValueError("Gram matrix must have unit diagonal")

    @classmethod
    def of(cls, rows: Matrix) -> "GramMatrix":
        return cls(tuple(tuple(Q(x) for x in row) for row in rows))

    @property
    def order(self) -> int:
        return len(self.entries)

    @property
    def is_proper(self) -> bool:
        return is_positive_definite(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


def switch(M: GramMatrix | Matrix, lam: Sequence[int]) -> GramMatrix:
    """Lambda M Lambda for a diagonal +-1 matrix given by its diagonal."""
    rows = M.entries if isinstance(M, GramMatrix) else M
    if len(lam) != len(rows):
        raise ValueError("switching vector has the wrong order")
    if any(x not in (1, -1) for x in lam):
        raise ValueError("switching entries must be +1 or -1")
    n = len(rows)
    return GramMatrix(
        tuple(tuple(lam[i] * lam[j] * Q(rows[i][j]) for j in range(n)) for i in range(n))
    )


# ---------------------------------------------------------------------------
# sign patterns


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(n), 2))


@lru_cache(maxsize=None)
def _pair_index(n: int) -> dict[tuple[int, int], int]:
    return {p: i for i, p in enumerate(pairs(n))}


def _bit(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    npairs = n * (n - 1) // 2
    return 1 << (npairs - 1 - _pair_index(n)[(i, j)])


def pattern_from_signs(signs: Matrix) -> int:
    """Pattern from a symmetric matrix whose off-diagonal entries are +-1."""
    n = len(signs)
    bits = 0
    for i, j in pairs(n):
        s = signs[i][j]
        if s not in (1, -1):
            raise MixedMagnitudes(f"entry ({i},{j}) = {s} is not a sign")
        if s == -1:
            bits |= _bit(n, i, j)
    return bits


def pattern_from_gram(M: GramMatrix | Matrix, alpha: Optional[Number] = None) -> int:
    rows = M.entries if isinstance(M, GramMatrix) else M
    n = len(rows)
    if n < 2:
        return 0
    alpha = abs(Q(rows[0][1])) if alpha is None else Q(alpha)
    if alpha <= 0:
        raise MixedMagnitudes("alpha must be positive")
    signs = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(0)
                continue
            x = Q(rows[i][j])
            if x == alpha:
                row.append(1)
            elif x == -alpha:
                row.append(-1)
            else:
                raise MixedMagnitudes(f"entry ({i},{j}) = {x} is not +-{alpha}")
        signs.append(row)
    return pattern_from_signs(signs)


def signs_from_pattern(bits: int, n: int) -> list[list[int]]:
    s = [[0] * n for _ in range(n)]
    for i, j in pairs(n):
        v = -1 if bits & _bit(n, i, j) else 1
        s[i][j] = s[j][i] = v
    return s


def gram_from_pattern(bits: int, n: int, alpha: Number) -> GramMatrix:
    alpha = Q(alpha)
    s = signs_from_pattern(bits, n)
    return GramMatrix(
        tuple(
            tuple(Fraction(1) if i == j else s[i][j] * alpha for j in range(n)) for i in range(n)
        )
    )


def pattern_string(bits: int, n: int) -> str:
    """Upper triangle as a string of '+' / '-' characters, row by row."""
    npairs = n * (n - 1) // 2
    return "".join("-" if bits >> (npairs - 1 - i) & 1 else "+" for i in range(npairs))


def switch_pattern(bits: int, n: int, lam: Sequence[int]) -> int:
    out = bits
    for i, j in pairs(n):
        if lam[i] * lam[j] == -1:
            out ^= _bit(n, i, j)
    return out


def permute_pattern(bits: int, n: int, perm: Sequence[int]) -> int:
    """Relabel vertex i as perm[i]."""
    out = 0
    for i, j in pairs(n):
        if bits & _bit(n, i, j):
            out |= _bit(n, perm[i], perm[j])
    return out


def switching_normal_form(bits: int, n: int) -> int:
    """Unique member of the switching class with every edge at vertex 0 positive."""
    out = bits
    for i, j in pairs(n):
        if i == 0:
            continue
        if (bits & _bit(n, 0, i) != 0) != (bits & _bit(n, 0, j) != 0):
            out ^= _bit(n, i, j)
    for j in range(1, n):
        out &= ~_bit(n, 0, j)
    return out


# vectorized tables, cached per order


@lru_cache(maxsize=None)
def _tables(n: int):
    npairs = n * (n - 1) // 2
    perms = list(itertools.permutations(range(n)))
    # weight[p, i]: value contributed by pair i after applying permutation p
    weight = np.zeros((len(perms), npairs), dtype=np.int64)
    for pi, perm in enumerate(perms):
        for idx, (i, j) in enumerate(pairs(n)):
            weight[pi, idx] = _bit(n, perm[i], perm[j])
    cuts = np.array(
        sorted({switch_pattern(0, n, (1,) + lam) for lam in itertools.product((1, -1), repeat=n - 1)}),
        dtype=np.int64,
    )
    return weight, cuts


def _bits_vector(bits: int, n: int) -> np.ndarray:
    npairs = n * (n - 1) // 2
    return np.array([(bits >> (npairs - 1 - i)) & 1 for i in range(npairs)], dtype=np.int64)


def _all_permutations(bits: int, n: int) -> np.ndarray:
    weight, _ = _tables(n)
    return weight @ _bits_vector(bits, n)


def _normalize_many(arr: np.ndarray, n: int) -> np.ndarray:
    out = arr.copy()
    for i, j in pairs(n):
        if i == 0:
            continue
        bi = (arr & _bit(n, 0, i)) != 0
        bj = (arr & _bit(n, 0, j)) != 0
        out ^= np.where(bi != bj, _bit(n, i, j), 0)
    mask = 0
    for j in range(1, n):
        mask |= _bit(n, 0, j)
    return out & ~mask


@dataclass(frozen=True, order=True)
class SwitchingClassKey:
    """Lexicographically minimal pattern over all switchings and permutations."""

    n: int
    bits: int

    def __str__(self) -> str:
        return pattern_string(self.bits, self.n)

    def signs(self) -> list[list[int]]:
        return signs_from_pattern(self.bits, self.n)


def canonical_key_of_pattern(bits: int, n: int) -> SwitchingClassKey:
    if n > MAX_EXHAUSTIVE:
        raise TooLarge(f"canonical form by brute force needs n <= {MAX_EXHAUSTIVE}")
    if n < 2:
        return SwitchingClassKey(n, 0)
    _, cuts = _tables(n)
    images = _all_permutations(bits, n)
    return SwitchingClassKey(n, int((images[:, None] ^ cuts[None, :]).min()))


def canonical_key(M: GramMatrix | Matrix, alpha: Optional[Number] = None) -> SwitchingClassKey:
    rows = M.entries if isinstance(M, GramMatrix) else M
    return canonical_key_of_pattern(pattern_from_gram(rows, alpha), len(rows))


def enumerate_classes(n: int) -> list[SwitchingClassKey]:
    """All switching-and-permutation classes of order n, sorted by key."""
    if n < 1:
        raise ValueError("order must be positive")
    if n > MAX_EXHAUSTIVE:
        raise TooLarge(f"exhaustive enumeration is limited to n <= {MAX_EXHAUSTIVE}")
    if n < 3:
        return [SwitchingClassKey(n, 0)]
    # every class has a representative with vertex 0 joined positively to all others
    free = (n - 1) * (n - 2) // 2
    seen = np.zeros(1 << free, dtype=bool)
    _, cuts = _tables(n)
    keys = []
    for normal in range(1 << free):
        if seen[normal]:
            continue
        images = _all_permutations(normal, n)
        seen[_normalize_many(images, n)] = True
        keys.append(SwitchingClassKey(n, int((images[:, None] ^ cuts[None, :]).min())))
    return sorted(keys)


def class_sizes(n: int) -> dict[SwitchingClassKey, int]:
    """Number of sign patterns in each class (used for the orbit-partition check)."""
    counts: dict[SwitchingClassKey, int] = {}
    for bits in range(1 << (n * (n - 1) // 2)):
        k = canonical_key_of_pattern(bits, n)
        counts[k] = counts.get(k, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# extended Gram matrices (G; u, v, t)


def extended_gram(G: Matrix, u: Sequence[Number], v: Sequence[Number], t: Number) -> GramMatrix:
    rows = G.entries if isinstance(G, GramMatrix) else G
    m = len(rows)
    out = [[Q(x) for x in r] + [Q(u[i]), Q(v[i])] for i, r in enumerate(rows)]
    out.append([Q(x) for x in u] + [Fraction(1), Q(t)])
    out.append([Q(x) for x in v] + [Q(t), Fraction(1)])
    assert len(out) == m + 2
    return GramMatrix.of(out)


def split_extended(E: GramMatrix):
    m = E.order - 2
    rows = E.entries
    G = tuple(tuple(r[:m]) for r in rows[:m])
    u = tuple(rows[i][m] for i in range(m))
    v = tuple(rows[i][m + 1] for i in range(m))
    return G, u, v, rows[m][m + 1]


def switching_orbit(G: Matrix, u: Sequence[Number], v: Sequence[Number], t: Number) -> list:
    """All distinct (G', u', v', t') in the switching class of (G; u, v, t)."""
    rows = G.entries if isinstance(G, GramMatrix) else G
    m = len(rows)
    base = extended_gram(rows, u, v, t)
    seen = {}
    for lam in itertools.product((1, -1), repeat=m + 2):
        E = switch(base, lam)
        seen.setdefault(E.entries, split_extended(E))
    return [seen[k] for k in sorted(seen)]


def iter_sign_vectors(m: int, first_positive: bool = False) -> Iterable[tuple[int, ...]]:
    if m == 0:
        yield ()
        return
    head = (1,) if first_positive else (1, -1)
    for s0 in head:
        for rest in itertools.product((1, -1), repeat=m - 1):
            yield (s0,) + rest
