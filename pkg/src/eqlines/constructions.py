"""The built-in 28-line configuration, Gram file I/O, and extremal-structure audits."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .constraints import build_reduced
from .distributions import Configuration, NotEquiangular, class_distribution
from .exactmath import PsdResult, Q, UniPoly, charpoly, psd_check, rank

__all__ = [
    "gen28",
    "write_configuration",
    "load_configuration",
    "parse_configuration",
    "rank1_audit",
    "two_fixed_point",
    "srg_extract",
    "lambda_identity_check",
]


class ParseError(ValueError):
    pass


class NotPSD(ValueError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


class RankExceedsDimension(ValueError):
    pass


class NotExtremal(ValueError):
    pass


class NotStronglyRegular(ValueError):
    def __init__(self, msg: str, pair=None):
        super().__init__(msg)
        self.pair = pair


def gen28() -> Configuration:
    """28 equiangular lines in R^7 with inner products +-1/3.

    Vectors v_ij (i < j in 1..8) have 3 at positions i, j and -1 elsewhere,
    scaled by 1/sqrt(24); they are orthogonal to the all-ones vector.
    """
    labels = list(itertools.combinations(range(8), 2))
    third = Fraction(1, 3)
    rows = []
    for a in labels:
        row = []
        for b in labels:
            shared = len(set(a) & set(b))
            row.append(Fraction(1) if shared == 2 else third if shared == 1 else -third)
        rows.append(tuple(row))
    return Configuration(tuple(rows), d=7, alpha=third)


def gen28_vectors() -> list[list[int]]:
    """Unnormalized integer coordinates of the 28 vectors (norm^2 = 24)."""
    out = []
    for i, j in itertools.combinations(range(8), 2):
        out.append([3 if p in (i, j) else -1 for p in range(8)])
    return out


# ---------------------------------------------------------------------------
# Gram text format


def format_configuration(X: Configuration) -> str:
    alpha = X.alpha if X.alpha is not None else X.require_equiangular()
    lines = [f"{X.N} {X.d} {alpha.numerator}/{alpha.denominator}"]
    for row in X.gram:
        lines.append(" ".join(str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}" for x in row))
    return "\n".join(lines) + "\n"


def write_configuration(X: Configuration, path: Union[str, Path]) -> None:
    Path(path).write_text(format_configuration(X))


def _parse_rational(tok: str, where: str) -> Fraction:
    try:
        num, _, den = tok.partition("/")
        if den and int(den) == 0:
            raise ZeroDivisionError
        return Fraction(int(num), int(den)) if den else Fraction(int(num))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: bad rational {tok!r}") from None


def parse_configuration(
    text: str, alpha: Optional[Fraction] = None, validate: bool = True
) -> Configuration:
    rows = []
    header = None
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        toks = s.split()
        if header is None:
            if len(toks) != 3:
                raise ParseError(f"line {lineno}: header must be 'N d alpha'")
            try:
                header = (int(toks[0]), int(toks[1]))
            except ValueError:
                raise ParseError(f"line {lineno}: N and d must be integers") from None
            file_alpha = _parse_rational(toks[2], f"line {lineno}")
            continue
        rows.append([_parse_rational(t, f"line {lineno}") for t in toks])
    if header is None:
        raise ParseError("missing header line")
    N, d = header
    if len(rows) != N or any(len(r) != N for r in rows):
        raise ParseError(f"expected {N} rows of {N} entries")
    if alpha is None:
        alpha = file_alpha
    alpha = Q(alpha)
    if file_alpha != alpha:
        raise NotEquiangular(f"file declares alpha = {file_alpha}, expected {alpha}")
    for i in range(N):
        if rows[i][i] != 1:
            raise ParseError(f"diagonal entry {i} is {rows[i][i]}, not 1")
        for j in range(N):
            if rows[i][j] != rows[j][i]:
                raise ParseError(f"not symmetric at ({i},{j})")
            if i != j and rows[i][j] not in (alpha, -alpha):
                raise NotEquiangular(f"entry ({i},{j}) = {rows[i][j]} is not +-{alpha}")
    X = Configuration(tuple(tuple(r) for r in rows), d, alpha)
    if validate:
        validate_configuration(X)
    return X


def validate_configuration(X: Configuration) -> None:
    res = psd_check(X.gram)
    if not res:
        raise NotPSD("Gram matrix is not positive semidefinite", res.witness)
    r = rank(X.gram)
    if r > X.d:
        raise RankExceedsDimension(f"Gram rank {r} exceeds dimension {X.d}")


def load_configuration(path: Union[str, Path], alpha=None, validate: bool = True) -> Configuration:
    return parse_configuration(Path(path).read_text(), None if alpha is None else Q(alpha), validate)


# ---------------------------------------------------------------------------
# extremal audits


def extremal_vector(a: int) -> tuple[Fraction, Fraction, Fraction]:
    return (
        Fraction(1),
        Fraction((a + 1) ** 3 * (a - 2), 4),
        Fraction((a - 1) ** 3 * (a + 2), 4),
    )


def odd_parameter(X: Configuration) -> Optional[int]:
    alpha = X.require_equiangular()
    inv = 1 / alpha
    return inv.numerator if inv.denominator == 1 else None


@dataclass
class Rank1Audit:
    rank: int
    vector: Optional[tuple[Fraction, ...]] = None
    matches_extremal: bool = False
    matrix: list = field(default_factory=list, repr=False)

    @property
    def is_rank1(self) -> bool:
        return self.rank == 1


def rank1_audit(X: Configuration) -> Rank1Audit:
    """Rank of the reduced four-point k = 0 matrix and its generator when rank 1."""
    cm = build_reduced(X, 2, 0)
    r = cm.rank()
    if r != 1:
        return Rank1Audit(r, matrix=cm.matrix)
    row = cm.matrix[0]
    vec = tuple(x / row[0] for x in row)
    a = odd_parameter(X)
    match = a is not None and vec == extremal_vector(a)
    return Rank1Audit(1, vec, match, cm.matrix)


def two_fixed_point(X: Configuration, b: int, b2: int) -> tuple[int, int]:
    """(N_{b,b'}, N'_{b,b'}): points completing an all-positive / mixed triangle."""
    if not (0 <= b < X.N and 0 <= b2 < X.N):
        raise IndexError("index out of range")
    if b == b2:
        raise ValueError("b and b' must differ")
    S = X.signs
    tri = S[b, b2] * S[b] * S[b2]
    mask = np.ones(X.N, dtype=bool)
    mask[[b, b2]] = False
    n = int((tri[mask] == 1).sum())
    return n, X.N - 2 - n


def all_two_fixed_points(X: Configuration) -> set[tuple[int, int]]:
    """Distinct (N_{b,b'}, N'_{b,b'}) values over all ordered pairs."""
    S = X.signs
    out = set()
    for b in range(X.N):
        P = S * S[b][:, None] * S[b][None, :]  # triangle signs through b
        for b2 in range(X.N):
            if b2 == b:
                continue
            row = P[b2].copy()
            row[b] = 0
            n = int((row == 1).sum())
            out.add((n, X.N - 2 - n))
    return out


def srg_parameters(a: int) -> tuple[int, int, int, int]:
    v = a * a * (a * a - 3) // 2
    k = (a + 1) ** 3 * (a - 2) // 4
    lam = (a + 1) * (a + 2) * (a * a - 5) // 8
    mu = (a + 1) ** 3 * (a - 2) // 8
    return v, k, lam, mu


@dataclass
class SrgReport:
    v: int
    k: int
    lam: int
    mu: int
    spectrum: dict[Fraction, int]
    gram_spectrum: dict[Fraction, int]
    a: int
    base: int = 0
    adjacency: Optional[np.ndarray] = field(default=None, repr=False)
    derived_gram: Optional[list] = field(default=None, repr=False)

    @property
    def params(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)


def derived_code(X: Configuration, base: int = 0):
    """Adjacency of the derived-code graph and the derived-code Gram matrix.

    Points with negative inner product with the base are negated first, then
    projected onto the orthogonal complement of the base and renormalized.
    """
    alpha = X.require_equiangular()
    S = X.signs
    flip = S[base].copy()
    flip[base] = 1
    T = S * flip[:, None] * flip[None, :]
    keep = [i for i in range(X.N) if i != base]
    T = T[np.ix_(keep, keep)]
    M = (T == 1).astype(np.int64)
    proj = [
        [
            Fraction(1) if i == j else (int(T[i, j]) * alpha - alpha * alpha) / (1 - alpha * alpha)
            for j in range(len(keep))
        ]
        for i in range(len(keep))
    ]
    return M, proj


def srg_extract(X: Configuration, base: int = 0, check_charpoly: bool = False) -> SrgReport:
    a = odd_parameter(X)
    if a is None or a < 3 or a % 2 == 0:
        raise NotExtremal("1/alpha must be an odd integer >= 3")
    if X.N != (a * a - 1) * (a * a - 2) // 2:
        raise NotExtremal(f"N = {X.N} is not (a^2-1)(a^2-2)/2 = {(a*a-1)*(a*a-2)//2}")
    M, proj = derived_code(X, base)
    v = M.shape[0]
    deg = M.sum(axis=1)
    if len(set(deg.tolist())) != 1:
        i = int(np.argmax(deg != deg[0]))
        raise NotStronglyRegular(f"vertex {i} has degree {deg[i]} != {deg[0]}", (0, i))
    k = int(deg[0])
    common = M @ M
    adj = M.astype(bool)
    off = ~np.eye(v, dtype=bool)
    lam_vals = set(common[adj].tolist())
    mu_vals = set(common[~adj & off].tolist())
    if len(lam_vals) > 1 or len(mu_vals) > 1:
        bad = lam_vals if len(lam_vals) > 1 else mu_vals
        mask = adj if len(lam_vals) > 1 else (~adj & off)
        vals = sorted(bad)
        ij = np.argwhere(mask & (common != vals[0]))[0]
        raise NotStronglyRegular("common-neighbour counts are not constant", tuple(int(x) for x in ij))
    lam = lam_vals.pop() if lam_vals else 0
    mu = mu_vals.pop() if mu_vals else 0
    expected = srg_parameters(a)
    if (v, k, lam, mu) != expected:
        raise NotStronglyRegular(f"parameters {(v, k, lam, mu)} differ from {expected}")

    spectrum = adjacency_spectrum(M, k, a, check_charpoly)
    gram_spec = derived_gram_spectrum(proj, a)
    return SrgReport(v, k, lam, mu, spectrum, gram_spec, a, base, M, proj)


def adjacency_spectrum(M: np.ndarray, k: int, a: int, check_charpoly: bool = False) -> dict:
    """Spectrum {k, k/(a+1), -(a+1)/2} with multiplicities, verified exactly.

    Multiplicities come from the trace identities; the minimal polynomial
    (x-k)(x-r)(x-s) annihilating M confirms there are no other eigenvalues.
    """
    v = M.shape[0]
    r = Fraction(k, a + 1)
    s = Fraction(-(a + 1), 2)
    if r.denominator != 1 or s.denominator != 1:
        raise NotStronglyRegular("candidate eigenvalues are not integral")
    ri, si = int(r), int(s)
    eye = np.eye(v, dtype=np.int64)
    prod = (M - k * eye) @ (M - ri * eye) @ (M - si * eye)
    if prod.any():
        raise NotStronglyRegular("(M-k)(M-r)(M-s) != 0")
    if (M @ np.ones(v, dtype=np.int64) != k).any():
        raise NotStronglyRegular("all-ones vector is not a k-eigenvector")
    # f + g = v - 1 and k + f r + g s = trace(M) = 0
    f = Fraction(-k - (v - 1) * s, r - s)
    g = v - 1 - f
    tr2 = int((M * M).sum())
    if f.denominator != 1 or f < 0 or g < 0 or k * k + f * r * r + g * s * s != tr2:
        raise NotStronglyRegular("multiplicities inconsistent with traces")
    spec = {Fraction(k): 1, r: int(f), s: int(g)}
    if r == k:
        spec = {Fraction(k): 1 + int(f), s: int(g)}
    if check_charpoly:
        cp = charpoly(M.tolist())
        x = UniPoly.x()
        expected = (x - k) * (x - r) ** int(f) * (x - s) ** int(g)
        if cp != expected:
            raise NotStronglyRegular("characteristic polynomial does not factor as expected")
    return spec


def derived_gram_spectrum(proj: Sequence[Sequence[Fraction]], a: int) -> dict:
    """Spectrum of the derived-code Gram D: D^2 = (a^2/2) D, with rank giving multiplicities."""
    scale = a * a - 1
    E = np.array([[int(x * scale) for x in row] for row in proj], dtype=np.int64)
    lam = Fraction(a * a, 2)
    # (E/scale)^2 = lam E/scale  <=>  E^2 = lam * scale * E
    lhs = E @ E
    rhs = lam * scale
    if rhs.denominator != 1 or (lhs != int(rhs) * E).any():
        raise NotStronglyRegular("derived-code Gram is not a multiple of a projection")
    r = rank(proj)
    v = len(proj)
    spec = {lam: r, Fraction(0): v - r}
    if sum((x * c for x, c in spec.items()), Fraction(0)) != v:
        raise NotStronglyRegular("trace of derived-code Gram disagrees with spectrum")
    return spec


def lambda_identity_check(report: SrgReport, a: Optional[int] = None) -> bool:
    """lambda == (3k - v - 1)/2, and lambda matches (a+1)(a+2)(a^2-5)/8 when a is given."""
    ok = Fraction(3 * report.k - report.v - 1, 2) == report.lam
    if a is not None:
        ok = ok and Fraction((a + 1) * (a + 2) * (a * a - 5), 8) == report.lam
    return ok


def psd_witness(X: Configuration) -> PsdResult:
    return psd_check(X.gram)


def class_values(X: Configuration) -> dict[str, int]:
    out = {}
    for m in (1, 2):
        out.update(class_distribution(X, m).named())
    return out
