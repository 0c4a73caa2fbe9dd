"""The four-point dual certificate for equiangular lines with angle arccos(1/a).

Three independent routes produce the dual data (F, f1, f2):

* ``solve_certificate`` solves the eight coefficient equations directly,
  with kernel weights from :func:`eqlines.gegenbauer.qm`;
* ``closed_forms`` evaluates rational closed forms for f1, f2, F0, F3, F5 and the minors;
* ``pairing_system`` rebuilds the coefficient equations by pairing formal
  reduced matrices (class counts as symbols) against unknown dual entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import gram as gm
from .constraints import assemble_reduced, default_G
from .distributions import DistributionTable
from .exactmath import (
    NoRealRoot,
    Number,
    Q,
    Singular,
    UniPoly,
    cauchy_bound,
    determinant,
    isolate_max_root,
    psd_check,
    real_root_count,
    solve_linear,
    sturm_chain,
    sturm_count,
    squarefree_part,
)
from .gegenbauer import qm

VARIABLES = ("NN1", "y1", "y2", "z1", "z2", "z3")
UNKNOWNS = ("F0", "F1", "F2", "F3", "F4", "F5", "f1", "f2")
MINOR_NAMES = ("F0", "F3", "F5", "F0F3-F1^2", "F0F5-F2^2", "F3F5-F4^2", "det F")


class BadA(ValueError):
    pass


class SingularSystem(ValueError):
    pass


def _check_a(a: int) -> None:
    if not isinstance(a, int) or a < 3 or a % 2 == 0:
        raise BadA(f"a must be an odd integer >= 3, got {a!r}")


def bound(a: int) -> int:
    return (a * a - 1) * (a * a - 2) // 2


def d3(a: int) -> int:
    return 3 * a * a - 16


# ---------------------------------------------------------------------------
# g_a


@dataclass(frozen=True)
class GaPolynomial:
    a: int
    poly: UniPoly

    def __call__(self, x: Number) -> Fraction:
        return self.poly(x)


def ga_coefficients(a: int) -> list[int]:
    """Ascending coefficients of g_a."""
    a2 = a * a
    c4 = (
        -7 * a**14 - 122 * a**12 - 342 * a**10 + 2776 * a**8 + 7049 * a**6
        - 17238 * a**4 - 22932 * a2 - 6048
    )
    c3 = 12 * (
        4 * a**16 + 21 * a**14 - 227 * a**12 - 46 * a**10 + 3338 * a**8
        - 7643 * a**6 + 2693 * a**4 + 7140 * a2 + 864
    )
    c2 = -9 * a2 * (
        11 * a**16 - 94 * a**14 - 25 * a**12 + 3068 * a**10 - 13951 * a**8
        + 25882 * a**6 - 15987 * a**4 - 9608 * a2 + 14800
    )
    c1 = (
        54 * a2 * (a - 2) ** 2 * (a - 1) ** 2 * (a + 1) ** 2 * (a + 2) ** 2 * (a2 + 1)
        * (a**4 - a**3 - 5 * a2 + 3 * a + 10) * (a**4 + a**3 - 5 * a2 - 3 * a + 10)
    )
    c0 = -81 * a2 * (a - 2) ** 4 * (a - 1) ** 4 * (a + 1) ** 4 * (a + 2) ** 4
    return [c0, c1, c2, c3, c4]


def build_ga(a: int) -> GaPolynomial:
    _check_a(a)
    return GaPolynomial(a, UniPoly(ga_coefficients(a)))


# ---------------------------------------------------------------------------
# route 1: the coefficient equations


def excluded_denominator(a: int, d: Number) -> Fraction:
    return Q(a**4 - 5 * a * a + 12) - (a * a + 7) * Q(d)


def _frames(a: int):
    al = Fraction(1, a)
    G = default_G(al, 2)
    u1 = (al, al)
    u2 = (al, -al)
    return al, G, u1, u2


def kernel_weights(a: int, d: Number) -> dict[str, Fraction]:
    """Q^{d,2}_3 weights entering the coefficient equations."""
    al, G, u1, u2 = _frames(a)

    def q(u, v, t):
        return qm(d, 2, 3, G, u, v, t)

    return {
        "u1u1_1": q(u1, u1, 1),
        "u2u2_1": q(u2, u2, 1),
        "u1u1_a": q(u1, u1, al),
        "u1u1_-a": q(u1, u1, -al),
        "u2u2_a": q(u2, u2, al),
        "u2u2_-a": q(u2, u2, -al),
    }


def null_vector(a: int) -> tuple[int, int, int]:
    return (4, (a + 1) ** 3 * (a - 2), (a - 1) ** 3 * (a + 2))


def _null_rows(a: int) -> list[tuple[list[Fraction], Fraction]]:
    _, p, q = null_vector(a)
    e1 = [0, 4, 0, p, q, 0, 0, 0]
    e2 = [0, 0, 4, 0, p, q, 0, 0]
    return [([Q(x) for x in e1], Fraction(0)), ([Q(x) for x in e2], Fraction(0))]


def equations(a: int, d: Number) -> list[tuple[list[Fraction], Fraction]]:
    """Rows (coefficients over UNKNOWNS, rhs) of the eight equations."""
    w = kernel_weights(a, d)
    B = bound(a)
    rows = _null_rows(a)
    rows += [
        ([1, 0, 0, 0, 0, 0, 0, 0], Fraction(B - 2)),
        ([0, 2, 0, 1, 0, 0, w["u1u1_1"], 0], Fraction(-1)),
        ([0, 0, 2, 0, 0, 1, 0, w["u2u2_1"]], Fraction(-1)),
        ([0, 0, 0, 1, 0, 0, w["u1u1_a"], 0], Fraction(0)),
        ([0, 0, 0, 1, 4, 1, w["u1u1_-a"], w["u2u2_a"]], Fraction(0)),
        ([0, 0, 0, 0, 0, 1, 0, w["u2u2_-a"]], Fraction(0)),
    ]
    return [([Q(x) for x in r], rhs) for r, rhs in rows]


def _solve(rows) -> dict[str, Fraction]:
    A = [r for r, _ in rows]
    b = [rhs for _, rhs in rows]
    try:
        sol = solve_linear(A, b)
    except Singular as exc:
        raise SingularSystem(str(exc)) from None
    return dict(zip(UNKNOWNS, sol))


def f_matrix(sol: dict[str, Fraction]) -> list[list[Fraction]]:
    F0, F1, F2, F3, F4, F5 = (sol[f"F{i}"] for i in range(6))
    return [[F0, F1, F2], [F1, F3, F4], [F2, F4, F5]]


def minors_of(F) -> dict[str, Fraction]:
    return {
        "F0": F[0][0],
        "F3": F[1][1],
        "F5": F[2][2],
        "F0F3-F1^2": F[0][0] * F[1][1] - F[0][1] ** 2,
        "F0F5-F2^2": F[0][0] * F[2][2] - F[0][2] ** 2,
        "F3F5-F4^2": F[1][1] * F[2][2] - F[1][2] ** 2,
        "det F": determinant(F),
    }


@dataclass
class DualCertificate:
    a: int
    d: Fraction
    F: list[list[Fraction]]
    f1: Fraction
    f2: Fraction
    minors: dict[str, Fraction]
    ga_at_d: Fraction
    solution: dict[str, Fraction] = field(repr=False, default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.f1 >= 0 and self.f2 >= 0 and all(v >= 0 for v in self.minors.values())


def solve_certificate(a: int, d: Number) -> DualCertificate:
    _check_a(a)
    d = Q(d)
    if excluded_denominator(a, d) == 0:
        raise SingularSystem("(a^4-5a^2+12) - (a^2+7)d vanishes")
    sol = _solve(equations(a, d))
    F = f_matrix(sol)
    return DualCertificate(a, d, F, sol["f1"], sol["f2"], minors_of(F), build_ga(a)(d), sol)


# ---------------------------------------------------------------------------
# route 2: closed forms


def closed_forms(a: int, d: Number) -> dict[str, Fraction]:
    d = Q(d)
    den = excluded_denominator(a, d)
    g = build_ga(a)(d)
    f1 = Fraction(a**3) * (d - 3) * (3 * a * (a - 2) ** 2 * (a + 1) ** 2 - (a**3 + 9 * a - 6) * d) / (
        3 * d * (a - 2) * (a - 1) * (a + 1) * den
    )
    f2 = -Fraction(a**3) * (d - 3) * (3 * a * (a + 2) ** 2 * (a - 1) ** 2 - (a**3 + 9 * a + 6) * d) / (
        3 * d * (a + 2) * (a - 1) * (a + 1) * den
    )
    F3 = (a - 1) ** 3 * (3 * (a + 2) ** 2 - d) / (a**3 * (a + 1) ** 3 * (d - 3)) * f1
    F5 = -((a + 1) ** 3) * (3 * (a - 2) ** 2 - d) / (a**3 * (a - 1) ** 3 * (d - 3)) * f2
    return {
        "f1": f1,
        "f2": f2,
        "F0": Fraction(bound(a) - 2),
        "F3": F3,
        "F5": F5,
        "F0F3-F1^2": g / (36 * d * d * (a - 2) ** 2 * (a + 1) ** 6 * den * den),
        "F0F5-F2^2": g / (36 * d * d * (a + 2) ** 2 * (a - 1) ** 6 * den * den),
        "F3F5-F4^2": 4 * g / (9 * d * d * (a - 2) ** 2 * (a + 2) ** 2 * (a - 1) ** 6 * (a + 1) ** 6 * den * den),
        "det F": Fraction(0),
    }


def closed_form_mismatches(cert: DualCertificate) -> list[str]:
    cf = closed_forms(cert.a, cert.d)
    got = dict(cert.minors)
    got["f1"], got["f2"] = cert.f1, cert.f2
    return [k for k, v in cf.items() if got[k] != v]


# ---------------------------------------------------------------------------
# route 3: formal pairing


class LinearForm:
    """Sparse linear combination of named variables with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        self.terms = {k: Q(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def var(cls, name: str) -> "LinearForm":
        return cls({name: 1})

    def coef(self, name: str) -> Fraction:
        return self.terms.get(name, Fraction(0))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self
            raise TypeError("cannot add a nonzero constant to a linear form")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return LinearForm(out)

    __radd__ = __add__

    def __mul__(self, c):
        if isinstance(c, LinearForm):
            raise TypeError("linear forms do not multiply")
        return LinearForm({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        return isinstance(other, LinearForm) and self.terms == other.terms

    def __repr__(self) -> str:
        return " + ".join(f"{v}*{k}" for k, v in sorted(self.terms.items())) or "0"


def symbolic_tables(a: int) -> dict[int, DistributionTable]:
    """Class-count tables whose entries are the formal variables NN1, y1, y2, z1, z2, z3."""
    al = Fraction(1, a)
    V = LinearForm.var
    t0 = DistributionTable(0, 0, al, {0: V("NN1")})
    t1 = DistributionTable(1, 0, al, {0: V("y1"), gm._bit(3, 1, 2): V("y2")})
    named = {
        gm.canonical_key_of_pattern(0, 4): V("z1"),
        gm.canonical_key_of_pattern(gm._bit(4, 1, 2) | gm._bit(4, 1, 3) | gm._bit(4, 2, 3), 4): V("z3"),
    }
    counts = {}
    for bits in range(8):
        # normal forms only carry the three pairs not touching vertex 0
        nb = (bits & 4 and gm._bit(4, 1, 2)) | (bits & 2 and gm._bit(4, 1, 3)) | (bits & 1 and gm._bit(4, 2, 3))
        counts[nb] = named.get(gm.canonical_key_of_pattern(nb, 4), V("z2"))
    t2 = DistributionTable(2, 0, al, counts)
    return {0: t0, 1: t1, 2: t2}


def formal_reduced(a: int, d: Number, k: int):
    return assemble_reduced(Fraction(1, a), d, 2, k, None, symbolic_tables(a))


def target_form(a: int) -> LinearForm:
    return LinearForm({"NN1": bound(a) - 2, "y1": -1, "y2": -1})


_F_INDEX = {(0, 0): 0, (0, 1): 1, (0, 2): 2, (1, 1): 3, (1, 2): 4, (2, 2): 5}


def pairing_system(a: int, d: Number) -> list[tuple[list[Fraction], Fraction]]:
    """Equations obtained by matching coefficients of <Q0, F> + <Q3, diag(f1, f2)>
    against the target form, together with the two null-vector equations."""
    Q0 = formal_reduced(a, d, 0).matrix
    Q3 = formal_reduced(a, d, 3).matrix
    target = target_form(a)
    rows = _null_rows(a)
    for var in VARIABLES:
        row = [Fraction(0)] * len(UNKNOWNS)
        for i in range(3):
            for j in range(3):
                e = Q0[i][j]
                if isinstance(e, LinearForm):
                    row[_F_INDEX[(min(i, j), max(i, j))]] += e.coef(var)
        for i in range(2):
            e = Q3[i][i]
            if isinstance(e, LinearForm):
                row[6 + i] += e.coef(var)
        rows.append((row, target.coef(var)))
    return rows


def pairing_form(a: int, d: Number, cert: DualCertificate) -> LinearForm:
    Q0 = formal_reduced(a, d, 0).matrix
    Q3 = formal_reduced(a, d, 3).matrix
    total = LinearForm()
    for i in range(3):
        for j in range(3):
            total = total + Q0[i][j] * cert.F[i][j]
    diag = [[cert.f1, 0], [0, cert.f2]]
    for i in range(2):
        for j in range(2):
            total = total + Q3[i][j] * diag[i][j]
    return total


def pairing_solution(a: int, d: Number) -> dict[str, Fraction]:
    return _solve(pairing_system(a, d))


def pairing_identity_holds(cert: DualCertificate) -> bool:
    return pairing_form(cert.a, cert.d, cert) == target_form(cert.a)


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    certified: bool
    a: int
    d: int
    bound: int
    reason: str = ""
    boundary: bool = False
    certificate: Optional[DualCertificate] = None


def certify_bound(a: int, d: int) -> Verdict:
    """Certify N_{1/a}(d) <= (a^2-1)(a^2-2)/2 by an exact dual certificate."""
    _check_a(a)
    if d < 4:
        return Verdict(False, a, d, bound(a), "d must be at least 4")
    try:
        cert = solve_certificate(a, d)
    except SingularSystem as exc:
        return Verdict(False, a, d, bound(a), f"singular system: {exc}")
    reasons = []
    if cert.f1 < 0:
        reasons.append(f"f1 = {cert.f1} < 0")
    if cert.f2 < 0:
        reasons.append(f"f2 = {cert.f2} < 0")
    psd = psd_check(cert.F)
    if not psd:
        neg = [k for k, v in cert.minors.items() if v < 0]
        reasons.append("F is not PSD" + (f" (negative: {', '.join(neg)})" if neg else ""))
    if not pairing_identity_holds(cert):
        reasons.append("pairing identity fails")
    boundary = cert.ga_at_d == 0
    return Verdict(not reasons, a, d, bound(a), "; ".join(reasons), boundary, cert)


# ---------------------------------------------------------------------------
# D_4(a)


def d4_interval(a: int, width: Number = Fraction(1, 1000)) -> tuple[Fraction, Fraction]:
    """Rational (lo, hi] containing D_4(a), the largest real root of g_a."""
    g = build_ga(a).poly
    b = cauchy_bound(g)
    return isolate_max_root(g, -b, b, width)


def d4_floor(a: int) -> int:
    """Largest integer d with d <= D_4(a)."""
    g = build_ga(a).poly
    b = cauchy_bound(g)
    lo, hi = isolate_max_root(g, -b, b, Fraction(1, 2))
    n = hi.numerator // hi.denominator
    chain = sturm_chain(squarefree_part(g))
    if n < hi and sturm_count(g, n, hi, chain) > 0:
        return n
    # the root lies in (lo, n] with lo > n - 1
    return n if g(n) == 0 else n - 1


def render_root(a: int, digits: int = 2, max_width: Number = Fraction(1, 200)):
    """Bracket of D_4(a) narrow enough that both ends round to the same decimal."""
    from .exactmath import to_decimal

    g = build_ga(a).poly
    b = cauchy_bound(g)
    width = Q(max_width)
    for _ in range(200):
        lo, hi = isolate_max_root(g, -b, b, width)
        if to_decimal(lo, digits) == to_decimal(hi, digits):
            return lo, hi, to_decimal(hi, digits)
        width /= 4
    raise NoRealRoot("could not settle the decimal rendering")


# ---------------------------------------------------------------------------
# asymptotic intervals, exact in Q(sqrt 5)


@dataclass(frozen=True)
class QSqrt5:
    """p + q*sqrt(5) with rational p, q."""

    p: Fraction
    q: Fraction = Fraction(0)

    def __add__(self, o):
        o = _lift(o)
        return QSqrt5(self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __sub__(self, o):
        o = _lift(o)
        return QSqrt5(self.p - o.p, self.q - o.q)

    def __mul__(self, o):
        o = _lift(o)
        return QSqrt5(self.p * o.p + 5 * self.q * o.q, self.p * o.q + self.q * o.p)

    __rmul__ = __mul__

    def sign(self) -> int:
        sp = (self.p > 0) - (self.p < 0)
        sq = (self.q > 0) - (self.q < 0)
        if sp == 0 or sq == 0 or sp == sq:
            return sp or sq
        return sp if self.p * self.p > 5 * self.q * self.q else sq

    def __lt__(self, o) -> bool:
        return (self - o).sign() < 0

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * 5**0.5


def _lift(x) -> QSqrt5:
    return x if isinstance(x, QSqrt5) else QSqrt5(Q(x))


def eval_qsqrt5(poly: UniPoly, x: QSqrt5) -> QSqrt5:
    acc = QSqrt5(Fraction(0))
    for c in reversed(poly.coeffs):
        acc = acc * x + c
    return acc


def asymptotic_intervals(a: int) -> list[tuple[QSqrt5, QSqrt5]]:
    a2 = Fraction(a * a)
    base = 3 * a2 - Fraction(948, 25)
    lead = Fraction(12 * a, 5)  # 12a/sqrt(5) = (12a/5) sqrt(5)
    return [
        (QSqrt5(Fraction(0)), QSqrt5(Fraction(3, 2) / a2)),
        (QSqrt5(Fraction(6, 7) * a2 - 8), QSqrt5(Fraction(6, 7) * a2)),
        (QSqrt5(base, -lead + Fraction(30, a)), QSqrt5(base, -lead + Fraction(45, a))),
        (QSqrt5(base, lead - Fraction(32, a)), QSqrt5(base, lead + Fraction(2, a))),
    ]


def asymptotic_expression(a: int) -> QSqrt5:
    return QSqrt5(3 * Fraction(a * a) - Fraction(948, 25), Fraction(12 * a, 5))


@dataclass
class IntervalReport:
    a: int
    ok: bool
    real_roots: int
    leading_negative: bool
    sign_changes: list[bool]
    disjoint: bool
    max_root_in_last: bool


def asymptotic_interval_check(a: int) -> IntervalReport:
    """Each of the four root intervals has a sign change of g_a at its ends."""
    _check_a(a)
    if a < 5:
        raise BadA("the interval statement is for a >= 5")
    g = build_ga(a).poly
    ivs = asymptotic_intervals(a)
    changes = []
    for lo, hi in ivs:
        slo, shi = eval_qsqrt5(g, lo).sign(), eval_qsqrt5(g, hi).sign()
        changes.append(slo * shi < 0 and lo < hi)
    disjoint = all(ivs[i][1] < ivs[i + 1][0] for i in range(3))
    nroots = real_root_count(g)
    lo, hi = d4_interval(a, Fraction(1, 10**6))
    last = ivs[3]
    inside = last[0] < QSqrt5(lo) and QSqrt5(hi) < last[1]
    ok = all(changes) and disjoint and nroots == 4 and g.lead < 0 and inside
    return IntervalReport(a, ok, nroots, g.lead < 0, changes, disjoint, inside)
