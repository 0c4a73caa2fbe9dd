from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqlines import certificate as cert
from eqlines.exactmath import cauchy_bound, poly_gcd, psd_check, real_root_count, sturm_count


def c4_by_hand(a):
    return (-7 * a**14 - 122 * a**12 - 342 * a**10 + 2776 * a**8 + 7049 * a**6
            - 17238 * a**4 - 22932 * a**2 - 6048)


def f1_by_hand(a, d):
    d = Fraction(d)
    num = a**3 * (d - 3) * (3 * a * (a - 2) ** 2 * (a + 1) ** 2 - (a**3 + 9 * a - 6) * d)
    den = 3 * d * (a - 2) * (a - 1) * (a + 1) * (a**4 - 5 * a**2 + 12 - (a**2 + 7) * d)
    return num / den


def test_ga_coefficients():
    g = cert.build_ga(3)
    assert g.poly.lead == c4_by_hand(3) == -96768000
    for a in (3, 5, 7, 21):
        c0 = cert.build_ga(a).poly.coeffs[0]
        assert c0 == -81 * a**2 * (a - 2) ** 4 * (a - 1) ** 4 * (a + 1) ** 4 * (a + 2) ** 4 < 0


@pytest.mark.parametrize("a", [2, 1, 4, -3])
def test_bad_a(a):
    with pytest.raises(cert.BadA):
        cert.build_ga(a)


def roots_with_multiplicity(p):
    g = poly_gcd(p, p.derivative())
    return real_root_count(p) + (roots_with_multiplicity(g) if g.degree > 0 else 0)


def test_ga_roots_a3():
    g = cert.build_ga(3).poly
    # x = 3 is a double root, so four real roots counted with multiplicity
    assert real_root_count(g) == 3
    assert roots_with_multiplicity(g) == 4
    assert g(3) == 0 and g.derivative()(3) == 0
    lo, hi = cert.d4_interval(3, Fraction(1, 1000))
    assert Fraction(1441, 100) < lo and hi < Fraction(1443, 100)
    # floating oracle
    roots = np.roots([float(c) for c in reversed(g.coeffs)])
    assert abs(max(roots.real) - 14.42) < 0.005


def test_g5_four_roots_positive_side():
    g = cert.build_ga(5).poly
    assert sturm_count(g, 0, cauchy_bound(g)) == 4
    lo, hi = cert.d4_interval(5, Fraction(1, 1000))
    assert abs(lo - Fraction(6456, 100)) <= Fraction(5, 1000)


def test_solve_a3_d14():
    c = cert.solve_certificate(3, 14)
    assert c.f1 == f1_by_hand(3, 14) == Fraction(297, 112)
    assert c.F[0][0] == 26
    assert c.minors["det F"] == 0
    assert c.valid


def test_singular_system():
    # (a^4 - 5a^2 + 12) - (a^2 + 7) d = 0 at a = 3, d = 3
    with pytest.raises(cert.SingularSystem):
        cert.solve_certificate(3, 3)


def check_all_routes(a, d):
    c = cert.solve_certificate(a, d)
    assert cert.closed_form_mismatches(c) == []
    assert cert.pairing_solution(a, d) == c.solution
    assert cert.pairing_identity_holds(c)
    n = cert.null_vector(a)
    for row in c.F[1:]:
        assert n[0] * row[0] + n[1] * row[1] + n[2] * row[2] == 0
    assert c.minors["det F"] == 0
    return c


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10).map(lambda i: 2 * i + 1), st.integers(12, 900), st.integers(1, 3))
def test_three_routes_agree(a, dn, dd):
    d = Fraction(dn, dd)  # d >= 4 keeps P^{d-2} defined
    if cert.excluded_denominator(a, d) == 0:
        return
    check_all_routes(a, d)


def test_minor_numerators_are_ga():
    a, d = 7, Fraction(150)
    c = cert.solve_certificate(a, d)
    g = cert.build_ga(a)(d)
    D = cert.excluded_denominator(a, d)
    assert c.minors["F0F3-F1^2"] * 36 * d * d * (a - 2) ** 2 * (a + 1) ** 6 * D * D == g


@pytest.mark.parametrize("a, d, bound", [(3, 14, 28), (5, 64, 276)])
def test_certified(a, d, bound):
    v = cert.certify_bound(a, d)
    assert v.certified and v.bound == bound and not v.boundary


def test_not_certified_above_root():
    # g_5(66) < 0 (floating oracle), so every 2x2 minor is negative
    g = cert.build_ga(5).poly
    assert np.polyval([float(c) for c in reversed(g.coeffs)], 66.0) < 0
    v = cert.certify_bound(5, 66)
    assert not v.certified and "not PSD" in v.reason


def test_psd_not_minors():
    c = cert.solve_certificate(5, 64)
    assert psd_check(c.F)


def test_small_d_rejected():
    assert not cert.certify_bound(3, 3).certified


@pytest.mark.parametrize("a, floor", [(3, 14), (5, 64), (7, 144), (9, 250), (11, 380)])
def test_d4_floor(a, floor):
    assert cert.d4_floor(a) == floor


def test_floor_above_d3():
    for a in range(5, 31, 2):
        assert cert.d4_floor(a) >= cert.d3(a)


@pytest.mark.parametrize("a, text", [(3, "14.42"), (5, "64.56"), (7, "144.52"), (9, "250.41"), (11, "380.96")])
def test_render_root(a, text):
    lo, hi, dec = cert.render_root(a, 2)
    assert dec == text and hi - lo <= Fraction(5, 1000)


def test_qsqrt5_sign():
    Q5 = cert.QSqrt5
    assert Q5(Fraction(3), Fraction(-1)).sign() == 1   # 3 - sqrt5
    assert Q5(Fraction(2), Fraction(-1)).sign() == -1  # 2 - sqrt5
    assert Q5(Fraction(-3), Fraction(1)).sign() == -1
    assert Q5(Fraction(0), Fraction(0)).sign() == 0
    rnd = random.Random(3)
    for _ in range(200):
        p, q = Fraction(rnd.randint(-50, 50), 7), Fraction(rnd.randint(-50, 50), 3)
        f = float(p) + float(q) * 5**0.5
        if abs(f) > 1e-9:
            assert Q5(p, q).sign() == (1 if f > 0 else -1)


@pytest.mark.parametrize("a", [5, 7, 101])
def test_asymptotic_intervals(a):
    rep = cert.asymptotic_interval_check(a)
    assert rep.ok, rep


def test_last_interval_width():
    for a in (5, 11, 51):
        lo, hi = cert.asymptotic_intervals(a)[3]
        assert hi - lo == cert.QSqrt5(Fraction(0), Fraction(34, a))


def test_asymptotic_expression_approaches_root():
    errs = []
    for a in (11, 41, 101):
        lo, hi = cert.d4_interval(a, Fraction(1, 10**6))
        errs.append(abs(float(hi) - float(cert.asymptotic_expression(a))))
    assert errs[0] > errs[1] > errs[2]


def test_formal_reduced_matches_counts(x28):
    from eqlines.constraints import build_reduced

    values = {"NN1": 756, "y1": 12096, "y2": 7560, "z1": 120960, "z2": 60480, "z3": 7560}
    for k in (0, 3):
        formal = cert.formal_reduced(3, 7, k).matrix
        actual = build_reduced(x28, 2, k).matrix
        for fr, ar in zip(formal, actual):
            for e, v in zip(fr, ar):
                ev = sum(e.terms[n] * values[n] for n in e.terms) if isinstance(e, cert.LinearForm) else e
                assert ev == v
