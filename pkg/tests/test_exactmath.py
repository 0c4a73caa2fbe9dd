from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqlines.exactmath import (
    NoRealRoot,
    NotSymmetric,
    Q,
    Singular,
    UniPoly,
    cauchy_bound,
    charpoly,
    determinant,
    identity,
    inverse,
    isolate_max_root,
    matmul,
    matvec,
    psd_check,
    quad_form,
    rank,
    real_root_count,
    solve_linear,
    sturm_count,
    to_decimal,
    transpose,
)

from conftest import symmetric_matrices

X = UniPoly.x()


def test_q_rejects_floats():
    with pytest.raises(TypeError):
        Q(0.5)
    assert Q("3/4") == Fraction(3, 4)


def test_polynomial_arithmetic():
    p = (X - 1) * (X + 2)
    assert p.coeffs == (-2, 1, 1)
    q, r = p.divmod(X - 1)
    assert q == X + 2 and r.is_zero
    assert (X**2 - 2)(Fraction(3, 2)) == Fraction(1, 4)
    assert p.derivative() == X * 2 + 1


def test_solve_identity_and_diagonal():
    assert solve_linear(identity(3), [1, Fraction(1, 2), -2]) == [1, Fraction(1, 2), -2]
    assert solve_linear([[2, 0], [0, 4]], [1, 1]) == [Fraction(1, 2), Fraction(1, 4)]


def test_solve_singular():
    with pytest.raises(Singular):
        solve_linear([[1, 2], [2, 4]], [1, 1])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(st.integers(-5, 5), min_size=n, max_size=n),
)))
def test_solve_back_substitutes(data):
    A, b = data
    if determinant(A) == 0:
        return
    x = solve_linear(A, b)
    assert matvec(A, x) == [Fraction(v) for v in b]
    assert matmul(A, inverse(A)) == identity(len(A))


def test_psd_examples():
    assert psd_check([[0, 0], [0, 0]])
    res = psd_check([[1, 2], [2, 1]])
    assert not res
    assert quad_form([[1, 2], [2, 1]], res.witness) < 0
    assert quad_form([[1, 2], [2, 1]], [1, -1]) == -2


def test_psd_zero_pivot_witness():
    M = [[0, 1], [1, 0]]
    res = psd_check(M)
    assert not res and quad_form(M, res.witness) < 0


def test_psd_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        psd_check([[1, 2], [0, 1]])


@settings(max_examples=150, deadline=None)
@given(symmetric_matrices())
def test_psd_witness_is_negative(M):
    res = psd_check(M)
    if not res:
        assert quad_form(M, res.witness) < 0
    else:
        # oracle: floating eigenvalues are not clearly negative
        assert np.linalg.eigvalsh(np.array(M, dtype=float)).min() > -1e-9


@settings(max_examples=60, deadline=None)
@given(st.lists(st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5)), min_size=1, max_size=6),
       st.randoms())
def test_outer_products_are_psd_under_permutation(v, rnd):
    M = [[a * b for b in v] for a in v]
    assert psd_check(M)
    p = list(range(len(v)))
    rnd.shuffle(p)
    assert psd_check([[M[p[i]][p[j]] for j in range(len(v))] for i in range(len(v))])
    assert rank(M) == (1 if any(v) else 0)


def test_rank_examples():
    assert rank(identity(3)) == 3
    v = [1, 16, 10]
    assert rank([[a * b for b in v] for a in v]) == 1


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n, max_size=n)), st.randoms())
def test_rank_invariance(A, rnd):
    n = len(A)
    p, q = list(range(n)), list(range(n))
    rnd.shuffle(p)
    rnd.shuffle(q)
    PAQ = [[A[p[i]][q[j]] for j in range(n)] for i in range(n)]
    r = rank(A)
    assert r == rank(transpose(A)) == rank(PAQ)
    assert r == np.linalg.matrix_rank(np.array(A, dtype=float))


def test_sturm_examples():
    assert sturm_count(X**2 - 2, 0, 2) == 1
    assert sturm_count(X**2 + 1, -10, 10) == 0
    assert real_root_count((X - 1) ** 2 * (X + 3)) == 2


def test_sqrt2_isolation():
    p = X**2 - 2
    b = cauchy_bound(p)
    lo, hi = isolate_max_root(p, -b, b, Fraction(1, 10**4))
    assert hi - lo <= Fraction(1, 10**4)
    assert lo * lo < 2 <= hi * hi


def test_isolation_without_root():
    with pytest.raises(NoRealRoot):
        isolate_max_root(X**2 + 1, -3, 3, Fraction(1, 10))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.builds(Fraction, st.integers(-40, 40), st.integers(1, 4)), min_size=1, max_size=4, unique=True))
def test_isolation_brackets_largest_root(roots):
    p = UniPoly([1])
    for r in roots:
        p = p * (X - r)
    b = cauchy_bound(p)
    lo, hi = isolate_max_root(p, -b, b, Fraction(1, 64))
    assert lo < max(roots) <= hi
    assert sturm_count(p, hi, b) == 0


def test_charpoly_matches_numpy():
    A = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    cp = charpoly(A)
    assert cp.lead == 1 and cp.degree == 3
    assert np.allclose(sorted(np.roots([float(c) for c in reversed(cp.coeffs)]).real),
                       sorted(np.linalg.eigvalsh(np.array(A, dtype=float))))


@pytest.mark.parametrize("x, digits, out", [
    (Fraction(1442, 100), 2, "14.42"),
    (Fraction(1, 8), 2, "0.13"),
    (Fraction(-1, 8), 2, "-0.13"),
    (Fraction(-1, 1000), 2, "-0.00"),
    (Fraction(2, 3), 0, "1"),
    (Fraction(5), 3, "5.000"),
])
def test_to_decimal(x, digits, out):
    assert to_decimal(x, digits) == out
