from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqlines import gram as gm

A = Fraction(1, 3)


def naive_key(signs):
    """Oracle: minimal +/- string over all permutations and all switchings."""
    n = len(signs)
    best = None
    for perm in itertools.permutations(range(n)):
        for lam in itertools.product((1, -1), repeat=n):
            s = "".join(
                "+" if lam[i] * lam[j] * signs[perm[i]][perm[j]] > 0 else "-"
                for i, j in itertools.combinations(range(n), 2)
            )
            best = s if best is None or s < best else best
    return best


def test_switch_identity_and_negation():
    G = gm.gram_from_pattern(0b101, 3, A)
    assert gm.switch(G, (1, 1, 1)) == G
    assert gm.switch(G, (-1, -1, -1)) == G
    flipped = gm.switch(gm.gram_from_pattern(0, 3, A), (1, 1, -1))
    assert gm.pattern_string(gm.pattern_from_gram(flipped, A), 3) == "+--"


def test_pattern_round_trip():
    for bits in range(1 << 6):
        assert gm.pattern_from_gram(gm.gram_from_pattern(bits, 4, A), A) == bits


def test_mixed_magnitudes():
    with pytest.raises(gm.MixedMagnitudes):
        gm.pattern_from_gram([[1, A, A], [A, 1, Fraction(1, 2)], [A, Fraction(1, 2), 1]], A)


def test_three_point_classes():
    keys = {gm.canonical_key_of_pattern(b, 3) for b in range(8)}
    assert len(keys) == 2


# the six 4 x 4 normal forms with one or two negatives among (u2, v2, t)
SIX = [(1, 1, -1), (1, -1, 1), (1, -1, -1), (-1, 1, 1), (-1, 1, -1), (-1, -1, 1)]


def four_point_gram(u2, v2, t):
    return [[1, A, A, A], [A, 1, u2 * A, v2 * A], [A, u2 * A, 1, t * A], [A, v2 * A, t * A, 1]]


def test_six_matrices_share_a_key():
    keys = {gm.canonical_key(four_point_gram(*s), A) for s in SIX}
    assert len(keys) == 1
    assert gm.canonical_key(four_point_gram(1, 1, 1), A) not in keys
    assert gm.canonical_key(four_point_gram(-1, -1, -1), A) not in keys


def test_eight_normal_forms_under_switching_alone():
    reps = {gm.pattern_from_gram(four_point_gram(*s), A) for s in itertools.product((1, -1), repeat=3)}
    assert len(reps) == 8
    for bits in range(1 << 6):
        if bits & gm._bit(4, 0, 1) or bits & gm._bit(4, 0, 2) or bits & gm._bit(4, 0, 3):
            continue
        hits = {
            gm.switch_pattern(bits, 4, lam) for lam in itertools.product((1, -1), repeat=4)
        } & reps
        assert len(hits) == 1


@pytest.mark.parametrize("n, count", [(1, 1), (2, 1), (3, 2), (4, 3), (5, 7), (6, 16), (7, 54)])
def test_enumerate_classes(n, count):
    keys = gm.enumerate_classes(n)
    assert len(keys) == count
    assert keys == sorted(set(keys))


def test_enumerate_too_large():
    with pytest.raises(gm.TooLarge):
        gm.enumerate_classes(8)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_keys_match_naive_oracle(n):
    npairs = n * (n - 1) // 2
    step = 1 if n < 5 else 7  # the oracle is slow at n = 5
    for bits in range(0, 1 << npairs, step):
        key = gm.canonical_key_of_pattern(bits, n)
        assert str(key) == naive_key(gm.signs_from_pattern(bits, n))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_orbit_partition(n):
    sizes = gm.class_sizes(n)
    assert sum(sizes.values()) == 2 ** (n * (n - 1) // 2)
    assert set(sizes) == set(gm.enumerate_classes(n))


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 7).flatmap(lambda n: st.tuples(
    st.just(n),
    st.integers(0, 2 ** (n * (n - 1) // 2) - 1),
    st.permutations(list(range(n))),
    st.lists(st.sampled_from((1, -1)), min_size=n, max_size=n),
)))
def test_key_invariance(data):
    n, bits, perm, lam = data
    key = gm.canonical_key_of_pattern(bits, n)
    assert gm.canonical_key_of_pattern(gm.permute_pattern(bits, n, perm), n) == key
    assert gm.canonical_key_of_pattern(gm.switch_pattern(bits, n, lam), n) == key
    nf = gm.switching_normal_form(bits, n)
    assert nf == gm.switching_normal_form(gm.switch_pattern(bits, n, lam), n)


def test_complete_class_key():
    for n in range(2, 7):
        assert gm.canonical_key_of_pattern(0, n).bits == 0


def orbit_patterns(t):
    return {
        (u, v, tt)
        for G, (u,), (v,), tt in gm.switching_orbit([[1]], [A], [A], t * A)
    }


def test_three_point_orbits():
    assert orbit_patterns(1) == {(A, A, A), (A, -A, -A), (-A, A, -A), (-A, -A, A)}
    assert orbit_patterns(-1) == {(A, A, -A), (A, -A, A), (-A, A, A), (-A, -A, -A)}


def test_switch_is_involution():
    E = gm.extended_gram([[1, A], [A, 1]], [A, -A], [A, A], -A)
    lam = (1, -1, -1, 1)
    assert gm.switch(gm.switch(E, lam), lam) == E
    assert gm.split_extended(E) == (((1, A), (A, 1)), (A, -A), (A, A), -A)


def test_gram_matrix_validation():
    with pytest.raises(ValueError):
        gm.GramMatrix.of([[1, A], [-A, 1]])
    assert gm.GramMatrix.of([[1, A], [A, 1]]).is_proper
    assert not gm.GramMatrix.of([[1, 1], [1, 1]]).is_proper
