from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from eqlines.constructions import gen28, gen28_vectors


@pytest.fixture(scope="session")
def x28():
    return gen28()


@pytest.fixture(scope="session")
def vectors28():
    return np.array(gen28_vectors(), dtype=np.int64)


def rationals(lo=-3, hi=3, max_den=12):
    return st.builds(
        lambda n, d: Fraction(n, d),
        st.integers(lo * max_den, hi * max_den),
        st.integers(1, max_den),
    )


def small_rationals():
    """Rationals strictly inside (-1, 1)."""
    return st.builds(lambda n, d: Fraction(n, d), st.integers(-9, 9), st.just(10))


@st.composite
def sub28(draw, min_size=4, max_size=12):
    """A switched subset of the 28 lines."""
    X = gen28()
    idx = draw(st.lists(st.integers(0, 27), min_size=min_size, max_size=max_size, unique=True))
    lam = draw(st.lists(st.sampled_from((1, -1)), min_size=len(idx), max_size=len(idx)))
    return X.subset(idx).switched(lam)


@st.composite
def symmetric_matrices(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    a = [[Fraction(0)] * n for _ in range(n)]
    for i, j in itertools.combinations_with_replacement(range(n), 2):
        a[i][j] = a[j][i] = draw(st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4)))
    return a


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
