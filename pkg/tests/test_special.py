import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from delayadvect import DomainError, SeriesOverflowError
from delayadvect.special import (
    gamma,
    heaviside,
    hermite,
    hermite_table,
    loggamma,
    normalized_hermite,
)

finite = st.floats(-1e6, 1e6, allow_nan=False)


@pytest.mark.parametrize("y,expected", [(-0.5, 0), (0.0, 1), (3.2, 1), (-1e-300, 0)])
def test_heaviside_values(y, expected):
    assert heaviside(y) == expected


def test_heaviside_array():
    np.testing.assert_array_equal(heaviside(np.array([-2.0, 0.0, 1.0])), [0, 1, 1])


@given(finite, finite)
def test_heaviside_monotone(y1, y2):
    lo, hi = sorted((y1, y2))
    assert heaviside(lo) <= heaviside(hi)


@given(finite)
def test_heaviside_composed_with_itself(y):
    # the step maps into {0, 1}, both >= 0, so composing twice gives 1
    assert heaviside(heaviside(y)) == 1
    assert heaviside(heaviside(y)) >= heaviside(y)


@pytest.mark.parametrize("z,expected", [(1.0, 1.0), (5.0, 24.0), (1.5, 0.8862269254527580)])
def test_gamma_values(z, expected):
    assert gamma(z) == pytest.approx(expected, rel=1e-12)


@given(st.floats(0.5, 100.0))
def test_gamma_recurrence(z):
    if z <= 30:
        assert gamma(z + 1) == pytest.approx(z * gamma(z), rel=1e-11)
    else:
        assert loggamma(z + 1) == pytest.approx(math.log(z) + loggamma(z), rel=1e-11)


@given(st.floats(0.01, 170.0))
@settings(max_examples=50)
def test_gamma_matches_mpmath(z):
    assert gamma(z) == pytest.approx(float(mp.gamma(z)), rel=1e-12)


@pytest.mark.parametrize("z", [0.0, -1.0, -0.5])
def test_gamma_domain(z):
    with pytest.raises(DomainError):
        gamma(z)


def test_gamma_overflow():
    with pytest.raises(SeriesOverflowError):
        gamma(171.5)
    assert math.isfinite(gamma(171.0))


@pytest.mark.parametrize("n,x,expected", [(0, 0.3, 1.0), (0, -7.0, 1.0), (1, 2.0, 4.0), (3, 1.0, -4.0)])
def test_hermite_values(n, x, expected):
    assert hermite(n, x) == expected


@given(st.floats(-5, 5), st.integers(1, 60))
def test_hermite_table_invariants(x, n):
    tab = hermite_table(n, x)
    v = tab.values
    assert tab.max_order == n
    assert v[0] == 1.0
    for k in range(1, n):
        rhs = 2 * x * v[k] - 2 * k * v[k - 1]
        scale = max(abs(v[k + 1]), abs(2 * x * v[k]), abs(2 * k * v[k - 1]), 1e-300)
        assert abs(v[k + 1] - rhs) <= 1e-10 * scale


@given(st.floats(-5, 5), st.integers(0, 50))
def test_hermite_parity(x, n):
    assert hermite(n, -x) == pytest.approx((-1) ** n * hermite(n, x), rel=1e-10, abs=1e-300)


def test_hermite_generating_function():
    a, t, x = 2.0, 0.5, 1.0
    tab = hermite_table(60, x)
    partial = math.fsum(tab[n] * (a * t) ** n / math.gamma(n + 1) for n in range(61))
    assert abs(partial - math.e) <= 1e-8


def test_hermite_overflow_reports_order():
    with pytest.raises(SeriesOverflowError) as info:
        hermite_table(10_000, 50.0)
    assert info.value.index is not None and 100 < info.value.index < 10_000


def test_hermite_order_cap():
    with pytest.raises(DomainError):
        hermite(10_001, 0.1)


@pytest.mark.parametrize("x", [-3.0, 0.0, 0.7, 12.0])
def test_normalized_hermite_matches_mpmath(x):
    h, log_norm = normalized_hermite(400, x)
    mp.mp.dps = 50
    for n in (0, 1, 7, 60, 250, 400):
        exact = mp.hermite(n, x)
        if exact == 0:
            assert h[n] == 0
            continue
        got = mp.mpf(float(h[n])) * mp.e ** mp.mpf(float(log_norm[n]))
        assert float(abs(got / exact - 1)) <= 1e-11


def test_normalized_hermite_vector_matches_scalar():
    xs = np.array([-2.0, 0.5, 9.0])
    h, ln = normalized_hermite(120, xs)
    for j, x in enumerate(xs):
        hs, lns = normalized_hermite(120, x)
        np.testing.assert_allclose(h[:, j] * np.exp(ln[:, j] - lns), hs, rtol=1e-13)
