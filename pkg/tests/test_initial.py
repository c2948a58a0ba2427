import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from delayadvect import (
    ConstantProfile,
    Cos,
    Cosh,
    Custom,
    CustomProfile,
    DomainError,
    Exp,
    ExpProfile,
    Gaussian,
    Polynomial,
    PolynomialProfile,
    SeriesOverflowError,
    Sin,
    Sinh,
    hermite,
    ic_nth_derivative,
    ic_value,
    parse_ic,
    parse_profile,
)

CATALOGUE = [Exp(1.0), Exp(-0.7), Cosh(), Sinh(), Gaussian(), Sin(1.3), Cos(-2.0),
             Polynomial((1.0, -2.0, 0.5, 3.0))]
PROFILES = [ConstantProfile(2.0), ExpProfile(1.0), ExpProfile(-0.4), PolynomialProfile((1.0, 2.0, -3.0))]


@pytest.mark.parametrize("ic,x,expected", [(Cosh(), 0.0, 1.0), (Gaussian(), 0.0, 1.0), (Exp(1.0), 2.0, math.e**2)])
def test_ic_value(ic, x, expected):
    assert ic_value(ic, x) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize(
    "ic,n,x,expected",
    [(Cosh(), 2, 1.0, math.cosh(1.0)), (Gaussian(), 1, 1.0, -2 * math.exp(-1.0)), (Exp(-1.0), 3, 0.0, -1.0)],
)
def test_ic_nth_derivative(ic, n, x, expected):
    assert ic_nth_derivative(ic, n, x) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("ic", CATALOGUE, ids=lambda ic: ic.name)
def test_zeroth_derivative_is_value(ic):
    for x in np.linspace(-3, 3, 13):
        assert ic_nth_derivative(ic, 0, x) == ic_value(ic, x)


@pytest.mark.parametrize("ic", CATALOGUE, ids=lambda ic: ic.name)
def test_derivatives_against_finite_differences(ic):
    rng = np.random.default_rng(7)
    h = 1e-5
    for x in rng.uniform(-3, 3, 50):
        for n in range(5):
            fd = (ic_nth_derivative(ic, n, x + h) - ic_nth_derivative(ic, n, x - h)) / (2 * h)
            exact = ic_nth_derivative(ic, n + 1, x)
            assert abs(fd - exact) <= 1e-5 * (1 + abs(exact))


@given(st.floats(-3, 3), st.integers(0, 20))
def test_cosh_is_mean_of_exponentials(x, n):
    split = 0.5 * (ic_nth_derivative(Exp(1.0), n, x) + ic_nth_derivative(Exp(-1.0), n, x))
    assert ic_nth_derivative(Cosh(), n, x) == pytest.approx(split, rel=1e-12)


@given(st.floats(-4, 4), st.integers(0, 12))
def test_gaussian_derivative_is_hermite(x, n):
    expected = (-1) ** n * hermite(n, x) * math.exp(-x * x)
    assert ic_nth_derivative(Gaussian(), n, x) == pytest.approx(expected, rel=1e-10, abs=1e-300)


def test_gaussian_high_order_against_mpmath():
    mp.mp.dps = 60
    for n, x in [(150, 0.4), (400, 2.5), (900, -6.0)]:
        mant, logscale = Gaussian().derivative_table(n, x)
        exact = (-1) ** n * mp.hermite(n, x) * mp.exp(-x * x)
        got = mp.mpf(float(mant[n])) * mp.exp(mp.mpf(float(logscale[n])))
        assert float(abs(got / exact - 1)) < 1e-10


def test_vector_tables_match_scalar_tables():
    xs = np.array([-2.5, 0.0, 0.3, 7.0])
    for ic in (Gaussian(), Cosh(), Sin(2.0)):
        mant, logscale = ic.derivative_tables(60, xs)
        for j, x in enumerate(xs):
            m1, l1 = ic.derivative_table(60, x)
            np.testing.assert_allclose(mant[:, j] * np.exp(logscale[:, j] - l1), m1, rtol=1e-12, atol=1e-300)
            assert mant[0, j] == m1[0]


def test_table_keeps_range_past_double_overflow():
    mant, logscale = Exp(3.0).derivative_table(1000, 1.0)
    assert logscale[1000] == pytest.approx(1000 * math.log(3.0) + 3.0)
    with pytest.raises(SeriesOverflowError):
        ic_nth_derivative(Exp(3.0), 1000, 1.0)


@pytest.mark.parametrize("coeffs", [(2.0,), (1.0, 1.0), (0.0, 0.0, 4.0, -1.0)])
def test_polynomial_derivatives_vanish_past_degree(coeffs):
    p = Polynomial(coeffs)
    for n in range(p.degree + 1, p.degree + 6):
        assert ic_nth_derivative(p, n, 1.7) == 0.0


def test_polynomial_falling_factorials():
    p = Polynomial((0.0, 0.0, 0.0, 2.0))  # 2 x^3
    assert ic_nth_derivative(p, 1, 2.0) == 24.0
    assert ic_nth_derivative(p, 3, 5.0) == 12.0


def test_custom_profile_uses_callbacks():
    ic = Custom(func=np.exp, derivative=lambda n, x: math.exp(x), name="e")
    assert ic_nth_derivative(ic, 7, 0.5) == pytest.approx(math.exp(0.5))


@pytest.mark.parametrize("g", PROFILES, ids=lambda g: g.name)
def test_time_profile_derivative(g):
    h = 1e-6
    for s in np.linspace(0.01, 1.0, 25):
        fd = (g.value(s + h) - g.value(s - h)) / (2 * h)
        d = g.derivative(s)
        assert abs(fd - d) <= 1e-6 * max(1.0, abs(d))


def test_custom_time_profile():
    g = CustomProfile(func=np.sin, deriv=np.cos)
    assert g(0.3) == math.sin(0.3) and g.derivative(0.3) == math.cos(0.3)


def test_modes_reconstruct_profiles():
    x = np.linspace(-2, 2, 9)
    for ic in (Exp(0.4), Cosh(), Sinh(), Sin(1.5), Cos(0.5)):
        total = sum(c * np.exp(r * x) for c, r in ic.modes())
        np.testing.assert_allclose(np.real(total), ic.value(x), atol=1e-14)
    assert Gaussian().modes() is None


def test_gaussian_fourier_pair():
    k = np.linspace(-6, 6, 4001)
    fhat = Gaussian().fourier_transform(k)
    for x in (0.0, 0.8, -1.7):
        inv = np.trapezoid(fhat * np.exp(2j * np.pi * k * x), k)
        assert abs(inv - math.exp(-x * x)) < 1e-12


@pytest.mark.parametrize(
    "text,expected",
    [("exp:2", Exp(2.0)), ("cosh", Cosh()), ("sinh", Sinh()), ("gaussian", Gaussian()),
     ("sin:3", Sin(3.0)), ("cos:0.5", Cos(0.5)), ("poly:1,2,3", Polynomial((1.0, 2.0, 3.0)))],
)
def test_parse_ic(text, expected):
    assert parse_ic(text) == expected


@pytest.mark.parametrize("text", ["", "cosh:1", "exp", "exp:1,2", "poly:a,b", "bessel"])
def test_parse_ic_rejects(text):
    with pytest.raises(DomainError):
        parse_ic(text)


def test_parse_profile():
    assert parse_profile("const:1") == ConstantProfile(1.0)
    assert parse_profile("exp:-0.5") == ExpProfile(-0.5)
    assert parse_profile("poly:1,0,2") == PolynomialProfile((1.0, 0.0, 2.0))
    with pytest.raises(DomainError):
        parse_profile("sin:1")


def test_descriptors_are_immutable():
    with pytest.raises(AttributeError):
        Exp(1.0).c = 2.0


def test_derivative_order_cap():
    with pytest.raises(DomainError):
        Gaussian().derivative_table(10_001, 0.0)
