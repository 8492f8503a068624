from fractions import Fraction

import pytest

from core.addons.errors import DivisionError, ReconstructionError
from core.models.symlaurent import (
    LaurentPoly, PowerSeries, RatFunc, parse_poly, one_minus, expand, reconstruct,
)

X = LaurentPoly.var('X')
a = LaurentPoly.var('a')
b = LaurentPoly.var('b')
c = LaurentPoly.var('c')


def test_h_squares_to_p():
    assert LaurentPoly.var('h') ** 2 == LaurentPoly.var('p')
    assert LaurentPoly.var('h') ** 3 == LaurentPoly.var('h') * LaurentPoly.var('p')


def test_parse_and_render():
    assert str(parse_poly("2*a - 1")) == "2*a - 1"
    assert parse_poly("a^-1 + 2").evaluate({'a': Fraction(1, 2)}) == 4
    assert parse_poly("3/2*b*a^2") == Fraction(3, 2) * b * a ** 2
    with pytest.raises(ValueError):
        parse_poly("")
    with pytest.raises(ValueError):
        parse_poly("2*(a+1)")


def test_laurent_units():
    poly = a * b ** -2
    assert poly * poly.inverse_monomial() == 1
    with pytest.raises(DivisionError):
        (a + 1).inverse_monomial()


def test_exact_division():
    assert (X ** 2 - 1).divide_exact(X - 1) == X + 1
    product = (1 - a * X) * (1 + b * X + c * X ** 2)
    assert product.divide_exact(1 - a * X) == 1 + b * X + c * X ** 2
    with pytest.raises(DivisionError):
        (X ** 2 + 1).divide_exact(X - 1)
    with pytest.raises(DivisionError):
        X.divide_exact(LaurentPoly())


def test_geometric_expansion():
    series = expand(RatFunc(1, one_minus(a)), 5)
    assert series.order == 5
    for k in range(6):
        assert series.coeffs[k] == a ** k


def test_series_inverse():
    series = PowerSeries.from_poly(1 - a * X - b * X ** 2, 6)
    unit = series * series.inverse()
    assert unit.coeffs[0] == 1
    assert all(coeff.is_zero() for coeff in unit.coeffs[1:])


def test_first_mismatch():
    left = PowerSeries([1, a, a ** 2])
    right = PowerSeries([1, a, b])
    assert left.first_mismatch(right) == 2
    assert left.first_mismatch(left) is None


def test_ratfunc_equality_is_cross_multiplication():
    assert RatFunc(X ** 2 - 1, X - 1) == RatFunc(X + 1)
    assert RatFunc(1, 1 - X) + RatFunc(X, 1 - X) == RatFunc(1 + X, 1 - X)
    with pytest.raises(DivisionError):
        RatFunc(1, 0)


def test_substitution():
    rf = RatFunc(1 + a * X, 1 - a ** -1 * X)
    value = rf.substitute({'a': 2})
    assert value == RatFunc(2 + 4 * X, 2 - X)


def test_reconstruct_recovers_rational_function():
    original = RatFunc(1 + b * X, (1 - a * X) * (1 - c * X))
    series = expand(original, 6)
    assert reconstruct(series, 1, 2).equals(original)


def test_reconstruct_constant_numerator():
    original = RatFunc(1, (1 - a * X) * (1 - b * X))
    assert reconstruct(expand(original, 5), 0, 2).equals(original)


def test_reconstruct_needs_enough_coefficients():
    series = expand(RatFunc(1 + b * X, (1 - a * X) * (1 - c * X)), 3)
    with pytest.raises(ReconstructionError):
        reconstruct(series, 1, 2)


def test_reconstruct_rejects_tight_bounds():
    series = expand(RatFunc(1, (1 - a * X) * (1 - b * X) * (1 - c * X)), 8)
    with pytest.raises(ReconstructionError):
        reconstruct(series, 0, 2)
