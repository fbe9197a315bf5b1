from fractions import Fraction

import pytest

from tropisolve.numeric import (EPS, POS_INF, ZERO, EpsNum, ExtVal, eps_compare, ext_strict_gt,
                                format_rational, parse_epsnum, parse_rational)


def test_rational_sum():
    assert Fraction(1, 3) + Fraction(1, 6) == Fraction(1, 2)


@pytest.mark.parametrize("text,value", [("3", 3), ("-4", -4), ("7/14", Fraction(1, 2)), (" -3/9 ", Fraction(-1, 3))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


def test_parse_rational_rejects_floats_and_zero_denominator():
    with pytest.raises(ValueError):
        parse_rational("0.5")
    with pytest.raises(ZeroDivisionError):
        parse_rational("1/0")


def test_format_rational():
    assert format_rational(Fraction(6, 4)) == "3/2"
    assert format_rational(Fraction(-2)) == "-2"


def test_eps_compare_examples():
    assert eps_compare(EpsNum(0, 1), EpsNum(1, 0)) == -1
    assert eps_compare(EpsNum(3, -5), EpsNum(3, -5)) == 0
    assert eps_compare(EpsNum(Fraction(1, 2), 100), EpsNum(Fraction(1, 2), 99)) == 1


def test_epsnum_arithmetic():
    assert EpsNum(1, Fraction(-1, 2)) * 2 == EpsNum(2, -1)
    assert EpsNum(1, 0) - EpsNum(0, 1) == EpsNum(1, -1)
    assert -EPS == EpsNum(0, -1)
    assert EpsNum(3, 6) / 3 == EpsNum(1, 2)
    assert EpsNum(2, 5).at(Fraction(1, 10)) == Fraction(5, 2)


def test_epsnum_product_of_two_eps_values_is_rejected():
    with pytest.raises(TypeError):
        EPS * EPS


def test_epsnum_agrees_with_rationals():
    assert EpsNum(5, 0) == Fraction(5)
    assert hash(EpsNum(5, 0)) == hash(Fraction(5))
    assert ZERO < EPS < EpsNum(1)


def test_parse_epsnum():
    assert parse_epsnum("1 - eps") == EpsNum(1, -1)
    assert parse_epsnum("3/2*eps") == EpsNum(0, Fraction(3, 2))
    assert parse_epsnum("-2") == EpsNum(-2)
    assert str(EpsNum(1, -1)) == "1 - eps"


def test_ext_strict_gt():
    assert ext_strict_gt(POS_INF, POS_INF)
    assert not ext_strict_gt(ExtVal(0), ExtVal(0))
    assert ext_strict_gt(POS_INF, ExtVal(10**9))
    assert not ext_strict_gt(ExtVal(10**9), POS_INF)


def test_extval_order_and_arithmetic():
    assert ExtVal(3) < POS_INF
    assert ExtVal(3) + 2 == ExtVal(5)
    assert (POS_INF + ExtVal(-100)).is_inf
    assert ExtVal(4).scale(Fraction(1, 2)) == ExtVal(2)
    with pytest.raises(ValueError):
        ExtVal(1).scale(0)
