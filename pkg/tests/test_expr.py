import math

import numpy as np
import pytest

from divbound.binary import make_binary, check_condition
from divbound.errors import ExpressionError, ValidationError
from divbound.expr import parse_expr, custom_generator
from divbound.fgen import get_generator


def test_simple_expr():
    res = parse_expr("t * log(t)")
    assert res(2.0) == pytest.approx(2.0 * math.log(2.0))


def test_expr_vectorised():
    res = parse_expr("1 + t")
    assert res(np.array([0.0, 1.0, 2.0])).tolist() == [1.0, 2.0, 3.0]


@pytest.mark.parametrize(
    "text, t, expected",
    [
        ("2 + 3 * t", 2.0, 8.0),
        ("(2 + 3) * t", 2.0, 10.0),
        ("8 / 2 / t", 2.0, 2.0),
        ("1 - t - 1", 2.0, -2.0),
        ("-t^2", 3.0, -9.0),
        ("2^3^2", 1.0, 512.0),
        ("2 ** -t", 1.0, 0.5),
        ("sqrt(t) * exp(0)", 4.0, 2.0),
        ("abs(1 - t)", 3.0, 2.0),
        ("1.5e1 + .5", 0.0, 15.5),
    ],
)
def test_expr_precedence(text, t, expected):
    res = parse_expr(text)
    assert res(t) == pytest.approx(expected)


def test_xlogx_at_zero():
    res = parse_expr("xlogx(t)")
    assert res(0.0) == 0.0


@pytest.mark.parametrize("text", ["t +", "foo(t)", "x * 2", "(t", ""])
def test_bad_expr(text):
    with pytest.raises(ExpressionError):
        parse_expr(text)


def test_custom_matches_catalog():
    td = get_generator("td")
    res = custom_generator("(1 - t)^2 / (2 * (1 + t))")

    t = np.linspace(0.1, 5.0, 50)
    assert np.allclose(res.f(t), td.f(t))
    assert np.allclose(res.f1(t), td.f1(t), rtol=1e-6)
    assert np.allclose(res.f2(t), td.f2(t), rtol=1e-4)
    assert res.f_at_0 == pytest.approx(0.5)
    assert res.slope_at_inf == pytest.approx(0.5, rel=1e-5)


def test_custom_limits():
    res = custom_generator("xlogx(t)")
    assert res.f_at_0 == pytest.approx(0.0, abs=1e-6)
    assert res.slope_at_inf == math.inf

    res = custom_generator("xlogx(t)", f_at_0=0.0, slope_at_inf=math.inf)
    assert res.g_at_1 == math.inf


def test_custom_certificate():
    bd = make_binary(custom_generator("xlogx(t)"))
    assert not bd.exact_derivatives
    assert check_condition(bd).satisfied


@pytest.mark.parametrize("text", ["t", "-(t - 1)^2"])
def test_custom_rejects(text):
    with pytest.raises(ValidationError):
        custom_generator(text)
