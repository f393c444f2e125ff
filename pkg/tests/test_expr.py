import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reinhardt.expr import Expression, ExpressionError


def test_caret_is_power_with_normal_precedence():
    e = Expression("1 + m1^2")
    assert e(3.0, 0.0) == 10.0
    assert Expression("-m1^2")(2.0, 0.0) == -4.0
    assert Expression("2^3^2")(0.0, 0.0) == 512.0  # right associative


def test_functions_and_constants():
    e = Expression("max(sin(log(m1)), abs(m2) - 1, -5) + exp(0) * pi / pi")
    assert e(math.e ** (math.pi / 2), 0.0) == pytest.approx(2.0)
    assert Expression("min(m1, m2, 0.5)")(1.0, 2.0) == 0.5


def test_ieee_semantics():
    assert Expression("log(m1)")(0.0, 1.0) == -np.inf
    assert np.isnan(Expression("log(m1)")(-1.0, 1.0))
    assert Expression("1/m1")(0.0, 1.0) == np.inf


def test_vectorized_broadcast():
    out = Expression("m1 + m2")(np.arange(3.0), 1.0)
    np.testing.assert_array_equal(out, [1.0, 2.0, 3.0])
    assert Expression("1")(np.zeros((2, 2)), 0.0).shape == (2, 2)


@pytest.mark.parametrize("src", [
    "__import__('os')", "m1.real", "m3 + 1", "cos(m1)", "m1 % 2", "m1 ^^ 2",
    "exp(m1, m2)", "max(m1)", "'a'", "m1 if m2 else 0", "lambda: 0", "True",
])
def test_rejected_sources(src):
    with pytest.raises(ExpressionError):
        Expression(src)


def test_missing_variable():
    with pytest.raises(ExpressionError):
        Expression("m1 + m2")(m1=1.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 10), st.floats(0.01, 10))
def test_matches_numpy_reference(a, b):
    e = Expression("m1^2 + m2^(1/0.3) - 1")
    assert e(a, b) == pytest.approx(a ** 2 + b ** (1 / 0.3) - 1, rel=1e-12)
