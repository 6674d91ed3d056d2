import math

import numpy as np
from hypothesis import given, settings, strategies as st

from ptdarboux.taylor import Jet

K = 6


def test_variable_and_constant():
    x = Jet.variable(np.array([1.5 + 0.5j]), K)
    assert x.order == K
    np.testing.assert_allclose(x.value, [1.5 + 0.5j])
    assert x.derivative(1)[0] == 1
    assert np.all(x.derivative(2) == 0)
    c = Jet.constant(np.array([3.0]), K)
    assert np.all(c.deriv().value == 0)


def test_exp_matches_all_derivatives():
    x0 = np.array([0.3 - 0.2j, -1.1 + 0.4j])
    e = Jet.variable(x0, K).exp()
    for k in range(K + 1):
        np.testing.assert_allclose(e.derivative(k), np.exp(x0), rtol=1e-13)


def test_log_and_power_against_closed_forms():
    x0 = np.array([0.7 - 0.9j])
    x = Jet.variable(x0, K)
    lg = x.log(np.log(x0))
    # d^k/dx^k log x = (-1)^(k-1) (k-1)! / x^k
    for k in range(1, K + 1):
        ref = (-1) ** (k - 1) * math.factorial(k - 1) / x0 ** k
        np.testing.assert_allclose(lg.derivative(k), ref, rtol=1e-12)
    p = -0.25 + 0.1j
    pw = x.power(p, x0 ** p)
    falling = 1.0 + 0j
    for k in range(K + 1):
        np.testing.assert_allclose(pw.derivative(k), falling * x0 ** (p - k), rtol=1e-12)
        falling *= p - k


def test_sinh_cosh_identity():
    x = Jet.variable(np.linspace(-3, 3, 7) - 0.4j, K)
    one = x.cosh() * x.cosh() - x.sinh() * x.sinh()
    np.testing.assert_allclose(one.value, 1, atol=1e-13)
    for k in range(1, K + 1):
        np.testing.assert_allclose(one.derivative(k), 0, atol=1e-11)


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(min_magnitude=0.2, max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(min_magnitude=0.2, max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_quotient_rule(a, b):
    x = Jet.variable(np.array([a]), K)
    f = x * x + 1
    g = x + b
    q = f / g
    back = q * g
    for k in range(K + 1):
        np.testing.assert_allclose(back.derivative(k), f.derivative(k), atol=1e-9 * (1 + abs(a)) ** 4)


def test_integrate_inverts_deriv():
    x = Jet.variable(np.array([0.2 + 0.1j]), K)
    f = x.exp() * x
    g = f.deriv().integrate(f.value)
    np.testing.assert_allclose(g.c[:K], f.c[:K], rtol=1e-13)
