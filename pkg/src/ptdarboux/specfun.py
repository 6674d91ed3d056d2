"""Laguerre and Jacobi polynomials with complex parameters and arguments.

Values come from the three-term recurrences in the degree, which have no
poles in the parameters.  The terminating hypergeometric series (Kummer
``M`` and Gauss ``2F1``) are kept as an independent route and serve as
test oracles.

The series accept ``dps=`` to run in ``mpmath`` at that many decimal
digits; in double precision they lose accuracy to cancellation whenever the
terms are much larger than the sum.

The recurrence helpers only use ``+``, ``-``, ``*`` and ``/`` on the
argument, so they accept numpy arrays and :class:`~ptdarboux.taylor.Jet`
objects alike.
"""
from __future__ import annotations

from contextlib import nullcontext
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special


class ParameterPole(ArithmeticError):
    """A Pochhammer symbol in a series denominator vanished."""


class PrefactorPole(ArithmeticError):
    """The Gamma-function prefactor of the hypergeometric form has a pole."""


@dataclass(frozen=True)
class PolyEvalResult:
    value: complex
    derivative_wrt_argument: complex


def _is_nonpositive_integer(a, tol=1e-12):
    a = complex(a)
    return abs(a.imag) < tol and a.real < tol and abs(a.real - round(a.real)) < tol


def _check_degree(n):
    if int(n) != n or n < 0:
        raise ValueError(f"polynomial degree must be a non-negative integer, got {n}")
    return int(n)


# -- recurrences ------------------------------------------------------------

def laguerre_value(n, sigma, y):
    """``L_n^(sigma)(y)`` by the upward recurrence in ``n``."""
    n = _check_degree(n)
    prev = 1.0 + 0.0 * y
    if n == 0:
        return prev
    cur = (sigma + 1.0) - y
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + sigma - y) * cur - (k + sigma) * prev) / (k + 1)
    return cur


def laguerre(n, sigma, y) -> PolyEvalResult:
    """Associated Laguerre polynomial and its ``y``-derivative.

    Uses ``d/dy L_n^(s) = -L_{n-1}^(s+1)``.
    """
    n = _check_degree(n)
    value = laguerre_value(n, sigma, y)
    deriv = 0.0 * y if n == 0 else -laguerre_value(n - 1, sigma + 1, y)
    return PolyEvalResult(value, deriv)


def jacobi_value(n, a, b, z):
    """``P_n^(a,b)(z)`` by the three-term recurrence.

    Falls back to the Gauss series when a recurrence denominator vanishes
    (``a + b`` a negative integer).
    """
    n = _check_degree(n)
    prev = 1.0 + 0.0 * z
    if n == 0:
        return prev
    cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * z
    for k in range(2, n + 1):
        s = 2 * k + a + b
        denom = 2 * k * (k + a + b) * (s - 2)
        if abs(denom) < 1e-300:
            return jacobi_series(n, a, b, z)
        c1 = (s - 1) * (s * (s - 2) * z + a * a - b * b)
        c2 = 2 * (k + a - 1) * (k + b - 1) * s
        prev, cur = cur, (c1 * cur - c2 * prev) / denom
    return cur


def jacobi(n, a, b, z) -> PolyEvalResult:
    """Jacobi polynomial and its ``z``-derivative.

    Uses ``d/dz P_n^(a,b) = (n + a + b + 1)/2 * P_{n-1}^(a+1,b+1)``.
    """
    n = _check_degree(n)
    value = jacobi_value(n, a, b, z)
    if n == 0:
        deriv = 0.0 * z
    else:
        deriv = 0.5 * (n + a + b + 1) * jacobi_value(n - 1, a + 1, b + 1, z)
    return PolyEvalResult(value, deriv)


# -- hypergeometric oracles ---------------------------------------------------

def _precision(dps):
    return mpmath.workdps(dps) if dps else nullcontext()


def _lift(x, dps):
    return mpmath.mpc(complex(x)) if dps else x


def _drop(x, dps):
    return complex(x) if dps else x


def kummer_m(a, b, y, dps=None):
    """Terminating Kummer series ``M(-n, b, y)``; ``a`` must equal ``-n``."""
    if not _is_nonpositive_integer(a):
        raise ValueError(f"only the terminating case a = -n is supported, got a = {a}")
    n = int(round(-complex(a).real))
    with _precision(dps):
        b, y = _lift(b, dps), _lift(y, dps)
        term = 1.0 + 0.0 * y
        total = term
        for k in range(n):
            bk = b + k
            if abs(bk) == 0:
                raise ParameterPole(f"(b)_k vanishes at k = {k + 1} for b = {complex(b)}")
            term = term * (-n + k) / bk * y / (k + 1)
            total = total + term
        return _drop(total, dps)


def gauss_2f1_poly(n, B, C, w, dps=None):
    """Terminating Gauss series ``2F1(-n, B; C; w)``."""
    n = _check_degree(n)
    with _precision(dps):
        B, C, w = _lift(B, dps), _lift(C, dps), _lift(w, dps)
        term = 1.0 + 0.0 * w
        total = term
        for k in range(n):
            ck = C + k
            if abs(ck) == 0:
                raise ParameterPole(f"(C)_k vanishes at k = {k + 1} for C = {complex(C)}")
            term = term * (-n + k) * (B + k) / ck * w / (k + 1)
            total = total + term
        return _drop(total, dps)


def _gamma_ratio(n, sigma, dps=None):
    """``Gamma(n+sigma+1) / (Gamma(n+1) Gamma(sigma+1))`` via Gamma functions."""
    for arg in (n + sigma + 1, sigma + 1):
        if _is_nonpositive_integer(arg):
            raise PrefactorPole(f"Gamma({complex(arg)}) in the prefactor is a pole")
    if dps:
        with mpmath.workdps(dps):
            s = mpmath.mpc(complex(sigma))
            return complex(mpmath.gamma(n + s + 1) / (mpmath.factorial(n) * mpmath.gamma(s + 1)))
    return special.gamma(n + sigma + 1) / (special.gamma(n + 1) * special.gamma(sigma + 1))


def laguerre_series(n, sigma, y, dps=None):
    """Oracle: ``L_n^(sigma)(y)`` from the Gamma prefactor times Kummer's ``M``."""
    n = _check_degree(n)
    return _gamma_ratio(n, sigma, dps) * kummer_m(-n, sigma + 1, y, dps)


def jacobi_series(n, a, b, z, dps=None):
    """Oracle: ``P_n^(a,b)(z)`` from the Gamma prefactor times Gauss ``2F1``."""
    n = _check_degree(n)
    return _gamma_ratio(n, a, dps) * gauss_2f1_poly(n, n + a + b + 1, a + 1, 0.5 * (1.0 - z), dps)


def relative_gap(x, y):
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    scale = np.maximum(np.maximum(np.abs(x), np.abs(y)), 1e-300)
    return float(np.max(np.abs(x - y) / scale))
