"""Truncated Taylor series ("jets") evaluated pointwise on a grid.

A :class:`Jet` stores normalized Taylor coefficients ``c[k] = f^(k)(x) / k!``
for every sample of a field, so that arithmetic on jets propagates exact
derivatives through closed-form expressions.  This is what backs the
``analytic`` differentiation scheme.
"""
from __future__ import annotations

from math import factorial

import numpy as np


class Jet:
    """Taylor coefficients of order ``K`` at ``N`` points, shape ``(K+1, N)``."""

    __array_ufunc__ = None

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim == 1:
            c = c[:, None]
        self.c = c

    # -- construction -------------------------------------------------
    @classmethod
    def variable(cls, values, order):
        """Jet of the identity map ``t -> values + t``."""
        values = np.asarray(values, dtype=complex)
        c = np.zeros((order + 1, values.size), dtype=complex)
        c[0] = values
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, values, order):
        values = np.asarray(values, dtype=complex)
        c = np.zeros((order + 1, values.size), dtype=complex)
        c[0] = values
        return cls(c)

    @property
    def order(self):
        return self.c.shape[0] - 1

    @property
    def value(self):
        return self.c[0]

    def derivative(self, k=1):
        """k-th derivative values at each point."""
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative of order {k}")
        return factorial(k) * self.c[k]

    def deriv(self):
        """Jet of the derivative (order drops by one)."""
        if self.order < 1:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1)[:, None]
        return Jet(k * self.c[1:])

    def integrate(self, value0):
        """Antiderivative jet whose value is ``value0`` (order rises by one)."""
        K = self.order
        c = np.zeros((K + 2, self.c.shape[1]), dtype=complex)
        c[0] = value0
        c[1:] = self.c / np.arange(1, K + 2)[:, None]
        return Jet(c)

    def truncate(self, order):
        return Jet(self.c[: order + 1])

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            K = min(self.order, other.order)
            return self.c[: K + 1], other.c[: K + 1]
        other = np.asarray(other, dtype=complex)
        oc = np.zeros_like(self.c)
        oc[0] = other
        return self.c, oc

    def __add__(self, other):
        a, b = self._coerce(other)
        return Jet(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Jet(a - b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        return Jet(b - a)

    def __neg__(self):
        return Jet(-self.c)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c * np.asarray(other, dtype=complex))
        a, b = self._coerce(other)
        K = a.shape[0] - 1
        out = np.zeros_like(a)
        for k in range(K + 1):
            out[k] = np.einsum("jn,jn->n", a[: k + 1], b[k::-1])
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.c / np.asarray(other, dtype=complex))
        a, b = self._coerce(other)
        return Jet(_series_div(a, b))

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        return Jet(_series_div(b, a))

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)) and p >= 0:
            out = Jet.constant(np.ones(self.c.shape[1]), self.order)
            base = self
            while p:
                if p & 1:
                    out = out * base
                base = base * base
                p >>= 1
            return out
        return self.power(p)

    # -- elementary functions -----------------------------------------
    def power(self, p, value0=None):
        """``self ** p`` for complex ``p``; ``value0`` fixes the branch."""
        f = self.c
        K = self.order
        g = np.zeros_like(f)
        g[0] = f[0] ** p if value0 is None else value0
        for k in range(1, K + 1):
            acc = np.zeros_like(f[0])
            for j in range(1, k + 1):
                acc = acc + (p * j - (k - j)) * f[j] * g[k - j]
            g[k] = acc / (k * f[0])
        return Jet(g)

    def exp(self):
        f = self.c
        K = self.order
        e = np.zeros_like(f)
        e[0] = np.exp(f[0])
        for k in range(1, K + 1):
            acc = np.zeros_like(f[0])
            for j in range(1, k + 1):
                acc = acc + j * f[j] * e[k - j]
            e[k] = acc / k
        return Jet(e)

    def log(self, value0=None):
        """Natural log; ``value0`` supplies the branch of the leading value."""
        f = self.c
        K = self.order
        out = np.zeros_like(f)
        out[0] = np.log(f[0]) if value0 is None else value0
        for k in range(1, K + 1):
            acc = f[k].copy()
            for j in range(1, k):
                acc = acc - (j / k) * out[j] * f[k - j]
            out[k] = acc / f[0]
        return Jet(out)

    def _hyperbolic_parts(self):
        # split off the leading value so small arguments keep full precision
        f0 = self.c[0]
        d = self - f0
        ep, em = d.exp(), (-d).exp()
        return f0, (ep + em) * 0.5, (ep - em) * 0.5

    def sinh(self):
        f0, ch, sh = self._hyperbolic_parts()
        return ch * np.sinh(f0) + sh * np.cosh(f0)

    def cosh(self):
        f0, ch, sh = self._hyperbolic_parts()
        return ch * np.cosh(f0) + sh * np.sinh(f0)

    def __repr__(self):
        return f"Jet(order={self.order}, n={self.c.shape[1]})"


def _series_div(a, b):
    K = a.shape[0] - 1
    out = np.zeros_like(a)
    for k in range(K + 1):
        acc = a[k].copy()
        for j in range(1, k + 1):
            acc = acc - b[j] * out[k - j]
        out[k] = acc / b[0]
    return out
