"""Generalized Ginocchio potential on the contour ``r = x - i eps``.

The potential is written in terms of ``u(r)``, known only implicitly::

    r = [artanh(sinh u / sqrt(D)) + c * arctan(c sinh u / sqrt(D))] / gamma^2,
    D = gamma^2 + sinh^2 u,   c = sqrt(gamma^2 - 1),

equivalently ``du/dr = gamma^2 cosh u / sqrt(D)``.  The map is built by
Newton's method with every multivalued piece (``sqrt(D)`` and three
logarithms) continued from the neighbouring grid point, and checked against
an independent integration of the ODE.  All x-derivatives of u-dependent
quantities go through Taylor jets generated from the ODE, never through
differences of the Newton output.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import darboux
from .core import JET_ORDER, Contour, SampledField, contour_log, sup_diff
from .specfun import jacobi_value
from .taylor import Jet

NEWTON_MAXITER = 50
NEWTON_TOL = 1e-10
ODE_TOL = 1e-8
SEED_NODE_TOL = 1e-10


class ParameterError(ValueError):
    pass


class MapFailure(ArithmeticError):
    """Newton did not converge, or disagrees with the ODE integration."""


@dataclass(frozen=True)
class GinocchioParams:
    gamma: float = 1.0
    s: float = 2.0
    alpha: complex = 0.75
    q: int = 1
    epsilon: float = 1.0

    def __post_init__(self):
        if not self.gamma >= 1:
            raise ParameterError(f"gamma must be >= 1, got {self.gamma}")
        if not self.s > 0:
            raise ParameterError(f"s must be positive, got {self.s}")
        if self.q not in (1, -1):
            raise ParameterError(f"quasi-parity q must be +1 or -1, got {self.q}")
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")

    @property
    def is_real(self) -> bool:
        return complex(self.alpha).imag == 0

    def with_q(self, q):
        return GinocchioParams(self.gamma, self.s, self.alpha, q, self.epsilon)

    def as_dict(self):
        a = complex(self.alpha)
        return {"model": "ginocchio", "gamma": self.gamma, "s": self.s,
                "alpha": [a.real, a.imag], "q": self.q, "epsilon": self.epsilon}


@dataclass(frozen=True)
class GinLevel:
    n: int
    mu: complex
    energy: complex


@dataclass(frozen=True)
class CoordinateMap:
    params: GinocchioParams
    contour: Contour
    u_values: np.ndarray
    residuals: np.ndarray
    sqrt_d: np.ndarray = field(repr=False)
    ode_gap: float = float("nan")
    newton_iterations: int = 0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def jets(self, order=JET_ORDER):
        """Taylor jets ``(u, sinh u, cosh u, D^(-1/2))`` in ``r`` at every grid point."""
        if order not in self._cache:
            self._cache[order] = _u_jets(self, order)
        return self._cache[order]


# -- implicit map --------------------------------------------------------------

def _clog(w, ref):
    """Log of ``w`` on the branch nearest to ``ref``."""
    v = cmath.log(w)
    return v + 2j * math.pi * round((ref.imag - v.imag) / (2 * math.pi))


class _Branch:
    """Implicit-map evaluator with branch state continued from a reference point."""

    def __init__(self, gamma):
        self.g = gamma
        self.g2 = gamma * gamma
        self.c = math.sqrt(gamma * gamma - 1.0)
        self.log_g = math.log(gamma)

    def origin(self):
        lg = complex(self.log_g)
        return (complex(self.g), lg, lg, lg)

    def eval(self, u, ref):
        g2, c = self.g2, self.c
        S, C = cmath.sinh(u), cmath.cosh(u)
        w = cmath.sqrt(g2 + S * S)
        if abs(w - ref[0]) > abs(w + ref[0]):
            w = -w
        # w^2 - S^2 = g^2 and (w + icS)(w - icS) = g^2 C^2 give cancellation-free forms
        a, am = w + S, w - S
        if abs(a) < abs(am):
            a = g2 / am
        bp, bm = w + 1j * c * S, w - 1j * c * S
        if abs(bp) < abs(bm):
            bp = g2 * C * C / bm
        else:
            bm = g2 * C * C / bp
        la, lp, lm = _clog(a, ref[1]), _clog(bp, ref[2]), _clog(bm, ref[3])
        r = (la - self.log_g + c / 2j * (lp - lm)) / g2
        drdu = w / (g2 * C)
        return r, drdu, (w, la, lp, lm)

    def solve(self, r_target, u0, ref):
        u = u0
        for it in range(1, NEWTON_MAXITER + 1):
            r, drdu, state = self.eval(u, ref)
            step = (r - r_target) / drdu
            u -= step
            if abs(step) <= 1e-12 * max(1.0, abs(u)):
                # quadratic convergence: one more step lands on the rounding floor
                r, drdu, state = self.eval(u, ref)
                u -= (r - r_target) / drdu
                r, drdu, state = self.eval(u, ref)
                return u, abs(r - r_target), state, drdu, it + 1
        raise MapFailure(f"Newton did not converge at r = {r_target} after {NEWTON_MAXITER} iterations")


def _march(br, rs, u, drdu, state):
    us = np.empty(len(rs), dtype=complex)
    res = np.empty(len(rs))
    ws = np.empty(len(rs), dtype=complex)
    iters = 0
    r_prev = None
    for j, r in enumerate(rs):
        guess = u if r_prev is None else u + (r - r_prev) / drdu
        u, res[j], state, drdu, it = br.solve(r, guess, state)
        us[j], ws[j] = u, state[0]
        iters += it
        r_prev = r
    return us, res, ws, iters, u, drdu, state


def u_of_r(p: GinocchioParams, c: Contour, n_lift=400, check_ode=True) -> CoordinateMap:
    """Solve the implicit relation for ``u`` at every contour point.

    The branch is fixed by continuation from ``r = 0`` (``u = 0``) straight
    down to ``r = -i eps``, then outward along the contour in both directions.
    """
    if abs(c.epsilon - p.epsilon) > 1e-15:
        raise ParameterError(f"contour epsilon {c.epsilon} differs from parameter epsilon {p.epsilon}")
    if p.epsilon >= confining_epsilon_limit(p.gamma):
        warnings.warn(f"epsilon = {p.epsilon} >= pi/(2 gamma^2): the contour image stays "
                      "bounded in u and the potential does not decay", RuntimeWarning, stacklevel=2)
    br = _Branch(p.gamma)
    state = br.origin()
    lift = -1j * p.epsilon * np.arange(1, n_lift + 1) / n_lift
    _, _, _, iters, u0, drdu0, state0 = _march(br, lift, 0j, p.gamma ** -2 + 0j, state)

    z = c.z
    k0 = c.center
    N = c.n_points
    u = np.empty(N, dtype=complex)
    res = np.empty(N)
    w = np.empty(N, dtype=complex)
    # centre point then each half
    uc, rc, wc, it, _, _, _ = _march(br, z[k0:k0 + 1], u0, drdu0, state0)
    u[k0], res[k0], w[k0] = uc[0], rc[0], wc[0]
    iters += it
    _, drdu_c, st_c = br.eval(u[k0], state0)
    for idx in (np.arange(k0 + 1, N), np.arange(k0 - 1, -1, -1)):
        uu, rr, ww, it, *_ = _march(br, np.concatenate([[z[k0]], z[idx]]), u[k0], drdu_c, st_c)
        u[idx], res[idx], w[idx] = uu[1:], rr[1:], ww[1:]
        iters += it

    gap = float("nan")
    if check_ode:
        u_ode = ode_map(p, c)
        gap = float(np.max(np.abs(u_ode - u)))
        if not gap < ODE_TOL:
            raise MapFailure(f"Newton and ODE maps disagree by {gap:.3e}")
    if not np.max(res) < NEWTON_TOL:
        raise MapFailure(f"implicit relation residual {np.max(res):.3e} too large")
    return CoordinateMap(p, c, u, res, w, gap, iters)


def _ode_rhs(gamma):
    g2 = gamma * gamma

    def rhs(t, y, dr):
        u, w = y
        S, C = np.sinh(u), np.cosh(u)
        du = g2 * C / w
        return np.array([du * dr, S * C * du / w * dr])

    return rhs


def ode_map(p: GinocchioParams, c: Contour, rtol=1e-13, atol=1e-14) -> np.ndarray:
    """Independent ``u`` along the contour from ``du/dr = gamma^2 cosh u / sqrt(D)``.

    ``sqrt(D)`` is integrated alongside ``u`` so no square-root branch is ever
    chosen.  The path is ``0 -> -i eps`` then outward along the contour.
    """
    rhs = _ode_rhs(p.gamma)
    y0 = np.array([0j, complex(p.gamma)])
    down = solve_ivp(rhs, (0.0, p.epsilon), y0, method="DOP853", rtol=rtol, atol=atol,
                     args=(-1j,))
    yc = down.y[:, -1]
    x = c.x
    k0 = c.center
    u = np.empty(c.n_points, dtype=complex)
    u[k0] = yc[0]
    right = solve_ivp(rhs, (0.0, x[-1]), yc, method="DOP853", rtol=rtol, atol=atol,
                      t_eval=x[k0 + 1:], args=(1.0,))
    left = solve_ivp(rhs, (0.0, -x[0]), yc, method="DOP853", rtol=rtol, atol=atol,
                     t_eval=-x[k0 - 1::-1], args=(-1.0,))
    u[k0 + 1:] = right.y[0]
    u[k0 - 1::-1] = left.y[0]
    return u


def implicit_r(p: GinocchioParams, u) -> np.ndarray:
    """Principal-branch evaluation of the implicit relation (valid near the real axis)."""
    g2 = p.gamma ** 2
    c = math.sqrt(g2 - 1.0)
    S = np.sinh(u)
    t = S / np.sqrt(g2 + S * S)
    return (np.arctanh(t) + c * np.arctan(c * t)) / g2


def _u_jets(m: CoordinateMap, order):
    g2 = m.params.gamma ** 2
    u0 = m.u_values
    inv_w = 1.0 / m.sqrt_d
    uj = Jet.variable(u0, 1)
    # Picard iteration on du/dr = g^2 cosh u D^(-1/2); each pass gains one order
    for _ in range(order):
        S, C = uj.sinh(), uj.cosh()
        F = C * (g2 + S * S).power(-0.5, inv_w) * g2
        uj = F.integrate(u0)
    uj = uj.truncate(order)
    S, C = uj.sinh(), uj.cosh()
    Dm12 = (g2 + S * S).power(-0.5, inv_w)
    return uj, S, C, Dm12


# -- model -----------------------------------------------------------------------

def mu(p: GinocchioParams, n: int) -> complex:
    g2 = p.gamma ** 2
    k = 2 * n - p.q * p.alpha + 1
    root = np.sqrt(complex(k * k * (1 - g2) + g2 * (p.s + 0.5) ** 2))
    return complex((-k + root) / g2)


def energy(p: GinocchioParams, n: int) -> complex:
    return -p.gamma ** 4 * mu(p, n) ** 2


def beta(p: GinocchioParams, m: int) -> complex:
    return p.gamma ** 4 * mu(p, m) ** 2


def levels(p: GinocchioParams) -> list:
    """Bound levels: ``n < (s + q alpha - 1/2)/2`` with ``mu_n > 0``."""
    bound = (p.s + (p.q * complex(p.alpha)).real - 0.5) / 2
    out = []
    n = 0
    while n < bound:
        m = mu(p, n)
        if m.real > 0:
            out.append(GinLevel(n, m, -p.gamma ** 4 * m * m))
        n += 1
    return out


def confining_epsilon_limit(gamma: float) -> float:
    """Largest contour shift for which ``u(x - i eps)`` still runs off to ``|u| -> inf``.

    Along ``u = t - i phi`` with ``t -> inf`` one has
    ``r ~ (u - log gamma + c arctan c) / gamma^2``, so ``Im r -> -phi/gamma^2``;
    the image must stay in the strip ``|Im u| < pi/2``, where ``cosh u`` has
    no zero, hence ``eps < pi/(2 gamma^2)``.
    """
    return math.pi / (2 * gamma * gamma)


def _check_level(p, n):
    if n not in [lv.n for lv in levels(p)]:
        raise ParameterError(f"n = {n} is not a bound level of {p}")


def potential(p: GinocchioParams, cmap: CoordinateMap, order=JET_ORDER) -> SampledField:
    """Ginocchio potential (attractive sign, so that the Jacobi states are its bound states)."""
    g2 = p.gamma ** 2
    _, S, C, Dm12 = cmap.jets(order)
    if np.min(np.abs(S.value)) == 0 and p.alpha ** 2 != 0.25:
        raise darboux.SeedVanishes("sinh u vanishes on the contour")
    invD = Dm12 * Dm12
    a = 1 - g2
    bracket = (p.s * (p.s + 1) + a
               - 1.25 * g2 * a * a * invD * invD
               - 0.75 * a * (3 * g2 - 1) * invD
               - (p.alpha ** 2 - 0.25) * (C * C) / (S * S))
    v = -(p.gamma ** 4) * invD * bracket
    return SampledField.from_jet(cmap.contour, v, f"V_gin(gamma={p.gamma})")


def _tanh2(S, C):
    return (S * S) / (C * C)


def jacobi_factor(p: GinocchioParams, cmap: CoordinateMap, n: int, order=JET_ORDER) -> Jet:
    """``f_n = P_n^(mu_n, -q alpha)(2 tanh^2 u - 1)`` as a jet in ``r``."""
    _, S, C, _ = cmap.jets(order)
    return jacobi_value(n, mu(p, n), -p.q * p.alpha, 2.0 * _tanh2(S, C) - 1.0)


def eigenfunction(p: GinocchioParams, cmap: CoordinateMap, n: int, order=JET_ORDER) -> SampledField:
    """Bound state with unit normalization constant."""
    _check_level(p, n)
    _, S, C, Dm12 = cmap.jets(order)
    f = jacobi_factor(p, cmap, n, order)
    if np.min(np.abs(f.value)) < SEED_NODE_TOL:
        raise darboux.SeedVanishes(f"Jacobi factor f_{n} vanishes on the contour")
    m_n = mu(p, n)
    qa = p.q * p.alpha
    # (gamma^2 + sinh^2 u)^(1/4) = exp(-log(D^(-1/2)) / 2), branch of sqrt(D) from the map
    lw = contour_log(cmap.sqrt_d)
    log_psi = (-0.5 * Dm12.log(-lw)
               + (0.5 - qa) * S.log(contour_log(S.value))
               + (-m_n + qa - 1) * C.log(contour_log(C.value))
               + f.log(contour_log(f.value)))
    psi = log_psi.exp()
    out = SampledField.from_jet(cmap.contour, psi, f"psi_gin_{n},{p.q}")
    out.meta["energy"] = energy(p, n)
    return out


def superpotential(p: GinocchioParams, cmap: CoordinateMap, m: int, order=JET_ORDER) -> SampledField:
    """Closed form of ``-psi_m'/psi_m`` with derivatives through ``du/dr``."""
    _check_level(p, m)
    g2 = p.gamma ** 2
    _, S, C, Dm12 = cmap.jets(order)
    f = jacobi_factor(p, cmap, m, order)
    if np.min(np.abs(f.value)) < SEED_NODE_TOL:
        raise darboux.SeedVanishes("seed node on contour")
    qa = p.q * p.alpha
    w = (-0.5 * g2 * S * C * C * Dm12 * Dm12 * Dm12
         + g2 * Dm12 * ((mu(p, m) + 0.5) * S + (qa - 0.5) / S)
         - f.deriv() / f)
    return SampledField.from_jet(cmap.contour, w, f"W_gin_{m},{p.q}")


def pair(p: GinocchioParams, cmap: CoordinateMap, m: int, order=JET_ORDER) -> darboux.DarbouxPair:
    psi = eigenfunction(p, cmap, m, order)
    return darboux.make_pair(psi, energy(p, m), beta(p, m), m=m)


def f1_literal(p: GinocchioParams, cmap: CoordinateMap, order=JET_ORDER) -> Jet:
    """``f_1 = q alpha - 1 + (mu_1 - q alpha + 2) tanh^2 u``."""
    _, S, C, _ = cmap.jets(order)
    qa = p.q * p.alpha
    return (qa - 1) + (mu(p, 1) - qa + 2) * _tanh2(S, C)


def partner_m1_literal(p: GinocchioParams, cmap: CoordinateMap, order=JET_ORDER) -> SampledField:
    """Closed form of the ``m = 1`` partner taken term by term as written."""
    g2 = p.gamma ** 2
    g4 = g2 * g2
    _, S, C, Dm12 = cmap.jets(order)
    invD = Dm12 * Dm12
    qa = p.q * p.alpha
    m1 = mu(p, 1)
    K = m1 - qa + 2
    a = 1 - g2
    T2 = _tanh2(S, C)
    sech2 = 1.0 / (C * C)
    f1 = f1_literal(p, cmap, order)
    brace = (p.s * (p.s + 1) + g2 * (1 - 2 * m1) + 2 * qa - 2
             - (p.alpha ** 2 - 2 * qa + 0.75) * (C * C) / (S * S)
             + 1.75 * g2 * a * a * invD * invD
             - a * invD * (g2 * (2 * m1 - 2.75) + 2.25 - 2 * qa))
    v = (-g4 * invD * brace
         - 4 * g4 * K * invD
         + 4 * g4 / (f1 * f1) * K * K * invD * T2 * sech2
         - 4 * g4 * K / f1 * invD * (-2.0 * T2 + g2 * invD))
    return SampledField.from_jet(cmap.contour, v, "v+^(1) literal")


def partner_m1(p: GinocchioParams, cmap: CoordinateMap, order=JET_ORDER) -> SampledField:
    """Generic ``m = 1`` partner ``W^2 + W' - beta``.

    ``meta["literal_deviation"]`` holds the sup-norm gap to the literal form.
    """
    _check_level(p, 1)
    f1 = jacobi_factor(p, cmap, 1, order)
    if np.min(np.abs(f1.value)) < SEED_NODE_TOL:
        raise darboux.SeedVanishes("f_1 vanishes on the contour")
    vp = pair(p, cmap, 1, order).v_plus
    literal = partner_m1_literal(p, cmap, order)
    vp.meta["literal_deviation"] = sup_diff(vp, literal)
    vp.meta["beta"] = beta(p, 1)
    return vp
