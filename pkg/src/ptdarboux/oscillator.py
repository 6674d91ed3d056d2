"""PT-symmetric oscillator ``V = z^2 + (alpha^2 - 1/4)/z^2`` on ``z = x - i eps``.

Eigenstates come in two quasi-parity families ``q = +1, -1``::

    psi_nq = exp(-z^2/2) z^(1/2 - q alpha) L_n^(-q alpha)(z^2),
    E_nq   = 4n + 2 - 2 q alpha.

Normalization constants are fixed to one; every check built on these states
(residuals, ratios, c-product orthogonality) is insensitive to them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import darboux
from .core import JET_ORDER, Contour, SampledField, contour_log, sup_diff
from .specfun import laguerre_value
from .taylor import Jet

SEED_NODE_TOL = 1e-10


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class OscillatorParams:
    alpha: complex = 0.75
    q: int = 1
    epsilon: float = 1.0
    allow_degenerate: bool = False

    def __post_init__(self):
        if self.q not in (1, -1):
            raise ParameterError(f"quasi-parity q must be +1 or -1, got {self.q}")
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        qa = self.q * complex(self.alpha)
        degenerate = self.alpha == 0 or (
            abs(qa.imag) < 1e-14 and qa.real > 0 and abs(qa.real - round(qa.real)) < 1e-14)
        if degenerate and not self.allow_degenerate:
            raise ParameterError(
                f"alpha = {self.alpha} with q = {self.q} puts the Laguerre parameter "
                "-q*alpha on a negative integer (or alpha = 0); pass allow_degenerate=True")

    @property
    def sigma(self) -> complex:
        """Laguerre parameter ``-q alpha``."""
        return -self.q * self.alpha

    @property
    def is_real(self) -> bool:
        return complex(self.alpha).imag == 0

    def with_q(self, q):
        return OscillatorParams(self.alpha, q, self.epsilon, self.allow_degenerate)

    def with_alpha(self, alpha):
        return OscillatorParams(alpha, self.q, self.epsilon, self.allow_degenerate)

    def as_dict(self):
        a = complex(self.alpha)
        return {"model": "oscillator", "alpha": [a.real, a.imag], "q": self.q,
                "epsilon": self.epsilon}


@dataclass(frozen=True)
class OscLevel:
    n: int
    energy: complex


def _check_contour(p, c):
    if not c.epsilon > 0:
        raise ParameterError("contour epsilon must be positive (z = 0 is singular)")
    if abs(c.epsilon - p.epsilon) > 1e-15:
        raise ParameterError(
            f"contour epsilon {c.epsilon} differs from parameter epsilon {p.epsilon}")


def _z(c, order=JET_ORDER):
    return Jet.variable(c.z, order)


def potential(p: OscillatorParams, c: Contour, order=JET_ORDER) -> SampledField:
    _check_contour(p, c)
    z = _z(c, order)
    v = z * z + (p.alpha ** 2 - 0.25) / (z * z)
    return SampledField.from_jet(c, v, f"V(alpha={p.alpha})")


def energy(p: OscillatorParams, n: int) -> complex:
    if n < 0:
        raise ValueError("level index must be non-negative")
    return 4 * n + 2 - 2 * p.q * p.alpha


def level(p: OscillatorParams, n: int) -> OscLevel:
    return OscLevel(n, energy(p, n))


def beta(p: OscillatorParams, m: int) -> complex:
    """Constant shift; equals ``-energy(p, m)`` so that ``v_-`` is ``V`` itself."""
    if m < 0:
        raise ValueError("seed level must be non-negative")
    return 2 * p.q * p.alpha - 2 * (2 * m + 1)


def _log_power(z, a):
    """Jet of ``z**a`` with the contour branch of ``log z``."""
    return (z.log(contour_log(z.value)) * a).exp()


def eigenfunction(p: OscillatorParams, n: int, c: Contour, order=JET_ORDER) -> SampledField:
    _check_contour(p, c)
    if n < 0:
        raise ValueError("level index must be non-negative")
    z = _z(c, order)
    y = z * z
    lag = laguerre_value(n, p.sigma, y)
    psi = (y * -0.5).exp() * _log_power(z, 0.5 - p.q * p.alpha) * lag
    f = SampledField.from_jet(c, psi, f"psi_{n},{p.q}")
    f.meta["energy"] = energy(p, n)
    return f


def _laguerre_checked(n, sigma, y, what):
    lag = laguerre_value(n, sigma, y)
    vals = lag.value if isinstance(lag, Jet) else lag
    if np.min(np.abs(vals)) < SEED_NODE_TOL:
        raise darboux.SeedVanishes(f"{what}: Laguerre factor has a zero on the contour")
    return lag


def superpotential(p: OscillatorParams, m: int, c: Contour, order=JET_ORDER) -> SampledField:
    """Closed form ``W_m = -z + (2m + 3/2 - q alpha)/z - 2(m+1)/z L_{m+1}/L_m``."""
    _check_contour(p, c)
    z = _z(c, order)
    y = z * z
    lm = _laguerre_checked(m, p.sigma, y, "seed node on contour")
    lm1 = laguerre_value(m + 1, p.sigma, y)
    w = -z + (2 * m + 1.5 - p.q * p.alpha) / z - (2.0 * (m + 1)) * lm1 / (z * lm)
    return SampledField.from_jet(c, w, f"W_{m},{p.q}")


def pair(p: OscillatorParams, m: int, c: Contour, order=JET_ORDER) -> darboux.DarbouxPair:
    """Darboux pair seeded by ``psi_mq`` with the model shift ``beta``."""
    psi = eigenfunction(p, m, c, order)
    return darboux.make_pair(psi, energy(p, m), beta(p, m), m=m)


# -- closed forms of the partners, term by term -----------------------------------

def _partner_formula(p, m, z, variant="literal"):
    qa = p.q * p.alpha
    base = z * z + (p.alpha ** 2 - 2 * qa + 0.75) / (z * z) + 2.0
    if m == 0:
        return base
    y = z * z
    if m == 1:
        d = (1.0 - qa) - y
        _guard(d, "denominator -q alpha + 1 - z^2")
        return base + 4.0 / d + 8.0 * y / (d * d)
    if m == 2:
        l2 = laguerre_value(2, -qa, y)
        _guard(l2, "L_2 denominator")
        second = l2 * l2 if variant == "squared" else l2
        return base - 4.0 * (3.0 * y - (2.0 - qa)) / l2 \
            + 8.0 * y * (y - (2.0 - qa)) ** 2 / second
    raise ValueError("closed forms exist only for m = 0, 1, 2")


def _guard(d, what):
    vals = d.value if isinstance(d, Jet) else d
    if np.min(np.abs(vals)) < SEED_NODE_TOL:
        raise darboux.SeedVanishes(f"{what} vanishes on the contour")


def partner_closed(p: OscillatorParams, m: int, c: Contour, variant="literal",
                   order=JET_ORDER) -> SampledField:
    """Closed-form partner ``v_+^(m)`` for ``m`` in {0, 1, 2}.

    ``variant="squared"`` squares the second ``L_2`` denominator of the
    ``m = 2`` form.  The deviation from the generic Darboux construction is
    stored in ``meta["deviation"]``.
    """
    _check_contour(p, c)
    if m not in (0, 1, 2):
        raise ValueError("closed forms exist only for m = 0, 1, 2")
    z = _z(c, order)
    v = _partner_formula(p, m, z, variant)
    f = SampledField.from_jet(c, v, f"v+^({m}) literal")
    generic = pair(p, m, c, order).v_plus
    f.meta["deviation"] = sup_diff(f, generic)
    return f


def partner_ground_state(p: OscillatorParams, c: Contour, order=JET_ORDER):
    """``m = 1`` partner ground state ``2/(1 - q alpha - z^2) e^{-z^2/2} z^{3/2 - q alpha}``
    and its energy ``2 - 2 q alpha``."""
    _check_contour(p, c)
    z = _z(c, order)
    y = z * z
    d = (1.0 - p.q * p.alpha) - y
    _guard(d, "denominator -q alpha + 1 - z^2")
    phi = 2.0 / d * (y * -0.5).exp() * _log_power(z, 1.5 - p.q * p.alpha)
    return SampledField.from_jet(c, phi, f"phi_0,{p.q}"), 2 - 2 * p.q * p.alpha


def map_excited(p: OscillatorParams, m: int, n: int, c: Contour, order=JET_ORDER,
                q_state=None) -> SampledField:
    """Partner eigenstate obtained by intertwining ``psi_n`` with seed ``psi_m``.

    ``q_state`` selects the quasi-parity family of the mapped state (defaults
    to the seed's).  The mapped state is an eigenfunction of ``v_+`` with the
    unshifted energy ``E_n`` because ``beta = -E_m``.
    """
    qs = p.q if q_state is None else q_state
    if n == m and qs == p.q:
        raise darboux.Annihilated("state annihilated by intertwiner (n == m)")
    seed = eigenfunction(p, m, c, order)
    ps = p.with_q(qs)
    psi = eigenfunction(ps, n, c, order)
    phi = darboux.map_state(psi, seed)
    phi.meta["energy"] = energy(ps, n)
    return phi


def excited_partner_state_m1(p: OscillatorParams, n: int, c: Contour, order=JET_ORDER) -> SampledField:
    """Closed-form ``m = 1`` excited partner state ``(f1 f'_n - f1' f_n)/f1 * psi_0``
    with ``f_k = L_k^(-q alpha)(z^2)``; labelled by the original level ``n``."""
    _check_contour(p, c)
    z = _z(c, order)
    y = z * z
    f1 = laguerre_value(1, p.sigma, y)
    fn = laguerre_value(n, p.sigma, y)
    psi0 = eigenfunction(p, 0, c, order).jet
    phi = (f1 * fn.deriv() - f1.deriv() * fn) / f1 * psi0
    return SampledField.from_jet(c, phi, f"phi_mapped_{n},{p.q}")
