"""Model-independent Darboux / pseudo-supersymmetric partner construction.

Given a seed eigenstate ``psi_m`` of ``H_- = -d^2/dx^2 + v_-`` the engine
builds

    W   = -psi_m' / psi_m
    v_- = W^2 - W' - beta
    v_+ = W^2 + W' - beta

and maps other eigenstates with ``A psi = psi' + W psi``.  The shift
``beta`` is supplied by the caller.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DiffScheme, SampledField, differentiate

SEED_FLOOR = 1e-300
SHAPE_INVARIANCE_TOL = 1e-8


class SeedVanishes(ArithmeticError):
    """The seed state (or a denominator built from it) vanishes on the contour."""


class Annihilated(ValueError):
    """The intertwiner maps the requested state to zero."""


@dataclass(frozen=True)
class DarbouxPair:
    m: int
    W: SampledField
    v_minus: SampledField
    v_plus: SampledField
    beta: complex
    seed_energy: complex

    def check(self, tol=1e-8):
        """Sup-norm defects of the pair identities (all should be below ``tol``)."""
        dW = differentiate(self.W, _scheme(self.W))
        w2 = self.W.values ** 2
        defects = {
            "v_plus - v_minus - 2W'": _sup(self.v_plus.values - self.v_minus.values - 2 * dW.values),
            "v_minus + beta - (W^2 - W')": _sup(self.v_minus.values + self.beta - (w2 - dW.values)),
            "v_plus + beta - (W^2 + W')": _sup(self.v_plus.values + self.beta - (w2 + dW.values)),
        }
        return {k: (v, v < tol) for k, v in defects.items()}


@dataclass(frozen=True)
class ShapeInvarianceReport:
    residual_field: SampledField
    offset: complex
    flatness: float

    @property
    def shape_invariant(self) -> bool:
        return self.flatness < SHAPE_INVARIANCE_TOL


def _sup(a):
    return float(np.max(np.abs(a)))


def _scheme(f):
    return DiffScheme.ANALYTIC if f.has_analytic else DiffScheme.CENTRAL_4TH_ORDER


def _check_seed(psi):
    if np.min(np.abs(psi.values)) < SEED_FLOOR:
        k = int(np.argmin(np.abs(psi.values)))
        raise SeedVanishes(f"seed vanishes on contour near x = {psi.contour.x[k]:.6g}")


def superpotential_from_state(psi_m: SampledField) -> SampledField:
    """``W = -psi'/psi``; analytic when the seed carries a jet."""
    _check_seed(psi_m)
    c = psi_m.contour
    if psi_m.has_analytic:
        w = -(psi_m.jet.deriv() / psi_m.jet)
        return SampledField.from_jet(c, w, f"W[{psi_m.label}]")
    d = differentiate(psi_m, DiffScheme.CENTRAL_4TH_ORDER)
    return SampledField(c, -d.values / psi_m.values, f"W[{psi_m.label}]")


def make_pair(psi_m: SampledField, E_m, beta, m=None) -> DarbouxPair:
    W = superpotential_from_state(psi_m)
    c = W.contour
    if W.has_analytic:
        dW = W.jet.deriv()
        w2 = W.jet * W.jet
        vm = SampledField.from_jet(c, w2 - dW - beta, "v_minus")
        vp = SampledField.from_jet(c, w2 + dW - beta, "v_plus")
    else:
        dW = differentiate(W, DiffScheme.CENTRAL_4TH_ORDER).values
        w2 = W.values ** 2
        vm = SampledField(c, w2 - dW - beta, "v_minus")
        vp = SampledField(c, w2 + dW - beta, "v_plus")
    return DarbouxPair(m if m is not None else -1, W, vm, vp, complex(beta), complex(E_m))


def map_state(psi_n: SampledField, psi_m: SampledField) -> SampledField:
    """``phi = psi_n' - (psi_m'/psi_m) psi_n``, i.e. Wronskian(psi_m, psi_n)/psi_m."""
    if psi_n.contour != psi_m.contour:
        raise ValueError("states live on different contours")
    W = superpotential_from_state(psi_m)
    c = psi_n.contour
    if psi_n.has_analytic and W.has_analytic:
        phi = psi_n.jet.deriv() + W.jet * psi_n.jet
        return SampledField.from_jet(c, phi, f"A[{psi_n.label}]")
    d = differentiate(psi_n, DiffScheme.CENTRAL_4TH_ORDER)
    return SampledField(c, d.values + W.values * psi_n.values, f"A[{psi_n.label}]")


def shape_invariance_residual(vA: SampledField, vB: SampledField) -> ShapeInvarianceReport:
    """Compare ``vA`` with ``vB`` up to a constant: residual, mean offset, flatness."""
    if vA.contour != vB.contour:
        raise ValueError("potentials live on different contours")
    res = vA.values - vB.values
    offset = complex(np.mean(res))
    flatness = _sup(res - offset)
    return ShapeInvarianceReport(SampledField(vA.contour, res, f"{vA.label} - {vB.label}"),
                                 offset, flatness)
