"""Contour geometry, sampled complex fields, differentiation and quadrature.

Everything lives on the horizontal line ``z = x - i*epsilon`` sampled on a
uniform, symmetric real grid.  Because ``dz/dx = 1``, derivatives along the
contour with respect to ``x`` coincide with complex derivatives in ``z``.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .taylor import Jet

#: default Taylor order carried by analytic fields
JET_ORDER = 6


class ContourError(ValueError):
    pass


@dataclass(frozen=True)
class Contour:
    epsilon: float
    half_width: float
    n_points: int

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        k = np.arange(self.n_points)
        x = -self.half_width + k * self.h
        # exact symmetry: x[k] == -x[N-1-k] and x[center] == 0
        return 0.5 * (x - x[::-1])

    @property
    def z(self) -> np.ndarray:
        return self.x - 1j * self.epsilon

    @property
    def center(self) -> int:
        return self.n_points // 2

    def meta(self) -> dict:
        return {"epsilon": self.epsilon, "half_width": self.half_width,
                "n_points": self.n_points, "h": self.h}


def build_contour(epsilon, half_width, n_points) -> Contour:
    """Uniform symmetric grid on ``[-L, L]`` carrying ``z = x - i*epsilon``.

    ``n_points`` must be odd so that ``x = 0`` is a grid point and the
    reflection ``x -> -x`` maps grid points onto grid points.
    """
    if not epsilon > 0:
        raise ContourError(f"epsilon must be positive, got {epsilon}")
    if not half_width > 0:
        raise ContourError(f"half_width must be positive, got {half_width}")
    if int(n_points) != n_points or n_points < 3:
        raise ContourError(f"n_points must be an integer >= 3, got {n_points}")
    if n_points % 2 == 0:
        raise ContourError(f"n_points must be odd so x = 0 is sampled, got {n_points}")
    return Contour(float(epsilon), float(half_width), int(n_points))


@dataclass(frozen=True)
class SampledField:
    """Complex samples of a function on a contour.

    ``jet`` optionally carries Taylor coefficients at every grid point; it is
    what the ``analytic`` differentiation scheme consumes.
    """

    contour: Contour
    values: np.ndarray
    label: str = ""
    jet: Optional[Jet] = field(default=None, repr=False, compare=False)
    meta: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", values)
        if values.shape != (self.contour.n_points,):
            raise ValueError(
                f"field '{self.label}' has shape {values.shape}, "
                f"contour expects ({self.contour.n_points},)")
        if not np.all(np.isfinite(values)):
            bad = np.flatnonzero(~np.isfinite(values))
            raise FloatingPointError(
                f"field '{self.label}' is not finite at x = {self.contour.x[bad[:5]]}")

    @classmethod
    def from_jet(cls, contour, jet, label=""):
        return cls(contour, jet.value, label, jet)

    @property
    def has_analytic(self) -> bool:
        return self.jet is not None and self.jet.order >= 1

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


class DiffScheme(str, enum.Enum):
    CENTRAL_2ND_ORDER = "central_2nd_order"
    CENTRAL_4TH_ORDER = "central_4th_order"
    ANALYTIC = "analytic"


def differentiate(f: SampledField, scheme=DiffScheme.CENTRAL_2ND_ORDER) -> SampledField:
    """d/dx of a sampled field; one-sided stencils at the two ends."""
    scheme = DiffScheme(scheme)
    c = f.contour
    label = f"d({f.label})"
    if scheme is DiffScheme.ANALYTIC:
        if not f.has_analytic:
            raise ValueError(f"field '{f.label}' carries no analytic evaluator")
        return SampledField.from_jet(c, f.jet.deriv(), label)
    if scheme is DiffScheme.CENTRAL_2ND_ORDER:
        return SampledField(c, np.gradient(f.values, c.h, edge_order=2), label)
    if c.n_points < 5:
        raise ValueError("central_4th_order needs at least 5 points")
    return SampledField(c, _d4(f.values, c.h), label)


# forward 5-point stencils for the first two rows
_ONE_SIDED_4 = np.array([
    [-25.0, 48.0, -36.0, 16.0, -3.0],
    [-3.0, -10.0, 18.0, -6.0, 1.0],
]) / 12.0


def _d4(v, h):
    out = np.empty_like(v)
    out[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)
    out[0] = _ONE_SIDED_4[0] @ v[:5] / h
    out[1] = _ONE_SIDED_4[1] @ v[:5] / h
    out[-1] = -(_ONE_SIDED_4[0] @ v[-1:-6:-1]) / h
    out[-2] = -(_ONE_SIDED_4[1] @ v[-1:-6:-1]) / h
    return out


def simpson_weights(n_points, h):
    """Composite Simpson weights; ``n_points`` must be odd."""
    if n_points % 2 == 0 or n_points < 3:
        raise ValueError("Simpson's rule needs an odd number of points >= 3")
    w = np.ones(n_points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * h / 3.0


def integrate_contour(f: SampledField, decay_tol=1e-8) -> complex:
    """Simpson quadrature of ``f`` along the contour (``dz = dx``).

    Warns when the field has not decayed at the grid ends, since the
    truncated integral then misrepresents the one over the whole line.
    """
    vals = f.values
    peak = np.max(np.abs(vals))
    if peak > 0 and max(abs(vals[0]), abs(vals[-1])) >= decay_tol * peak:
        warnings.warn(
            f"field '{f.label}' has not decayed at the contour ends "
            f"(end/peak = {max(abs(vals[0]), abs(vals[-1])) / peak:.2e})",
            RuntimeWarning, stacklevel=2)
    w = simpson_weights(f.contour.n_points, f.contour.h)
    return complex(w @ vals)


def contour_log(values, anchor=None):
    """Logarithm continued along the grid.

    The phase is unwrapped point to point and pinned to the principal value
    at ``anchor`` (grid centre by default).  On the oscillator contour,
    where ``Im z = -epsilon < 0``, this coincides with the principal branch
    and with a cut along the positive imaginary axis.
    """
    values = np.asarray(values, dtype=complex)
    if anchor is None:
        anchor = values.size // 2
    phase = np.unwrap(np.angle(values))
    phase += np.angle(values[anchor]) - phase[anchor]
    return np.log(np.abs(values)) + 1j * phase


def sup_diff(a: SampledField, b: SampledField, interior=0) -> float:
    """Sup-norm of ``a - b``, optionally skipping ``interior`` points at each end."""
    if a.contour != b.contour:
        raise ContourError("fields live on different contours")
    d = np.abs(a.values - b.values)
    if interior:
        d = d[interior:-interior]
    return float(np.max(d))


def pt_defect(f: SampledField, relative=False, odd=False) -> float:
    """``sup |f(-x) - conj(f(x))|``; zero for a PT-symmetric field.

    ``odd=True`` tests ``f(-x) = -conj(f(x))`` instead, as for ``W = -psi'/psi``.
    """
    v = f.values
    d = float(np.max(np.abs(v[::-1] + (1 if odd else -1) * np.conj(v))))
    if relative:
        d /= max(float(np.max(np.abs(v))), 1e-300)
    return d
