"""Numerical spectra of ``-d^2/dx^2 + v`` discretized along the contour.

The 3-point Laplacian with Dirichlet ends gives a complex-symmetric
tridiagonal matrix.  Eigenvalues come from a compiled implicit QL iteration
that preserves that structure; eigenvectors, when needed, come from inverse
iteration.
"""
from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._tridiag import csym_tridiag_eigvals, tridiag_solve
from .core import Contour, DiffScheme, SampledField, differentiate, simpson_weights


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class DiscreteHamiltonian:
    contour: Contour
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    @property
    def dim(self) -> int:
        return self.diagonal.size

    def dense(self) -> np.ndarray:
        return (np.diag(self.diagonal) + np.diag(self.off_diagonal, 1)
                + np.diag(self.off_diagonal, -1))


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    n_requested: int
    grid_meta: tuple
    max_imag: float
    sweeps: int = 0

    def as_dict(self):
        return {"eigenvalues": [[float(e.real), float(e.imag)] for e in self.eigenvalues],
                "n_requested": self.n_requested,
                "grid": {"half_width": self.grid_meta[0], "n_points": self.grid_meta[1],
                         "h": self.grid_meta[2]},
                "max_imag": self.max_imag, "qr_sweeps": self.sweeps}


@dataclass(frozen=True)
class MatchVerdict:
    matched_pairs: list
    missing_in_B: list
    tolerance: float
    verdict: bool
    extra_in_B: list = field(default_factory=list)
    skip: list = field(default_factory=list)

    def as_dict(self):
        c2 = lambda z: [float(z.real), float(z.imag)]  # noqa: E731
        return {"matched": [[c2(a), c2(b), d] for a, b, d in self.matched_pairs],
                "missing_in_B": [c2(z) for z in self.missing_in_B],
                "extra_in_B": [c2(z) for z in self.extra_in_B],
                "skip": [c2(z) for z in self.skip],
                "tolerance": self.tolerance, "verdict": self.verdict}


def discretize(v: SampledField) -> DiscreteHamiltonian:
    c = v.contour
    h2 = c.h ** 2
    inner = v.values[1:-1]
    diag = 2.0 / h2 + inner
    off = np.full(inner.size - 1, -1.0 / h2, dtype=complex)
    return DiscreteHamiltonian(c, diag.astype(complex), off)


def all_eigenvalues(H: DiscreteHamiltonian, max_sweeps=None) -> tuple:
    n = H.dim
    if max_sweeps is None:
        max_sweeps = 30 * n
    vals, status, sweeps = csym_tridiag_eigvals(
        np.ascontiguousarray(H.diagonal), np.ascontiguousarray(H.off_diagonal), max_sweeps)
    if status >= 0:
        raise ConvergenceError(
            f"QL iteration did not converge within {max_sweeps} sweeps "
            f"(stuck block starting at row {status})")
    return vals, sweeps


def eigen_spectrum(H: DiscreteHamiltonian, k: int) -> SpectrumReport:
    """The ``k`` eigenvalues of smallest real part."""
    if not 1 <= k <= H.dim:
        raise ValueError(f"k must be between 1 and {H.dim}, got {k}")
    vals, sweeps = all_eigenvalues(H)
    vals = vals[np.argsort(vals.real, kind="stable")][:k]
    c = H.contour
    return SpectrumReport(vals, k, (c.half_width, c.n_points, c.h),
                          float(np.max(np.abs(vals.imag))), int(sweeps))


def spectra_concurrently(potentials, k):
    """Independent eigen-solves in threads (the compiled kernel releases the GIL)."""
    with ThreadPoolExecutor(max_workers=len(potentials)) as pool:
        return list(pool.map(lambda v: eigen_spectrum(discretize(v), k), potentials))


def eigenvector(H: DiscreteHamiltonian, lam, iterations=3) -> SampledField:
    """Inverse iteration for the eigenvector nearest ``lam`` (Dirichlet ends added back)."""
    n = H.dim
    shift = lam + 1e-10 * (1 + abs(lam))
    d = H.diagonal - shift
    x = np.ones(n, dtype=complex)
    for _ in range(iterations):
        x = tridiag_solve(H.off_diagonal, d, H.off_diagonal, x)
        x /= x[np.argmax(np.abs(x))]
    full = np.zeros(H.contour.n_points, dtype=complex)
    full[1:-1] = x
    return SampledField(H.contour, full, f"eigvec({lam:.6g})")


def residual(v: SampledField, psi: SampledField, E) -> float:
    """``sup |-psi'' + (v - E) psi| / sup |psi|``, analytic derivatives when available."""
    if v.contour != psi.contour:
        raise ValueError("potential and state live on different contours")
    scale = psi.sup()
    if scale == 0:
        raise ValueError("zero state")
    if psi.jet is not None and psi.jet.order >= 2:
        d2 = psi.jet.derivative(2)
        r = -d2 + (v.values - E) * psi.values
    else:
        d2 = differentiate(differentiate(psi, DiffScheme.CENTRAL_4TH_ORDER),
                           DiffScheme.CENTRAL_4TH_ORDER).values
        r = (-d2 + (v.values - E) * psi.values)[4:-4]
    return float(np.max(np.abs(r)) / scale)


def match_spectra(A: SpectrumReport, B: SpectrumReport, skip=(), tol=5e-3,
                  relative=False) -> MatchVerdict:
    """Greedy pairing of A's levels (in order) with B's nearest remaining level.

    The verdict holds when every A level outside ``skip`` finds a partner,
    every ``skip`` level finds none, and B has no unpaired level inside A's
    range.  With ``relative=True`` the tolerance scales with ``|lambda_A|``.
    """
    skip = [complex(s) for s in skip]
    avail = list(B.eigenvalues)
    matched, missing = [], []

    def within(a, b):
        return abs(a - b) < (tol * abs(a) if relative else tol)

    for a in A.eigenvalues:
        if avail:
            j = int(np.argmin([abs(b - a) for b in avail]))
            b = avail[j]
            if within(a, b):
                matched.append((complex(a), complex(b), float(abs(a - b))))
                avail.pop(j)
                continue
        missing.append(complex(a))
    top = max(a.real for a in A.eigenvalues)
    slack = tol * abs(top) if relative else tol
    extra = [complex(b) for b in avail if b.real <= top + slack]

    def in_skip(z):
        return any(within(s, z) for s in skip)

    skip_ok = (all(in_skip(z) for z in missing)
               and all(any(within(s, z) for z in missing) for s in skip))
    verdict = skip_ok and not extra
    return MatchVerdict(matched, missing, tol, verdict, extra, skip)


def gram_cproduct(states, decay_tol=1e-8) -> np.ndarray:
    """Unconjugated overlaps ``G_mn = int phi_m phi_n dx``, rescaled to unit diagonal modulus.

    After rescaling, ``G_mn / sqrt(G_mm G_nn)`` has unit-modulus diagonal and
    the off-diagonals measure departure from c-orthogonality.
    """
    c = states[0].contour
    if any(s.contour != c for s in states):
        raise ValueError("states live on different contours")
    for s in states:
        v = s.values
        if max(abs(v[0]), abs(v[-1])) >= decay_tol * s.sup():
            warnings.warn(f"state '{s.label}' has not decayed at the contour ends",
                          RuntimeWarning, stacklevel=2)
    w = simpson_weights(c.n_points, c.h)
    M = np.array([s.values for s in states])
    G = (M * w) @ M.T
    scale = np.sqrt(np.diag(G))
    return G / np.outer(scale, scale)
