import numpy as np
import pytest

from ptdarboux import darboux, oscillator as osc
from ptdarboux.core import DiffScheme, SampledField, build_contour, differentiate
from ptdarboux.spectra import residual
from ptdarboux.taylor import Jet

P = osc.OscillatorParams(0.75, 1, 1.0)


def _gaussian(c):
    z = Jet.variable(c.z, 6)
    return SampledField.from_jet(c, (z * z * -0.5).exp(), "gauss")


def test_gaussian_seed_gives_harmonic_pair(osc_contour):
    psi = _gaussian(osc_contour)
    z = osc_contour.z
    W = darboux.superpotential_from_state(psi)
    np.testing.assert_allclose(W.values, z, atol=1e-13)
    pr = darboux.make_pair(psi, 1.0, -1.0)
    np.testing.assert_allclose(pr.v_minus.values, z ** 2, atol=1e-12)
    np.testing.assert_allclose(pr.v_plus.values, z ** 2 + 2, atol=1e-12)


def test_constant_seed():
    c = build_contour(1.0, 2.0, 21)
    psi = SampledField.from_jet(c, Jet.constant(np.full(21, 2.0 + 1j), 4))
    np.testing.assert_allclose(darboux.superpotential_from_state(psi).values, 0, atol=1e-15)


def test_ground_state_seed_matches_closed_form(osc_contour):
    for q in (1, -1):
        p = P.with_q(q)
        W = darboux.superpotential_from_state(osc.eigenfunction(p, 0, osc_contour))
        z = osc_contour.z
        np.testing.assert_allclose(W.values, z + (q * 0.75 - 0.5) / z, atol=1e-12)


def test_stencil_path_without_jet(osc_contour):
    psi = osc.eigenfunction(P, 1, osc_contour)
    bare = SampledField(osc_contour, psi.values, "bare")
    W = darboux.superpotential_from_state(bare)
    exact = osc.superpotential(P, 1, osc_contour).values
    # truncation error ~ h^4 psi^(5)/psi grows like x^5 in the Gaussian tail
    bulk = np.abs(osc_contour.x) <= 5
    assert np.max(np.abs(W.values - exact)[bulk]) < 1e-6


@pytest.mark.parametrize("m", range(4))
@pytest.mark.parametrize("q", [1, -1])
def test_pair_identities(osc_contour, m, q):
    p = P.with_q(q)
    pr = osc.pair(p, m, osc_contour)
    for name, (val, ok) in pr.check(1e-8).items():
        assert ok, (name, val)
    # v_minus is the original potential because beta = -E_m
    np.testing.assert_allclose(pr.v_minus.values, osc.potential(p, osc_contour).values, atol=1e-8)
    dW = differentiate(pr.W, DiffScheme.ANALYTIC).values
    np.testing.assert_allclose(pr.v_plus.values - pr.v_minus.values, 2 * dW, atol=1e-8)


def test_seed_vanishing_is_fatal():
    c = build_contour(1.0, 2.0, 21)
    v = np.ones(21, dtype=complex)
    v[7] = 0
    with pytest.raises(darboux.SeedVanishes):
        darboux.superpotential_from_state(SampledField(c, v))


def test_map_state_annihilates_seed(osc_contour):
    psi = osc.eigenfunction(P, 1, osc_contour)
    phi = darboux.map_state(psi, psi)
    assert phi.sup() < 1e-12 * psi.sup() * 10


def test_map_state_is_wronskian_over_seed(osc_contour):
    pm = osc.eigenfunction(P, 1, osc_contour)
    pn = osc.eigenfunction(P, 3, osc_contour)
    phi = darboux.map_state(pn, pm)
    wr = pm.values * pn.jet.derivative(1) - pm.jet.derivative(1) * pn.values
    np.testing.assert_allclose(phi.values, wr / pm.values, rtol=1e-10, atol=1e-14)


def test_intertwining_for_all_verified_states(osc_contour):
    pr = osc.pair(P, 1, osc_contour)
    seed = osc.eigenfunction(P, 1, osc_contour)
    for q in (1, -1):
        pq = P.with_q(q)
        for n in range(5):
            if q == 1 and n == 1:
                continue
            psi = osc.eigenfunction(pq, n, osc_contour)
            phi = darboux.map_state(psi, seed)
            assert residual(pr.v_plus, phi, osc.energy(pq, n)) < 1e-5


def test_shape_invariance_m0(osc_contour):
    for q in (1, -1):
        p = P.with_q(q)
        vp = osc.pair(p, 0, osc_contour).v_plus
        shifted = osc.potential(osc.OscillatorParams(0.75 - q, q, allow_degenerate=True), osc_contour)
        rep = darboux.shape_invariance_residual(vp, shifted)
        assert rep.offset == pytest.approx(2, abs=1e-10)
        assert rep.flatness < 1e-10
        assert rep.shape_invariant
        closed = osc.partner_closed(p, 0, osc_contour)
        rep2 = darboux.shape_invariance_residual(closed, shifted)
        assert rep2.offset == pytest.approx(2, abs=1e-12)
        assert rep2.flatness < 1e-10


def test_identical_fields_are_trivially_shape_invariant(osc_contour):
    v = osc.potential(P, osc_contour)
    rep = darboux.shape_invariance_residual(v, v)
    assert rep.offset == 0 and rep.flatness == 0


def test_m1_partner_is_not_shape_invariant(osc_contour):
    vp = osc.pair(P, 1, osc_contour).v_plus
    for a2 in (0.75 - 1, 0.75 + 1, 0.75 - 2):
        cand = osc.potential(osc.OscillatorParams(a2, 1, allow_degenerate=True), osc_contour)
        rep = darboux.shape_invariance_residual(vp, cand)
        assert rep.flatness > 0.1
        assert not rep.shape_invariant


def test_contour_mismatch():
    a = build_contour(1.0, 2.0, 21)
    b = build_contour(1.0, 2.0, 23)
    with pytest.raises(ValueError):
        darboux.shape_invariance_residual(SampledField(a, np.ones(21)), SampledField(b, np.ones(23)))
