from __future__ import annotations

import math

import numpy as np
import pytest

from nctoeplitz import (
    DEGENERATE_CLOSED,
    DEGENERATE_FOCK,
    GENERIC_CLOSED,
    GENERIC_FOCK,
    WH_LIMIT,
    DegenerateParams,
    DiracMeasure,
    GaussianMeasure,
    GroundState,
    KernelSpec,
    PhasePoint,
    VariantParamsMismatch,
    coherent_eval,
    gram_psd,
    kernel,
    make_params,
    reproducing_check,
    wh_limit_gap,
)

from conftest import (
    random_degenerate_params,
    random_generic_params,
    random_point,
)


def overlap_oracle_2d(p, x, xp, nodes=80):
    """<eta_x | eta_x'> by direct 2D Gauss-Hermite quadrature over r."""
    u, w = np.polynomial.hermite.hermgauss(nodes)
    c = 2.0 * p.s
    r1, r2 = np.meshgrid(c * u, c * u, indexing="ij")
    vals = np.conj(coherent_eval(p, x, r1, r2)) * coherent_eval(p, xp, r1, r2)
    wexp = w * np.exp(u * u)
    return c * c * np.einsum("a,b,ab->", wexp, wexp, vals)


def test_ground_state_normalization():
    u, w = np.polynomial.hermite.hermgauss(60)
    for d, s in ((1, 0.8), (2, 1.3)):
        eta = GroundState(d, s)
        wexp = w * np.exp(u * u)
        if d == 1:
            total = 2.0 * s * np.sum(wexp * eta(2.0 * s * u) ** 2)
        else:
            r1, r2 = np.meshgrid(2.0 * s * u, 2.0 * s * u, indexing="ij")
            total = (2.0 * s) ** 2 * np.einsum(
                "a,b,ab->", wexp, wexp, eta(r1, r2) ** 2)
        assert total == pytest.approx(1.0, abs=1e-10)


def test_coherent_state_forms_agree(rng):
    for _ in range(10):
        p = random_generic_params(rng)
        x = random_point(rng)
        r1, r2 = rng.uniform(-2, 2, 2)
        a = coherent_eval(p, x, r1, r2, form="group")
        b = coherent_eval(p, x, r1, r2, form="nc")
        assert a == pytest.approx(b, rel=1e-12)
        # unimodular phase: |eta_x(r)| = |eta(r - q^NC)|
        from nctoeplitz import to_nc_coords
        nc = to_nc_coords(p, x)
        eta = GroundState(2, p.s)
        assert abs(a) == pytest.approx(eta(r1 - nc.q1, r2 - nc.q2), rel=1e-12)


def test_coherent_state_at_origin_is_ground_state(rng):
    p = random_generic_params(rng)
    eta = GroundState(2, p.s)
    for _ in range(5):
        r1, r2 = rng.uniform(-2, 2, 2)
        v = coherent_eval(p, PhasePoint(0, 0, 0, 0), r1, r2)
        assert v == pytest.approx(eta(r1, r2), rel=1e-13)


def test_coherent_state_unit_norm(rng):
    for _ in range(3):
        p = random_generic_params(rng)
        x = random_point(rng)
        assert overlap_oracle_2d(p, x, x) == pytest.approx(1.0, abs=1e-10)


def test_kernel_matches_overlap_oracle(rng):
    # first-principles check of the closed form
    for _ in range(5):
        p = random_generic_params(rng)
        x, xp = random_point(rng), random_point(rng)
        want = overlap_oracle_2d(p, x, xp)
        got = kernel(KernelSpec(GENERIC_CLOSED, p), x, xp)
        assert got == pytest.approx(want, abs=5e-10)


def test_kernel_diagonal_and_hermitian(rng):
    p = random_generic_params(rng)
    dp = random_degenerate_params(rng)
    specs = [KernelSpec(GENERIC_CLOSED, p), KernelSpec(GENERIC_FOCK, p),
             KernelSpec(WH_LIMIT, p),
             KernelSpec(DEGENERATE_CLOSED, dp), KernelSpec(DEGENERATE_FOCK, dp)]
    for spec in specs:
        for _ in range(20):
            x, xp = random_point(rng), random_point(rng)
            assert kernel(spec, x, x) == pytest.approx(1.0, rel=1e-13)
            assert kernel(spec, x, xp) == pytest.approx(
                kernel(spec, xp, x).conjugate(), rel=1e-12)
            assert abs(kernel(spec, x, xp)) <= 1.0 + 1e-12


def test_kernel_strict_bound_off_diagonal(rng):
    p = random_generic_params(rng)
    spec = KernelSpec(GENERIC_CLOSED, p)
    for _ in range(20):
        x, xp = random_point(rng), random_point(rng)
        if x != xp:
            assert abs(kernel(spec, x, xp)) < 1.0


def test_dual_formula_agreement_generic(rng):
    for _ in range(20):
        p = random_generic_params(rng)
        a_spec, b_spec = KernelSpec(GENERIC_CLOSED, p), KernelSpec(GENERIC_FOCK, p)
        for _ in range(50):
            x, xp = random_point(rng), random_point(rng)
            a = kernel(a_spec, x, xp)
            b = kernel(b_spec, x, xp)
            assert abs(a - b) <= 1e-12 * max(abs(a), abs(b))


def test_dual_formula_agreement_degenerate(rng):
    for _ in range(20):
        dp = random_degenerate_params(rng)
        a_spec = KernelSpec(DEGENERATE_CLOSED, dp)
        b_spec = KernelSpec(DEGENERATE_FOCK, dp)
        for _ in range(50):
            x, xp = random_point(rng), random_point(rng)
            a = kernel(a_spec, x, xp)
            b = kernel(b_spec, x, xp)
            assert abs(a - b) <= 1e-12 * max(abs(a), abs(b))


def test_degenerate_kernel_measure_and_phase_properties(rng):
    # mu never enters kernel values; kappa, delta only through the phase
    base = random_degenerate_params(rng)
    dirac = DegenerateParams(base.hbar, base.theta, base.kappa, base.delta,
                             base.s, base.base_point,
                             DiracMeasure(0.3, -0.8))
    gauss = DegenerateParams(base.hbar, base.theta, base.kappa, base.delta,
                             base.s, base.base_point,
                             GaussianMeasure(0.0, 0.0, 1.0, 2.0))
    other_phase = DegenerateParams(base.hbar, base.theta, base.kappa + 0.7,
                                   base.delta - 1.3, base.s, base.base_point)
    for _ in range(20):
        x, xp = random_point(rng), random_point(rng)
        v0 = kernel(KernelSpec(DEGENERATE_CLOSED, dirac), x, xp)
        v1 = kernel(KernelSpec(DEGENERATE_CLOSED, gauss), x, xp)
        assert v0 == v1
        v2 = kernel(KernelSpec(DEGENERATE_CLOSED, other_phase), x, xp)
        assert abs(v2) == pytest.approx(abs(v0), rel=1e-13)


def test_kernel_spec_validation(rng):
    p = random_generic_params(rng)
    dp = random_degenerate_params(rng)
    with pytest.raises(VariantParamsMismatch):
        KernelSpec(GENERIC_CLOSED, dp)
    with pytest.raises(VariantParamsMismatch):
        KernelSpec(DEGENERATE_FOCK, p)
    with pytest.raises(VariantParamsMismatch):
        KernelSpec("no-such-variant", p)
    degenerate_triple = make_params(1.0, 0.5, 2.0, 1.0)
    with pytest.raises(VariantParamsMismatch):
        KernelSpec(GENERIC_CLOSED, degenerate_triple)


def test_gram_psd_small_cases(rng):
    p = random_generic_params(rng)
    spec = KernelSpec(GENERIC_CLOSED, p)
    x = random_point(rng)
    g, mn = gram_psd(spec, [x])
    assert g.shape == (1, 1) and g[0, 0] == pytest.approx(1.0)
    assert mn == pytest.approx(1.0, rel=1e-12)
    g2, mn2 = gram_psd(spec, [x, x])
    assert mn2 == pytest.approx(0.0, abs=1e-12)


def test_gram_psd_random_cloud(rng):
    for spec in (KernelSpec(GENERIC_CLOSED, random_generic_params(rng)),
                 KernelSpec(DEGENERATE_CLOSED, random_degenerate_params(rng))):
        pts = [random_point(rng) for _ in range(40)]
        g, mn = gram_psd(spec, pts)
        mx = float(np.linalg.eigvalsh(0.5 * (g + g.conj().T))[-1])
        assert mn >= -1e-10 * mx


def test_reproducing_identity_generic(rng):
    for _ in range(4):
        p = random_generic_params(rng, b_max=0.3, t_max=0.3)
        spec = KernelSpec(GENERIC_CLOSED, p)
        x, xp = random_point(rng), random_point(rng)
        res24 = reproducing_check(spec, x, xp, 24)
        res32 = reproducing_check(spec, x, xp, 32)
        assert res24 <= 1e-8
        assert res32 <= res24 + 1e-12  # refinement does not regress
    res = reproducing_check(spec, PhasePoint(0, 0, 0, 0), PhasePoint(0, 0, 0, 0), 24)
    assert res <= 1e-8


def test_reproducing_identity_degenerate(rng):
    for _ in range(4):
        dp = random_degenerate_params(rng)
        spec = KernelSpec(DEGENERATE_CLOSED, dp)
        x, xp = random_point(rng), random_point(rng)
        assert reproducing_check(spec, x, xp, 24) <= 1e-8
    # mu-independence of the residual: Dirac vs product Gaussian
    gauss = DegenerateParams(dp.hbar, dp.theta, dp.kappa, dp.delta, dp.s,
                             dp.base_point, GaussianMeasure(0.1, -0.2, 0.7, 1.1))
    a = reproducing_check(spec, x, xp, 24)
    b = reproducing_check(KernelSpec(DEGENERATE_CLOSED, gauss), x, xp, 24)
    assert a == pytest.approx(b, abs=1e-14)


def test_wh_limit_gap_behavior(rng):
    x, xp = random_point(rng), random_point(rng)
    assert wh_limit_gap(1.0, 1.0, 0.1, 0.1, 0.0, x, xp) == 0.0
    gaps = [wh_limit_gap(1.0, 1.0, 0.1, 0.1, t, x, xp)
            for t in (2e-3, 1e-3, 5e-4)]
    assert gaps[0] / gaps[1] == pytest.approx(2.0, abs=0.5)
    assert gaps[1] / gaps[2] == pytest.approx(2.0, abs=0.5)
    assert wh_limit_gap(1.0, 1.0, 0.1, 0.1, 1e-3, x, xp) <= 1e-2
