from __future__ import annotations

import math

import numpy as np
import pytest

from nctoeplitz import (
    AmbiguouslyDegenerate,
    DegenerateLabel,
    DegenerateParamsError,
    DeformationParams,
    GroupParams,
    NCCoords,
    NonPositiveHbar,
    NonPositiveWidth,
    PhasePoint,
    complexify,
    from_group_params,
    from_nc_coords,
    iota,
    local_exponents,
    make_params,
    omega_limit_calB_zero,
    omega_limit_theta_zero,
    omega_nc,
    to_nc_coords,
)

from conftest import random_generic_params, random_point


def test_make_params_zero_deformation():
    p = make_params(1.0, 0.0, 0.0, 1.0)
    assert p.kind == "generic"
    assert (p.B, p.T, p.S) == (0.0, 0.0, 1.0)


def test_make_params_forced_degenerate():
    # hbar^2 = calB * theta = 1
    p = make_params(1.0, 0.5, 2.0, 1.0)
    assert p.kind == "degenerate"
    assert (p.B, p.T) == (2.0, 0.5)


def test_make_params_substitution_case():
    p = make_params(2.0, 0.1, 0.3, 1.0)
    assert p.kind == "generic"
    assert p.B == pytest.approx(0.15, abs=0, rel=1e-15)
    assert p.T == pytest.approx(0.05, abs=0, rel=1e-15)
    assert p.S == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)


def test_make_params_default_width_is_sqrt_hbar():
    p = make_params(4.0)
    assert p.s == 2.0
    assert p.S == 1.0


def test_make_params_rejects_bad_inputs():
    with pytest.raises(NonPositiveHbar):
        make_params(0.0)
    with pytest.raises(NonPositiveHbar):
        make_params(-1.0)
    with pytest.raises(NonPositiveWidth):
        make_params(1.0, s=-0.5)


def test_classification_band_is_rejected():
    # discriminant 1 - (1 - 1e-14) lands inside the 1e-12 relative band
    with pytest.raises(AmbiguouslyDegenerate):
        make_params(1.0, 1.0, 1.0 - 1e-14, 1.0)


def test_from_group_params_trivial():
    assert from_group_params(GroupParams(1.0, 0.0, 0.0)) == (1.0, 0.0, 0.0)


def test_from_group_params_substitution():
    # hbar = 1/(rho alpha); theta = -sigma beta hbar^2; calB = -tau gamma hbar^2
    assert from_group_params(GroupParams(1.0, -1.0, -1.0)) == (1.0, 1.0, 1.0)
    assert from_group_params(GroupParams(2.0, -4.0, 0.0)) == (0.5, 1.0, 0.0)
    # the first one is degenerate: hbar^2 = calB*theta
    h, th, cb = from_group_params(GroupParams(1.0, -1.0, -1.0))
    assert make_params(h, th, cb).kind == "degenerate"


def test_from_group_params_rejects_degenerate_label():
    with pytest.raises(DegenerateLabel):
        from_group_params(GroupParams(0.0, 1.0, 1.0))


def test_to_nc_coords_identity_at_zero_deformation(rng):
    p = make_params(1.0)
    for _ in range(5):
        x = random_point(rng)
        assert to_nc_coords(p, x) == NCCoords(*x)


def test_to_nc_coords_hand_substitution():
    p = make_params(1.0, 0.1, 0.2, 1.0)
    nc = to_nc_coords(p, PhasePoint(1.0, 2.0, 3.0, 4.0))
    assert nc == pytest.approx((1.0, 2.3, 3.4, 4.0), rel=1e-15)


def test_nc_round_trip(rng):
    for _ in range(20):
        p = random_generic_params(rng)
        x = random_point(rng)
        back = from_nc_coords(p, to_nc_coords(p, x))
        assert np.allclose(back, x, rtol=0, atol=1e-14)


def test_nc_map_determinant_matches_jacobian(rng):
    for _ in range(10):
        p = random_generic_params(rng)
        m = np.array([list(to_nc_coords(p, PhasePoint(*row))) for row in np.eye(4)]).T
        want = (p.hbar ** 2 - p.calB * p.theta) / p.hbar ** 2
        assert np.linalg.det(m) == pytest.approx(want, rel=1e-12)


def test_complexify_origin_and_substitution():
    p = make_params(1.0, s=1.0)
    assert complexify(p, NCCoords(0, 0, 0, 0)) == (0j, 0j)
    z = complexify(p, NCCoords(math.sqrt(2.0), 0.0, 0.0, 0.0))
    assert z[0] == pytest.approx(1.0, rel=1e-15)
    assert z[1] == 0j


def test_iota_inverts_complexified_coords(rng):
    for _ in range(100):
        p = random_generic_params(rng)
        x = random_point(rng)
        z = complexify(p, to_nc_coords(p, x))
        back = iota(p, z)
        assert np.allclose(back, x, rtol=0, atol=1e-14)


def test_iota_rejects_degenerate():
    p = make_params(1.0, 0.5, 2.0, 1.0)
    with pytest.raises(DegenerateParamsError):
        iota(p, (0j, 0j))


def test_omega_nc_limits_are_exact():
    for hbar in (1.0, 0.7, 3.0):
        for theta in (0.3, -0.2, 1.0):
            got = omega_nc(make_params(hbar, theta, 0.0, 1.0))
            want = omega_limit_calB_zero(hbar, theta)
            assert np.array_equal(got, want)
        for calB in (0.3, -0.2, 1.0):
            got = omega_nc(make_params(hbar, 0.0, calB, 1.0))
            want = omega_limit_theta_zero(hbar, calB)
            assert np.array_equal(got, want)


def test_omega_nc_canonical_at_zero_deformation():
    got = omega_nc(make_params(1.0))
    want = np.array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
                    dtype=float)
    assert np.array_equal(got, want)


def test_omega_nc_entry_substitution():
    # entry (2,1) = -calB*hbar/(hbar^2 - calB*theta) = -0.5/0.75
    got = omega_nc(make_params(1.0, 0.5, 0.5, 1.0))
    assert got[1, 0] == pytest.approx(-2.0 / 3.0, rel=1e-15)


def test_local_exponents_values_and_antisymmetry(rng):
    x = PhasePoint(1.0, 0.0, 0.0, 0.0)
    xp = PhasePoint(0.0, 0.0, 1.0, 0.0)
    assert local_exponents(x, xp) == (0.5, 0.0, 0.0)
    assert local_exponents(x, x) == (0.0, 0.0, 0.0)
    for _ in range(20):
        a, b = random_point(rng), random_point(rng)
        fwd = local_exponents(a, b)
        rev = local_exponents(b, a)
        assert fwd == tuple(-v for v in rev)
