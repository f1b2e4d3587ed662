"""Coherent states, reproducing kernels, and their verification.

Both the generic and the degenerate reproducing kernel come in two
independently coded forms: the closed-form product of exponentials in the
original phase-space variables, and the Fock-side form
exp(-|z|^2/2h - |Z|^2/2h + <z,Z>/h) in the complex chart (times a
unimodular prefactor in the degenerate case).  Their agreement is one of
the package's acceptance checks.

Kernels use the overlap convention K(x, x') = <eta_x | eta_x'> with the
inner product antilinear in the first slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadNodeCount, VariantParamsMismatch
from .params import (
    DeformationParams,
    DegenerateParams,
    DiracMeasure,
    GaussianMeasure,
    PhasePoint,
    complexify,
    local_exponents,
    to_nc_coords,
    to_nc_coords_degenerate,
)

GENERIC_CLOSED = "generic-closed-form"
GENERIC_FOCK = "generic-fock-side"
DEGENERATE_CLOSED = "degenerate-closed-form"
DEGENERATE_FOCK = "degenerate-fock-side"
WH_LIMIT = "weyl-heisenberg-limit"

VARIANTS = (GENERIC_CLOSED, GENERIC_FOCK, DEGENERATE_CLOSED, DEGENERATE_FOCK,
            WH_LIMIT)


@dataclass(frozen=True)
class GroundState:
    """Normalized Gaussian ground state of width s in d variables."""

    d: int
    s: float

    def __call__(self, *r):
        if len(r) != self.d:
            raise ValueError(f"ground state takes {self.d} arguments")
        sq = sum(np.asarray(ri) ** 2 for ri in r)
        if self.d == 2:
            return np.exp(-sq / (2.0 * self.s ** 2)) / (math.sqrt(math.pi) * self.s)
        return np.exp(-sq / (2.0 * self.s ** 2)) / (math.pi ** 0.25 * math.sqrt(self.s))


@dataclass(frozen=True)
class KernelSpec:
    variant: str
    params: DeformationParams | DegenerateParams

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise VariantParamsMismatch(f"unknown kernel variant {self.variant!r}")
        degenerate_data = isinstance(self.params, DegenerateParams)
        wants_degenerate = self.variant in (DEGENERATE_CLOSED, DEGENERATE_FOCK)
        if wants_degenerate != degenerate_data:
            raise VariantParamsMismatch(
                f"variant {self.variant} incompatible with "
                f"{type(self.params).__name__}")
        if self.variant in (GENERIC_CLOSED, GENERIC_FOCK) and not self.params.is_generic:
            raise VariantParamsMismatch(
                f"variant {self.variant} needs generic parameters")


def coherent_eval(p: DeformationParams, x: PhasePoint, r1, r2,
                  form: str = "group") -> complex:
    """Evaluate the coherent state labelled by x at the point (r1, r2).

    form="group": phase written in the original (q, p) variables;
    form="nc": the equivalent e^{(i/h)(r - q^NC/2).p^NC} eta(r - q^NC).
    Both forms agree identically; keeping them separate gives a cross-check.
    """
    p.require_generic("coherent_eval")
    eta = GroundState(2, p.s)
    q1, q2, p1, p2 = x
    h = p.hbar
    if form == "group":
        phase = (1j / h) * ((r1 - q1 / 2.0) * p1 + (r2 - q2 / 2.0) * p2) \
            - (1j * p.theta / (2.0 * h * h)) * p1 * p2 \
            + (1j * p.calB / (h * h)) * (q2 * r1 - q1 * q2 / 2.0)
        return np.exp(phase) * eta(r1 - q1, r2 - q2 - (p.theta / h) * p1)
    if form == "nc":
        nq1, nq2, np1, np2 = to_nc_coords(p, x)
        phase = (1j / h) * ((r1 - nq1 / 2.0) * np1 + (r2 - nq2 / 2.0) * np2)
        return np.exp(phase) * eta(r1 - nq1, r2 - nq2)
    raise ValueError(f"unknown coherent-state form {form!r}")


def _k_generic_closed(p: DeformationParams, x: PhasePoint, xp: PhasePoint) -> complex:
    xi, xi_p, xi_pp = local_exponents(x, xp)
    h, s, th, cb = p.hbar, p.s, p.theta, p.calB
    dq1, dq2 = x.q1 - xp.q1, x.q2 - xp.q2
    dp1, dp2 = x.p1 - xp.p1, x.p2 - xp.p2
    e = (1j / h) * xi \
        - (s * s / (4.0 * h * h)) * (dp1 * dp1 + dp2 * dp2) \
        - (dq1 * dq1 + dq2 * dq2) / (4.0 * s * s) \
        + (1j * th / (h * h)) * xi_p \
        - (1.0 / (4.0 * s * s)) * ((th * th / (h * h)) * dp1 * dp1
                                   + 2.0 * (th / h) * dq2 * dp1) \
        + (1j * cb / (h * h)) * xi_pp \
        - (s * s / (4.0 * h * h)) * ((cb * cb / (h * h)) * dq2 * dq2
                                     + 2.0 * (cb / h) * dp1 * dq2)
    return complex(np.exp(e))


def _fock_overlap(h: float, z, Z) -> complex:
    z = np.asarray(z)
    Z = np.asarray(Z)
    e = (-np.sum(np.abs(z) ** 2) - np.sum(np.abs(Z) ** 2)) / (2.0 * h) \
        + np.sum(z * Z.conj()) / h
    return complex(np.exp(e))


def _k_generic_fock(p: DeformationParams, x: PhasePoint, xp: PhasePoint) -> complex:
    z = complexify(p, to_nc_coords(p, x))
    Z = complexify(p, to_nc_coords(p, xp))
    return _fock_overlap(p.hbar, z, Z)


def _k_wh(p: DeformationParams, x: PhasePoint, xp: PhasePoint) -> complex:
    xi, _, _ = local_exponents(x, xp)
    h, s = p.hbar, p.s
    dq1, dq2 = x.q1 - xp.q1, x.q2 - xp.q2
    dp1, dp2 = x.p1 - xp.p1, x.p2 - xp.p2
    e = (1j / h) * xi - (s * s / (4.0 * h * h)) * (dp1 * dp1 + dp2 * dp2) \
        - (dq1 * dq1 + dq2 * dq2) / (4.0 * s * s)
    return complex(np.exp(e))


def _k_degenerate_closed(dp: DegenerateParams, x: PhasePoint,
                         xp: PhasePoint) -> complex:
    xi, xi_p, xi_pp = local_exponents(x, xp)
    h, s, th = dp.hbar, dp.s, dp.theta
    dq1, dq2 = x.q1 - xp.q1, x.q2 - xp.q2
    dp1, dp2 = x.p1 - xp.p1, x.p2 - xp.p2
    e = (1j / h) * xi + (1j / th) * xi_pp + (1j * th / (h * h)) * xi_p \
        + 1j * dp.kappa * dq1 + 1j * dp.delta * dq2 \
        - dq1 * dq1 / (4.0 * s * s) \
        - (s * s / (4.0 * th * th)) * dq2 * dq2 \
        - (s * s / (4.0 * h * h)) * dp1 * dp1 \
        - (th * th / (4.0 * s * s * h * h)) * dp2 * dp2 \
        + (th / (2.0 * s * s * h)) * dq1 * dp2 \
        - (s * s / (2.0 * h * th)) * dp1 * dq2
    return complex(np.exp(e))


def _k_degenerate_fock(dp: DegenerateParams, x: PhasePoint,
                       xp: PhasePoint) -> complex:
    z = complexify(dp, to_nc_coords_degenerate(dp, x))
    Z = complexify(dp, to_nc_coords_degenerate(dp, xp))
    pref = np.exp(1j * dp.delta * (x.q2 - xp.q2)
                  + 1j * dp.kappa * dp.theta * (x.p2 - xp.p2) / dp.hbar)
    return complex(pref) * _fock_overlap(dp.hbar, z, Z)


def kernel(spec: KernelSpec, x: PhasePoint, xp: PhasePoint) -> complex:
    """Evaluate the reproducing kernel selected by spec at (x, x')."""
    x = PhasePoint(*x)
    xp = PhasePoint(*xp)
    if spec.variant == GENERIC_CLOSED:
        return _k_generic_closed(spec.params, x, xp)
    if spec.variant == GENERIC_FOCK:
        return _k_generic_fock(spec.params, x, xp)
    if spec.variant == DEGENERATE_CLOSED:
        return _k_degenerate_closed(spec.params, x, xp)
    if spec.variant == DEGENERATE_FOCK:
        return _k_degenerate_fock(spec.params, x, xp)
    return _k_wh(spec.params, x, xp)


def gram_psd(spec: KernelSpec, points) -> tuple[np.ndarray, float]:
    """Gram matrix of kernel sections and the minimum eigenvalue of its
    Hermitian part."""
    pts = [PhasePoint(*p) for p in points]
    n = len(pts)
    if n == 0:
        raise ValueError("gram_psd needs at least one point")
    g = np.empty((n, n), dtype=complex)
    for i, xi in enumerate(pts):
        g[i, i] = kernel(spec, xi, xi)
        for j in range(i + 1, n):
            v = kernel(spec, xi, pts[j])
            g[i, j] = v
            g[j, i] = v.conjugate()
    herm = 0.5 * (g + g.conj().T)
    eigs = np.linalg.eigvalsh(herm)
    return g, float(eigs[0])


def _overlap_quadrature_factor(h: float, zx: complex, zxp: complex,
                               u: np.ndarray, w: np.ndarray) -> complex:
    """One complex coordinate of int K(x,y) K(y,x') over that coordinate.

    In NC coordinates the y-Gaussian is exp(-|zy|^2/h) with
    zy = sqrt(h)(u - i v), so tensor Gauss-Hermite applies directly; the
    remaining integrand exp((zx conj(zy) + zy conj(zxp))/h) factorizes
    per coordinate.  The measure normalization contributes 1/pi per
    coordinate.
    """
    zy = math.sqrt(h) * (u[:, None] - 1j * u[None, :])
    ex = np.exp((zx * zy.conj() + zy * np.conj(zxp)) / h)
    return complex(np.einsum("a,b,ab->", w, w, ex)) / math.pi


def reproducing_check(spec: KernelSpec, x: PhasePoint, xp: PhasePoint,
                      quad_nodes: int = 24) -> float:
    """|int K(x,y) K(y,x') dnu(y) - K(x,x')| via Gauss-Hermite quadrature.

    Generic: 4D over NC coordinates with dnu = |h^2-calB*theta|/(4 pi^2 h^4)
    dq dp.  Degenerate: 2D over (q1,p1)^NC with dnu~ = dq1 dp1/(2 pi h); the
    probability measure mu on (q2,p2) multiplies a mu-independent inner
    integral and integrates out exactly, so Dirac and Gaussian measures give
    the same value.
    """
    if quad_nodes < 2:
        raise BadNodeCount(f"need at least 2 nodes per dimension, got {quad_nodes}")
    x = PhasePoint(*x)
    xp = PhasePoint(*xp)
    u, w = np.polynomial.hermite.hermgauss(quad_nodes)
    p = spec.params
    h = p.hbar
    if spec.variant in (GENERIC_CLOSED, GENERIC_FOCK, WH_LIMIT):
        if spec.variant == WH_LIMIT:
            p = DeformationParams(p.hbar, 0.0, 0.0, p.s)
        z = complexify(p, to_nc_coords(p, x))
        Z = complexify(p, to_nc_coords(p, xp))
        pref = np.exp((-sum(abs(v) ** 2 for v in z)
                       - sum(abs(v) ** 2 for v in Z)) / (2.0 * h))
        integral = pref
        for zj, Zj in zip(z, Z):
            integral *= _overlap_quadrature_factor(h, zj, Zj, u, w)
    else:
        dp = p
        if not isinstance(dp.measure, (DiracMeasure, GaussianMeasure)):
            raise VariantParamsMismatch("unsupported measure descriptor")
        z = complexify(dp, to_nc_coords_degenerate(dp, x))[0]
        Z = complexify(dp, to_nc_coords_degenerate(dp, xp))[0]
        pref = np.exp(1j * dp.delta * (x.q2 - xp.q2)
                      + 1j * dp.kappa * dp.theta * (x.p2 - xp.p2) / h) \
            * np.exp((-abs(z) ** 2 - abs(Z) ** 2) / (2.0 * h))
        integral = pref * _overlap_quadrature_factor(h, z, Z, u, w)
    return abs(complex(integral) - kernel(spec, x, xp))


def wh_limit_gap(hbar: float, s: float, theta0: float, calB0: float,
                 t: float, x: PhasePoint, xp: PhasePoint) -> float:
    """|K at (theta, calB) = t(theta0, calB0) - Weyl-Heisenberg kernel|."""
    p = DeformationParams(hbar, t * theta0, t * calB0, s)
    spec = KernelSpec(GENERIC_CLOSED, p)
    wh = KernelSpec(WH_LIMIT, p)
    return abs(kernel(spec, x, xp) - kernel(wh, x, xp))
