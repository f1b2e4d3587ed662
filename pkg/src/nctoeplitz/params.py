"""Deformation parameters and coordinate transforms.

The three deformation parameters are hbar (Planck constant), theta
(position-position noncommutativity) and calB (momentum-momentum
noncommutativity); s is the Gaussian ground-state width.  Their
renormalized, dimensionless companions are B = calB/hbar, T = theta/hbar
and S = s/sqrt(hbar).  The regime hbar^2 - calB*theta != 0 (equivalently
B*T != 1) is called generic, hbar^2 = calB*theta degenerate.

All denominators of the form hbar^2 - calB*theta are evaluated as
hbar^2*(1 - B*T) so that setting one deformation parameter to zero
reproduces the corresponding limit formulas bitwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    AmbiguouslyDegenerate,
    DegenerateLabel,
    DegenerateParamsError,
    NonPositiveHbar,
    NonPositiveWidth,
)

GENERIC = "generic"
DEGENERATE = "degenerate"

# relative half-width of the rejection band around hbar^2 = calB*theta
CLASSIFY_RTOL = 1e-12


class PhasePoint(NamedTuple):
    q1: float
    q2: float
    p1: float
    p2: float


class NCCoords(NamedTuple):
    q1: float
    q2: float
    p1: float
    p2: float


def _classify(hbar: float, theta: float, calB: float) -> str:
    disc = hbar * hbar - calB * theta
    if disc == 0.0:
        return DEGENERATE
    if abs(disc) <= CLASSIFY_RTOL * max(hbar * hbar, abs(calB * theta)):
        raise AmbiguouslyDegenerate(
            f"hbar^2 - calB*theta = {disc!r} is inside the classification band; "
            "refusing to classify"
        )
    return GENERIC


@dataclass(frozen=True)
class DeformationParams:
    """The triple (hbar, theta, calB) plus ground-state width s."""

    hbar: float
    theta: float = 0.0
    calB: float = 0.0
    s: float = 0.0  # 0.0 means "default to sqrt(hbar)", i.e. S = 1
    kind: str = field(init=False)

    def __post_init__(self):
        if not self.hbar > 0:
            raise NonPositiveHbar(f"hbar must be positive, got {self.hbar}")
        if self.s == 0.0:
            object.__setattr__(self, "s", math.sqrt(self.hbar))
        if not self.s > 0:
            raise NonPositiveWidth(f"s must be positive, got {self.s}")
        object.__setattr__(self, "kind", _classify(self.hbar, self.theta, self.calB))

    @property
    def B(self) -> float:
        return self.calB / self.hbar

    @property
    def T(self) -> float:
        return self.theta / self.hbar

    @property
    def S(self) -> float:
        return self.s / math.sqrt(self.hbar)

    @property
    def is_generic(self) -> bool:
        return self.kind == GENERIC

    def require_generic(self, what: str = "operation"):
        if not self.is_generic:
            raise DegenerateParamsError(f"{what} requires generic parameters")


def make_params(hbar: float, theta: float = 0.0, calB: float = 0.0,
                s: float | None = None) -> DeformationParams:
    """Build and classify a parameter set; s defaults to sqrt(hbar)."""
    return DeformationParams(hbar, theta, calB, 0.0 if s is None else s)


@dataclass(frozen=True)
class DiracMeasure:
    """Point mass at (q2, p2)."""

    q2: float
    p2: float


@dataclass(frozen=True)
class GaussianMeasure:
    """Product Gaussian probability measure on the (q2, p2) plane."""

    mean_q2: float
    mean_p2: float
    std_q2: float
    std_p2: float


@dataclass(frozen=True)
class DegenerateParams:
    """Parameters of the degenerate family: hbar^2 = calB*theta is implied.

    kappa and delta label the representation, base_point = (q2*, p2*) is
    where the Dirac mass sits.  measure defaults to the Dirac mass at
    base_point; a GaussianMeasure is accepted only by operations that do
    not need the product property (resolution-of-identity checks).
    """

    hbar: float
    theta: float
    kappa: float = 0.0
    delta: float = 0.0
    s: float = 0.0
    base_point: tuple[float, float] = (0.0, 0.0)
    measure: DiracMeasure | GaussianMeasure | None = None

    def __post_init__(self):
        if not self.hbar > 0:
            raise NonPositiveHbar(f"hbar must be positive, got {self.hbar}")
        if self.theta == 0.0:
            raise DegenerateParamsError("degenerate parameters need theta != 0")
        if self.s == 0.0:
            object.__setattr__(self, "s", math.sqrt(self.hbar))
        if not self.s > 0:
            raise NonPositiveWidth(f"s must be positive, got {self.s}")
        if self.measure is None:
            object.__setattr__(self, "measure", DiracMeasure(*self.base_point))

    @property
    def calB(self) -> float:
        return self.hbar * self.hbar / self.theta

    @property
    def S(self) -> float:
        return self.s / math.sqrt(self.hbar)

    @property
    def has_dirac_measure(self) -> bool:
        return isinstance(self.measure, DiracMeasure)


@dataclass(frozen=True)
class GroupParams:
    """Representation labels rho, sigma, tau and extension constants alpha, beta, gamma."""

    rho: float
    sigma: float
    tau: float
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0


def from_group_params(g: GroupParams) -> tuple[float, float, float]:
    """Convert group labels to (hbar, theta, calB).

    hbar = 1/(rho*alpha), theta = -sigma*beta/(rho*alpha)^2,
    calB = -tau*gamma/(rho*alpha)^2.
    """
    ra = g.rho * g.alpha
    if ra == 0.0:
        raise DegenerateLabel("rho*alpha = 0 does not define deformation parameters")
    hbar = 1.0 / ra
    return hbar, -g.sigma * g.beta * hbar * hbar, -g.tau * g.gamma * hbar * hbar


def to_nc_coords(p: DeformationParams, x: PhasePoint) -> NCCoords:
    """Linear map to NC coordinates; bijective iff parameters are generic."""
    q1, q2, p1, p2 = x
    return NCCoords(q1, q2 + p.T * p1, p1 + p.B * q2, p2)


def from_nc_coords(p: DeformationParams, nc: NCCoords) -> PhasePoint:
    """Inverse of to_nc_coords (generic parameters only)."""
    p.require_generic("from_nc_coords")
    q1, q2nc, p1nc, p2 = nc
    det = 1.0 - p.B * p.T
    return PhasePoint(q1, (q2nc - p.T * p1nc) / det, (p1nc - p.B * q2nc) / det, p2)


def complexify(p: DeformationParams | DegenerateParams,
               nc: NCCoords) -> tuple[complex, ...]:
    """Complex Fock coordinates z_j = sqrt(hbar/2) q_j/s - i s p_j/sqrt(2 hbar).

    For generic parameters both NC coordinate pairs are used (d = 2); for
    degenerate parameters only the (q1, p1) pair survives (d = 1).
    """
    a = math.sqrt(p.hbar / 2.0) / p.s
    b = p.s / math.sqrt(2.0 * p.hbar)
    q1, q2, p1, p2 = nc
    if isinstance(p, DegenerateParams):
        return (a * q1 - 1j * b * p1,)
    return (a * q1 - 1j * b * p1, a * q2 - 1j * b * p2)


def iota(p: DeformationParams, z: tuple[complex, complex]) -> PhasePoint:
    """Inverse of complexify(to_nc_coords(.)): complex chart back to phase space."""
    p.require_generic("iota")
    z1, z2 = z
    a = p.s / math.sqrt(2.0 * p.hbar)
    b = math.sqrt(p.hbar / 2.0) / p.s
    q1nc = a * (z1 + z1.conjugate())
    q2nc = a * (z2 + z2.conjugate())
    p1nc = 1j * b * (z1 - z1.conjugate())
    p2nc = 1j * b * (z2 - z2.conjugate())
    det = 1.0 - p.B * p.T
    return PhasePoint(
        _real(q1nc),
        _real((q2nc - p.T * p1nc) / det),
        _real((p1nc - p.B * q2nc) / det),
        _real(p2nc),
    )


def _real(v) -> float:
    return v.real if isinstance(v, complex) else float(v)


def to_nc_coords_degenerate(dp: DegenerateParams, x: PhasePoint) -> NCCoords:
    """Degenerate NC coordinates; note the 2*kappa*hbar shift in p1."""
    q1, q2, p1, p2 = x
    toh = dp.theta / dp.hbar
    return NCCoords(q1 - toh * p2, q2,
                    p1 + q2 / toh + 2.0 * dp.kappa * dp.hbar, p2)


def omega_nc(p: DeformationParams) -> np.ndarray:
    """The 4x4 matrix pairing (q1,q2,p1,p2)^NC with the group generators.

    Entries are written over the common denominator 1 - B*T so the
    calB -> 0 and theta -> 0 limit matrices are reproduced exactly.
    """
    p.require_generic("omega_nc")
    det = 1.0 - p.B * p.T
    return np.array([
        [0.0, 0.0, -1.0, 0.0],
        [-p.B / det, 0.0, 0.0, -1.0 / det],
        [1.0 / det, 0.0, 0.0, p.T / det],
        [0.0, 1.0, 0.0, 0.0],
    ])


def omega_limit_calB_zero(hbar: float, theta: float) -> np.ndarray:
    """omega_nc at calB = 0."""
    return np.array([
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [1.0, 0.0, 0.0, theta / hbar],
        [0.0, 1.0, 0.0, 0.0],
    ])


def omega_limit_theta_zero(hbar: float, calB: float) -> np.ndarray:
    """omega_nc at theta = 0."""
    return np.array([
        [0.0, 0.0, -1.0, 0.0],
        [-calB / hbar, 0.0, 0.0, -1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ])


def local_exponents(x: PhasePoint, xp: PhasePoint) -> tuple[float, float, float]:
    """The three inequivalent antisymmetric bilinear forms on R^4.

    xi pairs positions with momenta, xi' momenta with momenta and
    xi'' positions with positions; each changes sign under swapping
    its arguments.
    """
    q1, q2, p1, p2 = x
    r1, r2, s1, s2 = xp
    # grouped as differences so swapping arguments negates bitwise
    xi = 0.5 * ((q1 * s1 - p1 * r1) + (q2 * s2 - p2 * r2))
    xi_p = 0.5 * (p1 * s2 - p2 * s1)
    xi_pp = 0.5 * (q1 * r2 - q2 * r1)
    return xi, xi_p, xi_pp
