"""Star-product coefficients, their joint (B, T) expansion, and
semiclassical residual sweeps.

On the Fock side the product of two Toeplitz operators of polynomial
symbols is again Toeplitz, with symbol sum_j hbar^j C_j(f, g); C_j pairs
j-th order z-derivatives of f with zbar-derivatives of g.  Transporting
through the phase-space chart gives the coefficients of the star product
of phase-space symbols; the first of them is a gradient contraction with
an explicit 4x4 matrix.  The degenerate family reduces everything to one
complex variable through the maps varrho / varrho_star.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    ChartMismatch,
    CutoffTooSmall,
    NonDiracMeasure,
    NotExpandable,
)
from .fock import FockBasis, toeplitz_poly
from .params import DeformationParams, DegenerateParams
from .series import BTSeries
from .symbols import (
    COMPLEX1,
    PHASE,
    PolySymbol,
    complex_to_phase_images,
    from_complex_chart,
    phase_to_complex_images,
    poisson_bracket,
    to_complex_chart,
)

THREADS_ENV = "NCTOEPLITZ_THREADS"


def _compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def c_j(f: PolySymbol, g: PolySymbol, j: int) -> PolySymbol:
    """j-th Toeplitz composition coefficient on the complex chart.

    C_j(f, g) = (-1)^j sum_{|alpha|=j} (1/alpha!)
                (d^alpha f / dz^alpha) (d^alpha g / dzb^alpha);
    hbar never enters.  For d = 1 this is ((-1)^j/j!) f^(j) g^(j).
    """
    if f.chart != g.chart:
        raise ChartMismatch("c_j needs both symbols on one chart")
    if f.chart is PHASE:
        raise ChartMismatch("c_j acts on complex-chart symbols")
    d = f.chart.nvars // 2
    zvars = f.chart.variables[0::2]
    zbvars = f.chart.variables[1::2]
    out = PolySymbol.zero(f.chart)
    for alpha in _compositions(j, d):
        df, dg = f, g
        fac = 1.0
        for ax in range(d):
            if alpha[ax]:
                df = df.differentiate(zvars[ax], alpha[ax])
                dg = dg.differentiate(zbvars[ax], alpha[ax])
                fac *= math.factorial(alpha[ax])
        if df.is_zero() or dg.is_zero():
            continue
        out = out + (df * dg) * (1.0 / fac)
    return out * float((-1) ** j)


def cc_j(params: DeformationParams, F: PolySymbol, G: PolySymbol,
         j: int) -> PolySymbol:
    """Star-product coefficient of phase-space symbols, via the chart."""
    f = to_complex_chart(params, F)
    g = to_complex_chart(params, G)
    return from_complex_chart(params, c_j(f, g, j))


# -- first-order coefficient as a gradient contraction ----------------------

A_VARS = ("p1", "p2", "q1", "q2")


def matrix_A(params: DeformationParams) -> np.ndarray:
    """4x4 matrix with cc_1(F, G) = grad F . A . grad G.

    Gradient components are ordered (p1, p2, q1, q2); the entries are
    rational in the renormalized (B, T, S) and do not involve hbar.
    """
    params.require_generic("matrix_A")
    B, T, S = params.B, params.T, params.S
    d1 = 1.0 - B * T
    d2 = d1 * d1
    S2 = S * S
    S4 = S2 * S2
    return np.array([
        [-(1.0 + B * B * S4) / (2.0 * S2 * d2), -1j * B / (2.0 * d1),
         -1j / (2.0 * d1), (B * S4 + T) / (2.0 * S2 * d2)],
        [1j * B / (2.0 * d1), -1.0 / (2.0 * S2),
         0.0, -1j / (2.0 * d1)],
        [1j / (2.0 * d1), 0.0,
         -S2 / 2.0, -1j * T / (2.0 * d1)],
        [(B * S4 + T) / (2.0 * S2 * d2), 1j / (2.0 * d1),
         1j * T / (2.0 * d1), -(S4 + T * T) / (2.0 * S2 * d2)],
    ], dtype=complex)


def gradient_contraction(F: PolySymbol, G: PolySymbol,
                         A: np.ndarray) -> PolySymbol:
    """sum_ab (dF/dv_a) A[a,b] (dG/dv_b) with v = (p1, p2, q1, q2)."""
    out = PolySymbol.zero(PHASE)
    dF = [F.differentiate(v) for v in A_VARS]
    dG = [G.differentiate(v) for v in A_VARS]
    for a in range(4):
        if dF[a].is_zero():
            continue
        for b in range(4):
            c = A[a, b]
            if c == 0 or dG[b].is_zero():
                continue
            out = out + (dF[a] * dG[b]) * c
    return out


# -- joint Taylor expansion in (B, T) ----------------------------------------

def check_expandable(params: DeformationParams):
    if abs(params.B * params.T) >= 1.0:
        raise NotExpandable(
            f"|B*T| = {abs(params.B * params.T)} >= 1; no (B, T) expansion")


def cc_j_series(F: PolySymbol, G: PolySymbol, S: float, j: int,
                bt_order: int) -> PolySymbol:
    """cc_j with coefficients expanded as truncated power series in (B, T)."""
    one = BTSeries.const(1.0, bt_order)
    B = BTSeries.gen_B(bt_order)
    T = BTSeries.gen_T(bt_order)
    f = F.substitute(phase_to_complex_images(B, T, S, one))
    g = G.substitute(phase_to_complex_images(B, T, S, one))
    h = c_j(f, g, j)
    return h.substitute(complex_to_phase_images(B, T, S, one))


def _series_part(c, a: int, b: int) -> complex:
    if isinstance(c, BTSeries):
        return c.coefficient(a, b)
    return complex(c) if (a, b) == (0, 0) else 0.0


def series_coefficient_symbol(sym: PolySymbol, a: int, b: int) -> PolySymbol:
    """Extract the B^a T^b part of a series-coefficient symbol."""
    return PolySymbol(sym.chart,
                      {e: _series_part(c, a, b) for e, c in sym.terms.items()})


def star_expansion_terms(F: PolySymbol, G: PolySymbol, S: float = 1.0,
                         total_order: int = 2) -> dict[tuple[int, int, int], PolySymbol]:
    """Graded terms of F*G with hbar, B, T each counting one order.

    Returns {(j, a, b): coefficient symbol} for the term
    hbar^j B^a T^b * symbol, over j + a + b <= total_order.
    """
    out = {}
    for j in range(total_order + 1):
        bt_order = total_order - j
        sym = cc_j_series(F, G, S, j, bt_order)
        for a in range(bt_order + 1):
            for b in range(bt_order + 1 - a):
                part = series_coefficient_symbol(sym, a, b)
                if not part.is_zero():
                    out[(j, a, b)] = part
    return out


def commutator_expansion_terms(F: PolySymbol, G: PolySymbol, S: float = 1.0,
                               total_order: int = 2) -> dict[tuple[int, int, int], PolySymbol]:
    """Graded terms of F*G - G*F."""
    fg = star_expansion_terms(F, G, S, total_order)
    gf = star_expansion_terms(G, F, S, total_order)
    out = {}
    for key in set(fg) | set(gf):
        diff = fg.get(key, PolySymbol.zero(PHASE)) - gf.get(key, PolySymbol.zero(PHASE))
        if not diff.is_zero():
            out[key] = diff
    return out


def _dplus(F: PolySymbol, k: int) -> PolySymbol:
    """(d/dp_k + i d/dq_k) F."""
    return F.differentiate(f"p{k}") + F.differentiate(f"q{k}") * 1j


def _dminus(F: PolySymbol, k: int) -> PolySymbol:
    """(d/dp_k - i d/dq_k) F."""
    return F.differentiate(f"p{k}") - F.differentiate(f"q{k}") * 1j


def star_expansion_direct(F: PolySymbol, G: PolySymbol) -> dict[tuple[int, int, int], PolySymbol]:
    """The displayed low orders of F*G at S = 1, coded directly.

    Independent of the C_j machinery: each graded term is the explicit
    bidifferential expression.
    """
    half = 0.5
    t100 = PolySymbol.zero(PHASE)
    for k in (1, 2):
        t100 = t100 + _dminus(F, k) * _dplus(G, k)
    t100 = t100 * (-half)

    t110 = (G.differentiate("p1") * _dminus(F, 2) * 1j
            - F.differentiate("p1") * _dplus(G, 2) * 1j) * half

    t101 = (F.differentiate("q2") * _dplus(G, 1)
            + G.differentiate("q2") * _dminus(F, 1)) * half

    t200 = PolySymbol.zero(PHASE)
    for k in (1, 2):
        t200 = t200 + _dplus(_dplus(G, k), k) * _dminus(_dminus(F, k), k)
    t200 = t200 + _dplus(_dplus(G, 1), 2) * _dminus(_dminus(F, 1), 2) * 2.0
    t200 = t200 * (1.0 / 8.0)

    out = {(0, 0, 0): F * G, (1, 0, 0): t100, (1, 1, 0): t110,
           (1, 0, 1): t101, (2, 0, 0): t200}
    return {k: v for k, v in out.items() if not v.is_zero()}


def commutator_expansion_direct(F: PolySymbol, G: PolySymbol) -> dict[tuple[int, int, int], PolySymbol]:
    """The displayed low orders of F*G - G*F at S = 1, coded directly."""
    t100 = poisson_bracket(F, G) * 1j

    t110 = (F.differentiate("p2") * G.differentiate("p1")
            - F.differentiate("p1") * G.differentiate("p2")) * 1j

    t101 = (F.differentiate("q2") * G.differentiate("q1")
            - F.differentiate("q1") * G.differentiate("q2")) * 1j

    t200 = (_dplus(_dplus(G, 1), 2) * _dminus(_dminus(F, 1), 2)
            - _dplus(_dplus(F, 1), 2) * _dminus(_dminus(G, 1), 2)) * 2.0
    for k in (1, 2):
        t200 = t200 + _dplus(_dplus(G, k), k) * _dminus(_dminus(F, k), k) \
                    - _dplus(_dplus(F, k), k) * _dminus(_dminus(G, k), k)
    t200 = t200 * (1.0 / 8.0)

    out = {(1, 0, 0): t100, (1, 1, 0): t110, (1, 0, 1): t101, (2, 0, 0): t200}
    return {k: v for k, v in out.items() if not v.is_zero()}


# -- semiclassical residual sweeps -------------------------------------------

@dataclass(frozen=True)
class ExpansionReport:
    order: int
    interior_degree: int
    S: float
    joint: bool
    samples: tuple[tuple[float, float, float, float], ...]  # (hbar, B, T, residual)
    slope: float

    def to_csv_rows(self) -> list[dict]:
        return [
            {"hbar": h, "B": B, "T": T, "S": self.S, "order": self.order,
             "interior_degree": self.interior_degree, "residual": r,
             "slope": self.slope}
            for (h, B, T, r) in self.samples
        ]


def _thread_count() -> int:
    env = os.environ.get(THREADS_ENV, "")
    if env.strip():
        return max(1, int(env))
    return os.cpu_count() or 1


def _residual_one(F, G, order, N, B, T, S, hbar):
    from .fock import spectral_norm
    f = F.substitute(phase_to_complex_images(B, T, S))
    g = G.substitute(phase_to_complex_images(B, T, S))
    basis = FockBasis(2, N, hbar)
    rem = toeplitz_poly(basis, f).matrix @ toeplitz_poly(basis, g).matrix
    for j in range(order + 1):
        cj = c_j(f, g, j)
        if not cj.is_zero():
            rem = rem - hbar ** j * toeplitz_poly(basis, cj).matrix
    M = N - F.total_degree() - G.total_degree()
    cols = np.flatnonzero(basis.degrees <= M)
    return spectral_norm(rem[:, cols])


def expansion_residual(params: DeformationParams, F: PolySymbol, G: PolySymbol,
                       order: int, N: int, hbars, joint: bool = False) -> ExpansionReport:
    """Residual of T_F T_G minus the order-n star expansion, swept over hbar.

    (B, T, S) stay fixed at the values of `params` while hbar sweeps; with
    joint=True, B and T are scaled along proportionally to hbar (S fixed),
    probing the regime where all three deformation parameters shrink
    together.  The residual is the spectral norm on columns of degree
    <= N - deg F - deg G, where truncation is exact; the slope is the
    least-squares fit of log residual against log hbar.
    """
    params.require_generic("expansion_residual")
    if F.chart is not PHASE or G.chart is not PHASE:
        raise ChartMismatch("expansion_residual needs phase-chart symbols")
    degs = F.total_degree() + G.total_degree()
    if N < degs + order + 2:
        raise CutoffTooSmall(
            f"need N >= deg F + deg G + order + 2 = {degs + order + 2}, got {N}")
    hbars = [float(h) for h in hbars]
    if not hbars:
        raise ValueError("need at least one hbar sample")
    B0, T0, S = params.B, params.T, params.S
    h0 = params.hbar

    def one(h):
        scale = h / h0 if joint else 1.0
        return h, B0 * scale, T0 * scale

    tasks = [one(h) for h in hbars]
    workers = min(_thread_count(), len(tasks))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            residuals = list(ex.map(
                lambda t: _residual_one(F, G, order, N, t[1], t[2], S, t[0]),
                tasks))
    else:
        residuals = [_residual_one(F, G, order, N, b, t, S, h)
                     for (h, b, t) in tasks]

    samples = tuple((h, b, t, float(r))
                    for (h, b, t), r in zip(tasks, residuals))
    logh = np.log([s[0] for s in samples])
    logr = np.log([max(s[3], 1e-300) for s in samples])
    slope = float(np.polyfit(logh, logr, 1)[0]) if len(samples) > 1 else float("nan")
    return ExpansionReport(order, N - degs, S, joint, samples, slope)


# -- degenerate reduction -----------------------------------------------------

def _dirac_point(dp: DegenerateParams) -> tuple[float, float]:
    if not dp.has_dirac_measure:
        raise NonDiracMeasure(
            "the degenerate star-product path needs a Dirac measure")
    return dp.measure.q2, dp.measure.p2


def varrho(dp: DegenerateParams, F: PolySymbol) -> PolySymbol:
    """Reduce a phase-space symbol to one complex variable (Dirac measure).

    Substitutes q1 = q1^NC + (theta/hbar) p2*, q2 = q2*,
    p1 = p1^NC - (hbar/theta) q2* - 2 kappa hbar, p2 = p2*, then writes
    (q1^NC, p1^NC) in the z chart.
    """
    if F.chart is not PHASE:
        raise ChartMismatch("varrho needs a phase-chart symbol")
    q2s, p2s = _dirac_point(dp)
    toh = dp.theta / dp.hbar
    a = dp.s / math.sqrt(2.0 * dp.hbar)
    b = math.sqrt(dp.hbar / 2.0) / dp.s
    z = PolySymbol.variable(COMPLEX1, "z1")
    zb = PolySymbol.variable(COMPLEX1, "zb1")
    q1nc = (z + zb) * a
    p1nc = (z - zb) * (1j * b)
    images = {
        "q1": q1nc + toh * p2s,
        "q2": PolySymbol.constant(COMPLEX1, q2s),
        "p1": p1nc - q2s / toh - 2.0 * dp.kappa * dp.hbar,
        "p2": PolySymbol.constant(COMPLEX1, p2s),
    }
    return F.substitute(images)


def varrho_star(dp: DegenerateParams, f: PolySymbol) -> PolySymbol:
    """Right inverse of varrho: substitute the degenerate z chart.

    z = sqrt(hbar/2) q1^NC/s - i s p1^NC/sqrt(2 hbar) with the degenerate
    NC coordinates (including the 2 kappa hbar shift); varrho(varrho_star(f))
    returns f identically.
    """
    if f.chart is not COMPLEX1:
        raise ChartMismatch("varrho_star needs a one-variable complex symbol")
    toh = dp.theta / dp.hbar
    aq = math.sqrt(dp.hbar / 2.0) / dp.s
    ap = dp.s / math.sqrt(2.0 * dp.hbar)
    q1 = PolySymbol.variable(PHASE, "q1")
    q2 = PolySymbol.variable(PHASE, "q2")
    p1 = PolySymbol.variable(PHASE, "p1")
    p2 = PolySymbol.variable(PHASE, "p2")
    q1nc = q1 - p2 * toh
    p1nc = p1 + q2 * (1.0 / toh) + 2.0 * dp.kappa * dp.hbar
    images = {
        "z1": q1nc * aq - p1nc * (1j * ap),
        "zb1": q1nc * aq + p1nc * (1j * ap),
    }
    return f.substitute(images)


def restrict_to_base(dp: DegenerateParams, F: PolySymbol) -> PolySymbol:
    """Evaluate q2, p2 at the Dirac base point, leaving a (q1, p1) symbol."""
    q2s, p2s = _dirac_point(dp)
    images = {
        "q1": PolySymbol.variable(PHASE, "q1"),
        "p1": PolySymbol.variable(PHASE, "p1"),
        "q2": PolySymbol.constant(PHASE, q2s),
        "p2": PolySymbol.constant(PHASE, p2s),
    }
    return F.substitute(images)


def _varrho_centered(dp: DegenerateParams, F: PolySymbol) -> PolySymbol:
    """varrho with its constant shifts dropped (see cc_j_degenerate)."""
    if F.chart is not PHASE:
        raise ChartMismatch("varrho needs a phase-chart symbol")
    q2s, p2s = _dirac_point(dp)
    a = dp.s / math.sqrt(2.0 * dp.hbar)
    b = math.sqrt(dp.hbar / 2.0) / dp.s
    z = PolySymbol.variable(COMPLEX1, "z1")
    zb = PolySymbol.variable(COMPLEX1, "zb1")
    images = {
        "q1": (z + zb) * a,
        "q2": PolySymbol.constant(COMPLEX1, q2s),
        "p1": (z - zb) * (1j * b),
        "p2": PolySymbol.constant(COMPLEX1, p2s),
    }
    return F.substitute(images)


def _varrho_star_centered(dp: DegenerateParams, f: PolySymbol) -> PolySymbol:
    """Shift-free chart substitution z -> sqrt(h/2) q1/s - i s p1/sqrt(2h)."""
    aq = math.sqrt(dp.hbar / 2.0) / dp.s
    ap = dp.s / math.sqrt(2.0 * dp.hbar)
    q1 = PolySymbol.variable(PHASE, "q1")
    p1 = PolySymbol.variable(PHASE, "p1")
    images = {
        "z1": q1 * aq - p1 * (1j * ap),
        "zb1": q1 * aq + p1 * (1j * ap),
    }
    return f.substitute(images)


def cc_j_degenerate(dp: DegenerateParams, F: PolySymbol, G: PolySymbol,
                    j: int) -> PolySymbol:
    """Degenerate star-product coefficient, restricted to the base plane.

    Symbols are functions on the plane (q2, p2) = (q2*, p2*) almost
    everywhere with a Dirac measure, so the result is reported as a
    polynomial in (q1, p1) alone.  The theta- and base-point shifts of
    varrho cancel identically against those of varrho_star in the
    restricted composite (translation covariance of the derivative
    pairings), so the computation uses the shift-free chart; the literal
    composite is kept in cc_j_degenerate_literal and tested against this.
    """
    f = _varrho_centered(dp, F)
    g = _varrho_centered(dp, G)
    return _varrho_star_centered(dp, c_j(f, g, j))


def cc_j_degenerate_literal(dp: DegenerateParams, F: PolySymbol, G: PolySymbol,
                            j: int) -> PolySymbol:
    """cc_j_degenerate computed through the shifted maps verbatim.

    Mathematically identical to cc_j_degenerate; numerically it expands
    polynomials around the shifted center, so large theta or base points
    amplify rounding.  Used to cross-check the cancellation.
    """
    f = varrho(dp, F)
    g = varrho(dp, G)
    return restrict_to_base(dp, varrho_star(dp, c_j(f, g, j)))


def cc1_degenerate_direct(dp: DegenerateParams, F: PolySymbol,
                          G: PolySymbol) -> PolySymbol:
    """Closed form of the first degenerate coefficient:
    -(1/(2 hbar s^2)) (hbar dF/dp1 - i s^2 dF/dq1)(hbar dG/dp1 + i s^2 dG/dq1).
    """
    Fr = restrict_to_base(dp, F)
    Gr = restrict_to_base(dp, G)
    h, s2 = dp.hbar, dp.s * dp.s
    left = Fr.differentiate("p1") * h - Fr.differentiate("q1") * (1j * s2)
    right = Gr.differentiate("p1") * h + Gr.differentiate("q1") * (1j * s2)
    return (left * right) * (-1.0 / (2.0 * h * s2))
