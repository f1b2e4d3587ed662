"""Toeplitz operators of phase-space symbols on the coherent-state space.

Conjugating with the isometry onto the Fock space turns these into
ordinary Toeplitz operators of composed symbols: generic parameters use
the two-variable chart composition, degenerate ones the one-variable
reduction (Dirac measure required).  The commutator tables of the four
coordinate symbols are scalar multiples of the identity on interior
columns; commutator_table measures the deviation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasisMismatch, KindMismatch
from .fock import (
    FockBasis,
    TruncatedOperator,
    interior_block,
    spectral_norm,
    toeplitz_poly,
    toeplitz_quad,
)
from .params import DeformationParams, DegenerateParams, iota
from .star import varrho
from .symbols import PHASE, PolySymbol, parse_symbol, to_complex_chart


def build_nc_toeplitz(params: DeformationParams | DegenerateParams,
                      basis: FockBasis, symbol,
                      nodes_per_dim: int | None = None) -> TruncatedOperator:
    """Matrix of the Toeplitz operator of a phase-space symbol.

    `symbol` is a phase-chart PolySymbol (exact path) or a callable
    F(q1, q2, p1, p2) evaluated by quadrature; vectorized over numpy
    arrays in the callable case.
    """
    if basis.hbar != params.hbar:
        raise BasisMismatch(
            f"basis hbar {basis.hbar} differs from params hbar {params.hbar}")
    degenerate = isinstance(params, DegenerateParams)
    if degenerate and basis.d != 1:
        raise KindMismatch("degenerate build needs a d=1 basis")
    if not degenerate:
        params.require_generic("build_nc_toeplitz")
        if basis.d != 2:
            raise KindMismatch("generic build needs a d=2 basis")

    if isinstance(symbol, PolySymbol):
        f = varrho(params, symbol) if degenerate \
            else to_complex_chart(params, symbol)
        return toeplitz_poly(basis, f)

    if degenerate:
        dp = params
        if not dp.has_dirac_measure:
            # callables cannot be reduced without the product property
            from .errors import NonDiracMeasure
            raise NonDiracMeasure("callable degenerate build needs a Dirac measure")
        q2s, p2s = dp.measure.q2, dp.measure.p2
        toh = dp.theta / dp.hbar

        def reduced(pts):
            z = pts[:, 0]
            a = dp.s / np.sqrt(2.0 * dp.hbar)
            b = np.sqrt(dp.hbar / 2.0) / dp.s
            q1nc = a * (z + z.conj()).real
            p1nc = (1j * b * (z - z.conj())).real
            return symbol(q1nc + toh * p2s,
                          np.full_like(q1nc, q2s),
                          p1nc - q2s / toh - 2.0 * dp.kappa * dp.hbar,
                          np.full_like(q1nc, p2s))

        return toeplitz_quad(basis, reduced, nodes_per_dim)

    def composed(pts):
        out = np.empty(pts.shape[0], dtype=complex)
        for k in range(pts.shape[0]):
            out[k] = symbol(*iota(params, (pts[k, 0], pts[k, 1])))
        return out

    return toeplitz_quad(basis, composed, nodes_per_dim)


def commutator(a: TruncatedOperator, b: TruncatedOperator) -> TruncatedOperator:
    """AB - BA on a common basis."""
    if a.basis != b.basis:
        raise BasisMismatch("commutator needs operators on the same basis")
    return TruncatedOperator(a.basis, a.matrix @ b.matrix - b.matrix @ a.matrix)


_GENERATORS = ("q1", "q2", "p1", "p2")
_PAIRS = (("q1", "q2"), ("q1", "p1"), ("q1", "p2"),
          ("q2", "p1"), ("q2", "p2"), ("p1", "p2"))


def expected_commutator_scalar(params: DeformationParams | DegenerateParams,
                               lhs: str, rhs: str) -> complex:
    """Scalar c with [T_lhs, T_rhs] = c * I on interior columns.

    Generic: [p1,p2] = -i*calB/(1-BT), [p_j,q_j] = -i*hbar/(1-BT),
    [q1,q2] = -i*theta/(1-BT), the rest zero (all divided denominators are
    written via 1 - B*T).  Degenerate: [q1,p1] = i*hbar, the rest zero.
    """
    pair = (lhs, rhs)
    if isinstance(params, DegenerateParams):
        if pair == ("q1", "p1"):
            return 1j * params.hbar
        if pair == ("p1", "q1"):
            return -1j * params.hbar
        return 0.0
    det = 1.0 - params.B * params.T
    table = {
        ("p1", "p2"): -1j * params.calB / det,
        ("p1", "q1"): -1j * params.hbar / det,
        ("p2", "q2"): -1j * params.hbar / det,
        ("q1", "q2"): -1j * params.theta / det,
    }
    if pair in table:
        return table[pair]
    rev = (rhs, lhs)
    if rev in table:
        return -table[rev]
    return 0.0


@dataclass(frozen=True)
class CommutatorEntry:
    lhs: str
    rhs: str
    expected: complex
    deviation: float


@dataclass(frozen=True)
class CommutatorReport:
    N: int
    interior_degree: int
    observable_ratio: float | None
    entries: tuple[CommutatorEntry, ...]

    @property
    def max_deviation(self) -> float:
        return max(e.deviation for e in self.entries)

    def to_json_dict(self) -> dict:
        out = {
            "N": self.N,
            "interior_degree": self.interior_degree,
            "pairs": [
                {"lhs": e.lhs, "rhs": e.rhs,
                 "expected_scalar": [e.expected.real, e.expected.imag],
                 "deviation": e.deviation}
                for e in self.entries
            ],
        }
        if self.observable_ratio is not None:
            out["observable_ratio"] = self.observable_ratio
        return out


def commutator_table(params: DeformationParams | DegenerateParams,
                     N: int) -> CommutatorReport:
    """All six pairwise commutators of the coordinate Toeplitz operators.

    Deviations are spectral norms of (commutator - scalar I) restricted to
    the degree <= N-2 block, relative to |scalar| when the scalar is
    nonzero.  observable_ratio is the factor hbar^2/(calB*theta - hbar^2)
    relating these scalars to the quantum-observable commutators (-1 in
    the degenerate case, where the table is the canonical one).
    """
    if N < 4:
        raise ValueError(f"commutator_table needs N >= 4, got {N}")
    degenerate = isinstance(params, DegenerateParams)
    basis = FockBasis(1 if degenerate else 2, N, params.hbar)
    ops = {name: build_nc_toeplitz(params, basis, parse_symbol(name, PHASE))
           for name in _GENERATORS}
    interior = N - 2
    entries = []
    for lhs, rhs in _PAIRS:
        comm = commutator(ops[lhs], ops[rhs])
        expected = complex(expected_commutator_scalar(params, lhs, rhs))
        block = interior_block(comm, interior).matrix
        dev = spectral_norm(block - expected * np.eye(block.shape[0]))
        if expected != 0.0:
            dev /= abs(expected)
        entries.append(CommutatorEntry(lhs, rhs, expected, float(dev)))
    if degenerate:
        ratio = None  # hbar^2/(calB*theta - hbar^2) degenerates here
    else:
        ratio = float(params.hbar ** 2
                      / (params.calB * params.theta - params.hbar ** 2))
    return CommutatorReport(N, interior, ratio, tuple(entries))
