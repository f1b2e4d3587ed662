"""Truncated Fock spaces over C^d and Toeplitz matrix construction.

The weight is exp(-|z|^2/hbar) (pi hbar)^{-d}; the monomials
e_alpha(z) = z^alpha / sqrt(hbar^|alpha| alpha!) are orthonormal under it.
A truncation keeps all multi-indices with |alpha| <= N in graded
lexicographic order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    BadCutoff,
    BadNodeCount,
    BasisMismatch,
    ChartMismatch,
    DimensionMismatch,
)
from .symbols import PolySymbol, complex_chart

DEFAULT_QUAD_NODES = {1: 32, 2: 16}


@lru_cache(maxsize=None)
def graded_indices(d: int, N: int) -> tuple[tuple[int, ...], ...]:
    """Multi-indices with |alpha| <= N, graded, then lexicographic within a grade."""
    if d == 1:
        return tuple((n,) for n in range(N + 1))
    if d == 2:
        out = []
        for n in range(N + 1):
            for a1 in range(n, -1, -1):
                out.append((a1, n - a1))
        return tuple(out)
    raise DimensionMismatch(f"d must be 1 or 2, got {d}")


@dataclass(frozen=True)
class FockBasis:
    d: int
    N: int
    hbar: float

    def __post_init__(self):
        if self.d not in (1, 2):
            raise DimensionMismatch(f"d must be 1 or 2, got {self.d}")
        if self.N < 0:
            raise BadCutoff(f"cutoff N must be >= 0, got {self.N}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")

    @property
    def indices(self) -> tuple[tuple[int, ...], ...]:
        return graded_indices(self.d, self.N)

    @property
    def dim(self) -> int:
        return len(self.indices)

    @property
    def degrees(self) -> np.ndarray:
        return np.array([sum(a) for a in self.indices])

    def position(self, alpha: tuple[int, ...]) -> int:
        return _index_lookup(self.d, self.N)[alpha]


@lru_cache(maxsize=None)
def _index_lookup(d: int, N: int) -> dict:
    return {a: i for i, a in enumerate(graded_indices(d, N))}


@dataclass(frozen=True)
class TruncatedOperator:
    """Dense matrix of an operator on a truncated Fock basis.

    Entry (alpha, beta) is the coefficient of e_alpha in the image of e_beta.
    """

    basis: FockBasis
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.basis.dim, self.basis.dim):
            raise BasisMismatch(
                f"matrix shape {m.shape} does not match basis dim {self.basis.dim}")
        object.__setattr__(self, "matrix", m)

    def _check(self, other: "TruncatedOperator"):
        if self.basis != other.basis:
            raise BasisMismatch("operators live on different bases")

    def __add__(self, other):
        self._check(other)
        return TruncatedOperator(self.basis, self.matrix + other.matrix)

    def __sub__(self, other):
        self._check(other)
        return TruncatedOperator(self.basis, self.matrix - other.matrix)

    def __mul__(self, scalar):
        return TruncatedOperator(self.basis, self.matrix * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other):
        self._check(other)
        return TruncatedOperator(self.basis, self.matrix @ other.matrix)

    def adjoint(self) -> "TruncatedOperator":
        return TruncatedOperator(self.basis, self.matrix.conj().T)


def identity_operator(basis: FockBasis) -> TruncatedOperator:
    return TruncatedOperator(basis, np.eye(basis.dim, dtype=complex))


def gaussian_moment(hbar: float, a: int, b: int) -> float:
    """int z^a zbar^b exp(-|z|^2/hbar) dA/(pi hbar) = delta_ab hbar^a a!."""
    if a < 0 or b < 0:
        raise ValueError("moment orders must be nonnegative")
    if a != b:
        return 0.0
    return hbar ** a * math.factorial(a)


def gaussian_moment_multi(hbar: float, alpha: tuple, beta: tuple) -> float:
    """Product of per-coordinate moments."""
    out = 1.0
    for a, b in zip(alpha, beta):
        out *= gaussian_moment(hbar, a, b)
    return out


def _split_exponents(e: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Complex-chart exponent tuple -> (z powers, zb powers)."""
    return e[0::2], e[1::2]


def toeplitz_poly(basis: FockBasis, f: PolySymbol) -> TruncatedOperator:
    """Toeplitz matrix of a polynomial symbol, assembled from exact moments.

    For a monomial z^a zb^b the only surviving entries pair column beta
    with row alpha = a + beta - b, and carry
    hbar^{(|a|+|b|)/2} * prod_j (a_j+beta_j)! / sqrt(alpha_j! beta_j!).
    """
    if f.chart != complex_chart(basis.d):
        raise ChartMismatch(
            f"symbol chart {f.chart.name} does not match basis d={basis.d}")
    idx = basis.indices
    lookup = _index_lookup(basis.d, basis.N)
    fact = [math.factorial(k) for k in range(basis.N + f.total_degree() + 1)]
    mat = np.zeros((basis.dim, basis.dim), dtype=complex)
    for e, c in f.terms.items():
        a, b = _split_exponents(e)
        hpow = basis.hbar ** ((sum(a) + sum(b)) / 2.0)
        for col, beta in enumerate(idx):
            alpha = tuple(ai + bi - ci for ai, bi, ci in zip(a, beta, b))
            if any(k < 0 for k in alpha) or sum(alpha) > basis.N:
                continue
            ratio = 1.0
            for aj, bj, alj in zip(a, beta, alpha):
                ratio *= fact[aj + bj] / math.sqrt(fact[alj] * fact[bj])
            mat[lookup[alpha], col] += c * hpow * ratio
    return TruncatedOperator(basis, mat)


def _quad_points(basis: FockBasis, nodes: int):
    """Tensor Gauss-Hermite grid in the 2d real coordinates of z = sqrt(hbar) w."""
    u, w = np.polynomial.hermite.hermgauss(nodes)
    root_h = math.sqrt(basis.hbar)
    if basis.d == 1:
        U, V = np.meshgrid(u, u, indexing="ij")
        z = (root_h * (U + 1j * V)).ravel()
        weight = np.outer(w, w).ravel() / math.pi
        return z.reshape(-1, 1), weight
    U1, V1, U2, V2 = np.meshgrid(u, u, u, u, indexing="ij")
    z1 = (root_h * (U1 + 1j * V1)).ravel()
    z2 = (root_h * (U2 + 1j * V2)).ravel()
    weight = (w[:, None, None, None] * w[None, :, None, None]
              * w[None, None, :, None] * w[None, None, None, :]).ravel() / math.pi ** 2
    return np.stack([z1, z2], axis=1), weight


def _basis_matrix(basis: FockBasis, pts: np.ndarray) -> np.ndarray:
    """Rows are basis functions evaluated on the quadrature points."""
    fact = [math.factorial(k) for k in range(basis.N + 1)]
    rows = []
    for alpha in basis.indices:
        mono = np.ones(pts.shape[0], dtype=complex)
        norm = 1.0
        for j, aj in enumerate(alpha):
            if aj:
                mono = mono * pts[:, j] ** aj
            norm *= basis.hbar ** aj * fact[aj]
        rows.append(mono / math.sqrt(norm))
    return np.array(rows)


def toeplitz_quad(basis: FockBasis, f, nodes_per_dim: int | None = None) -> TruncatedOperator:
    """Toeplitz matrix of a callable symbol by tensor Gauss-Hermite quadrature.

    `f` receives an (npoints, d) complex array and must return npoints values.
    """
    if nodes_per_dim is None:
        nodes_per_dim = DEFAULT_QUAD_NODES[basis.d]
    if nodes_per_dim < 1:
        raise BadNodeCount(f"nodes_per_dim must be >= 1, got {nodes_per_dim}")
    pts, weight = _quad_points(basis, nodes_per_dim)
    fv = np.asarray(f(pts), dtype=complex)
    if fv.shape != (pts.shape[0],):
        raise DimensionMismatch(
            f"symbol callable returned shape {fv.shape}, expected ({pts.shape[0]},)")
    E = _basis_matrix(basis, pts)
    mat = (E.conj() * (weight * fv)) @ E.T
    return TruncatedOperator(basis, mat)


def interior_block(op: TruncatedOperator, M: int, row_degree: int | None = None):
    """Restrict to columns of degree <= M (and rows of degree <= row_degree).

    With the default row_degree = M the result is a TruncatedOperator on the
    smaller basis (graded order nests).  A larger row_degree keeps extra rows
    and returns a plain rectangular array.
    """
    N = op.basis.N
    if not 0 <= M <= N:
        raise BadCutoff(f"interior degree {M} outside [0, {N}]")
    if row_degree is None:
        row_degree = M
    if not 0 <= row_degree <= N:
        raise BadCutoff(f"row degree {row_degree} outside [0, {N}]")
    deg = op.basis.degrees
    cols = np.flatnonzero(deg <= M)
    rows = np.flatnonzero(deg <= row_degree)
    sub = op.matrix[np.ix_(rows, cols)]
    if row_degree == M:
        return TruncatedOperator(FockBasis(op.basis.d, M, op.basis.hbar), sub)
    return sub


def spectral_norm(op, tol: float = 1e-12, max_iter: int = 20000) -> float:
    """Largest singular value by power iteration on the Gram matrix A^H A."""
    m = np.asarray(op.matrix if isinstance(op, TruncatedOperator) else op,
                   dtype=complex)
    if m.size == 0:
        return 0.0
    gram = m.conj().T @ m
    n = gram.shape[0]
    scale = np.abs(gram).max()
    if scale == 0.0:
        return 0.0
    rng = np.random.default_rng(0x5eed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = gram @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        lam_new = float(np.real(np.vdot(v, gram @ v)))
        if abs(lam_new - lam) <= tol * max(abs(lam_new), scale * 1e-6):
            lam = lam_new
            break
        lam = lam_new
    return math.sqrt(max(lam, 0.0))
