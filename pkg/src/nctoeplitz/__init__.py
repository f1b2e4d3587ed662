"""Numerical laboratory for Berezin-Toeplitz quantization with
noncommutative deformation parameters (hbar, theta, calB).

Coherent states, reproducing kernels (generic and degenerate, each in two
independent forms), truncated Fock-space Toeplitz operators, and the
star-product expansion with its semiclassical checks.
"""

from .errors import (
    AmbiguouslyDegenerate,
    BadCutoff,
    BadNodeCount,
    BasisMismatch,
    ChartMismatch,
    CutoffTooSmall,
    DegenerateLabel,
    DegenerateParamsError,
    DimensionMismatch,
    KindMismatch,
    NonDiracMeasure,
    NonPositiveHbar,
    NonPositiveWidth,
    NotExpandable,
    SymbolSyntaxError,
    UnknownVariable,
    VariantParamsMismatch,
    WrongChart,
)
from .fock import (
    FockBasis,
    TruncatedOperator,
    gaussian_moment,
    gaussian_moment_multi,
    identity_operator,
    interior_block,
    spectral_norm,
    toeplitz_poly,
    toeplitz_quad,
)
from .kernels import (
    DEGENERATE_CLOSED,
    DEGENERATE_FOCK,
    GENERIC_CLOSED,
    GENERIC_FOCK,
    WH_LIMIT,
    GroundState,
    KernelSpec,
    coherent_eval,
    gram_psd,
    kernel,
    reproducing_check,
    wh_limit_gap,
)
from .params import (
    DeformationParams,
    DegenerateParams,
    DiracMeasure,
    GaussianMeasure,
    GroupParams,
    NCCoords,
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
    to_nc_coords_degenerate,
)
from .series import BTSeries, geometric_inverse_one_minus_bt
from .star import (
    ExpansionReport,
    c_j,
    cc1_degenerate_direct,
    cc_j,
    cc_j_degenerate,
    cc_j_series,
    commutator_expansion_direct,
    commutator_expansion_terms,
    expansion_residual,
    gradient_contraction,
    matrix_A,
    restrict_to_base,
    star_expansion_direct,
    star_expansion_terms,
    varrho,
    varrho_star,
)
from .symbols import (
    COMPLEX1,
    COMPLEX2,
    PHASE,
    PolySymbol,
    complex_chart,
    from_complex_chart,
    parse_symbol,
    poisson_bracket,
    to_complex_chart,
)
from .toeplitz_nc import (
    CommutatorReport,
    build_nc_toeplitz,
    commutator,
    commutator_table,
    expected_commutator_scalar,
)

__version__ = "0.1.0"
