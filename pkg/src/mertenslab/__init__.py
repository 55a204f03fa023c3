"""mertenslab: exact Mertens-function identities and the spectral analysis
of the symmetric floor-quotient matrices they produce."""

from .cardinal import (
    CardinalSystem,
    SingularMatrixError,
    build_cardinal,
    inverse_exact,
    mertens_via_cardinal,
    verify_cardinal_identity,
)
from .identities import (
    HypothesisError,
    IdentityReport,
    Word,
    eratosthenes_pi_check,
    inclusion_exclusion_check,
    meissel_sum,
    mertens_via_bilinear,
    mertens_via_flexible,
    mertens_via_uniform,
    mobius_via_identity,
    term_count_survey,
)
from .multiplicative import (
    ComplexPower,
    DirichletCharacter,
    Liouville,
    Principal,
    divisor_summatory,
    g_fold_sum,
    mertens_oracle,
    partial_sum,
)
from .operators import (
    DENSE_CAP_DEFAULT,
    MatrixOperator,
    build_operator,
    mobius_vector,
    reciprocal_vector,
)
from .quadform import (
    fourier_truncation_report,
    mertens_power,
    quadform,
    ranksplit_check,
    spectral_truncation_report,
    trace_z2_check,
    z_spectral_report,
)
from .sieve import MobiusTable, sieve_mobius
from .spectral import (
    ConvergenceError,
    SpectralResult,
    SpectralStats,
    bounds_report,
    compute_stats,
    extreme_eigenpairs,
    full_spectrum,
    phi_limit_check,
    scaling_scan,
    trace_closed_form_check,
    w_form_check,
)
from .zeta import Constants, constants, zeta_partial_window, zeta_real

__version__ = "0.1.0"

__all__ = [
    "CardinalSystem",
    "ComplexPower",
    "Constants",
    "ConvergenceError",
    "DENSE_CAP_DEFAULT",
    "DirichletCharacter",
    "HypothesisError",
    "IdentityReport",
    "Liouville",
    "MatrixOperator",
    "MobiusTable",
    "Principal",
    "SingularMatrixError",
    "SpectralResult",
    "SpectralStats",
    "Word",
    "bounds_report",
    "build_cardinal",
    "build_operator",
    "compute_stats",
    "constants",
    "divisor_summatory",
    "eratosthenes_pi_check",
    "extreme_eigenpairs",
    "fourier_truncation_report",
    "full_spectrum",
    "g_fold_sum",
    "inclusion_exclusion_check",
    "inverse_exact",
    "meissel_sum",
    "mertens_oracle",
    "mertens_power",
    "mertens_via_bilinear",
    "mertens_via_cardinal",
    "mertens_via_flexible",
    "mertens_via_uniform",
    "mobius_vector",
    "mobius_via_identity",
    "partial_sum",
    "phi_limit_check",
    "quadform",
    "ranksplit_check",
    "reciprocal_vector",
    "scaling_scan",
    "sieve_mobius",
    "spectral_truncation_report",
    "term_count_survey",
    "trace_closed_form_check",
    "trace_z2_check",
    "verify_cardinal_identity",
    "w_form_check",
    "z_spectral_report",
    "zeta_partial_window",
    "zeta_real",
]
