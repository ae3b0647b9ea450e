"""Riesz and beta-Riesz matrix distributions over the real normed division algebras."""

from .algebra import (
    AlgebraTag,
    DivisionMatrix,
    DivisionScalar,
    HermitianPD,
    UpperTriangularPosDiag,
    cholesky_upper,
    eigenvalues_hermitian,
    inverse_hpd,
    leading_principal_logminors,
    logdet_hpd,
    matmul,
    quaternion_complex_adjoint,
    reverse_cholesky,
)
from .beta_riesz import (
    BetaRieszParams,
    Family,
    log_density_beta_riesz,
    sample_beta_riesz,
    sample_beta_riesz_type1,
    sample_beta_riesz_type2,
    type2_to_type1,
)
from .errors import (
    DomainError,
    NotPositiveDefiniteError,
    NumericalError,
    QuadratureError,
    RejectedDrawError,
    RieszLabError,
    UnsupportedAlgebraError,
)
from .riesz import (
    RieszParams,
    ScalarGammaParams,
    Variant,
    log_density_generalized_variance,
    log_density_inverse_riesz,
    log_density_riesz,
    sample_generalized_variance,
    sample_inverse_riesz,
    sample_riesz_bartlett,
    sample_scalar_gamma,
    sample_scalar_normal_beta,
)
from .specfun import (
    LogValue,
    Weight,
    gen_pochhammer,
    ln_c_beta,
    ln_gamma_weight_neg,
    ln_gamma_weight_pos,
    ln_k_beta,
    ln_mv_beta,
    ln_mv_gamma,
    ln_stiefel_volume,
    log_q_kappa,
)
from .spectral import (
    EigenDensityParams,
    empirical_eigenvalues,
    log_joint_eigen_density,
    log_vandermonde_beta,
)
from .verify import GofReport, QuadratureSpec, integrate, ks_2samp_test, ks_test, moment_report

__version__ = "0.1.0"

__all__ = [
    "AlgebraTag",
    "BetaRieszParams",
    "DivisionMatrix",
    "DivisionScalar",
    "DomainError",
    "EigenDensityParams",
    "Family",
    "GofReport",
    "HermitianPD",
    "LogValue",
    "NotPositiveDefiniteError",
    "NumericalError",
    "QuadratureError",
    "QuadratureSpec",
    "RejectedDrawError",
    "RieszLabError",
    "RieszParams",
    "ScalarGammaParams",
    "UnsupportedAlgebraError",
    "UpperTriangularPosDiag",
    "Variant",
    "Weight",
    "cholesky_upper",
    "eigenvalues_hermitian",
    "empirical_eigenvalues",
    "gen_pochhammer",
    "integrate",
    "inverse_hpd",
    "ks_2samp_test",
    "ks_test",
    "leading_principal_logminors",
    "ln_c_beta",
    "ln_gamma_weight_neg",
    "ln_gamma_weight_pos",
    "ln_k_beta",
    "ln_mv_beta",
    "ln_mv_gamma",
    "ln_stiefel_volume",
    "log_density_beta_riesz",
    "log_density_generalized_variance",
    "log_density_inverse_riesz",
    "log_density_riesz",
    "log_joint_eigen_density",
    "log_q_kappa",
    "log_vandermonde_beta",
    "logdet_hpd",
    "matmul",
    "moment_report",
    "quaternion_complex_adjoint",
    "reverse_cholesky",
    "sample_beta_riesz",
    "sample_beta_riesz_type1",
    "sample_beta_riesz_type2",
    "sample_generalized_variance",
    "sample_inverse_riesz",
    "sample_riesz_bartlett",
    "sample_scalar_gamma",
    "sample_scalar_normal_beta",
    "type2_to_type1",
]
