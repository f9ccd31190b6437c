"""Elliptical Wishart distributions: densities, moments, samplers, fitting."""

from ._core import (
    BudgetError,
    DensityGenerator,
    EwParams,
    MomentCoefficients,
    MomentError,
    NotPositiveDefinite,
    ParameterError,
    Rng,
    coefficients,
    ew_kron_moment,
    ew_log_pdf,
    ew_mean,
    ew_variance,
    fit_report,
    iew_kron_moment,
    iew_log_pdf,
    iew_mean,
    iew_variance,
    ks_two_sample,
    mc_kron_moment,
    mle_t_wishart,
    mle_wishart,
    rearrange_second_moment,
    run_acceptance,
    sample_ew,
    sample_iew,
    sample_nw,
    sample_wishart_identity,
    statistic,
    wishart_kron_moment,
)

__all__ = [
    "BudgetError",
    "DensityGenerator",
    "EwParams",
    "MomentCoefficients",
    "MomentError",
    "NotPositiveDefinite",
    "ParameterError",
    "Rng",
    "coefficients",
    "ew_kron_moment",
    "ew_log_pdf",
    "ew_mean",
    "ew_variance",
    "fit_report",
    "iew_kron_moment",
    "iew_log_pdf",
    "iew_mean",
    "iew_variance",
    "ks_two_sample",
    "mc_kron_moment",
    "mle_t_wishart",
    "mle_wishart",
    "rearrange_second_moment",
    "run_acceptance",
    "sample_ew",
    "sample_iew",
    "sample_nw",
    "sample_wishart_identity",
    "statistic",
    "wishart_kron_moment",
]

__version__ = "1.0.0"
