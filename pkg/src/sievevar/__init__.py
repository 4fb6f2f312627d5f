"""Sieve and finite-order VAR impulse-response inference."""

from .bootstrap_infer import (
    BootstrapDraws,
    bias_corrected_bootstrap,
    bias_corrected_coefficients,
    bootstrap_irf_distribution,
    percentile_ci,
    residual_bootstrap_sample,
)
from .delta_infer import (
    IntervalSet,
    IrfCovariance,
    delta_ci,
    finite_order_cov,
    finite_order_covariances,
    horizon_gate,
    irf_jacobian,
    sieve_cov,
    sieve_covariances,
)
from .dgp_sim import (
    SamplePath,
    VarmaSpec,
    counterexample_ar,
    default_desk_spec,
    simulate_varma,
    varma_true_ar,
    varma_true_irf,
    white_noise_spec,
)
from .errors import (
    ConfigError,
    DimensionMismatchError,
    EigenvalueError,
    ExperimentError,
    SieveVarError,
    SingularMatrixError,
    UnstableProcessError,
)
from .estimate import (
    AutocovSet,
    VarModel,
    build_gamma_p,
    fit_var_ls,
    residual_cov,
    sample_autocov,
)
from .mc_harness import (
    ExperimentConfig,
    McSummary,
    aggregate,
    counterexample_experiment,
    coverage_flags,
    interval_sets_for_sample,
    run_experiment,
)
from .sieve_diag import assumption_ratios, sample_growth, tail_norm
from .var_core import (
    CompanionMatrix,
    MatrixSeq,
    Selector,
    coeff_seq,
    companion_form,
    irf_seq,
    ma_from_ar,
    ma_via_companion,
    spectral_radius,
    stability_class,
)

__version__ = "0.1.0"

__all__ = [
    "AutocovSet",
    "BootstrapDraws",
    "CompanionMatrix",
    "ConfigError",
    "DimensionMismatchError",
    "EigenvalueError",
    "ExperimentError",
    "ExperimentConfig",
    "IntervalSet",
    "IrfCovariance",
    "MatrixSeq",
    "McSummary",
    "SamplePath",
    "Selector",
    "SieveVarError",
    "SingularMatrixError",
    "UnstableProcessError",
    "VarModel",
    "VarmaSpec",
    "aggregate",
    "assumption_ratios",
    "bias_corrected_bootstrap",
    "bias_corrected_coefficients",
    "bootstrap_irf_distribution",
    "build_gamma_p",
    "coeff_seq",
    "companion_form",
    "counterexample_ar",
    "counterexample_experiment",
    "coverage_flags",
    "default_desk_spec",
    "delta_ci",
    "finite_order_cov",
    "finite_order_covariances",
    "fit_var_ls",
    "horizon_gate",
    "interval_sets_for_sample",
    "irf_jacobian",
    "irf_seq",
    "ma_from_ar",
    "ma_via_companion",
    "percentile_ci",
    "residual_bootstrap_sample",
    "residual_cov",
    "run_experiment",
    "sample_autocov",
    "sample_growth",
    "sieve_cov",
    "sieve_covariances",
    "simulate_varma",
    "spectral_radius",
    "stability_class",
    "tail_norm",
    "varma_true_ar",
    "varma_true_irf",
    "white_noise_spec",
]
