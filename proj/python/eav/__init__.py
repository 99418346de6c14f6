"""Adaptive choice of the number of order statistics for the Hill estimator."""

from ._core import (
    DEFAULT_SEED,
    InvalidArgument,
    NoAdmissibleCandidate,
    ReplicationError,
    abs_gamma_cdf,
    adaptive_error_bound,
    bounds,
    estimate,
    exact_quantile,
    grid,
    hill,
    hill_sweep,
    mc_quantile,
    r_bound,
    rmse_curve,
    sample,
    simulate,
    true_gamma,
    v_tilde,
)

__all__ = [
    "DEFAULT_SEED",
    "InvalidArgument",
    "NoAdmissibleCandidate",
    "ReplicationError",
    "abs_gamma_cdf",
    "adaptive_error_bound",
    "bounds",
    "estimate",
    "exact_quantile",
    "grid",
    "hill",
    "hill_sweep",
    "mc_quantile",
    "r_bound",
    "rmse_curve",
    "sample",
    "simulate",
    "true_gamma",
    "v_tilde",
]
