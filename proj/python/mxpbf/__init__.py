"""Change point detection in high-dimensional mean and covariance structures
via maximum pairwise Bayes factors."""

from ._mxpbf import (  # noqa: F401
    ChangePointSet,
    CovScanResult,
    DataError,
    DataMatrix,
    MeanScanResult,
    MultiscaleResult,
    NumericError,
    aggregate_majority,
    calibrate_alpha,
    detect_changepoints,
    detect_combined,
    f1_score,
    generate_scenario,
    hausdorff,
    load_csv,
    log_pbf_cov,
    log_pbf_mean,
    rolling_center,
    scan_cov,
    scan_mean,
    shift_alpha,
)

__all__ = [
    "ChangePointSet",
    "CovScanResult",
    "DataError",
    "DataMatrix",
    "MeanScanResult",
    "MultiscaleResult",
    "NumericError",
    "aggregate_majority",
    "calibrate_alpha",
    "detect_changepoints",
    "detect_combined",
    "f1_score",
    "generate_scenario",
    "hausdorff",
    "load_csv",
    "log_pbf_cov",
    "log_pbf_mean",
    "rolling_center",
    "scan_cov",
    "scan_mean",
    "shift_alpha",
]
