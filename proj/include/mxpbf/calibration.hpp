#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mxpbf/types.hpp"

namespace mxpbf {

enum class ScanKind { mean, covariance };

// Sample mean and covariance of the observed series, with the covariance
// forced positive definite by the additive identity repair when needed.
struct NullModel {
    Eigen::VectorXd mu_hat;
    Eigen::MatrixXd sigma_hat;
    double repair_shift = 0.0;
};

struct CalibrationConfig {
    double target_fpr = 0.05;
    int n_sim = 300;
    double log_threshold = 2.302585092994046;    // log 10
    std::vector<double> alpha_grid;              // empty selects the default grid
    std::uint64_t seed = 0;
    int workers = 0;
    // Covariance-kind scan hyperparameters.
    double a0 = 0.01;
    double b0 = 0.01;
    double b01 = 0.01;
    double b02 = 0.01;

    // 0.01, 0.02, ..., 15.00
    static std::vector<double> default_grid();

    void validate() const;
};

struct AlphaFpr {
    double alpha = 0.0;
    double fpr = 0.0;
};

struct CalibrationResult {
    double alpha_hat = 0.0;
    std::vector<AlphaFpr> curve;
    double reference_alpha = 0.0;
    std::vector<double> null_log_mxpbf;   // global statistics at the reference alpha, one per dataset
};

NullModel fit_null_model(const DataMatrix& data);

// Moves a log mxPBF computed at alpha_from to alpha_to. Alpha enters every
// PBF only through the additive 0.5*log(gamma/(1+gamma)) term, so the shift
// is exact.
double shift_alpha(double log_bf, double alpha_from, double alpha_to, index_t n_w, index_t p);

// FPR-based selection of alpha for one window size: simulate n_sim null
// datasets from the fitted null model, scan each once at a reference alpha,
// map the statistics to every grid alpha by shift_alpha, and pick the
// smallest grid alpha whose empirical FPR is at or below the target. For the
// covariance kind the simulated data are centered by the null model's mean
// before scanning. Throws NoFeasibleAlpha when even the largest grid alpha
// exceeds the target.
CalibrationResult calibrate_alpha(const DataMatrix& data, index_t n_w, ScanKind kind,
                                  const CalibrationConfig& config);

} // namespace mxpbf
