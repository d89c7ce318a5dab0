#pragma once

#include <span>
#include <vector>

#include "mxpbf/pbf_common.hpp"
#include "mxpbf/types.hpp"

namespace mxpbf {

struct MeanPbfParams {
    double alpha = 1.0;
    index_t n_w = 0;
    index_t p = 0;

    void validate() const {
        if (alpha <= 0.0) throw DataError("alpha must be > 0");
        if (n_w < 2) throw DataError("window size must be >= 2");
        if (p < 1) throw DataError("dimension must be >= 1");
    }

    double log_gamma() const { return log_prior_gamma(alpha, n_w, p); }
    double gamma() const { return std::exp(log_gamma()); }
    double half_log_gamma_ratio() const { return mxpbf::half_log_gamma_ratio(alpha, n_w, p); }
};

struct MeanScanResult {
    index_t center = 0;
    double log_mxpbf = 0.0;
    index_t witness_col = 0;        // 1-based column attaining the max; 0 when all degenerate
    bool all_degenerate = false;
};

// Log pairwise Bayes factor for a mean change between two equal-length
// windows of one variable:
//   0.5*log(gamma/(1+gamma)) + n_w * log(S_comb / (S_left + S_right)),
// where S_* are mean-centered residual quadratic forms. Throws
// DegenerateVariance when S_left + S_right vanishes relative to the window's
// mean-square magnitude.
double log_pbf_mean(std::span<const double> left, std::span<const double> right,
                    const MeanPbfParams& params);

// Maximum of the per-column log PBFs at center l. Degenerate columns are
// skipped; if every column is degenerate the result carries all_degenerate
// and log_mxpbf = -infinity.
MeanScanResult mxpbf_mean_at(const DataMatrix& data, index_t l, const MeanPbfParams& params);

// Per-center profile over l in [n_w + 1, n - n_w + 1], computed with sliding
// window statistics in fixed-size blocks so the result is identical at every
// worker count.
std::vector<MeanScanResult> scan_mean(const DataMatrix& data, const MeanPbfParams& params,
                                      const ScanOptions& options = {});

// Profile values with -infinity standing in for all-degenerate centers.
std::vector<double> profile_values(const std::vector<MeanScanResult>& results);

} // namespace mxpbf
