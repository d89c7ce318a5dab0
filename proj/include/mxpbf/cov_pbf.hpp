#pragma once

#include <map>
#include <utility>
#include <vector>

#include "mxpbf/pbf_common.hpp"
#include "mxpbf/types.hpp"

namespace mxpbf {

// Inverse-gamma rate parameters of the covariance PBF priors. b0 applies
// under "no change", b01/b02 to the left/right windows under "change".
struct PairRates {
    double b0 = 0.01;
    double b01 = 0.01;
    double b02 = 0.01;
};

struct CovPbfParams {
    double alpha = 1.0;
    double a0 = 0.01;
    PairRates rates;                 // scalar configuration, constant across pairs
    index_t n_w = 0;
    index_t p = 0;
    // Optional per-pair override of the rate constants, keyed by the ordered
    // 1-based pair (i, j).
    const std::map<std::pair<index_t, index_t>, PairRates>* rate_overrides = nullptr;

    void validate() const {
        if (alpha <= 0.0) throw DataError("alpha must be > 0");
        if (a0 <= 0.0 || rates.b0 <= 0.0 || rates.b01 <= 0.0 || rates.b02 <= 0.0) {
            throw DataError("inverse-gamma shape and rates must be > 0");
        }
        if (n_w < 2) throw DataError("window size must be >= 2");
        if (p < 2) throw DataError("covariance PBF needs p >= 2");
    }

    const PairRates& rates_for(index_t i, index_t j) const {
        if (rate_overrides != nullptr) {
            auto it = rate_overrides->find({i, j});
            if (it != rate_overrides->end()) return it->second;
        }
        return rates;
    }

    double half_log_gamma_ratio() const { return mxpbf::half_log_gamma_ratio(alpha, n_w, p); }

    // 2*logGamma(n_w/2 + a0) - logGamma(n_w + a0) - logGamma(a0); depends on
    // (n_w, a0) only, so scans compute it once.
    double log_gamma_block() const;
};

struct CovScanResult {
    index_t center = 0;
    double log_mxpbf = 0.0;
    index_t witness_i = 0;           // 1-based ordered pair attaining the max
    index_t witness_j = 0;
};

// Log pairwise Bayes factor for a change in the conditional regression of
// column i on column j (slope and conditional variance) at center l.
double log_pbf_cov(const DataMatrix& data, index_t l, index_t i, index_t j,
                   const CovPbfParams& params);

// Maximum over all p(p-1) ordered pairs at center l; ties break to the
// lexicographically smallest pair.
CovScanResult mxpbf_cov_at(const DataMatrix& data, index_t l, const CovPbfParams& params);

// Per-center profile over l in [n_w + 1, n - n_w + 1] with sliding
// cross-product statistics; deterministic at every worker count.
std::vector<CovScanResult> scan_cov(const DataMatrix& data, const CovPbfParams& params,
                                    const ScanOptions& options = {});

std::vector<double> profile_values(const std::vector<CovScanResult>& results);

} // namespace mxpbf
