#pragma once

#include <algorithm>
#include <cmath>

#include "mxpbf/types.hpp"

namespace mxpbf {

// log gamma_{n_w} with gamma_{n_w} = (n_w v p)^(-alpha). Kept in log form so
// large alpha cannot underflow.
inline double log_prior_gamma(double alpha, index_t n_w, index_t p) {
    return -alpha * std::log(static_cast<double>(std::max(n_w, p)));
}

// 0.5 * log(gamma / (1 + gamma)), the only alpha-dependent term of any PBF.
inline double half_log_gamma_ratio(double alpha, index_t n_w, index_t p) {
    double lg = log_prior_gamma(alpha, n_w, p);
    return 0.5 * (lg - std::log1p(std::exp(lg)));
}

struct ScanOptions {
    int workers = 0;                 // <= 0 means all available
    index_t rebuild_every = 64;      // sliding-statistics rebuild interval / scan block size
};

} // namespace mxpbf
