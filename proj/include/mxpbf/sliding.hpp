#pragma once

#include <cstddef>
#include <vector>

#include "mxpbf/types.hpp"

namespace mxpbf {

namespace detail {

// Pairwise (cascade) summation; error grows like log(n) rather than n, which
// keeps the p^2 pair scans honest on long windows.
double pairwise_sum(const double* x, std::size_t n);
double pairwise_dot(const double* x, const double* y, std::size_t n);

} // namespace detail

// Mean-centered quadratic form sum_{i in span} (x_ij - mean)^2. Equals
// (span length) * sigma_hat^2 of the windowed column.
double centered_rss(const DataMatrix& data, WindowSpan span, index_t j);

// Residual sum of squares of the no-intercept least squares fit of column i
// on column j over the span. A zero-norm predictor column is treated as the
// zero projection, so the result falls back to ||x_i||^2.
double regression_rss(const DataMatrix& data, WindowSpan span, index_t i, index_t j);

// Sliding per-column first and second moments over a fixed-length window.
// advance() shifts the window one row to the right and rebuilds from scratch
// every `rebuild_every` shifts to cap floating-point drift.
class SlidingColumnStats {
public:
    static constexpr index_t kDefaultRebuildEvery = 64;

    SlidingColumnStats(const DataMatrix& data, index_t start, index_t len,
                       index_t rebuild_every = kDefaultRebuildEvery);

    void advance();
    void rebuild_now();

    index_t start() const { return start_; }
    index_t len() const { return len_; }

    double sum(index_t j) const { return sum_[static_cast<size_t>(j - 1)]; }
    double sum_squares(index_t j) const { return sumsq_[static_cast<size_t>(j - 1)]; }

    // Centered RSS of column j over the current window, clamped at 0.
    double centered_rss(index_t j) const;

private:
    const DataMatrix* data_;
    index_t start_;
    index_t len_;
    index_t rebuild_every_;
    index_t shifts_since_rebuild_ = 0;
    std::vector<double> sum_;
    std::vector<double> sumsq_;
};

// Sliding p x p cross-product matrix X_w^T X_w over a fixed-length window.
class SlidingCrossStats {
public:
    SlidingCrossStats(const DataMatrix& data, index_t start, index_t len,
                      index_t rebuild_every = SlidingColumnStats::kDefaultRebuildEvery);

    void advance();
    void rebuild_now();

    index_t start() const { return start_; }
    index_t len() const { return len_; }

    double cross(index_t i, index_t j) const {
        return cross_[static_cast<size_t>(i - 1) * p_ + static_cast<size_t>(j - 1)];
    }

    // Regression RSS of column i on column j over the current window via the
    // cross-product identity C_ii - C_ij^2 / C_jj, clamped at 0.
    double regression_rss(index_t i, index_t j) const;

private:
    const DataMatrix* data_;
    index_t p_;
    index_t start_;
    index_t len_;
    index_t rebuild_every_;
    index_t shifts_since_rebuild_ = 0;
    std::vector<double> cross_;
    std::vector<double> row_scratch_;
};

} // namespace mxpbf
