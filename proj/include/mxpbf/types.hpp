#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mxpbf/errors.hpp"

namespace mxpbf {

using index_t = long;

// n x p observation matrix, rows are time-ordered observations and columns
// are variables. Stored column-major so that the per-column window scans walk
// contiguous memory. Immutable after construction apart from explicit
// column-level mutation used by the preprocessing steps.
//
// Convention used throughout the library: raw array access (at, column) is
// 0-based; series *positions* exchanged with callers (window spans, centers,
// change-point locations, witness columns) are 1-based, matching the report
// formats.
class DataMatrix {
public:
    DataMatrix(index_t n, index_t p);

    // Row-major flat input (r*p + c), as parsed from CSV.
    static DataMatrix from_row_major(index_t n, index_t p, std::span<const double> values);

    index_t rows() const { return n_; }
    index_t cols() const { return p_; }

    double at(index_t i, index_t j) const { return data_[static_cast<size_t>(j) * n_ + i]; }
    double& at(index_t i, index_t j) { return data_[static_cast<size_t>(j) * n_ + i]; }

    // Contiguous column view, length n.
    std::span<const double> column(index_t j) const {
        return {data_.data() + static_cast<size_t>(j) * n_, static_cast<size_t>(n_)};
    }
    std::span<double> column(index_t j) {
        return {data_.data() + static_cast<size_t>(j) * n_, static_cast<size_t>(n_)};
    }

    // Throws NonFinite naming the first offending cell (1-based).
    void validate_finite() const;

    // Rows [first, last], 1-based inclusive.
    DataMatrix slice_rows(index_t first, index_t last) const;

private:
    index_t n_;
    index_t p_;
    std::vector<double> data_;
};

// 1-based inclusive row range.
struct WindowSpan {
    index_t start = 1;
    index_t end = 1;

    index_t length() const { return end - start + 1; }

    void validate(index_t n) const {
        if (start < 1 || end < start || end > n) {
            throw DataError("window span [" + std::to_string(start) + ", " + std::to_string(end) +
                            "] invalid for series of length " + std::to_string(n));
        }
    }
};

// Feasibility of a window size for a series of length n. Centers l of the
// scan run over [n_w + 1, n - n_w + 1]; a change at l separates rows <= l-1
// from rows >= l.
struct WindowConfig {
    index_t n_w = 0;
    index_t n = 0;

    WindowConfig(index_t n_w_, index_t n_) : n_w(n_w_), n(n_) {
        if (n_w < 2) throw DataError("window size must be >= 2, got " + std::to_string(n_w));
        if (2 * n_w > n) {
            throw LadderInfeasible("window size " + std::to_string(n_w) +
                                   " infeasible for series of length " + std::to_string(n) +
                                   " (requires n_w <= n/2)");
        }
    }

    index_t first_center() const { return n_w + 1; }
    index_t last_center() const { return n - n_w + 1; }
    index_t center_count() const { return last_center() - first_center() + 1; }

    // log(n_w v p) / n_w, the small-window diagnostic.
    double epsilon(index_t p) const {
        return std::log(static_cast<double>(std::max(n_w, p))) / static_cast<double>(n_w);
    }
};

} // namespace mxpbf
