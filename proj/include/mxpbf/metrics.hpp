#pragma once

#include <vector>

#include "mxpbf/types.hpp"

namespace mxpbf {

struct MetricConfig {
    index_t margin = 15;     // true positive tolerance M; a match needs |i_hat - i| < M
    index_t n = 0;           // series length, for the trivial endpoints 1 and n

    void validate() const {
        if (margin < 1) throw DataError("margin M must be >= 1");
        if (n < 2) throw DataError("series length must be >= 2");
    }
};

struct F1Result {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    index_t tp_count = 0;
};

// Union with the trivial change points {1, n}, sorted and deduplicated.
std::vector<index_t> augment_trivial(std::vector<index_t> points, index_t n);

// Margin-based precision/recall/F1. Both sets are augmented with the trivial
// endpoints internally; a true point counts as matched when some detection
// lies strictly within the margin.
F1Result f1_score(const std::vector<index_t>& truth, const std::vector<index_t>& detected,
                  const MetricConfig& config);

// Hausdorff distance between the augmented sets.
index_t hausdorff(const std::vector<index_t>& truth, const std::vector<index_t>& detected,
                  const MetricConfig& config);

} // namespace mxpbf
