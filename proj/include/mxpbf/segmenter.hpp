#pragma once

#include <span>
#include <vector>

#include "mxpbf/types.hpp"

namespace mxpbf {

// Estimated change locations, strictly increasing, with the profile value at
// each refined location. Consecutive points are at least n_w apart and all
// lie inside the valid center range.
struct ChangePointSet {
    std::vector<index_t> points;
    std::vector<double> evidence;
    index_t window = 0;
};

struct DetectionConfig {
    double log_threshold = 2.302585092994046;   // log 10
    index_t n_w = 0;
};

struct ExistenceResult {
    bool exists = false;
    index_t witness_center = 0;
    double max_value = 0.0;
};

// A per-center log-mxPBF profile: values[k] belongs to center
// first_center + k.
struct ProfileView {
    std::span<const double> values;
    index_t first_center = 0;

    index_t last_center() const { return first_center + static_cast<index_t>(values.size()) - 1; }
};

// Global existence test: true iff max(profile) strictly exceeds the log
// threshold; witness is the earliest argmax center.
ExistenceResult test_existence(ProfileView profile, const DetectionConfig& config);

// Scan-then-refine estimation. Starting from i_hat_0 = 1, repeatedly find the
// first center l >= previous + n_w whose profile value exceeds the threshold,
// then refine to the argmax over the next n_w centers (clipped at the right
// edge, earliest index on ties).
ChangePointSet detect_changepoints(ProfileView profile, const DetectionConfig& config);

} // namespace mxpbf
