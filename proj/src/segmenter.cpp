#include "mxpbf/segmenter.hpp"

#include <algorithm>

namespace mxpbf {

ExistenceResult test_existence(ProfileView profile, const DetectionConfig& config) {
    if (profile.values.empty()) throw EmptyProfile("existence test on an empty profile");
    ExistenceResult result;
    std::size_t best = 0;
    for (std::size_t k = 1; k < profile.values.size(); ++k) {
        if (profile.values[k] > profile.values[best]) best = k;
    }
    result.max_value = profile.values[best];
    result.witness_center = profile.first_center + static_cast<index_t>(best);
    result.exists = result.max_value > config.log_threshold;
    return result;
}

ChangePointSet detect_changepoints(ProfileView profile, const DetectionConfig& config) {
    ChangePointSet result;
    result.window = config.n_w;
    if (profile.values.empty()) return result;

    index_t first = profile.first_center;
    index_t last = profile.last_center();
    auto value_at = [&](index_t l) { return profile.values[static_cast<size_t>(l - first)]; };

    index_t previous = 1;   // i_hat_0
    for (;;) {
        index_t search_from = std::max(first, previous + config.n_w);
        index_t candidate = 0;
        for (index_t l = search_from; l <= last; ++l) {
            if (value_at(l) > config.log_threshold) {
                candidate = l;
                break;
            }
        }
        if (candidate == 0) break;
        index_t refine_end = std::min(candidate + config.n_w - 1, last);
        index_t refined = candidate;
        for (index_t l = candidate + 1; l <= refine_end; ++l) {
            if (value_at(l) > value_at(refined)) refined = l;
        }
        result.points.push_back(refined);
        result.evidence.push_back(value_at(refined));
        previous = refined;
    }
    return result;
}

} // namespace mxpbf
