#include "mxpbf/metrics.hpp"

#include <algorithm>
#include <cstdlib>

namespace mxpbf {

namespace {

index_t directed_max_min(const std::vector<index_t>& from, const std::vector<index_t>& to) {
    index_t worst = 0;
    for (index_t a : from) {
        index_t best = -1;
        for (index_t b : to) {
            index_t d = std::abs(a - b);
            if (best < 0 || d < best) best = d;
        }
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

std::vector<index_t> augment_trivial(std::vector<index_t> points, index_t n) {
    for (index_t x : points) {
        if (x < 1 || x > n) {
            throw DataError("location " + std::to_string(x) + " outside [1, " + std::to_string(n) + "]");
        }
    }
    points.push_back(1);
    points.push_back(n);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

namespace {

index_t matched_count(const std::vector<index_t>& from, const std::vector<index_t>& against,
                      index_t margin) {
    index_t matched = 0;
    for (index_t a : from) {
        for (index_t b : against) {
            if (std::abs(b - a) < margin) {
                ++matched;
                break;
            }
        }
    }
    return matched;
}

} // namespace

F1Result f1_score(const std::vector<index_t>& truth, const std::vector<index_t>& detected,
                  const MetricConfig& config) {
    config.validate();
    auto t = augment_trivial(truth, config.n);
    auto d = augment_trivial(detected, config.n);

    // Matching is per side: recall counts true points with a detection
    // strictly within the margin, precision counts detections backed by a
    // true point. This keeps both in [0, 1] even when several true points
    // share one detection.
    index_t tp = matched_count(t, d, config.margin);
    index_t matched_detected = matched_count(d, t, config.margin);

    F1Result r;
    r.tp_count = tp;
    r.precision = static_cast<double>(matched_detected) / static_cast<double>(d.size());
    r.recall = static_cast<double>(tp) / static_cast<double>(t.size());
    r.f1 = (r.precision + r.recall) > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

index_t hausdorff(const std::vector<index_t>& truth, const std::vector<index_t>& detected,
                  const MetricConfig& config) {
    config.validate();
    auto t = augment_trivial(truth, config.n);
    auto d = augment_trivial(detected, config.n);
    return std::max(directed_max_min(d, t), directed_max_min(t, d));
}

} // namespace mxpbf
