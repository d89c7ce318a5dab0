#include "mxpbf/multiscale.hpp"

#include <algorithm>
#include <cmath>

namespace mxpbf {

namespace {

struct PoolEntry {
    index_t window = 0;
    index_t location = 0;
    double evidence = 0.0;
    bool grouped = false;
};

struct Interval {
    index_t lo = 0;
    index_t hi = 0;
    std::size_t count = 0;
    double variance = 0.0;
};

double sample_variance(const std::vector<index_t>& xs) {
    if (xs.size() < 2) return 0.0;
    double mean = 0.0;
    for (index_t x : xs) mean += static_cast<double>(x);
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (index_t x : xs) {
        double d = static_cast<double>(x) - mean;
        ss += d * d;
    }
    return ss / static_cast<double>(xs.size() - 1);
}

Interval measure(index_t anchor, index_t width, const std::vector<PoolEntry>& pool) {
    Interval iv;
    iv.lo = anchor - width + 1;
    iv.hi = anchor + width - 1;
    std::vector<index_t> members;
    for (const auto& e : pool) {
        if (!e.grouped && e.location >= iv.lo && e.location <= iv.hi) members.push_back(e.location);
    }
    iv.count = members.size();
    iv.variance = sample_variance(members);
    return iv;
}

} // namespace

MultiscaleResult aggregate_majority(const std::vector<ChangePointSet>& detections,
                                    const WindowLadder& ladder) {
    ladder.validate();
    if (detections.size() != ladder.rungs()) {
        throw LadderMismatch("expected " + std::to_string(ladder.rungs()) +
                             " detection sets, got " + std::to_string(detections.size()));
    }

    std::vector<PoolEntry> pool;
    for (std::size_t r = 0; r < detections.size(); ++r) {
        for (std::size_t k = 0; k < detections[r].points.size(); ++k) {
            double evidence = k < detections[r].evidence.size() ? detections[r].evidence[k] : 0.0;
            pool.push_back({ladder.sizes[r], detections[r].points[k], evidence, false});
        }
    }

    std::size_t need = ladder.majority();
    std::vector<DetectionGroup> groups;

    for (std::size_t r = 0; r < ladder.rungs(); ++r) {
        index_t width = ladder.sizes[r];
        const auto& anchors = detections[r].points;
        for (;;) {
            // Qualifying anchor intervals at the current pool state, in
            // ascending anchor order.
            std::vector<Interval> qualifying;
            for (index_t anchor : anchors) {
                Interval iv = measure(anchor, width, pool);
                if (iv.count >= need) qualifying.push_back(iv);
            }
            if (qualifying.empty()) break;

            // Overlapping equal-count intervals prefer the smaller sample
            // variance of member locations, applied pairwise in ascending
            // order.
            Interval chosen = qualifying.front();
            for (std::size_t k = 1; k < qualifying.size(); ++k) {
                const Interval& next = qualifying[k];
                if (next.lo > chosen.hi) break;
                if (next.count == chosen.count && next.variance < chosen.variance) chosen = next;
            }

            DetectionGroup group;
            double sum = 0.0;
            for (auto& e : pool) {
                if (!e.grouped && e.location >= chosen.lo && e.location <= chosen.hi) {
                    e.grouped = true;
                    group.members.push_back({e.window, e.location, e.evidence});
                    sum += static_cast<double>(e.location);
                }
            }
            group.point = static_cast<index_t>(
                std::floor(sum / static_cast<double>(group.members.size()) + 0.5));
            groups.push_back(std::move(group));
        }
    }

    std::sort(groups.begin(), groups.end(),
              [](const DetectionGroup& a, const DetectionGroup& b) { return a.point < b.point; });
    MultiscaleResult result;
    result.groups = std::move(groups);
    result.points.reserve(result.groups.size());
    for (const auto& g : result.groups) result.points.push_back(g.point);
    return result;
}

} // namespace mxpbf
