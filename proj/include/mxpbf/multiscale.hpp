#pragma once

#include <vector>

#include "mxpbf/segmenter.hpp"
#include "mxpbf/types.hpp"

namespace mxpbf {

// Strictly increasing set of window sizes; the count must be odd so the
// majority rule (R+1)/2 is well defined.
struct WindowLadder {
    std::vector<index_t> sizes;

    void validate() const {
        if (sizes.empty() || sizes.size() % 2 == 0) {
            throw DataError("window ladder needs an odd number of sizes");
        }
        for (std::size_t r = 0; r < sizes.size(); ++r) {
            if (sizes[r] < 2) throw DataError("window sizes must be >= 2");
            if (r > 0 && sizes[r] <= sizes[r - 1]) {
                throw DataError("window ladder sizes must be strictly increasing");
            }
        }
    }

    std::size_t rungs() const { return sizes.size(); }
    std::size_t majority() const { return (sizes.size() + 1) / 2; }
};

// One member detection of a group: the window it came from, its location and
// the log-mxPBF evidence it was detected with.
struct DetectionRef {
    index_t window = 0;
    index_t location = 0;
    double evidence = 0.0;
};

struct DetectionGroup {
    std::vector<DetectionRef> members;
    index_t point = 0;       // rounded mean of member locations
};

struct MultiscaleResult {
    std::vector<index_t> points;
    std::vector<DetectionGroup> groups;
};

// Majority grouping across the ladder. Stage r anchors intervals
// [i - n_w^(r) + 1, i + n_w^(r) - 1] on the window-r detections in ascending
// order; an interval holding at least (R+1)/2 still-ungrouped detections is
// consumed as one group, with overlapping equal-count candidates resolved
// toward the smaller sample variance of member locations. Each stage repeats
// until nothing qualifies, then the next window size takes over. Group
// locations are averaged and rounded half-up.
MultiscaleResult aggregate_majority(const std::vector<ChangePointSet>& detections,
                                    const WindowLadder& ladder);

} // namespace mxpbf
