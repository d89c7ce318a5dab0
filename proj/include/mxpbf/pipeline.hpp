#pragma once

#include <optional>
#include <vector>

#include "mxpbf/calibration.hpp"
#include "mxpbf/multiscale.hpp"
#include "mxpbf/segmenter.hpp"
#include "mxpbf/types.hpp"

namespace mxpbf {

// Per-column centering by the clipped symmetric rolling mean of half-width
// floor(n_w / 2), the preprocessing that justifies the zero-mean covariance
// model on real data.
DataMatrix rolling_center(const DataMatrix& data, index_t n_w);

enum class PointSource { covariance, mean };

struct SourcedPoint {
    index_t location = 0;
    PointSource source = PointSource::covariance;
};

struct RungDetection {
    index_t n_w = 0;
    double alpha = 0.0;
    ChangePointSet detection;
    std::vector<double> profile;     // per-center log-mxPBF, centers from n_w + 1
};

struct SegmentMeanResult {
    index_t first = 0;               // 1-based segment row range in the original series
    index_t last = 0;
    std::vector<RungDetection> rungs;
    MultiscaleResult aggregated;     // locations already offset to global indices
};

struct CombinedResult {
    std::vector<RungDetection> cov_rungs;
    MultiscaleResult cov;
    std::vector<SegmentMeanResult> mean_segments;
    std::vector<SourcedPoint> merged;
};

struct CombinedConfig {
    WindowLadder ladder;
    double log_threshold = 2.302585092994046;      // log 10
    std::optional<double> fixed_alpha;             // bypasses calibration when set
    CalibrationConfig calibration;
    int workers = 0;
};

// The sequential two-stage procedure: covariance detection on rolling-centered
// data per rung, majority aggregation, then mean detection inside each
// segment of the original data over the rungs the segment can support, merged
// with covariance priority (mean points closer than the largest ladder rung
// to a covariance point are dropped).
CombinedResult detect_combined(const DataMatrix& data, const CombinedConfig& config);

} // namespace mxpbf
