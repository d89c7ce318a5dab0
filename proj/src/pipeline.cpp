#include "mxpbf/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "mxpbf/cov_pbf.hpp"
#include "mxpbf/mean_pbf.hpp"
#include "mxpbf/sliding.hpp"

namespace mxpbf {

DataMatrix rolling_center(const DataMatrix& data, index_t n_w) {
    if (n_w < 2) throw DataError("rolling centering needs n_w >= 2");
    index_t half = n_w / 2;
    index_t n = data.rows();
    DataMatrix out(n, data.cols());
    for (index_t j = 0; j < data.cols(); ++j) {
        auto src = data.column(j);
        auto dst = out.column(j);
        for (index_t i = 1; i <= n; ++i) {
            index_t lo = std::max<index_t>(1, i - half);
            index_t hi = std::min<index_t>(n, i + half);
            double mean = detail::pairwise_sum(src.data() + (lo - 1),
                                               static_cast<std::size_t>(hi - lo + 1)) /
                          static_cast<double>(hi - lo + 1);
            dst[static_cast<size_t>(i - 1)] = src[static_cast<size_t>(i - 1)] - mean;
        }
    }
    return out;
}

namespace {

double resolve_alpha(const DataMatrix& data, index_t n_w, ScanKind kind,
                     const CombinedConfig& config, std::uint64_t stream_salt) {
    if (config.fixed_alpha) return *config.fixed_alpha;
    CalibrationConfig calib = config.calibration;
    calib.workers = config.workers;
    // Distinct deterministic seeds per (stage, rung, segment).
    calib.seed = config.calibration.seed ^ (0x9e3779b97f4a7c15ULL * (stream_salt + 1));
    return calibrate_alpha(data, n_w, kind, calib).alpha_hat;
}

RungDetection detect_cov_rung(const DataMatrix& data, index_t n_w, const CombinedConfig& config,
                              std::uint64_t salt) {
    DataMatrix centered = rolling_center(data, n_w);
    RungDetection rung;
    rung.n_w = n_w;
    rung.alpha = resolve_alpha(centered, n_w, ScanKind::covariance, config, salt);
    CovPbfParams params;
    params.alpha = rung.alpha;
    params.a0 = config.calibration.a0;
    params.rates = {config.calibration.b0, config.calibration.b01, config.calibration.b02};
    params.n_w = n_w;
    params.p = data.cols();
    ScanOptions options;
    options.workers = config.workers;
    auto profile = scan_cov(centered, params, options);
    DetectionConfig det{config.log_threshold, n_w};
    rung.profile = profile_values(profile);
    rung.detection = detect_changepoints({rung.profile, n_w + 1}, det);
    return rung;
}

RungDetection detect_mean_rung(const DataMatrix& segment, index_t n_w, const CombinedConfig& config,
                               std::uint64_t salt) {
    RungDetection rung;
    rung.n_w = n_w;
    rung.alpha = resolve_alpha(segment, n_w, ScanKind::mean, config, salt);
    MeanPbfParams params{rung.alpha, n_w, segment.cols()};
    ScanOptions options;
    options.workers = config.workers;
    auto profile = scan_mean(segment, params, options);
    DetectionConfig det{config.log_threshold, n_w};
    rung.profile = profile_values(profile);
    rung.detection = detect_changepoints({rung.profile, n_w + 1}, det);
    return rung;
}

} // namespace

CombinedResult detect_combined(const DataMatrix& data, const CombinedConfig& config) {
    config.ladder.validate();
    index_t n = data.rows();
    if (2 * config.ladder.sizes.front() > n) {
        throw LadderInfeasible("no ladder rung fits the series: smallest window " +
                               std::to_string(config.ladder.sizes.front()) + " needs n >= " +
                               std::to_string(2 * config.ladder.sizes.front()));
    }
    if (2 * config.ladder.sizes.back() > n) {
        throw LadderInfeasible("largest ladder rung " + std::to_string(config.ladder.sizes.back()) +
                               " infeasible for series of length " + std::to_string(n));
    }

    CombinedResult result;

    // Stage 1: covariance detection per rung on rolling-centered data.
    std::size_t rungs = config.ladder.rungs();
    std::vector<ChangePointSet> cov_detections(rungs);
    for (std::size_t r = 0; r < rungs; ++r) {
        auto rung = detect_cov_rung(data, config.ladder.sizes[r], config, r);
        cov_detections[r] = rung.detection;
        result.cov_rungs.push_back(std::move(rung));
    }
    result.cov = aggregate_majority(cov_detections, config.ladder);

    // Stage 2: mean detection inside each segment of the original data.
    std::vector<index_t> boundaries = result.cov.points;
    std::vector<std::pair<index_t, index_t>> segments;
    index_t lo = 1;
    for (index_t b : boundaries) {
        segments.emplace_back(lo, b - 1);
        lo = b;
    }
    segments.emplace_back(lo, n);

    std::uint64_t salt = rungs;
    for (auto [first, last] : segments) {
        index_t len = last - first + 1;
        // Only the windows the segment can support, trimmed to an odd count
        // so the majority rule stays well defined.
        std::vector<index_t> usable;
        for (index_t w : config.ladder.sizes) {
            if (2 * w <= len) usable.push_back(w);
        }
        if (usable.size() % 2 == 0 && !usable.empty()) usable.pop_back();
        if (usable.empty()) continue;

        SegmentMeanResult seg;
        seg.first = first;
        seg.last = last;
        DataMatrix segment = data.slice_rows(first, last);
        WindowLadder sub{usable};
        std::vector<ChangePointSet> mean_detections;
        for (index_t w : usable) {
            auto rung = detect_mean_rung(segment, w, config, salt++);
            mean_detections.push_back(rung.detection);
            seg.rungs.push_back(std::move(rung));
        }
        seg.aggregated = aggregate_majority(mean_detections, sub);
        for (auto& pt : seg.aggregated.points) pt += first - 1;
        for (auto& g : seg.aggregated.groups) {
            g.point += first - 1;
            for (auto& m : g.members) m.location += first - 1;
        }
        result.mean_segments.push_back(std::move(seg));
    }

    // Merge with covariance priority: drop mean points closer than the
    // largest ladder rung to any covariance point.
    index_t radius = config.ladder.sizes.back();
    for (index_t c : result.cov.points) result.merged.push_back({c, PointSource::covariance});
    for (const auto& seg : result.mean_segments) {
        for (index_t m : seg.aggregated.points) {
            bool suppressed = false;
            for (index_t c : result.cov.points) {
                if (std::abs(m - c) < radius) {
                    suppressed = true;
                    break;
                }
            }
            if (!suppressed) result.merged.push_back({m, PointSource::mean});
        }
    }
    std::sort(result.merged.begin(), result.merged.end(),
              [](const SourcedPoint& a, const SourcedPoint& b) { return a.location < b.location; });
    return result;
}

} // namespace mxpbf
