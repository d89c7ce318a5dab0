#include "mxpbf/mean_pbf.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "mxpbf/parallel.hpp"
#include "mxpbf/sliding.hpp"

namespace mxpbf {

namespace {

constexpr double kDegenerateRel = 1e-12;

// Core formula from the two half-window RSS values and the combined RSS.
// mean_square is the combined window's mean of squares, used only to scale
// the degeneracy cutoff. Returns nullopt on a degenerate (near-constant)
// window.
std::optional<double> log_pbf_mean_from_stats(double s_left, double s_right, double s_comb,
                                              double mean_square, const MeanPbfParams& params) {
    double denom = s_left + s_right;
    if (denom <= kDegenerateRel * mean_square) return std::nullopt;
    return params.half_log_gamma_ratio() +
           static_cast<double>(params.n_w) * std::log(s_comb / denom);
}

struct WindowMoments {
    double sum = 0.0;
    double sumsq = 0.0;
};

WindowMoments moments(std::span<const double> x) {
    WindowMoments m;
    m.sum = detail::pairwise_sum(x.data(), x.size());
    m.sumsq = detail::pairwise_dot(x.data(), x.data(), x.size());
    return m;
}

double centered_rss_of(std::span<const double> x) {
    double mean = detail::pairwise_sum(x.data(), x.size()) / static_cast<double>(x.size());
    double rss = 0.0;
    for (double v : x) {
        double d = v - mean;
        rss += d * d;
    }
    return rss;
}

// Column-wise translation by each column's full-series mean. Centered RSS is
// translation invariant, so this changes nothing algebraically while keeping
// the sliding sum-of-squares identity well conditioned.
DataMatrix column_centered(const DataMatrix& data) {
    DataMatrix out(data.rows(), data.cols());
    for (index_t j = 0; j < data.cols(); ++j) {
        auto src = data.column(j);
        double mean = detail::pairwise_sum(src.data(), src.size()) / static_cast<double>(src.size());
        auto dst = out.column(j);
        for (size_t i = 0; i < src.size(); ++i) dst[i] = src[i] - mean;
    }
    return out;
}

MeanScanResult mxpbf_mean_at_impl(const DataMatrix& data, index_t l, const MeanPbfParams& params,
                                  const SlidingColumnStats& left, const SlidingColumnStats& right) {
    MeanScanResult result;
    result.center = l;
    result.log_mxpbf = -std::numeric_limits<double>::infinity();
    result.witness_col = 0;
    result.all_degenerate = true;
    double n2 = static_cast<double>(2 * params.n_w);
    for (index_t j = 1; j <= data.cols(); ++j) {
        double s_left = left.centered_rss(j);
        double s_right = right.centered_rss(j);
        double sum_c = left.sum(j) + right.sum(j);
        double sumsq_c = left.sum_squares(j) + right.sum_squares(j);
        double s_comb = std::max(0.0, sumsq_c - sum_c * sum_c / n2);
        auto value = log_pbf_mean_from_stats(s_left, s_right, s_comb, sumsq_c / n2, params);
        if (!value) continue;
        if (result.all_degenerate || *value > result.log_mxpbf) {
            result.log_mxpbf = *value;
            result.witness_col = j;
        }
        result.all_degenerate = false;
    }
    return result;
}

} // namespace

double log_pbf_mean(std::span<const double> left, std::span<const double> right,
                    const MeanPbfParams& params) {
    params.validate();
    if (left.size() != right.size()) throw DataError("left and right windows must have equal length");
    if (left.size() != static_cast<size_t>(params.n_w)) {
        throw DataError("window length does not match params.n_w");
    }
    if (left.size() < 2) throw SpanTooShort("mean PBF needs window length >= 2");

    double s_left = centered_rss_of(left);
    double s_right = centered_rss_of(right);
    WindowMoments ml = moments(left);
    WindowMoments mr = moments(right);
    double n2 = static_cast<double>(2 * params.n_w);
    double sum_c = ml.sum + mr.sum;
    double sumsq_c = ml.sumsq + mr.sumsq;
    double s_comb = std::max(0.0, sumsq_c - sum_c * sum_c / n2);
    auto value = log_pbf_mean_from_stats(s_left, s_right, s_comb, sumsq_c / n2, params);
    if (!value) {
        throw DegenerateVariance("combined half-window variance is (near) zero; window is constant");
    }
    return *value;
}

MeanScanResult mxpbf_mean_at(const DataMatrix& data, index_t l, const MeanPbfParams& params) {
    params.validate();
    WindowConfig cfg(params.n_w, data.rows());
    if (l < cfg.first_center() || l > cfg.last_center()) {
        throw CenterOutOfRange("center " + std::to_string(l) + " outside [" +
                               std::to_string(cfg.first_center()) + ", " +
                               std::to_string(cfg.last_center()) + "]");
    }
    DataMatrix centered = column_centered(data);
    SlidingColumnStats left(centered, l - params.n_w, params.n_w);
    SlidingColumnStats right(centered, l, params.n_w);
    return mxpbf_mean_at_impl(centered, l, params, left, right);
}

std::vector<MeanScanResult> scan_mean(const DataMatrix& data, const MeanPbfParams& params,
                                      const ScanOptions& options) {
    params.validate();
    WindowConfig cfg(params.n_w, data.rows());
    DataMatrix centered = column_centered(data);

    index_t first = cfg.first_center();
    index_t count = cfg.center_count();
    index_t block = std::max<index_t>(1, options.rebuild_every);
    auto n_blocks = static_cast<std::size_t>((count + block - 1) / block);

    std::vector<MeanScanResult> profile(static_cast<size_t>(count));
    parallel_blocks(n_blocks, options.workers, [&](std::size_t b) {
        index_t lo = first + static_cast<index_t>(b) * block;
        index_t hi = std::min(lo + block - 1, cfg.last_center());
        SlidingColumnStats left(centered, lo - params.n_w, params.n_w, block);
        SlidingColumnStats right(centered, lo, params.n_w, block);
        for (index_t l = lo; l <= hi; ++l) {
            profile[static_cast<size_t>(l - first)] =
                mxpbf_mean_at_impl(centered, l, params, left, right);
            if (l < hi) {
                left.advance();
                right.advance();
            }
        }
    });
    return profile;
}

std::vector<double> profile_values(const std::vector<MeanScanResult>& results) {
    std::vector<double> values;
    values.reserve(results.size());
    for (const auto& r : results) values.push_back(r.log_mxpbf);
    return values;
}

} // namespace mxpbf
