#include "mxpbf/cov_pbf.hpp"

#include <cmath>
#include <limits>

#include "mxpbf/parallel.hpp"
#include "mxpbf/sliding.hpp"

namespace mxpbf {

namespace {

// Formula body from the three regression RSS values (left, right, combined).
// The combined-window posterior rate is b0 + RSS_comb / 2, the conjugate
// normal-inverse-gamma update; the numerical-integration oracle in the test
// suite pins this coefficient.
double log_pbf_cov_from_rss(double rss_left, double rss_right, double rss_comb,
                            const PairRates& rates, double a0, index_t n_w,
                            double half_log_gamma, double gamma_block) {
    double half = static_cast<double>(n_w) / 2.0;
    return half_log_gamma + gamma_block + a0 * std::log(rates.b01 * rates.b02 / rates.b0) -
           (half + a0) * std::log(rates.b01 + 0.5 * rss_left) -
           (half + a0) * std::log(rates.b02 + 0.5 * rss_right) +
           (static_cast<double>(n_w) + a0) * std::log(rates.b0 + 0.5 * rss_comb);
}

void check_center(const WindowConfig& cfg, index_t l) {
    if (l < cfg.first_center() || l > cfg.last_center()) {
        throw CenterOutOfRange("center " + std::to_string(l) + " outside [" +
                               std::to_string(cfg.first_center()) + ", " +
                               std::to_string(cfg.last_center()) + "]");
    }
}

CovScanResult mxpbf_cov_at_impl(index_t l, const CovPbfParams& params,
                                const SlidingCrossStats& left, const SlidingCrossStats& right,
                                double half_log_gamma, double gamma_block) {
    CovScanResult result;
    result.center = l;
    result.log_mxpbf = -std::numeric_limits<double>::infinity();
    bool first = true;
    for (index_t i = 1; i <= params.p; ++i) {
        for (index_t j = 1; j <= params.p; ++j) {
            if (i == j) continue;
            double rss_left = left.regression_rss(i, j);
            double rss_right = right.regression_rss(i, j);
            double cjj = left.cross(j, j) + right.cross(j, j);
            double cii = left.cross(i, i) + right.cross(i, i);
            double rss_comb;
            if (cjj <= 0.0) {
                rss_comb = std::max(0.0, cii);
            } else {
                double cij = left.cross(i, j) + right.cross(i, j);
                rss_comb = std::max(0.0, cii - cij * cij / cjj);
            }
            double value = log_pbf_cov_from_rss(rss_left, rss_right, rss_comb,
                                                params.rates_for(i, j), params.a0, params.n_w,
                                                half_log_gamma, gamma_block);
            if (first || value > result.log_mxpbf) {
                result.log_mxpbf = value;
                result.witness_i = i;
                result.witness_j = j;
                first = false;
            }
        }
    }
    return result;
}

} // namespace

double CovPbfParams::log_gamma_block() const {
    return 2.0 * std::lgamma(static_cast<double>(n_w) / 2.0 + a0) -
           std::lgamma(static_cast<double>(n_w) + a0) - std::lgamma(a0);
}

double log_pbf_cov(const DataMatrix& data, index_t l, index_t i, index_t j,
                   const CovPbfParams& params) {
    params.validate();
    if (i == j) throw SameColumn("covariance PBF needs i != j");
    if (i < 1 || i > data.cols() || j < 1 || j > data.cols()) {
        throw DataError("column index out of range");
    }
    WindowConfig cfg(params.n_w, data.rows());
    check_center(cfg, l);

    WindowSpan left{l - params.n_w, l - 1};
    WindowSpan right{l, l + params.n_w - 1};
    WindowSpan comb{l - params.n_w, l + params.n_w - 1};
    double rss_left = regression_rss(data, left, i, j);
    double rss_right = regression_rss(data, right, i, j);
    double rss_comb = regression_rss(data, comb, i, j);
    return log_pbf_cov_from_rss(rss_left, rss_right, rss_comb, params.rates_for(i, j), params.a0,
                                params.n_w, params.half_log_gamma_ratio(), params.log_gamma_block());
}

CovScanResult mxpbf_cov_at(const DataMatrix& data, index_t l, const CovPbfParams& params) {
    params.validate();
    if (params.p != data.cols()) throw DataError("params.p does not match the data dimension");
    WindowConfig cfg(params.n_w, data.rows());
    check_center(cfg, l);
    SlidingCrossStats left(data, l - params.n_w, params.n_w);
    SlidingCrossStats right(data, l, params.n_w);
    return mxpbf_cov_at_impl(l, params, left, right, params.half_log_gamma_ratio(),
                             params.log_gamma_block());
}

std::vector<CovScanResult> scan_cov(const DataMatrix& data, const CovPbfParams& params,
                                    const ScanOptions& options) {
    params.validate();
    if (params.p != data.cols()) throw DataError("params.p does not match the data dimension");
    WindowConfig cfg(params.n_w, data.rows());

    double half_log_gamma = params.half_log_gamma_ratio();
    double gamma_block = params.log_gamma_block();

    index_t first = cfg.first_center();
    index_t count = cfg.center_count();
    index_t block = std::max<index_t>(1, options.rebuild_every);
    auto n_blocks = static_cast<std::size_t>((count + block - 1) / block);

    std::vector<CovScanResult> profile(static_cast<size_t>(count));
    parallel_blocks(n_blocks, options.workers, [&](std::size_t b) {
        index_t lo = first + static_cast<index_t>(b) * block;
        index_t hi = std::min(lo + block - 1, cfg.last_center());
        SlidingCrossStats left(data, lo - params.n_w, params.n_w, block);
        SlidingCrossStats right(data, lo, params.n_w, block);
        for (index_t l = lo; l <= hi; ++l) {
            profile[static_cast<size_t>(l - first)] =
                mxpbf_cov_at_impl(l, params, left, right, half_log_gamma, gamma_block);
            if (l < hi) {
                left.advance();
                right.advance();
            }
        }
    });
    return profile;
}

std::vector<double> profile_values(const std::vector<CovScanResult>& results) {
    std::vector<double> values;
    values.reserve(results.size());
    for (const auto& r : results) values.push_back(r.log_mxpbf);
    return values;
}

} // namespace mxpbf
