#include "mxpbf/sliding.hpp"

#include <algorithm>
#include <cmath>

namespace mxpbf {

namespace detail {

namespace {
constexpr std::size_t kBlock = 32;
}

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= kBlock) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double pairwise_dot(const double* x, const double* y, std::size_t n) {
    if (n <= kBlock) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_dot(x, y, half) + pairwise_dot(x + half, y + half, n - half);
}

} // namespace detail

double centered_rss(const DataMatrix& data, WindowSpan span, index_t j) {
    span.validate(data.rows());
    if (span.length() < 2) {
        throw SpanTooShort("centered_rss needs a span of length >= 2, got " +
                           std::to_string(span.length()));
    }
    if (j < 1 || j > data.cols()) throw DataError("column index out of range");
    const double* x = data.column(j - 1).data() + (span.start - 1);
    auto len = static_cast<std::size_t>(span.length());
    double mean = detail::pairwise_sum(x, len) / static_cast<double>(len);
    double rss = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        double d = x[i] - mean;
        rss += d * d;
    }
    return rss;
}

double regression_rss(const DataMatrix& data, WindowSpan span, index_t i, index_t j) {
    span.validate(data.rows());
    if (span.length() < 2) {
        throw SpanTooShort("regression_rss needs a span of length >= 2, got " +
                           std::to_string(span.length()));
    }
    if (i == j) throw SameColumn("regression_rss needs distinct columns, got i = j = " + std::to_string(i));
    if (i < 1 || i > data.cols() || j < 1 || j > data.cols()) throw DataError("column index out of range");
    const double* y = data.column(i - 1).data() + (span.start - 1);
    const double* x = data.column(j - 1).data() + (span.start - 1);
    auto len = static_cast<std::size_t>(span.length());
    double xx = detail::pairwise_dot(x, x, len);
    if (xx == 0.0) {
        // Zero-norm predictor: projection defined as the zero map.
        return detail::pairwise_dot(y, y, len);
    }
    double slope = detail::pairwise_dot(x, y, len) / xx;
    double rss = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        double r = y[k] - slope * x[k];
        rss += r * r;
    }
    return rss;
}

SlidingColumnStats::SlidingColumnStats(const DataMatrix& data, index_t start, index_t len,
                                       index_t rebuild_every)
    : data_(&data), start_(start), len_(len), rebuild_every_(std::max<index_t>(1, rebuild_every)) {
    WindowSpan{start, start + len - 1}.validate(data.rows());
    sum_.resize(static_cast<size_t>(data.cols()));
    sumsq_.resize(static_cast<size_t>(data.cols()));
    rebuild_now();
}

void SlidingColumnStats::rebuild_now() {
    auto len = static_cast<std::size_t>(len_);
    for (index_t j = 0; j < data_->cols(); ++j) {
        const double* x = data_->column(j).data() + (start_ - 1);
        sum_[static_cast<size_t>(j)] = detail::pairwise_sum(x, len);
        sumsq_[static_cast<size_t>(j)] = detail::pairwise_dot(x, x, len);
    }
    shifts_since_rebuild_ = 0;
}

void SlidingColumnStats::advance() {
    index_t leaving = start_;             // 1-based
    index_t entering = start_ + len_;     // 1-based
    WindowSpan{start_ + 1, entering}.validate(data_->rows());
    start_ += 1;
    if (++shifts_since_rebuild_ >= rebuild_every_) {
        rebuild_now();
        return;
    }
    for (index_t j = 0; j < data_->cols(); ++j) {
        double out = data_->at(leaving - 1, j);
        double in = data_->at(entering - 1, j);
        sum_[static_cast<size_t>(j)] += in - out;
        sumsq_[static_cast<size_t>(j)] += in * in - out * out;
    }
}

double SlidingColumnStats::centered_rss(index_t j) const {
    double s = sum(j);
    double rss = sum_squares(j) - s * s / static_cast<double>(len_);
    return std::max(0.0, rss);
}

SlidingCrossStats::SlidingCrossStats(const DataMatrix& data, index_t start, index_t len,
                                     index_t rebuild_every)
    : data_(&data), p_(data.cols()), start_(start), len_(len),
      rebuild_every_(std::max<index_t>(1, rebuild_every)) {
    WindowSpan{start, start + len - 1}.validate(data.rows());
    cross_.resize(static_cast<size_t>(p_) * static_cast<size_t>(p_));
    row_scratch_.resize(static_cast<size_t>(p_));
    rebuild_now();
}

void SlidingCrossStats::rebuild_now() {
    auto len = static_cast<std::size_t>(len_);
    for (index_t j = 0; j < p_; ++j) {
        const double* xj = data_->column(j).data() + (start_ - 1);
        for (index_t i = j; i < p_; ++i) {
            const double* xi = data_->column(i).data() + (start_ - 1);
            double c = detail::pairwise_dot(xi, xj, len);
            cross_[static_cast<size_t>(i) * p_ + j] = c;
            cross_[static_cast<size_t>(j) * p_ + i] = c;
        }
    }
    shifts_since_rebuild_ = 0;
}

void SlidingCrossStats::advance() {
    index_t leaving = start_;
    index_t entering = start_ + len_;
    WindowSpan{start_ + 1, entering}.validate(data_->rows());
    start_ += 1;
    if (++shifts_since_rebuild_ >= rebuild_every_) {
        rebuild_now();
        return;
    }
    auto& in = row_scratch_;
    for (index_t j = 0; j < p_; ++j) in[static_cast<size_t>(j)] = data_->at(entering - 1, j);
    for (index_t j = 0; j < p_; ++j) {
        double out_j = data_->at(leaving - 1, j);
        double in_j = in[static_cast<size_t>(j)];
        for (index_t i = j; i < p_; ++i) {
            double out_i = data_->at(leaving - 1, i);
            double delta = in[static_cast<size_t>(i)] * in_j - out_i * out_j;
            cross_[static_cast<size_t>(i) * p_ + j] += delta;
            if (i != j) cross_[static_cast<size_t>(j) * p_ + i] = cross_[static_cast<size_t>(i) * p_ + j];
        }
    }
}

double SlidingCrossStats::regression_rss(index_t i, index_t j) const {
    double cxx = cross(j, j);
    double cyy = cross(i, i);
    if (cxx <= 0.0) return std::max(0.0, cyy);
    double cxy = cross(i, j);
    return std::max(0.0, cyy - cxy * cxy / cxx);
}

} // namespace mxpbf
