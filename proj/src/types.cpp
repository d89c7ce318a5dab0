#include "mxpbf/types.hpp"

#include <cmath>

namespace mxpbf {

DataMatrix::DataMatrix(index_t n, index_t p) : n_(n), p_(p) {
    if (n < 2) throw DataError("data matrix needs n >= 2 observations, got " + std::to_string(n));
    if (p < 1) throw DataError("data matrix needs p >= 1 variables, got " + std::to_string(p));
    data_.assign(static_cast<size_t>(n) * static_cast<size_t>(p), 0.0);
}

DataMatrix DataMatrix::from_row_major(index_t n, index_t p, std::span<const double> values) {
    if (values.size() != static_cast<size_t>(n) * static_cast<size_t>(p)) {
        throw DataError("row-major buffer size does not match n*p");
    }
    DataMatrix m(n, p);
    for (index_t i = 0; i < n; ++i) {
        for (index_t j = 0; j < p; ++j) {
            m.at(i, j) = values[static_cast<size_t>(i) * p + j];
        }
    }
    m.validate_finite();
    return m;
}

void DataMatrix::validate_finite() const {
    for (index_t j = 0; j < p_; ++j) {
        auto col = column(j);
        for (index_t i = 0; i < n_; ++i) {
            if (!std::isfinite(col[static_cast<size_t>(i)])) {
                throw NonFinite("non-finite value at row " + std::to_string(i + 1) + ", column " +
                                std::to_string(j + 1));
            }
        }
    }
}

DataMatrix DataMatrix::slice_rows(index_t first, index_t last) const {
    WindowSpan{first, last}.validate(n_);
    index_t len = last - first + 1;
    DataMatrix out(len, p_);
    for (index_t j = 0; j < p_; ++j) {
        auto src = column(j);
        auto dst = out.column(j);
        for (index_t i = 0; i < len; ++i) dst[static_cast<size_t>(i)] = src[static_cast<size_t>(first - 1 + i)];
    }
    return out;
}

} // namespace mxpbf
