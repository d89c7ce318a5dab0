#include "doctest.h"

#include <cmath>
#include <vector>

#include "mxpbf/rng.hpp"
#include "mxpbf/sliding.hpp"
#include "mxpbf/types.hpp"

using namespace mxpbf;

namespace {

DataMatrix random_matrix(index_t n, index_t p, std::uint64_t seed, double offset = 0.0) {
    DataMatrix m(n, p);
    RngStream rng(seed);
    for (index_t j = 0; j < p; ++j) {
        for (index_t i = 0; i < n; ++i) m.at(i, j) = rng.normal() + offset;
    }
    return m;
}

DataMatrix column_matrix(const std::vector<std::vector<double>>& cols) {
    auto n = static_cast<index_t>(cols.front().size());
    auto p = static_cast<index_t>(cols.size());
    DataMatrix m(n, p);
    for (index_t j = 0; j < p; ++j) {
        for (index_t i = 0; i < n; ++i) m.at(i, j) = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
    }
    return m;
}

} // namespace

TEST_CASE("centered_rss matches hand-computed values") {
    auto m = column_matrix({{-1.0, 1.0, 9.0, 11.0}});
    CHECK(centered_rss(m, {1, 2}, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(centered_rss(m, {1, 4}, 1) == doctest::Approx(104.0).epsilon(1e-12));

    auto constant = column_matrix({{3.5, 3.5, 3.5}});
    CHECK(centered_rss(constant, {1, 3}, 1) == doctest::Approx(0.0));
}

TEST_CASE("centered_rss rejects too-short spans") {
    auto m = column_matrix({{1.0, 2.0, 3.0}});
    CHECK_THROWS_AS(centered_rss(m, {2, 2}, 1), SpanTooShort);
}

TEST_CASE("centered_rss translation and scaling behavior") {
    RngStream rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        auto m = random_matrix(30, 2, 100 + rep);
        WindowSpan span{5, 24};
        double base = centered_rss(m, span, 1);

        DataMatrix shifted = m;
        for (auto& v : shifted.column(0)) v += 57.25;
        CHECK(centered_rss(shifted, span, 1) == doctest::Approx(base).epsilon(1e-9));

        double c = 1.0 + 3.0 * rng.uniform01();
        DataMatrix scaled = m;
        for (auto& v : scaled.column(0)) v *= c;
        CHECK(centered_rss(scaled, span, 1) == doctest::Approx(base * c * c).epsilon(1e-9));
    }
}

TEST_CASE("regression_rss matches hand-computed values") {
    auto exact = column_matrix({{1.0, 2.0}, {1.0, 2.0}});
    CHECK(regression_rss(exact, {1, 2}, 1, 2) == doctest::Approx(0.0));

    auto zero_pred = column_matrix({{3.0, 4.0}, {0.0, 0.0}});
    CHECK(regression_rss(zero_pred, {1, 2}, 1, 2) == doctest::Approx(25.0));

    auto slope2 = column_matrix({{2.0, 1.0}, {1.0, 0.0}});
    CHECK(regression_rss(slope2, {1, 2}, 1, 2) == doctest::Approx(1.0));
}

TEST_CASE("regression_rss vanishes for exact multiples and rejects i == j") {
    auto m = column_matrix({{2.0, -4.0, 6.0, 1.0}, {1.0, -2.0, 3.0, 0.5}});
    CHECK(regression_rss(m, {1, 4}, 1, 2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(regression_rss(m, {1, 4}, 2, 2), SameColumn);
}

TEST_CASE("sliding column stats track from-scratch rebuilds") {
    auto m = random_matrix(10, 3, 42);
    SlidingColumnStats stats(m, 1, 4, 1000);
    for (int step = 0; step < 6; ++step) {
        stats.advance();
        SlidingColumnStats fresh(m, stats.start(), 4);
        for (index_t j = 1; j <= 3; ++j) {
            CHECK(stats.sum(j) == doctest::Approx(fresh.sum(j)).epsilon(1e-9));
            CHECK(stats.sum_squares(j) == doctest::Approx(fresh.sum_squares(j)).epsilon(1e-9));
        }
    }
}

TEST_CASE("sliding advance over a constant matrix leaves sums unchanged") {
    DataMatrix m(12, 2);
    for (index_t j = 0; j < 2; ++j) {
        for (index_t i = 0; i < 12; ++i) m.at(i, j) = 7.0;
    }
    SlidingColumnStats stats(m, 1, 5);
    double s0 = stats.sum(1);
    double q0 = stats.sum_squares(1);
    for (int step = 0; step < 7; ++step) {
        stats.advance();
        CHECK(stats.sum(1) == doctest::Approx(s0));
        CHECK(stats.sum_squares(1) == doctest::Approx(q0));
    }
}

TEST_CASE("full sliding pass equals brute-force per-window sums") {
    auto m = random_matrix(20, 3, 7, 2.5);
    const index_t n_w = 5;
    SlidingColumnStats stats(m, 1, n_w);
    for (index_t start = 1; start + n_w - 1 <= 20; ++start) {
        if (start > 1) stats.advance();
        for (index_t j = 1; j <= 3; ++j) {
            double brute_sum = 0.0, brute_sq = 0.0;
            for (index_t i = start; i < start + n_w; ++i) {
                double v = m.at(i - 1, j - 1);
                brute_sum += v;
                brute_sq += v * v;
            }
            CHECK(stats.sum(j) == doctest::Approx(brute_sum).epsilon(1e-9));
            CHECK(stats.sum_squares(j) == doctest::Approx(brute_sq).epsilon(1e-9));
        }
    }
}

TEST_CASE("sliding cross stats agree with direct regression RSS") {
    auto m = random_matrix(40, 4, 13, -1.0);
    const index_t n_w = 8;
    SlidingCrossStats stats(m, 1, n_w);
    for (index_t start = 1; start + n_w - 1 <= 40; ++start) {
        if (start > 1) stats.advance();
        WindowSpan span{start, start + n_w - 1};
        for (index_t i = 1; i <= 4; ++i) {
            for (index_t j = 1; j <= 4; ++j) {
                if (i == j) continue;
                double direct = regression_rss(m, span, i, j);
                CHECK(stats.regression_rss(i, j) == doctest::Approx(direct).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("sliding stats survive arbitrary advance sequences") {
    auto m = random_matrix(120, 2, 99, 10.0);
    RngStream rng(5);
    SlidingColumnStats stats(m, 1, 6, 16);
    index_t start = 1;
    for (int step = 0; step < 100 && start + 6 <= 120; ++step) {
        stats.advance();
        ++start;
        if (rng.uniform01() < 0.2) {
            SlidingColumnStats fresh(m, start, 6);
            for (index_t j = 1; j <= 2; ++j) {
                CHECK(stats.centered_rss(j) ==
                      doctest::Approx(fresh.centered_rss(j)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("window config validates feasibility and exposes the scan domain") {
    WindowConfig cfg(2, 6);
    CHECK(cfg.first_center() == 3);
    CHECK(cfg.last_center() == 5);
    CHECK(cfg.center_count() == 3);
    CHECK(cfg.epsilon(1) == doctest::Approx(std::log(2.0) / 2.0));
    CHECK_THROWS_AS(WindowConfig(4, 6), LadderInfeasible);
    CHECK_THROWS_AS(WindowConfig(1, 6), DataError);
}

TEST_CASE("data matrix rejects non-finite input") {
    std::vector<double> values{1.0, 2.0, std::nan(""), 4.0};
    CHECK_THROWS_AS(DataMatrix::from_row_major(2, 2, values), NonFinite);
}
