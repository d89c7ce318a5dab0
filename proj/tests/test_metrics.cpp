#include "doctest.h"

#include <algorithm>
#include <vector>

#include "mxpbf/metrics.hpp"
#include "mxpbf/rng.hpp"

using namespace mxpbf;

TEST_CASE("augment_trivial adds the endpoints exactly once") {
    CHECK(augment_trivial({}, 100) == std::vector<index_t>{1, 100});
    CHECK(augment_trivial({1, 50}, 100) == std::vector<index_t>{1, 50, 100});
    CHECK(augment_trivial({1, 100}, 100) == std::vector<index_t>{1, 100});
    auto once = augment_trivial({42}, 99);
    CHECK(augment_trivial(once, 99) == once);
    CHECK_THROWS_AS(augment_trivial({0}, 10), DataError);
}

TEST_CASE("f1_score hand counts") {
    MetricConfig config{5, 500};

    auto perfect = f1_score({1, 100, 250}, {1, 100, 251}, config);
    CHECK(perfect.precision == doctest::Approx(1.0));
    CHECK(perfect.recall == doctest::Approx(1.0));
    CHECK(perfect.f1 == doctest::Approx(1.0));
    CHECK(perfect.tp_count == 4);

    auto identical = f1_score({250}, {250}, config);
    CHECK(identical.f1 == doctest::Approx(1.0));

    auto missed = f1_score({250}, {400}, config);
    CHECK(missed.precision == doctest::Approx(2.0 / 3.0));
    CHECK(missed.recall == doctest::Approx(2.0 / 3.0));
    CHECK(missed.f1 == doctest::Approx(2.0 / 3.0));
    CHECK(missed.tp_count == 2);
}

TEST_CASE("true positives require a strictly smaller distance than the margin") {
    MetricConfig config{5, 500};
    auto at_margin = f1_score({250}, {255}, config);   // |255 - 250| = 5, not < 5
    CHECK(at_margin.tp_count == 2);                     // only the endpoints
    auto inside = f1_score({250}, {254}, config);
    CHECK(inside.tp_count == 3);
}

TEST_CASE("hausdorff hand counts and symmetry") {
    MetricConfig config{15, 500};
    CHECK(hausdorff({250}, {250}, config) == 0);
    CHECK(hausdorff({1, 250, 500}, {1, 260, 500}, config) == 10);
    CHECK(hausdorff({250}, {10, 400}, config) == hausdorff({10, 400}, {250}, config));
}

TEST_CASE("metric ranges and F1 bound") {
    RngStream rng(5150);
    for (int rep = 0; rep < 200; ++rep) {
        index_t n = 50 + static_cast<index_t>(rng.uniform_int(400));
        MetricConfig config{1 + static_cast<index_t>(rng.uniform_int(20)), n};
        auto draw = [&](std::size_t count) {
            std::vector<index_t> v;
            for (std::size_t k = 0; k < count; ++k) {
                v.push_back(1 + static_cast<index_t>(rng.uniform_int(static_cast<std::uint64_t>(n))));
            }
            return v;
        };
        auto truth = draw(rng.uniform_int(5));
        auto detected = draw(rng.uniform_int(5));
        auto r = f1_score(truth, detected, config);
        CHECK(r.precision >= 0.0);
        CHECK(r.precision <= 1.0);
        CHECK(r.recall >= 0.0);
        CHECK(r.recall <= 1.0);
        CHECK(r.f1 >= 0.0);
        CHECK(r.f1 <= std::min(2.0 * r.precision, 2.0 * r.recall) + 1e-12);
        CHECK(hausdorff(truth, detected, config) >= 0);
    }
}

TEST_CASE("hausdorff satisfies the metric axioms on random triples") {
    RngStream rng(31337);
    const index_t n = 300;
    MetricConfig config{15, n};
    auto draw = [&]() {
        std::vector<index_t> v;
        std::size_t count = rng.uniform_int(6);
        for (std::size_t k = 0; k < count; ++k) {
            v.push_back(1 + static_cast<index_t>(rng.uniform_int(n)));
        }
        return v;
    };
    for (int rep = 0; rep < 300; ++rep) {
        auto a = draw();
        auto b = draw();
        auto c = draw();
        index_t ab = hausdorff(a, b, config);
        index_t ba = hausdorff(b, a, config);
        index_t bc = hausdorff(b, c, config);
        index_t ac = hausdorff(a, c, config);
        CHECK(ab == ba);
        CHECK(ac <= ab + bc);
        if (augment_trivial(a, n) == augment_trivial(b, n)) {
            CHECK(ab == 0);
        } else {
            CHECK(ab > 0);
        }
    }
}
