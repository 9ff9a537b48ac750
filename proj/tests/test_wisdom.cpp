#include <doctest.h>

#include <random>
#include <vector>

#include "layerstack/error.hpp"
#include "layerstack/wisdom.hpp"

using namespace layerstack;

namespace {

bool identity_holds(const CrowdDecomposition& d) {
    const double scale = std::max(1.0, d.avg_individual_sq_error);
    return std::abs(d.crowd_sq_error + d.diversity - d.avg_individual_sq_error) <= 1e-9 * scale;
}

} // namespace

TEST_CASE("crowd decomposition examples") {
    const std::vector<double> exact{1, 2, 3};
    auto d = crowd_decomposition({exact, 2.0});
    CHECK(d.crowd_mean == 2.0);
    CHECK(d.crowd_sq_error == 0.0);
    CHECK(d.avg_individual_sq_error == doctest::Approx(2.0 / 3.0));
    CHECK(d.diversity == doctest::Approx(2.0 / 3.0));

    const std::vector<double> pair{2, 4};
    d = crowd_decomposition({pair, 5.0});
    CHECK(d.crowd_mean == 3.0);
    CHECK(d.crowd_sq_error == 4.0);
    CHECK(d.avg_individual_sq_error == 5.0);
    CHECK(d.diversity == 1.0);

    const std::vector<double> flat(7, 1.5);
    d = crowd_decomposition({flat, -0.5});
    CHECK(d.diversity == 0.0);
    CHECK(d.crowd_sq_error == 4.0);
    CHECK(d.avg_individual_sq_error == 4.0);

    CHECK_THROWS_AS(crowd_decomposition({{}, 1.0}), Error);
}

TEST_CASE("aggregate round quality") {
    const std::vector<double> one{0.8};
    auto d = aggregate_round_quality(one, 0.8);
    CHECK(d.crowd_sq_error == 0.0);
    CHECK(d.avg_individual_sq_error == 0.0);
    CHECK(d.diversity == 0.0);

    const std::vector<double> two{0.6, 0.8};
    d = aggregate_round_quality(two, 0.8);
    CHECK(d.crowd_mean == doctest::Approx(0.7));
    CHECK(d.crowd_sq_error == doctest::Approx(0.01));
    CHECK(d.avg_individual_sq_error == doctest::Approx(0.02));
    CHECK(d.diversity == doctest::Approx(0.01));

    const std::vector<double> nine(9, 0.93);
    CHECK(aggregate_round_quality(nine, 0.95).diversity < 1e-15);
}

TEST_CASE("diversity prediction identity on random crowds") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> value(-1e6, 1e6);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> xs(1 + rng() % 2000);
        for (auto& x : xs)
            x = value(rng);
        const double truth = value(rng);
        const auto d = crowd_decomposition({xs, truth});
        CHECK(identity_holds(d));
        CHECK(d.diversity >= 0.0);
        CHECK(d.crowd_sq_error <= d.avg_individual_sq_error * (1 + 1e-12));

        // Translation leaves the error terms alone; scaling by s scales them by s^2.
        std::vector<double> shifted(xs), scaled(xs);
        for (auto& x : shifted)
            x += 1234.5;
        for (auto& x : scaled)
            x *= 0.5;
        const auto t = crowd_decomposition({shifted, truth + 1234.5});
        const auto s = crowd_decomposition({scaled, truth * 0.5});
        CHECK(t.diversity == doctest::Approx(d.diversity).epsilon(1e-9));
        CHECK(t.crowd_sq_error == doctest::Approx(d.crowd_sq_error).epsilon(1e-6));
        CHECK(t.avg_individual_sq_error == doctest::Approx(d.avg_individual_sq_error).epsilon(1e-9));
        CHECK(s.diversity == doctest::Approx(0.25 * d.diversity).epsilon(1e-12));
        CHECK(s.avg_individual_sq_error == doctest::Approx(0.25 * d.avg_individual_sq_error).epsilon(1e-12));
    }
}
