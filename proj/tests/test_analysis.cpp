#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "beamspace/analysis.hpp"
#include "beamspace/channel.hpp"
#include "beamspace/rng.hpp"

using namespace beamspace;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Beam-domain response of a unit-gain path, beams evaluated through the
/// kernel closed form.
Vector<double> unit_component(double psi, Index n) {
    Vector<double> c(n);
    for (Index m = 0; m < n; ++m) {
        const double grid = (double(m + 1) - (double(n) + 1.0) / 2.0) / double(n);
        c(m) = dirichlet_kernel(grid - psi, n);
    }
    return c;
}

} // namespace

TEST_CASE("retained-power lower bound reference values") {
    const double b256 = power_ratio_lower_bound<double>(256, 8);
    CHECK(b256 >= 0.94);
    CHECK(b256 <= 0.96);

    // two-term case evaluated by hand
    const double direct = (2.0 / (64.0 * 64.0)) / std::pow(std::sin(kPi / 128.0), 2);
    CHECK(std::abs(power_ratio_lower_bound<double>(64, 2) - direct) < 1e-15);

    // full retention saturates the bound at one
    CHECK(std::abs(power_ratio_lower_bound<double>(4, 4) - 1.0) < 1e-12);

    CHECK_THROWS_AS((void)power_ratio_lower_bound<double>(256, 7), std::invalid_argument);
    CHECK_THROWS_AS((void)power_ratio_lower_bound<double>(4, 6), std::invalid_argument);
}

TEST_CASE("empirical power ratio basics") {
    Vector<double> one_hot = Vector<double>::Zero(16);
    one_hot(5) = std::complex<double>(0.0, 2.0);
    CHECK(empirical_power_ratio(one_hot, 1) == 1.0);

    Vector<double> flat = Vector<double>::Ones(16);
    CHECK(std::abs(empirical_power_ratio(flat, 8) - 0.5) < 1e-15);

    CHECK_THROWS_AS((void)empirical_power_ratio(Vector<double>::Zero(4).eval(), 2),
                    std::invalid_argument);
}

TEST_CASE("random components respect the retained-power bound") {
    const Index n = 256;
    const double bound = power_ratio_lower_bound<double>(n, 8);
    Rng rng = substream(61, {0});
    for (int rep = 0; rep < 10000; ++rep) {
        const double psi = rng.uniform(-0.5, 0.5);
        CHECK(empirical_power_ratio(unit_component(psi, n), 8) >= bound - 1e-12);
    }
}

TEST_CASE("half-bin offset attains the retained-power bound") {
    const Index n = 256;
    const double bound = power_ratio_lower_bound<double>(n, 8);
    const double grid_100 = (100.0 - (double(n) + 1.0) / 2.0) / double(n);
    const double ratio = empirical_power_ratio(unit_component(grid_100 + 0.5 / n, n), 8);
    CHECK(std::abs(ratio - bound) < 1e-10);
}

TEST_CASE("side-beam and second-beam ratios") {
    CHECK(std::abs(kappa<double>(2) - 1.0) < 1e-15);
    CHECK(std::abs(kappa<double>(256) - 1.0 / 3.0) < 2e-3);
    for (Index n : {Index(2), Index(16), Index(64), Index(256)}) {
        CHECK(eta<double>(n) > 0.0);
        CHECK(kappa<double>(n) > 0.0);
        CHECK(kappa<double>(n) <= 1.0);
    }
    // direct-evaluation oracle for eta
    const Index n = 256;
    double sum = 0.0;
    for (Index i = 1; i <= n; ++i) {
        sum += 1.0 / std::abs(std::sin((2.0 * i - 1.0) * kPi / (2.0 * n)));
    }
    const double peak = 1.0 / std::sin(kPi / (2.0 * n));
    CHECK(std::abs(eta<double>(n) - (sum - peak) / peak) < 1e-12);
}

TEST_CASE("amplitude threshold formula and vacuous regime") {
    const Index n = 256;
    const double sigma2 = 0.1;
    const double alpha = 1.0;

    const auto zero_mu = amplitude_threshold<double>(sigma2, alpha, 0.0, n);
    REQUIRE(zero_mu.has_value());
    const double expected =
        std::sqrt(8.0 * sigma2 * (1.0 + alpha) * std::log(double(n))) /
        (1.0 - kappa<double>(n));
    CHECK(std::abs(*zero_mu - expected) < 1e-12);

    const auto zero_noise = amplitude_threshold<double>(0.0, alpha, 0.0, n);
    REQUIRE(zero_noise.has_value());
    CHECK(*zero_noise == 0.0);

    // vacuity is decided by the sign of the denominator
    const double mu = 0.3;
    const double denom = (1.0 - mu) * (1.0 - kappa<double>(n)) - 2.0 * mu * eta<double>(n);
    const auto threshold = amplitude_threshold<double>(sigma2, alpha, mu, n);
    CHECK(threshold.has_value() == (denom > 0.0));

    CHECK_THROWS_AS((void)amplitude_threshold<double>(sigma2, 0.0, 0.0, n),
                    std::invalid_argument);
}

TEST_CASE("detection probability bound reference value") {
    const Index n = 256;
    const double alpha = 1.0;
    const double value = detection_probability_lower_bound<double>(n, alpha);

    // direct evaluation oracle
    const double deficit =
        1.0 / (std::pow(256.0, 2.0) * std::sqrt(kPi * 2.0 * std::log(256.0)));
    const double expected = std::pow(1.0 - deficit, 256.0);
    CHECK(std::abs(value - expected) < 1e-12);
    CHECK(std::abs(value - 0.99934) < 1e-5);
    CHECK(value > 0.0);
    CHECK(value < 1.0);
}

TEST_CASE("detection probability bound is monotone in alpha and N") {
    double prev = 0.0;
    for (double alpha : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double v = detection_probability_lower_bound<double>(256, alpha);
        CHECK(v > prev);
        prev = v;
    }
    prev = 0.0;
    for (Index n : {Index(16), Index(64), Index(256), Index(1024), Index(4096)}) {
        const double v = detection_probability_lower_bound<double>(n, 1.0);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("orthogonality defect endpoints") {
    const Index n = 64;
    const Vector<double> c = unit_component(0.1237, n);
    CHECK(std::abs(orthogonality_defect(c, c) - 1.0) < 1e-12);

    const double g3 = (3.0 - (double(n) + 1.0) / 2.0) / double(n);
    const double g9 = (9.0 - (double(n) + 1.0) / 2.0) / double(n);
    CHECK(orthogonality_defect(unit_component(g3, n), unit_component(g9, n)) < 1e-12);

    CHECK_THROWS_AS((void)orthogonality_defect(Vector<double>::Zero(4).eval(),
                                               Vector<double>::Ones(4).eval()),
                    std::invalid_argument);
}

TEST_CASE("orthogonality defect shrinks with the array size") {
    Rng rng = substream(62, {1});
    const int draws = 200;
    std::vector<double> small_stats;
    std::vector<double> large_stats;
    for (int i = 0; i < draws; ++i) {
        const double a = rng.uniform(-0.5, 0.5);
        double b = rng.uniform(-0.5, 0.5);
        while (b == a) {
            b = rng.uniform(-0.5, 0.5);
        }
        small_stats.push_back(
            orthogonality_defect(unit_component(a, 16), unit_component(b, 16)));
        large_stats.push_back(
            orthogonality_defect(unit_component(a, 1024), unit_component(b, 1024)));
    }
    std::nth_element(small_stats.begin(), small_stats.begin() + draws / 2, small_stats.end());
    std::nth_element(large_stats.begin(), large_stats.begin() + draws / 2, large_stats.end());
    CHECK(large_stats[draws / 2] < small_stats[draws / 2]);
}

TEST_CASE("bound report carries all named values with valid ranges") {
    const auto report = make_bound_report<double>(256, 8, 1.0, 0.0, 0.1);
    REQUIRE(report.values.count("power_ratio_lb") == 1);
    REQUIRE(report.values.count("eta") == 1);
    REQUIRE(report.values.count("kappa") == 1);
    REQUIRE(report.values.count("amplitude_threshold") == 1);
    REQUIRE(report.values.count("prob_lb") == 1);
    const double ratio = *report.values.at("power_ratio_lb");
    CHECK(ratio > 0.0);
    CHECK(ratio <= 1.0);
    const double prob = *report.values.at("prob_lb");
    CHECK(prob >= 0.0);
    CHECK(prob <= 1.0);
    CHECK(*report.values.at("eta") >= 0.0);
    CHECK(*report.values.at("kappa") > 0.0);
    CHECK(*report.values.at("kappa") < 1.0);
    CHECK(report.values.at("amplitude_threshold").has_value());
}

TEST_CASE("bound evaluators are deterministic") {
    CHECK(power_ratio_lower_bound<double>(128, 6) == power_ratio_lower_bound<double>(128, 6));
    CHECK(eta<double>(77) == eta<double>(77));
    CHECK(kappa<double>(77) == kappa<double>(77));
    CHECK(detection_probability_lower_bound<double>(77, 0.5) ==
          detection_probability_lower_bound<double>(77, 0.5));
}
