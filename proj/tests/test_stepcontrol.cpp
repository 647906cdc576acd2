#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "adem/stepcontrol.hpp"

using namespace adem;

namespace {

DriftFn quintic = [](std::span<const double> x, std::span<double> f) {
    const double x2 = x[0] * x[0];
    f[0] = -x2 * x2 * x[0];
};

}  // namespace

TEST_CASE("h_delta for the max-ratio policy") {
    // h(x) = max(1,|x|)/max(1,|f|) with f = -x^5, T = 1
    auto policy = max_ratio_policy(quintic, 1, 1.0, 0.5);
    Vec x = {1.0};
    CHECK(policy.h_delta(x) == doctest::Approx(0.5));  // h(1) = 1, ScaleAll
    x = {2.0};
    CHECK(policy.h_delta(x) == doctest::Approx(0.5 / 16.0));  // h(2) = 2/32

    CHECK_THROWS_AS(policy.h_delta(Vec{std::nan("")}), std::domain_error);
}

TEST_CASE("CapMax with constant base binds the cap everywhere") {
    auto policy = constant_policy(1.0, 1.0, 0.125);
    CHECK(policy.mode == DeltaMode::CapMax);
    for (double v : {0.0, 1.0, -7.5, 300.0}) {
        Vec x = {v};
        CHECK(policy.h_delta(x) == doctest::Approx(0.125));
    }
}

TEST_CASE("scalar power policy") {
    auto policy = scalar_power_policy(1.0, 3.0, 1.0);
    CHECK(policy.base_h(Vec{2.0}) == doctest::Approx(0.25));  // min(1, 2^-2)
    CHECK(policy.base_h(Vec{0.0}) == doctest::Approx(1.0));

    // Ginzburg-Landau shape: c = lambda gives h = min(T, x^-2 / lambda)
    auto gl = scalar_power_policy(2.0, 3.0, 1.0, 0.5);
    CHECK(gl.h_delta(Vec{3.0}) == doctest::Approx(0.5 * std::min(1.0, 1.0 / (2.0 * 9.0))));

    CHECK_THROWS_AS(scalar_power_policy(-1.0, 3.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(scalar_power_policy(1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(scalar_power_policy(1.0, 3.0, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("ratio policies") {
    DriftFn linear = [](std::span<const double> x, std::span<double> f) { f[0] = -x[0]; };
    auto nr = ratio_policy(linear, 1, 1.0, 2.0, RatioVariant::NormRatio);
    // ||x||/||f|| = 1 identically for f = -x
    CHECK(nr.base_h(Vec{0.3}) == doctest::Approx(1.0));
    CHECK(nr.base_h(Vec{-40.0}) == doctest::Approx(1.0));
    CHECK(nr.base_h(Vec{0.0}) == doctest::Approx(2.0));  // f(0) = 0 -> T

    DriftFn cubic = [](std::span<const double> x, std::span<double> f) {
        f[0] = -x[0] * x[0] * x[0];
    };
    auto sr = ratio_policy(cubic, 1, 0.5, 1.0, RatioVariant::SquaredRatio);
    // gamma x^2 / f^2 = 0.5 / x^4
    CHECK(sr.base_h(Vec{10.0}) == doctest::Approx(0.5 / 1e4));
    CHECK_THROWS_AS(ratio_policy(cubic, 1, -1.0, 1.0, RatioVariant::SquaredRatio),
                    std::invalid_argument);
}

TEST_CASE("sandwich property on random policies and states") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double T = 0.5 + 3.0 * unif(gen);
        const double delta = 0.01 + 0.99 * unif(gen);
        TimestepPolicy p = trial % 2 == 0 ? scalar_power_policy(0.1 + unif(gen), 1.5 + 3.0 * unif(gen), T, delta)
                                          : max_ratio_policy(quintic, 1, T, delta);
        if (trial % 3 == 0) p.mode = DeltaMode::CapMax;
        const Vec x = {20.0 * (unif(gen) - 0.5)};
        const double h = p.h_delta(x);
        const double hb = p.base_h(x);
        CHECK(h > 0.0);
        CHECK(h >= delta * std::min(T, hb) - 1e-15);
        CHECK(h <= std::min(delta * T, hb) + 1e-15);
    }
}

TEST_CASE("monotonicity in delta for ScaleAll") {
    auto base = max_ratio_policy(quintic, 1, 1.0);
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        double d1 = 0.01 + 0.99 * unif(gen);
        double d2 = 0.01 + 0.99 * unif(gen);
        if (d1 > d2) std::swap(d1, d2);
        const Vec x = {10.0 * (unif(gen) - 0.5)};
        CHECK(base.with_delta(d1).h_delta(x) <= base.with_delta(d2).h_delta(x));
    }
}

TEST_CASE("timestep assumption checker") {
    DriftFn cubic = [](std::span<const double> x, std::span<double> f) {
        f[0] = -x[0] * x[0] * x[0];
    };
    const std::vector<Vec> samples = {{10.0}, {0.0}, {-3.0}, {0.5}};
    GrowthParams zero{0.0, 0.0, std::nullopt};

    // h(x) = min(1, x^-2): at x = 10, lhs = -10^4 + 10^-2 * 10^6 / 2 = -5000
    auto adaptive = scalar_power_policy(1.0, 3.0, 1.0);
    auto pass_report = check_timestep_assumption(adaptive, cubic, zero, samples);
    CHECK(pass_report.pass());
    CHECK(pass_report.samples_checked == samples.size());

    // uniform h = 1: at x = 10, lhs = -10^4 + 10^6 / 2 > 0
    auto uniform = constant_policy(1.0, 1.0);
    auto fail_report = check_timestep_assumption(uniform, cubic, zero, samples);
    CHECK_FALSE(fail_report.pass());
    CHECK(fail_report.violations.size() == 2);  // x = 10 and x = -3
    CHECK(fail_report.violations.front().lhs ==
          doctest::Approx(-1e4 + 0.5 * 1e6));

    // f == 0 passes for any beta >= 0
    DriftFn zero_drift = [](std::span<const double>, std::span<double> f) { f[0] = 0.0; };
    CHECK(check_timestep_assumption(uniform, zero_drift, zero, samples).pass());

    CHECK_THROWS_AS(check_timestep_assumption(uniform, cubic, zero, {}), std::invalid_argument);
}

TEST_CASE("lower bound checker") {
    auto adaptive = scalar_power_policy(1.0, 3.0, 1.0);  // h = min(1, x^-2)
    std::vector<Vec> samples;
    for (double x = -1000.0; x <= 1000.0; x += 13.7) samples.push_back({x});

    // h(x) >= 1/(x^2 + 1) everywhere
    CHECK(check_lower_bound(adaptive, {1.0, 1.0, 2.0}, samples).pass());

    // constant h = T dominates whenever zeta >= 1/T
    auto flat = constant_policy(2.0, 2.0);
    CHECK(check_lower_bound(flat, {1.0, 0.5, 2.0}, samples).pass());

    // exponentially shrinking h violates any polynomial floor at large |x|
    TimestepPolicy expo;
    expo.base_h = [](std::span<const double> x) { return std::exp(-dot(x, x)); };
    expo.horizon = 1.0;
    auto report = check_lower_bound(expo, {1.0, 1.0, 6.0}, samples);
    CHECK_FALSE(report.pass());
}

TEST_CASE("sample_states is deterministic and respects the radius") {
    const auto a = sample_states(3, 500, 100.0, 2024);
    const auto b = sample_states(3, 500, 100.0, 2024);
    CHECK(a == b);
    for (const Vec& x : a) {
        CHECK(norm(x) <= 100.0 + 1e-9);
        CHECK(all_finite(x));
    }
    const auto c = sample_states(3, 500, 100.0, 2025);
    CHECK(a != c);
}
