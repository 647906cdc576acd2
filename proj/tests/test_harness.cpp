#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "adem/harness.hpp"

using namespace adem;

namespace {

SdeModel frozen_model() {
    SdeModel m;
    m.name = "frozen";
    m.state_dim = m.noise_dim = 1;
    m.drift = [](std::span<const double>, std::span<double> f) { f[0] = 0.0; };
    m.volatility = [](std::span<const double>, Matrix& g) { g(0, 0) = 0.0; };
    m.initial_state = {3.0};
    m.horizon = 1.0;
    m.recommended_policy = [](double delta) { return constant_policy(1.0, 1.0, delta); };
    return m;
}

bool reports_identical(const ConvergenceReport& a, const ConvergenceReport& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const SweepRow &x = a.rows[i], &y = b.rows[i];
        if (x.resolution != y.resolution || x.avg_dt != y.avg_dt ||
            x.rms_error_T != y.rms_error_T || x.rms_error_sup != y.rms_error_sup ||
            x.mean_steps != y.mean_steps || x.diverged_fraction != y.diverged_fraction)
            return false;
    }
    return a.fitted_order_T == b.fitted_order_T && a.fitted_order_sup == b.fitted_order_sup;
}

}  // namespace

TEST_CASE("fit_order recovers exact power laws") {
    std::vector<double> dts, e_half, e_one;
    for (int k = 2; k <= 7; ++k) {
        const double h = std::pow(2.0, -k);
        dts.push_back(h);
        e_half.push_back(3.0 * std::sqrt(h));
        e_one.push_back(0.1 * h);
    }
    CHECK(fit_order(dts, e_half) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit_order(dts, e_one) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(fit_order(std::vector<double>{1.0}, std::vector<double>{1.0}),
                    std::invalid_argument);

    // noisy synthetic slope recovered within its own standard error
    std::vector<double> noisy;
    const double bumps[] = {1.07, 0.95, 1.02, 0.92, 1.05, 0.99};
    for (std::size_t i = 0; i < dts.size(); ++i) noisy.push_back(e_half[i] * bumps[i]);
    CHECK(fit_order(dts, noisy) == doctest::Approx(0.5).epsilon(0.15));
}

TEST_CASE("coupled sample on frozen dynamics has zero error") {
    auto model = frozen_model();
    const SampleError s = coupled_error_sample(model, uniform_em(1.0), 0.25, 4, 1, 0, 1.0);
    CHECK_FALSE(s.diverged);
    CHECK(s.err_terminal == 0.0);
    CHECK(s.err_sup == 0.0);
    CHECK(s.steps == 4);
    CHECK_THROWS_AS(coupled_error_sample(model, uniform_em(1.0), 0.25, 1, 1, 0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("coupling shares one Brownian realisation") {
    // the fine run refines the same path object, so re-querying any coarse
    // knot after both runs returns the value the coarse run used
    auto model = testcase1();
    BrownianPath w(1, 5, 9);
    const SchemeSpec coarse = with_resolution(adaptive_em(), 0.25, model, 1.0);
    const SchemeSpec fine = with_resolution(adaptive_em(), 0.0625, model, 1.0);
    const SimulatedPath pc = simulate(model, coarse, w, 1.0);
    std::vector<Vec> w_at_knots;
    for (double t : pc.times) w_at_knots.push_back(w.sample_at(t));
    const SimulatedPath pf = simulate(model, fine, w, 1.0);
    (void)pf;
    for (std::size_t k = 0; k < pc.times.size(); ++k)
        CHECK(w.sample_at(pc.times[k]) == w_at_knots[k]);
}

TEST_CASE("GBM median terminal error shrinks like sqrt(h)") {
    auto model = geometric_brownian(0.05, 0.2, 1.0, 1.0);
    auto median_err = [&](double res) {
        std::vector<double> errs;
        for (std::uint64_t i = 0; i < 1000; ++i) {
            const SampleError s = exact_error_sample(model, uniform_em(1.0), res, 31, i, 1.0);
            errs.push_back(s.err_terminal);
        }
        std::nth_element(errs.begin(), errs.begin() + errs.size() / 2, errs.end());
        return errs[errs.size() / 2];
    };
    const double e_h = median_err(1.0 / 64);
    const double e_h2 = median_err(1.0 / 128);
    // ratio should be near sqrt(2) ~ 1.41; generous Monte Carlo window
    CHECK(e_h / e_h2 > 1.15);
    CHECK(e_h / e_h2 < 1.75);
}

TEST_CASE("strong_error_sweep on GBM: exact and coupled references agree") {
    auto model = geometric_brownian(0.05, 0.2, 1.0, 1.0);
    const std::vector<double> res = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};

    SweepOptions exact_opts;
    exact_opts.reference = ErrorReference::ExactSolution;
    const ConvergenceReport exact =
        strong_error_sweep(model, uniform_em(1.0), res, 500, 7, 1.0, exact_opts);
    CHECK(exact.fitted_order_T == doctest::Approx(0.5).epsilon(0.4));

    const ConvergenceReport coupled = strong_error_sweep(model, uniform_em(1.0), res, 500, 7, 1.0);
    CHECK(std::abs(coupled.fitted_order_T - exact.fitted_order_T) < 0.15);

    // rows are sorted by avg_dt and uniform stepping hits T/h exactly
    for (std::size_t i = 1; i < exact.rows.size(); ++i)
        CHECK(exact.rows[i - 1].avg_dt < exact.rows[i].avg_dt);
    CHECK(exact.rows.front().mean_steps == doctest::Approx(128.0));
}

TEST_CASE("sweep results do not depend on the thread count") {
    auto model = testcase1();
    const std::vector<double> res = {0.25, 0.125, 0.0625};
    SweepOptions one, two, eight;
    one.threads = 1;
    two.threads = 2;
    eight.threads = 8;
    const auto a = strong_error_sweep(model, adaptive_em(), res, 64, 99, 1.0, one);
    const auto b = strong_error_sweep(model, adaptive_em(), res, 64, 99, 1.0, two);
    const auto c = strong_error_sweep(model, adaptive_em(), res, 64, 99, 1.0, eight);
    CHECK(reports_identical(a, b));
    CHECK(reports_identical(a, c));
}

TEST_CASE("moment sweep") {
    // frozen dynamics: sup-moment is exactly ||X0||^p
    auto frozen = frozen_model();
    const std::vector<SchemeSpec> schemes = {uniform_em(0.25)};
    const MomentReport r = moment_sweep(frozen, schemes, 2.0, 50, 1.0, 3, 1);
    CHECK(r.rows.size() == 1);
    CHECK(r.rows[0].estimate == doctest::Approx(9.0));
    CHECK(r.rows[0].diverged_fraction == 0.0);

    CHECK_THROWS_AS(moment_sweep(frozen, schemes, 0.5, 10, 1.0, 3, 1), std::invalid_argument);
}

TEST_CASE("uniform EM on cubic drift blows up at long horizon, adaptive never") {
    // the instability needs enough steps for the oscillation to amplify:
    // with T = 5 the divergence fraction is large at h = 1/2 and grows in h
    auto model = cubic_drift(5.0, 2.0);
    const double T = 5.0;
    std::vector<SchemeSpec> schemes;
    for (double h : {0.4, 0.5, 0.625}) schemes.push_back(uniform_em(h));
    schemes.push_back(with_resolution(adaptive_em(), 0.5, model, T));

    const MomentReport r = moment_sweep(model, schemes, 2.0, 2000, T, 12345, 0);
    CHECK(r.rows[0].diverged_fraction > 0.0);
    CHECK(r.rows[1].diverged_fraction > r.rows[0].diverged_fraction);
    CHECK(r.rows[2].diverged_fraction > r.rows[1].diverged_fraction);
    CHECK(r.rows[3].diverged_fraction == 0.0);
    CHECK(r.rows[3].estimate < 10.0);  // stable sup-moment, far below the exploding ones
}

TEST_CASE("step count statistics") {
    // uniform stepping: N_T = n exactly with zero spread
    auto frozen = frozen_model();
    const StepCountReport fixed = step_count_stats(frozen, {0.25}, 20, 1.0, 4, 1);
    CHECK(fixed.rows[0].mean_steps == doctest::Approx(4.0));
    CHECK(fixed.rows[0].max_steps == doctest::Approx(4.0));

    // ScaleAll with base_h = T: N_T = ceil(1/delta)
    const StepCountReport thirds = step_count_stats(frozen, {0.3}, 20, 1.0, 4, 1);
    CHECK(thirds.rows[0].mean_steps == doctest::Approx(4.0));  // ceil(1/0.3)

    // testcase 1: halving delta doubles the mean step count
    auto tc1 = testcase1();
    const StepCountReport tc = step_count_stats(tc1, {0.03125, 0.015625}, 400, 1.0, 5, 0);
    const double ratio = tc.rows[1].mean_steps / tc.rows[0].mean_steps;
    CHECK(ratio > 1.8);
    CHECK(ratio < 2.2);
}

TEST_CASE("all-diverged sweep rows are marked and excluded from the fit") {
    auto model = cubic_drift(5.0, 2.0);
    // h = 0.625 at T = 5 diverges almost surely; keep two stable rows for the fit
    const std::vector<double> res = {0.125, 0.0125, 0.00625};
    SweepOptions opts;
    opts.threads = 0;
    const ConvergenceReport r = strong_error_sweep(model, uniform_em(1.0), res, 64, 21, 5.0, opts);
    const SweepRow* bad = nullptr;
    for (const SweepRow& row : r.rows) {
        if (row.resolution == 0.125) bad = &row;
    }
    REQUIRE(bad != nullptr);
    CHECK(bad->diverged_fraction > 0.9);
    CHECK(std::isfinite(r.fitted_order_T));
}
