#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "adem/brownian.hpp"

using namespace adem;

TEST_CASE("starts at zero and rejects bad times") {
    BrownianPath w(3, 1, 0);
    const Vec& w0 = w.sample_at(0.0);
    for (double c : w0) CHECK(c == 0.0);
    CHECK_THROWS_AS(w.sample_at(-0.1), std::domain_error);
    CHECK_THROWS_AS(w.sample_at(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(w.increment(0.5, 0.2), std::domain_error);
}

TEST_CASE("memoization and refinement consistency") {
    BrownianPath w(2, 99, 3);
    const Vec w1 = w.sample_at(1.0);
    const Vec half = w.sample_at(0.5);  // bridge refinement between 0 and 1
    (void)half;
    const Vec w1_again = w.sample_at(1.0);
    CHECK(w1 == w1_again);  // bitwise

    // filling in more interior points never changes anything already seen
    for (double t : {0.25, 0.75, 0.125, 0.9999}) (void)w.sample_at(t);
    CHECK(w.sample_at(1.0) == w1);
    CHECK(w.sample_at(0.5) == half);
}

TEST_CASE("determinism per (seed, path index)") {
    const std::vector<double> query = {0.7, 0.2, 1.5, 0.9, 0.1};
    BrownianPath a(4, 123, 17);
    BrownianPath b(4, 123, 17);
    for (double t : query) CHECK(a.sample_at(t) == b.sample_at(t));

    BrownianPath c(4, 123, 18);
    bool identical = true;
    for (double t : query) {
        if (a.sample_at(t) != c.sample_at(t)) identical = false;
    }
    CHECK_FALSE(identical);
}

TEST_CASE("increment identities") {
    BrownianPath w(2, 5, 1);
    const Vec z = w.increment(1.0, 1.0);
    for (double c : z) CHECK(c == 0.0);

    BrownianPath v(2, 6, 2);
    const Vec inc = v.increment(0.0, 0.8);
    CHECK(inc == v.sample_at(0.8));  // W_0 = 0
}

TEST_CASE("marginal variance of W_t") {
    // Var(W_t) = t; sample-variance tolerance 3 * sqrt(2 t^2 / n)
    const std::size_t n = 100000;
    const double t = 0.25;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        BrownianPath w(1, 777, i);
        const double x = w.sample_at(t)[0];
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(var - t) < 3.0 * t * std::sqrt(2.0 / n));
}

TEST_CASE("bridge conditional mean and variance at the midpoint") {
    // given W_0 = 0 and W_1 = w, W_1/2 - w/2 has mean 0 and variance 1/4
    const std::size_t n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        BrownianPath w(1, 4242, i);
        const double w1 = w.sample_at(1.0)[0];
        const double mid = w.sample_at(0.5)[0];
        const double r = mid - 0.5 * w1;
        sum += r;
        sum2 += r * r;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 3.0 * 0.5 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 0.25) < 3.0 * 0.25 * std::sqrt(2.0 / n));
}

TEST_CASE("increment covariance is (t - s) I") {
    const std::size_t n = 100000;
    const double s = 0.2, t = 0.7;
    double sum0 = 0.0, sum1 = 0.0, sq0 = 0.0, sq1 = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        BrownianPath w(2, 31337, i);
        const Vec d = w.increment(s, t);
        sum0 += d[0];
        sum1 += d[1];
        sq0 += d[0] * d[0];
        sq1 += d[1] * d[1];
        cross += d[0] * d[1];
    }
    const double m0 = sum0 / n, m1 = sum1 / n;
    const double v0 = sq0 / n - m0 * m0;
    const double v1 = sq1 / n - m1 * m1;
    const double c01 = cross / n - m0 * m1;
    const double tol_var = 3.0 * (t - s) * std::sqrt(2.0 / n);
    const double tol_cov = 3.0 * (t - s) / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(v0 - (t - s)) < tol_var);
    CHECK(std::abs(v1 - (t - s)) < tol_var);
    CHECK(std::abs(c01) < tol_cov);
}

TEST_CASE("disjoint increments are uncorrelated") {
    const std::size_t n = 100000;
    double sa = 0.0, sb = 0.0, sab = 0.0, sa2 = 0.0, sb2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        BrownianPath w(1, 909, i);
        const double a = w.increment(0.0, 0.3)[0];
        const double b = w.increment(0.3, 0.7)[0];
        sa += a;
        sb += b;
        sab += a * b;
        sa2 += a * a;
        sb2 += b * b;
    }
    const double ma = sa / n, mb = sb / n;
    const double corr = (sab / n - ma * mb) /
                        std::sqrt((sa2 / n - ma * ma) * (sb2 / n - mb * mb));
    CHECK(std::abs(corr) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("bridge marginal keeps the unconditional law") {
    // sampling 1.0 first and 0.25 by bridge still gives Var(W_0.25) = 0.25
    const std::size_t n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        BrownianPath w(1, 5555, i);
        (void)w.sample_at(1.0);
        const double x = w.sample_at(0.25)[0];
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(var - 0.25) < 3.0 * 0.25 * std::sqrt(2.0 / n));
}
