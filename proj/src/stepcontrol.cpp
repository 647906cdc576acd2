#include "adem/stepcontrol.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace adem {

namespace {

void require(bool cond, const char* message) {
    if (!cond) throw std::invalid_argument(message);
}

void validate_common(double T, double delta) {
    require(T > 0.0 && std::isfinite(T), "timestep policy: horizon must be positive");
    require(delta > 0.0 && delta <= 1.0, "timestep policy: delta must lie in (0, 1]");
}

}  // namespace

double TimestepPolicy::h_delta(std::span<const double> x) const {
    if (!all_finite(x)) throw std::domain_error("TimestepPolicy::h_delta: non-finite state");
    const double hb = base_h(x);
    if (mode == DeltaMode::ScaleAll) return delta * std::min(horizon, hb);
    return std::min(delta * horizon, hb);
}

TimestepPolicy TimestepPolicy::with_delta(double new_delta) const {
    require(new_delta > 0.0 && new_delta <= 1.0, "timestep policy: delta must lie in (0, 1]");
    TimestepPolicy p = *this;
    p.delta = new_delta;
    return p;
}

TimestepPolicy scalar_power_policy(double c, double q, double T, double delta) {
    require(c > 0.0, "scalar_power_policy: c must be positive");
    require(q > 1.0, "scalar_power_policy: q must exceed 1");
    validate_common(T, delta);
    TimestepPolicy p;
    p.base_h = [c, q, T](std::span<const double> x) {
        const double r = norm(x);
        if (r == 0.0) return T;
        return std::min(T, std::pow(r, 1.0 - q) / c);
    };
    p.delta = delta;
    p.horizon = T;
    p.mode = DeltaMode::ScaleAll;
    return p;
}

TimestepPolicy ratio_policy(DriftFn drift, int dim, double gamma, double T,
                            RatioVariant variant, double delta) {
    require(gamma > 0.0, "ratio_policy: gamma must be positive");
    require(dim > 0, "ratio_policy: dimension must be positive");
    validate_common(T, delta);
    TimestepPolicy p;
    p.base_h = [drift = std::move(drift), dim, gamma, T, variant](std::span<const double> x) {
        Vec f(static_cast<std::size_t>(dim));
        drift(x, f);
        const double nf = norm(f);
        if (nf == 0.0) return T;
        const double nx = norm(x);
        const double h = variant == RatioVariant::NormRatio ? nx / nf
                                                            : gamma * nx * nx / (nf * nf);
        return std::min(T, h);
    };
    p.delta = delta;
    p.horizon = T;
    p.mode = DeltaMode::ScaleAll;
    return p;
}

TimestepPolicy max_ratio_policy(DriftFn drift, int dim, double T, double delta) {
    require(dim > 0, "max_ratio_policy: dimension must be positive");
    validate_common(T, delta);
    TimestepPolicy p;
    p.base_h = [drift = std::move(drift), dim](std::span<const double> x) {
        Vec f(static_cast<std::size_t>(dim));
        drift(x, f);
        return std::max(1.0, norm(x)) / std::max(1.0, norm(f));
    };
    p.delta = delta;
    p.horizon = T;
    p.mode = DeltaMode::ScaleAll;
    return p;
}

TimestepPolicy constant_policy(double h, double T, double delta) {
    require(h > 0.0, "constant_policy: h must be positive");
    validate_common(T, delta);
    TimestepPolicy p;
    p.base_h = [h](std::span<const double>) { return h; };
    p.delta = delta;
    p.horizon = T;
    p.mode = DeltaMode::CapMax;
    return p;
}

AssumptionReport check_timestep_assumption(const TimestepPolicy& policy, const DriftFn& drift,
                                           const GrowthParams& params,
                                           const std::vector<Vec>& samples) {
    if (samples.empty()) throw std::invalid_argument("check_timestep_assumption: empty sample list");
    AssumptionReport report;
    report.worst_margin = -std::numeric_limits<double>::infinity();
    Vec f;
    for (const Vec& x : samples) {
        f.assign(x.size(), 0.0);
        drift(x, f);
        const double h = policy.base_h(x);
        const double lhs = dot(x, f) + 0.5 * h * dot(f, f);
        const double bound = params.alpha * dot(x, x) + params.beta;
        report.worst_margin = std::max(report.worst_margin, lhs - bound);
        if (lhs > bound) report.violations.push_back({x, lhs, bound});
        ++report.samples_checked;
    }
    return report;
}

AssumptionReport check_lower_bound(const TimestepPolicy& policy, const LowerBoundParams& params,
                                   const std::vector<Vec>& samples) {
    if (samples.empty()) throw std::invalid_argument("check_lower_bound: empty sample list");
    AssumptionReport report;
    report.worst_margin = -std::numeric_limits<double>::infinity();
    for (const Vec& x : samples) {
        const double h = policy.base_h(x);
        const double floor = 1.0 / (params.xi * std::pow(norm(x), params.q) + params.zeta);
        report.worst_margin = std::max(report.worst_margin, floor - h);
        if (h < floor) report.violations.push_back({x, h, floor});
        ++report.samples_checked;
    }
    return report;
}

std::vector<Vec> sample_states(int dim, std::size_t count, double max_radius, std::uint64_t seed,
                               double min_radius) {
    require(dim > 0, "sample_states: dimension must be positive");
    require(max_radius > 0.0 && min_radius > 0.0 && min_radius < max_radius,
            "sample_states: need 0 < min_radius < max_radius");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    std::vector<Vec> out;
    out.reserve(count);
    const double log_lo = std::log(min_radius);
    const double log_hi = std::log(max_radius);
    for (std::size_t i = 0; i < count; ++i) {
        Vec x(static_cast<std::size_t>(dim));
        double r2 = 0.0;
        for (double& c : x) {
            c = gauss(gen);
            r2 += c * c;
        }
        const double nx = std::sqrt(r2);
        // half a uniform cloud in the ball, half a log-spaced radial grid
        double radius;
        if (i % 2 == 0) {
            radius = max_radius * std::pow(unif(gen), 1.0 / dim);
        } else {
            radius = std::exp(log_lo + (log_hi - log_lo) * unif(gen));
        }
        if (nx > 0.0) {
            for (double& c : x) c *= radius / nx;
        }
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace adem
