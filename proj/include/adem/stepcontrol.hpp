#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adem/vecmath.hpp"

namespace adem {

// How the refinement parameter delta enters the timestep: scale the whole
// stability timestep, or cap only its maximum.
enum class DeltaMode { ScaleAll, CapMax };

// State-dependent timestep h^delta(x) built from a stability timestep h(x),
// a refinement parameter delta in (0,1] and the horizon T.  Immutable after
// construction; safe to share across threads.
struct TimestepPolicy {
    std::function<double(std::span<const double>)> base_h;  // h(x), strictly positive
    double delta = 1.0;
    double horizon = 1.0;
    DeltaMode mode = DeltaMode::ScaleAll;

    // h^delta(x); always satisfies the sandwich
    //   delta * min(T, h(x)) <= h^delta(x) <= min(delta * T, h(x)).
    double h_delta(std::span<const double> x) const;

    TimestepPolicy with_delta(double new_delta) const;
};

struct LowerBoundParams {
    double xi = 1.0;
    double zeta = 1.0;
    double q = 1.0;
};

// Constants for the one-sided growth / timestep inequality, plus (when the
// model admits one) a polynomial lower bound on the timestep.
struct GrowthParams {
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<LowerBoundParams> lower_bound;
};

// h(x) = min(T, |x|^(1-q) / c), the natural choice for scalar drifts that
// behave like -c sign(x) |x|^q at infinity.
TimestepPolicy scalar_power_policy(double c, double q, double T, double delta = 1.0);

enum class RatioVariant { NormRatio, SquaredRatio };

// NormRatio:    h(x) = min(T, ||x|| / ||f(x)||)
// SquaredRatio: h(x) = min(T, gamma ||x||^2 / ||f(x)||^2)
// Both return T wherever f(x) = 0.
TimestepPolicy ratio_policy(DriftFn drift, int dim, double gamma, double T,
                            RatioVariant variant, double delta = 1.0);

// h(x) = max(1, ||x||) / max(1, ||f(x)||).
TimestepPolicy max_ratio_policy(DriftFn drift, int dim, double T, double delta = 1.0);

// base_h identically equal to h (uniform stepping expressed as a policy).
TimestepPolicy constant_policy(double h, double T, double delta = 1.0);

struct AssumptionViolation {
    Vec x;
    double lhs = 0.0;    // left-hand side of the inequality
    double bound = 0.0;  // right-hand side it had to stay below
};

struct AssumptionReport {
    std::size_t samples_checked = 0;
    std::vector<AssumptionViolation> violations;
    double worst_margin = 0.0;  // max over samples of lhs - bound (negative when comfortably inside)

    bool pass() const { return violations.empty(); }
};

// Checks <x, f(x)> + h(x) ||f(x)||^2 / 2 <= alpha ||x||^2 + beta at each
// sample, with h the policy's stability timestep.  Violations are data,
// not errors.
AssumptionReport check_timestep_assumption(const TimestepPolicy& policy, const DriftFn& drift,
                                           const GrowthParams& params,
                                           const std::vector<Vec>& samples);

// Checks h(x) >= 1 / (xi ||x||^q + zeta) at each sample.
AssumptionReport check_lower_bound(const TimestepPolicy& policy, const LowerBoundParams& params,
                                   const std::vector<Vec>& samples);

// Random states mixing a uniform cloud with a log-spaced radial grid;
// deterministic in seed.
std::vector<Vec> sample_states(int dim, std::size_t count, double max_radius, std::uint64_t seed,
                               double min_radius = 1e-3);

}  // namespace adem
