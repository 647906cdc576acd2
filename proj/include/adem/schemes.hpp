#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include "adem/models.hpp"
#include "adem/newton.hpp"

namespace adem {

enum class SchemeKind { AdaptiveEM, UniformEM, TamedEM, BackwardEuler, SplitStepBE, TruncatedEM };

std::string scheme_kind_name(SchemeKind kind);

// Full description of a discretisation run.  `resolution` is the nominal
// refinement knob: delta for the adaptive scheme, h / T for the fixed-step
// schemes.  Use with_resolution() to bind it against a model.
struct SchemeSpec {
    SchemeKind kind = SchemeKind::AdaptiveEM;
    double resolution = 1.0;
    std::optional<TimestepPolicy> policy;  // adaptive only; delta already applied
    double step = 0.0;                     // h for fixed-step kinds
    double taming_c = 1.0;
    double truncation_k0 = 1.0;            // K(h) = k0 * h^(-1/4) unless overridden
    std::function<double(double)> truncation_level;
    NewtonOptions solver;
    std::optional<double> clamp_radius;    // overrides the model's clamp when set
};

SchemeSpec adaptive_em();
SchemeSpec adaptive_em(TimestepPolicy policy);
SchemeSpec uniform_em(double h);
SchemeSpec tamed_em(double h, double c = 1.0);
SchemeSpec backward_euler(double h, NewtonOptions solver = {});
SchemeSpec split_step_be(double h, NewtonOptions solver = {});
SchemeSpec truncated_em(double h, double k0 = 1.0);

// Binds a nominal resolution: delta for the adaptive scheme (the policy is
// taken from the model unless the spec already carries one), h = r * T for
// the fixed-step schemes.
SchemeSpec with_resolution(const SchemeSpec& base, double resolution, const SdeModel& model,
                           double T);

// Registry used by the CLI: scheme family by name (resolution still unbound).
std::vector<std::string> scheme_names();
SchemeSpec make_scheme(const std::string& name, const std::map<std::string, double>& params);
std::vector<std::string> known_scheme_params(const std::string& name);

// Ordered record of one simulated path.  Knot times are strictly increasing
// from 0; the final time equals T exactly unless the path was flagged.
struct SimulatedPath {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<double> step_sizes;
    std::size_t step_count = 0;
    bool diverged = false;
    double divergence_time = std::numeric_limits<double>::quiet_NaN();
    std::string failure;  // "", "nonfinite", "solver", "step_limit"
    long solver_iterations = 0;

    const Vec& terminal_state() const { return states.back(); }
    double max_knot_norm() const;
};

class SchemeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// P_K(y) = min(1, K / ||y||) y: radial projection onto the ball of radius K.
Vec project_k(const Vec& y, double k);

// One-step maps.  Each advances from (x, t) to t_next, sampling the driving
// increment W_{t_next} - W_t from the path.  They are pure given their
// inputs apart from memoization inside the BrownianPath.
Vec step_adaptive_em(const Vec& x, double t, double t_next, const SdeModel& model,
                     BrownianPath& w, std::optional<double> clamp);
Vec step_tamed(const Vec& x, double t, double t_next, const SdeModel& model, double c,
               BrownianPath& w, std::optional<double> clamp);
Vec step_truncated(const Vec& x, double t, double t_next, const SdeModel& model, double k,
                   BrownianPath& w, std::optional<double> clamp);

struct ImplicitStep {
    Vec state;
    int iterations = 0;
};
// Drift-implicit: solves x' = x + f(x') h + g(x) dW.
ImplicitStep step_backward_euler(const Vec& x, double t, double t_next, const SdeModel& model,
                                 BrownianPath& w, const NewtonOptions& solver,
                                 std::optional<double> clamp);
// Split step: solves x* = x + f(x*) h, then x' = x* + g(x*) dW.
ImplicitStep step_ssbe(const Vec& x, double t, double t_next, const SdeModel& model,
                       BrownianPath& w, const NewtonOptions& solver,
                       std::optional<double> clamp);

// Iterates the one-step map of `spec` until t = T.  Divergence (non-finite
// state, magnitude above 1e300, solver failure) flags the path instead of
// throwing, so Monte Carlo drivers can treat it as data.
SimulatedPath simulate(const SdeModel& model, const SchemeSpec& spec, BrownianPath& w, double T);

// Continuous interpolant X_t = X_u + f(X_u)(t - u) + g(X_u)(W_t - W_u) with
// u the last knot time before t; exact knot values at knot times.
Vec interpolate(const SimulatedPath& path, const SdeModel& model, BrownianPath& w, double t);

}  // namespace adem
