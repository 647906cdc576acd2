#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adem/brownian.hpp"
#include "adem/stepcontrol.hpp"

namespace adem {

using VolatilityFn = std::function<void(std::span<const double>, Matrix&)>;

// An SDE dX = f(X) dt + g(X) dW bundled with the metadata the harness
// needs: initial state, a recommended timestep policy, declared growth
// constants for the validators, and an optional radial clamp for drifts
// defined only on a ball.  Immutable after construction.
struct SdeModel {
    std::string name;
    int state_dim = 1;
    int noise_dim = 1;
    DriftFn drift;
    VolatilityFn volatility;  // fills a state_dim x noise_dim matrix
    Vec initial_state;
    double horizon = 1.0;
    std::function<TimestepPolicy(double delta)> recommended_policy;
    GrowthParams growth;
    std::optional<double> clamp_radius;
    // Set only when a closed form exists; samples W from the given path so
    // the exact solution is coupled to a simulated one.
    std::function<Vec(BrownianPath&, double)> exact_solution;
};

// dX = ((eta + sigma^2/2) X - lambda X^3) dt + sigma X dW
SdeModel ginzburg_landau(double eta, double lambda, double sigma, double T);

// dX = ((eta + sigma^2/2) X - lambda |X| X) dt + sigma X dW
SdeModel verhulst(double eta, double lambda, double sigma, double T);

// dX = -X^5 dt + X dW,            X0 = 1
SdeModel testcase1(double T = 1.0);
// dX = (X - X^3) dt + X dW,       X0 = 1
SdeModel testcase2(double T = 1.0);
// dX = (X - ||X||^2 X) dt + dW,   X0 = 0, 10-dimensional
SdeModel testcase3(double T = 1.0);
// dX = -X / (1 - ||X||^2) dt + dW on the open unit ball, X0 = 0, 3-dimensional
SdeModel fene(double T = 1.0);

SdeModel van_der_pol(double alpha, double mu, double delta_p, double beta, double T,
                     double gamma = 1.0);
SdeModel lorenz(double a1, double a2, double a3, double b1, double b2, double b3, double T,
                double gamma = 1.0);

// dX = -grad_V(X) dt + dW with identity volatility (m = d).
SdeModel langevin(DriftFn grad_v, int m, double T, Vec x0 = {}, GrowthParams growth = {});

// dX = -X^3 dt + dW
SdeModel cubic_drift(double T = 1.0, double x0 = 2.0);
// dX = (X - X^3) dt + dW  (Langevin with V = x^4/4 - x^2/2)
SdeModel double_well(double T = 1.0, double x0 = 0.0);

// dX = mu X dt + sigma X dW with the closed-form solution attached;
// serves as an exact-solution anchor for the convergence harness.
SdeModel geometric_brownian(double mu, double sigma, double x0, double T);

// Registry used by the CLI: model by name with a parameter map.
std::vector<std::string> model_names();
SdeModel make_model(const std::string& name, const std::map<std::string, double>& params,
                    double T_override = 0.0);
std::vector<std::string> known_model_params(const std::string& name);

// Validator conveniences.
AssumptionReport check_timestep_assumption(const TimestepPolicy& policy, const SdeModel& model,
                                           const GrowthParams& params,
                                           const std::vector<Vec>& samples);
// Random validation states for a model: radius capped at max_radius, or at
// the clamp radius for ball-restricted drifts.
std::vector<Vec> model_validation_samples(const SdeModel& model, std::size_t count,
                                          double max_radius, std::uint64_t seed);

}  // namespace adem
