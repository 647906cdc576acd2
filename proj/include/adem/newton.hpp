#pragma once

#include <optional>

#include "adem/vecmath.hpp"

namespace adem {

struct NewtonOptions {
    double tolerance = 1e-12;
    int max_iterations = 50;
    int max_halvings = 20;
};

struct NewtonResult {
    Vec solution;
    bool converged = false;
    int iterations = 0;
    double residual_norm = 0.0;
};

// Damped Newton on F(y) = 0 with a finite-difference Jacobian.  A trial
// step is halved until the residual norm decreases.  When domain_radius is
// set, trial points and difference stencils are kept inside that radius so
// F stays evaluable for drifts defined only on a ball.
NewtonResult newton_solve(const DriftFn& residual, const Vec& initial,
                          const NewtonOptions& options,
                          std::optional<double> domain_radius = std::nullopt);

}  // namespace adem
