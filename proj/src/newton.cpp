#include "adem/newton.hpp"

#include <cmath>

namespace adem {

namespace {

// In-place Gaussian elimination with partial pivoting; returns false when
// the matrix is numerically singular.
bool solve_linear(Matrix a, Vec b, Vec& out) {
    const std::size_t n = a.rows;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        }
        if (a(pivot, col) == 0.0 || !std::isfinite(a(pivot, col))) return false;
        if (pivot != col) {
            for (std::size_t c = col; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a(r, col) / a(col, col);
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
            b[r] -= factor * b[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * out[j];
        out[i] = s / a(i, i);
    }
    return all_finite(out);
}

void clamp_into_ball(Vec& y, double radius) {
    const double r = norm(y);
    if (r > radius) {
        const double s = radius / r;
        for (double& c : y) c *= s;
    }
}

}  // namespace

NewtonResult newton_solve(const DriftFn& residual, const Vec& initial,
                          const NewtonOptions& options, std::optional<double> domain_radius) {
    const std::size_t n = initial.size();
    NewtonResult result;
    result.solution = initial;
    if (domain_radius) clamp_into_ball(result.solution, *domain_radius);

    Vec f(n), f_trial(n), trial(n), direction(n), rhs(n);
    residual(result.solution, f);
    double fnorm = norm(f);

    while (fnorm > options.tolerance && result.iterations < options.max_iterations) {
        ++result.iterations;

        Matrix jac(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            double eps = 1e-8 * std::max(1.0, std::abs(result.solution[j]));
            trial = result.solution;
            trial[j] += eps;
            if (domain_radius && norm(trial) >= *domain_radius) {
                eps = -eps;
                trial[j] = result.solution[j] + eps;
            }
            residual(trial, f_trial);
            for (std::size_t i = 0; i < n; ++i) jac(i, j) = (f_trial[i] - f[i]) / eps;
        }

        for (std::size_t i = 0; i < n; ++i) rhs[i] = -f[i];
        if (!solve_linear(jac, rhs, direction)) break;

        bool accepted = false;
        double lambda = 1.0;
        for (int k = 0; k <= options.max_halvings; ++k) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = result.solution[i] + lambda * direction[i];
            if (domain_radius) clamp_into_ball(trial, *domain_radius);
            residual(trial, f_trial);
            const double fn_trial = norm(f_trial);
            if (fn_trial < fnorm || fn_trial <= options.tolerance) {
                result.solution = trial;
                f = f_trial;
                fnorm = fn_trial;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) break;
    }

    result.residual_norm = fnorm;
    result.converged = fnorm <= options.tolerance;
    return result;
}

}  // namespace adem
