#include "adem/schemes.hpp"

#include <cmath>

namespace adem {

namespace {

constexpr double kDivergenceRadius = 1e300;
constexpr std::size_t kMaxSteps = 20'000'000;

void apply_clamp(Vec& x, const std::optional<double>& clamp) {
    if (!clamp) return;
    const double r = norm(x);
    if (r > *clamp) {
        const double s = *clamp / r;
        for (double& c : x) c *= s;
    }
}

// x' = x + f_eff * h + g(x_eval) dW, shared by the explicit schemes.
Vec explicit_update(const Vec& x, std::span<const double> f_eval_point, double drift_scale,
                    double t, double t_next, const SdeModel& model, BrownianPath& w,
                    const std::optional<double>& clamp) {
    const double h = t_next - t;
    const std::size_t m = static_cast<std::size_t>(model.state_dim);
    Vec f(m);
    model.drift(f_eval_point, f);
    Matrix g(m, static_cast<std::size_t>(model.noise_dim));
    model.volatility(f_eval_point, g);
    const Vec dw = w.increment(t, t_next);
    Vec out(m);
    matvec(g, dw, out);
    for (std::size_t i = 0; i < m; ++i) out[i] += x[i] + drift_scale * h * f[i];
    apply_clamp(out, clamp);
    return out;
}

}  // namespace

std::string scheme_kind_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::AdaptiveEM: return "adaptive_em";
        case SchemeKind::UniformEM: return "uniform_em";
        case SchemeKind::TamedEM: return "tamed_em";
        case SchemeKind::BackwardEuler: return "backward_euler";
        case SchemeKind::SplitStepBE: return "ssbe";
        case SchemeKind::TruncatedEM: return "truncated_em";
    }
    return "unknown";
}

SchemeSpec adaptive_em() {
    SchemeSpec s;
    s.kind = SchemeKind::AdaptiveEM;
    return s;
}

SchemeSpec adaptive_em(TimestepPolicy policy) {
    SchemeSpec s;
    s.kind = SchemeKind::AdaptiveEM;
    s.resolution = policy.delta;
    s.policy = std::move(policy);
    return s;
}

namespace {
SchemeSpec fixed_step(SchemeKind kind, double h) {
    if (h <= 0.0) throw std::invalid_argument("scheme: step size must be positive");
    SchemeSpec s;
    s.kind = kind;
    s.step = h;
    s.resolution = h;
    return s;
}
}  // namespace

SchemeSpec uniform_em(double h) { return fixed_step(SchemeKind::UniformEM, h); }

SchemeSpec tamed_em(double h, double c) {
    if (c <= 0.0) throw std::invalid_argument("tamed_em: taming constant must be positive");
    SchemeSpec s = fixed_step(SchemeKind::TamedEM, h);
    s.taming_c = c;
    return s;
}

SchemeSpec backward_euler(double h, NewtonOptions solver) {
    SchemeSpec s = fixed_step(SchemeKind::BackwardEuler, h);
    s.solver = solver;
    return s;
}

SchemeSpec split_step_be(double h, NewtonOptions solver) {
    SchemeSpec s = fixed_step(SchemeKind::SplitStepBE, h);
    s.solver = solver;
    return s;
}

SchemeSpec truncated_em(double h, double k0) {
    if (k0 <= 0.0) throw std::invalid_argument("truncated_em: k0 must be positive");
    SchemeSpec s = fixed_step(SchemeKind::TruncatedEM, h);
    s.truncation_k0 = k0;
    return s;
}

SchemeSpec with_resolution(const SchemeSpec& base, double resolution, const SdeModel& model,
                           double T) {
    if (resolution <= 0.0) throw std::invalid_argument("with_resolution: resolution must be positive");
    SchemeSpec s = base;
    s.resolution = resolution;
    if (base.kind == SchemeKind::AdaptiveEM) {
        s.policy = base.policy ? base.policy->with_delta(resolution)
                               : model.recommended_policy(resolution);
    } else {
        s.step = resolution * T;
    }
    return s;
}

std::vector<std::string> scheme_names() {
    return {"adaptive_em", "uniform_em", "tamed_em", "backward_euler", "ssbe", "truncated_em"};
}

std::vector<std::string> known_scheme_params(const std::string& name) {
    if (name == "tamed_em") return {"C"};
    if (name == "truncated_em") return {"k0"};
    if (name == "backward_euler" || name == "ssbe") return {"tol", "max_iter"};
    return {};
}

SchemeSpec make_scheme(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&params](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "adaptive_em") return adaptive_em();
    if (name == "uniform_em") return uniform_em(1.0);
    if (name == "tamed_em") return tamed_em(1.0, get("C", 1.0));
    if (name == "backward_euler" || name == "ssbe") {
        NewtonOptions solver;
        solver.tolerance = get("tol", solver.tolerance);
        solver.max_iterations = static_cast<int>(get("max_iter", solver.max_iterations));
        return name == "backward_euler" ? backward_euler(1.0, solver) : split_step_be(1.0, solver);
    }
    if (name == "truncated_em") return truncated_em(1.0, get("k0", 1.0));
    throw std::invalid_argument("unknown scheme: " + name);
}

double SimulatedPath::max_knot_norm() const {
    double m = 0.0;
    for (const Vec& x : states) m = std::max(m, norm(x));
    return m;
}

Vec project_k(const Vec& y, double k) {
    if (k <= 0.0) throw std::invalid_argument("project_k: radius must be positive");
    Vec out = y;
    const double r = norm(out);
    if (r > k) {
        const double s = k / r;
        for (double& c : out) c *= s;
    }
    return out;
}

Vec step_adaptive_em(const Vec& x, double t, double t_next, const SdeModel& model,
                     BrownianPath& w, std::optional<double> clamp) {
    return explicit_update(x, x, 1.0, t, t_next, model, w, clamp);
}

Vec step_tamed(const Vec& x, double t, double t_next, const SdeModel& model, double c,
               BrownianPath& w, std::optional<double> clamp) {
    const double h = t_next - t;
    const std::size_t m = static_cast<std::size_t>(model.state_dim);
    Vec f(m);
    model.drift(x, f);
    const double scale = 1.0 / (1.0 + c * h * norm(f));
    return explicit_update(x, x, scale, t, t_next, model, w, clamp);
}

Vec step_truncated(const Vec& x, double t, double t_next, const SdeModel& model, double k,
                   BrownianPath& w, std::optional<double> clamp) {
    const Vec eval_point = project_k(x, k);
    const double h = t_next - t;
    const std::size_t m = static_cast<std::size_t>(model.state_dim);
    Vec f(m);
    model.drift(eval_point, f);
    Matrix g(m, static_cast<std::size_t>(model.noise_dim));
    model.volatility(eval_point, g);
    const Vec dw = w.increment(t, t_next);
    Vec out(m);
    matvec(g, dw, out);
    for (std::size_t i = 0; i < m; ++i) out[i] += x[i] + h * f[i];
    apply_clamp(out, clamp);
    return out;
}

ImplicitStep step_backward_euler(const Vec& x, double t, double t_next, const SdeModel& model,
                                 BrownianPath& w, const NewtonOptions& solver,
                                 std::optional<double> clamp) {
    const double h = t_next - t;
    const std::size_t m = static_cast<std::size_t>(model.state_dim);
    Matrix g(m, static_cast<std::size_t>(model.noise_dim));
    model.volatility(x, g);
    const Vec dw = w.increment(t, t_next);
    Vec rhs(m);
    matvec(g, dw, rhs);
    for (std::size_t i = 0; i < m; ++i) rhs[i] += x[i];

    DriftFn residual = [&model, &rhs, h, m](std::span<const double> y, std::span<double> out) {
        Vec f(m);
        model.drift(y, f);
        for (std::size_t i = 0; i < m; ++i) out[i] = y[i] - h * f[i] - rhs[i];
    };
    NewtonResult r = newton_solve(residual, x, solver, clamp);
    if (!r.converged)
        throw SchemeError("backward_euler: Newton failed after " + std::to_string(r.iterations) +
                          " iterations (residual " + std::to_string(r.residual_norm) + ", t=" +
                          std::to_string(t) + ", h=" + std::to_string(h) + ")");
    apply_clamp(r.solution, clamp);
    return {std::move(r.solution), r.iterations};
}

ImplicitStep step_ssbe(const Vec& x, double t, double t_next, const SdeModel& model,
                       BrownianPath& w, const NewtonOptions& solver,
                       std::optional<double> clamp) {
    const double h = t_next - t;
    const std::size_t m = static_cast<std::size_t>(model.state_dim);

    DriftFn residual = [&model, &x, h, m](std::span<const double> y, std::span<double> out) {
        Vec f(m);
        model.drift(y, f);
        for (std::size_t i = 0; i < m; ++i) out[i] = y[i] - h * f[i] - x[i];
    };
    NewtonResult r = newton_solve(residual, x, solver, clamp);
    if (!r.converged)
        throw SchemeError("ssbe: Newton failed after " + std::to_string(r.iterations) +
                          " iterations (residual " + std::to_string(r.residual_norm) + ", t=" +
                          std::to_string(t) + ", h=" + std::to_string(h) + ")");
    Vec star = std::move(r.solution);
    apply_clamp(star, clamp);

    Matrix g(m, static_cast<std::size_t>(model.noise_dim));
    model.volatility(star, g);
    const Vec dw = w.increment(t, t_next);
    Vec out(m);
    matvec(g, dw, out);
    for (std::size_t i = 0; i < m; ++i) out[i] += star[i];
    apply_clamp(out, clamp);
    return {std::move(out), r.iterations};
}

SimulatedPath simulate(const SdeModel& model, const SchemeSpec& spec, BrownianPath& w, double T) {
    if (T <= 0.0) throw std::invalid_argument("simulate: horizon must be positive");
    if (spec.kind == SchemeKind::AdaptiveEM && !spec.policy)
        throw std::invalid_argument("simulate: adaptive scheme without a timestep policy");

    const std::optional<double> clamp = spec.clamp_radius ? spec.clamp_radius : model.clamp_radius;
    double trunc_k = 0.0;
    if (spec.kind == SchemeKind::TruncatedEM) {
        trunc_k = spec.truncation_level ? spec.truncation_level(spec.step)
                                        : spec.truncation_k0 * std::pow(spec.step, -0.25);
    }

    double t = 0.0;
    Vec x = model.initial_state;
    apply_clamp(x, clamp);

    SimulatedPath path;
    path.times.push_back(0.0);
    path.states.push_back(x);

    while (t < T) {
        double h = spec.kind == SchemeKind::AdaptiveEM ? spec.policy->h_delta(x) : spec.step;
        double t_next;
        if (h >= T - t) {
            h = T - t;
            t_next = T;
        } else {
            t_next = std::min(t + h, T);
        }

        Vec x_next;
        try {
            switch (spec.kind) {
                case SchemeKind::AdaptiveEM:
                case SchemeKind::UniformEM:
                    x_next = step_adaptive_em(x, t, t_next, model, w, clamp);
                    break;
                case SchemeKind::TamedEM:
                    x_next = step_tamed(x, t, t_next, model, spec.taming_c, w, clamp);
                    break;
                case SchemeKind::TruncatedEM:
                    x_next = step_truncated(x, t, t_next, model, trunc_k, w, clamp);
                    break;
                case SchemeKind::BackwardEuler: {
                    ImplicitStep s = step_backward_euler(x, t, t_next, model, w, spec.solver, clamp);
                    path.solver_iterations += s.iterations;
                    x_next = std::move(s.state);
                    break;
                }
                case SchemeKind::SplitStepBE: {
                    ImplicitStep s = step_ssbe(x, t, t_next, model, w, spec.solver, clamp);
                    path.solver_iterations += s.iterations;
                    x_next = std::move(s.state);
                    break;
                }
            }
        } catch (const SchemeError&) {
            path.diverged = true;
            path.divergence_time = t_next;
            path.failure = "solver";
            break;
        } catch (const std::domain_error&) {
            // drift/volatility rejected the state (e.g. left its domain)
            path.diverged = true;
            path.divergence_time = t_next;
            path.failure = "nonfinite";
            break;
        }

        ++path.step_count;
        path.step_sizes.push_back(h);

        if (!all_finite(x_next) || norm(x_next) > kDivergenceRadius) {
            path.diverged = true;
            path.divergence_time = t_next;
            path.failure = "nonfinite";
            break;
        }

        t = t_next;
        x = x_next;
        path.times.push_back(t);
        path.states.push_back(std::move(x_next));

        if (path.step_count >= kMaxSteps && t < T) {
            path.diverged = true;
            path.divergence_time = t;
            path.failure = "step_limit";
            break;
        }
    }
    return path;
}

Vec interpolate(const SimulatedPath& path, const SdeModel& model, BrownianPath& w, double t) {
    if (path.times.empty()) throw std::invalid_argument("interpolate: empty path");
    if (t < path.times.front() || t > path.times.back())
        throw std::domain_error("interpolate: time outside the simulated range");

    auto it = std::lower_bound(path.times.begin(), path.times.end(), t);
    if (it != path.times.end() && *it == t) {
        return path.states[static_cast<std::size_t>(it - path.times.begin())];
    }
    const std::size_t k = static_cast<std::size_t>(it - path.times.begin()) - 1;
    const double u = path.times[k];
    const Vec& xu = path.states[k];

    const std::size_t m = static_cast<std::size_t>(model.state_dim);
    Vec f(m);
    model.drift(xu, f);
    Matrix g(m, static_cast<std::size_t>(model.noise_dim));
    model.volatility(xu, g);
    const Vec dw = w.increment(u, t);
    Vec out(m);
    matvec(g, dw, out);
    for (std::size_t i = 0; i < m; ++i) out[i] += xu[i] + (t - u) * f[i];
    apply_clamp(out, model.clamp_radius);
    return out;
}

}  // namespace adem
