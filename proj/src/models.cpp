#include "adem/models.hpp"

#include <cmath>
#include <stdexcept>

namespace adem {

namespace {

void require(bool cond, const std::string& message) {
    if (!cond) throw std::invalid_argument(message);
}

VolatilityFn scalar_volatility(double factor) {
    // g(x) = factor * x, 1x1
    return [factor](std::span<const double> x, Matrix& g) { g(0, 0) = factor * x[0]; };
}

VolatilityFn identity_volatility(int m) {
    return [m](std::span<const double>, Matrix& g) {
        g.set_zero();
        for (int i = 0; i < m; ++i) g(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1.0;
    };
}

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

}  // namespace

SdeModel ginzburg_landau(double eta, double lambda, double sigma, double T) {
    require(eta >= 0.0, "ginzburg_landau: eta must be non-negative");
    require(lambda > 0.0, "ginzburg_landau: lambda must be positive");
    require(sigma >= 0.0, "ginzburg_landau: sigma must be non-negative");
    require(T > 0.0, "ginzburg_landau: T must be positive");
    const double a = eta + 0.5 * sigma * sigma;

    SdeModel m;
    m.name = "ginzburg_landau";
    m.state_dim = m.noise_dim = 1;
    m.drift = [a, lambda](std::span<const double> x, std::span<double> f) {
        f[0] = a * x[0] - lambda * x[0] * x[0] * x[0];
    };
    m.volatility = scalar_volatility(sigma);
    m.initial_state = {1.0};
    m.horizon = T;
    m.recommended_policy = [lambda, T](double delta) {
        return scalar_power_policy(lambda, 3.0, T, delta);
    };
    // With h <= 1/(lambda x^2): <x,f> + h f^2/2 <= a x^2 + a^2/lambda,
    // via (a - lambda x^2)^2 <= 2 a^2 + 2 lambda^2 x^4.
    m.growth = {a, a * a / lambda, LowerBoundParams{lambda, 1.0 / T, 2.0}};
    return m;
}

SdeModel verhulst(double eta, double lambda, double sigma, double T) {
    require(eta >= 0.0, "verhulst: eta must be non-negative");
    require(lambda > 0.0, "verhulst: lambda must be positive");
    require(sigma >= 0.0, "verhulst: sigma must be non-negative");
    require(T > 0.0, "verhulst: T must be positive");
    const double a = eta + 0.5 * sigma * sigma;

    SdeModel m;
    m.name = "verhulst";
    m.state_dim = m.noise_dim = 1;
    m.drift = [a, lambda](std::span<const double> x, std::span<double> f) {
        f[0] = a * x[0] - lambda * std::abs(x[0]) * x[0];
    };
    m.volatility = scalar_volatility(sigma);
    m.initial_state = {1.0};
    m.horizon = T;
    m.recommended_policy = [lambda, T](double delta) {
        return scalar_power_policy(lambda, 2.0, T, delta);
    };
    // With h <= 1/(lambda |x|): lhs <= a x^2 + a^2 |x| / lambda
    //                               <= (a + a^2/(2 lambda)) x^2 + a^2/(2 lambda).
    m.growth = {a + 0.5 * a * a / lambda, 0.5 * a * a / lambda,
                LowerBoundParams{lambda, 1.0 / T, 1.0}};
    return m;
}

SdeModel testcase1(double T) {
    require(T > 0.0, "testcase1: T must be positive");
    SdeModel m;
    m.name = "testcase1";
    m.state_dim = m.noise_dim = 1;
    m.drift = [](std::span<const double> x, std::span<double> f) {
        const double x2 = x[0] * x[0];
        f[0] = -x2 * x2 * x[0];
    };
    m.volatility = scalar_volatility(1.0);
    m.initial_state = {1.0};
    m.horizon = T;
    DriftFn drift = m.drift;
    m.recommended_policy = [drift, T](double delta) { return max_ratio_policy(drift, 1, T, delta); };
    // h = max(1,|x|)/max(1,|x|^5) gives lhs = x^6 (x^4/2 - 1) <= 0 for |x| <= 1
    // and lhs = -x^6/2 <= 0 otherwise.
    m.growth = {0.0, 0.0, LowerBoundParams{1.0, 1.0, 4.0}};
    return m;
}

SdeModel testcase2(double T) {
    require(T > 0.0, "testcase2: T must be positive");
    SdeModel m;
    m.name = "testcase2";
    m.state_dim = m.noise_dim = 1;
    m.drift = [](std::span<const double> x, std::span<double> f) {
        f[0] = x[0] - x[0] * x[0] * x[0];
    };
    m.volatility = scalar_volatility(1.0);
    m.initial_state = {1.0};
    m.horizon = T;
    DriftFn drift = m.drift;
    m.recommended_policy = [drift, T](double delta) { return max_ratio_policy(drift, 1, T, delta); };
    // lhs <= 0 once |f| >= 1; on the bounded remainder lhs < 1.  |f| <= |x| + |x|^3.
    m.growth = {1.0, 1.0, LowerBoundParams{1.0, 2.0, 2.0}};
    return m;
}

SdeModel testcase3(double T) {
    require(T > 0.0, "testcase3: T must be positive");
    constexpr int dim = 10;
    DriftFn grad_v = [](std::span<const double> x, std::span<double> g) {
        const double r2 = dot(x, x);
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = (r2 - 1.0) * x[i];
    };
    SdeModel m = langevin(grad_v, dim, T, Vec(dim, 0.0),
                          GrowthParams{1.0, 1.0, LowerBoundParams{1.0, 2.0, 2.0}});
    m.name = "testcase3";
    return m;
}

SdeModel fene(double T) {
    require(T > 0.0, "fene: T must be positive");
    constexpr int dim = 3;
    const double r_max = 1.0 - 1e-10;

    SdeModel m;
    m.name = "fene";
    m.state_dim = m.noise_dim = dim;
    m.drift = [](std::span<const double> x, std::span<double> f) {
        const double r2 = dot(x, x);
        if (r2 >= 1.0) throw std::domain_error("fene drift: state outside the open unit ball");
        const double scale = -1.0 / (1.0 - r2);
        for (std::size_t i = 0; i < x.size(); ++i) f[i] = scale * x[i];
    };
    m.volatility = identity_volatility(dim);
    m.initial_state = Vec(dim, 0.0);
    m.horizon = T;
    m.clamp_radius = r_max;
    m.recommended_policy = [T, r_max](double delta) {
        TimestepPolicy p;
        // (1 - ||x||^2)/4, kept positive by the clamp radius so the policy
        // stays evaluable if a state sits exactly on the clamp boundary.
        p.base_h = [r_max](std::span<const double> x) {
            const double r2 = std::min(dot(x, x), r_max * r_max);
            return 0.25 * (1.0 - r2);
        };
        p.delta = delta;
        p.horizon = T;
        p.mode = DeltaMode::ScaleAll;
        return p;
    };
    // <x,f> = -r^2/(1-r^2) and h f^2/2 = r^2/(8(1-r^2)): lhs <= 0 inside the ball.
    m.growth = {0.0, 0.0, std::nullopt};
    return m;
}

SdeModel van_der_pol(double alpha, double mu, double delta_p, double beta, double T,
                     double gamma) {
    require(alpha > 0.0 && mu > 0.0 && delta_p > 0.0 && beta > 0.0,
            "van_der_pol: parameters must be positive");
    require(T > 0.0, "van_der_pol: T must be positive");
    require(gamma > 0.0, "van_der_pol: gamma must be positive");

    SdeModel m;
    m.name = "van_der_pol";
    m.state_dim = 2;
    m.noise_dim = 1;
    m.drift = [alpha, mu, delta_p](std::span<const double> x, std::span<double> f) {
        f[0] = x[1];
        f[1] = alpha * (mu - x[0] * x[0]) * x[1] - delta_p * x[0];
    };
    m.volatility = [beta](std::span<const double>, Matrix& g) {
        g(0, 0) = 0.0;
        g(1, 0) = beta;
    };
    m.initial_state = {1.0, 0.0};
    m.horizon = T;
    DriftFn drift = m.drift;
    m.recommended_policy = [drift, gamma, T](double delta) {
        return ratio_policy(drift, 2, gamma, T, RatioVariant::SquaredRatio, delta);
    };
    // <x,f> <= (alpha mu + |1-delta|/2) ||x||^2 and h ||f||^2 <= gamma ||x||^2.
    const double a = alpha * mu + 0.5 * std::abs(1.0 - delta_p) + 0.5 * gamma;
    const double c1 = 1.0 + 2.0 * delta_p * delta_p + 4.0 * alpha * alpha * mu * mu;
    m.growth = {a, 0.0, LowerBoundParams{4.0 * alpha * alpha / gamma, c1 / gamma + 1.0 / T, 4.0}};
    return m;
}

SdeModel lorenz(double a1, double a2, double a3, double b1, double b2, double b3, double T,
                double gamma) {
    require(a1 > 0.0 && a2 > 0.0 && a3 > 0.0 && b1 > 0.0 && b2 > 0.0 && b3 > 0.0,
            "lorenz: parameters must be positive");
    require(T > 0.0, "lorenz: T must be positive");
    require(gamma > 0.0, "lorenz: gamma must be positive");

    SdeModel m;
    m.name = "lorenz";
    m.state_dim = m.noise_dim = 3;
    m.drift = [a1, a2, a3](std::span<const double> x, std::span<double> f) {
        f[0] = a1 * (x[1] - x[0]);
        f[1] = a2 * x[0] - x[1] - x[0] * x[2];
        f[2] = x[0] * x[1] - a3 * x[2];
    };
    m.volatility = [b1, b2, b3](std::span<const double> x, Matrix& g) {
        g.set_zero();
        g(0, 0) = b1 * x[0];
        g(1, 1) = b2 * x[1];
        g(2, 2) = b3 * x[2];
    };
    m.initial_state = {1.0, 1.0, 1.0};
    m.horizon = T;
    DriftFn drift = m.drift;
    m.recommended_policy = [drift, gamma, T](double delta) {
        return ratio_policy(drift, 3, gamma, T, RatioVariant::SquaredRatio, delta);
    };
    // Cubic terms cancel in <x,f>, so <x,f> <= (a1+a2)/2 ||x||^2;
    // ||f||^2 <= c1 ||x||^2 + 5 ||x||^4 gives the polynomial floor.
    const double a = 0.5 * (a1 + a2) + 0.5 * gamma;
    const double c1 = 2.0 * a1 * a1 + 3.0 * a2 * a2 + 3.0 + 2.0 * a3 * a3;
    m.growth = {a, 0.0, LowerBoundParams{5.0 / gamma, c1 / gamma + 1.0 / T, 2.0}};
    return m;
}

SdeModel langevin(DriftFn grad_v, int dim, double T, Vec x0, GrowthParams growth) {
    require(dim > 0, "langevin: dimension must be positive");
    require(T > 0.0, "langevin: T must be positive");
    if (x0.empty()) x0.assign(static_cast<std::size_t>(dim), 0.0);
    require(static_cast<int>(x0.size()) == dim, "langevin: initial state has wrong dimension");

    SdeModel m;
    m.name = "langevin";
    m.state_dim = m.noise_dim = dim;
    m.drift = [grad_v = std::move(grad_v), dim](std::span<const double> x, std::span<double> f) {
        grad_v(x, f);
        for (int i = 0; i < dim; ++i) f[i] = -f[i];
    };
    m.volatility = identity_volatility(dim);
    m.initial_state = std::move(x0);
    m.horizon = T;
    DriftFn drift = m.drift;
    m.recommended_policy = [drift, dim, T](double delta) {
        return max_ratio_policy(drift, dim, T, delta);
    };
    m.growth = growth;
    return m;
}

SdeModel cubic_drift(double T, double x0) {
    DriftFn grad_v = [](std::span<const double> x, std::span<double> g) {
        g[0] = x[0] * x[0] * x[0];
    };
    // h = min(T, x^-2): lhs = -x^4 + h x^6 / 2 <= -x^4/2 <= 0.
    SdeModel m = langevin(grad_v, 1, T, {x0},
                          GrowthParams{0.0, 0.0, LowerBoundParams{1.0, 1.0 / T, 2.0}});
    m.name = "cubic";
    m.recommended_policy = [T](double delta) { return scalar_power_policy(1.0, 3.0, T, delta); };
    return m;
}

SdeModel double_well(double T, double x0) {
    DriftFn grad_v = [](std::span<const double> x, std::span<double> g) {
        g[0] = x[0] * x[0] * x[0] - x[0];
    };
    SdeModel m = langevin(grad_v, 1, T, {x0},
                          GrowthParams{1.0, 1.0, LowerBoundParams{1.0, 2.0, 2.0}});
    m.name = "double_well";
    return m;
}

SdeModel geometric_brownian(double mu, double sigma, double x0, double T) {
    require(sigma >= 0.0, "geometric_brownian: sigma must be non-negative");
    require(T > 0.0, "geometric_brownian: T must be positive");

    SdeModel m;
    m.name = "gbm";
    m.state_dim = m.noise_dim = 1;
    m.drift = [mu](std::span<const double> x, std::span<double> f) { f[0] = mu * x[0]; };
    m.volatility = scalar_volatility(sigma);
    m.initial_state = {x0};
    m.horizon = T;
    m.recommended_policy = [T](double delta) { return constant_policy(T, T, delta); };
    // lhs/x^2 = mu + T mu^2 / 2; declare twice the quadratic term as cushion
    m.growth = {std::max(0.0, mu) + T * mu * mu, 0.0, LowerBoundParams{1.0, 1.0 / T, 2.0}};
    m.exact_solution = [mu, sigma, x0](BrownianPath& w, double t) {
        const double wt = w.sample_at(t)[0];
        return Vec{x0 * std::exp((mu - 0.5 * sigma * sigma) * t + sigma * wt)};
    };
    return m;
}

std::vector<std::string> model_names() {
    return {"testcase1", "testcase2",  "testcase3", "fene",  "ginzburg_landau", "verhulst",
            "van_der_pol", "lorenz",   "cubic",     "gbm",   "double_well"};
}

std::vector<std::string> known_model_params(const std::string& name) {
    if (name == "ginzburg_landau" || name == "verhulst") return {"eta", "lambda", "sigma", "x0"};
    if (name == "van_der_pol") return {"alpha", "mu", "delta", "beta", "gamma"};
    if (name == "lorenz")
        return {"alpha1", "alpha2", "alpha3", "beta1", "beta2", "beta3", "gamma"};
    if (name == "gbm") return {"mu", "sigma", "x0"};
    if (name == "cubic" || name == "double_well") return {"x0"};
    return {};
}

SdeModel make_model(const std::string& name, const std::map<std::string, double>& params,
                    double T_override) {
    const double T = T_override > 0.0 ? T_override : 1.0;
    if (name == "testcase1") return testcase1(T);
    if (name == "testcase2") return testcase2(T);
    if (name == "testcase3") return testcase3(T);
    if (name == "fene") return fene(T);
    if (name == "ginzburg_landau") {
        SdeModel m = ginzburg_landau(get_param(params, "eta", 1.0), get_param(params, "lambda", 1.0),
                                     get_param(params, "sigma", 1.0), T);
        m.initial_state = {get_param(params, "x0", 1.0)};
        return m;
    }
    if (name == "verhulst") {
        SdeModel m = verhulst(get_param(params, "eta", 1.0), get_param(params, "lambda", 1.0),
                              get_param(params, "sigma", 1.0), T);
        m.initial_state = {get_param(params, "x0", 1.0)};
        return m;
    }
    if (name == "van_der_pol")
        return van_der_pol(get_param(params, "alpha", 1.0), get_param(params, "mu", 1.0),
                           get_param(params, "delta", 1.0), get_param(params, "beta", 1.0), T,
                           get_param(params, "gamma", 1.0));
    if (name == "lorenz")
        return lorenz(get_param(params, "alpha1", 10.0), get_param(params, "alpha2", 28.0),
                      get_param(params, "alpha3", 8.0 / 3.0), get_param(params, "beta1", 0.3),
                      get_param(params, "beta2", 0.3), get_param(params, "beta3", 0.3), T,
                      get_param(params, "gamma", 1.0));
    if (name == "cubic") return cubic_drift(T, get_param(params, "x0", 2.0));
    if (name == "double_well") return double_well(T, get_param(params, "x0", 0.0));
    if (name == "gbm")
        return geometric_brownian(get_param(params, "mu", 0.05), get_param(params, "sigma", 0.2),
                                  get_param(params, "x0", 1.0), T);
    throw std::invalid_argument("unknown model: " + name);
}

AssumptionReport check_timestep_assumption(const TimestepPolicy& policy, const SdeModel& model,
                                           const GrowthParams& params,
                                           const std::vector<Vec>& samples) {
    return check_timestep_assumption(policy, model.drift, params, samples);
}

std::vector<Vec> model_validation_samples(const SdeModel& model, std::size_t count,
                                          double max_radius, std::uint64_t seed) {
    double radius = max_radius;
    if (model.clamp_radius) radius = std::min(radius, *model.clamp_radius);
    return sample_states(model.state_dim, count, radius, seed);
}

}  // namespace adem
