#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "adem/config.hpp"
#include "adem/models.hpp"
#include "adem/report_io.hpp"
#include "adem/schemes.hpp"

namespace {

using namespace adem;

// shared flags, attached to every subcommand
struct RawOptions {
    std::string config_file;
    std::string model, scheme, out;
    std::vector<double> deltas;
    std::vector<long long> steps_list;
    std::size_t paths = 0;
    double horizon = 0.0;
    double moment_p = 0.0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    int ref_refinement = 0;
    bool exact_reference = false;
    std::vector<std::string> params;
};

void add_common_options(CLI::App* cmd, RawOptions& raw) {
    cmd->add_option("--config", raw.config_file, "JSON config file; flags override its values");
    cmd->add_option("--model", raw.model, "model name (see --list)");
    cmd->add_option("--scheme", raw.scheme, "scheme name: adaptive_em, uniform_em, tamed_em, backward_euler, ssbe, truncated_em");
    cmd->add_option("--deltas", raw.deltas, "resolution list: delta for adaptive_em, h/T otherwise")->delimiter(',');
    cmd->add_option("--steps-list", raw.steps_list, "resolutions as steps per horizon (h = T/n)")->delimiter(',');
    cmd->add_option("--paths,--M", raw.paths, "Monte Carlo paths per sweep point");
    cmd->add_option("--horizon,-T", raw.horizon, "time horizon T");
    cmd->add_option("--moment-p", raw.moment_p, "moment order p for stability experiments");
    cmd->add_option("--seed", raw.seed, "base seed (fallback: ADEM_SEED, then 12345)");
    cmd->add_option("--threads", raw.threads, "worker threads (0 = hardware); results do not depend on this");
    cmd->add_option("--ref-refinement", raw.ref_refinement, "refinement factor of the coupled reference run");
    cmd->add_flag("--exact-reference", raw.exact_reference, "measure against the closed-form solution when the model has one");
    cmd->add_option("--out", raw.out, "output path base; writes <out>.csv and <out>.json");
    cmd->add_option("--param", raw.params, "model/scheme parameter as key=value (repeatable)");
}

ConfigOverrides to_overrides(const CLI::App* cmd, const RawOptions& raw) {
    ConfigOverrides ov;
    auto set_if = [cmd](const std::string& flag, auto& dst, const auto& src) {
        if (cmd->count(flag) > 0) dst = src;
    };
    set_if("--model", ov.model, raw.model);
    set_if("--scheme", ov.scheme, raw.scheme);
    set_if("--out", ov.out, raw.out);
    set_if("--deltas", ov.deltas, raw.deltas);
    set_if("--steps-list", ov.steps_list, raw.steps_list);
    set_if("--paths", ov.paths, raw.paths);
    set_if("--horizon", ov.horizon, raw.horizon);
    set_if("--moment-p", ov.moment_p, raw.moment_p);
    set_if("--seed", ov.seed, raw.seed);
    set_if("--threads", ov.threads, raw.threads);
    set_if("--ref-refinement", ov.ref_refinement, raw.ref_refinement);
    if (cmd->count("--exact-reference") > 0) ov.exact_reference = true;
    ov.params = raw.params;
    return ov;
}

ExperimentConfig resolve_config(const CLI::App* cmd, const RawOptions& raw,
                                const std::string& experiment) {
    ConfigOverrides ov = to_overrides(cmd, raw);
    ov.experiment = experiment;
    std::optional<std::string> file;
    if (!raw.config_file.empty()) file = raw.config_file;
    std::optional<std::string> env;
    if (const char* s = std::getenv("ADEM_SEED")) env = s;

    ParseResult parsed = parse_config(file, ov, env);
    if (!parsed.ok()) {
        for (const std::string& e : parsed.errors) std::cerr << "error[config]: " << e << "\n";
        std::exit(2);
    }
    return parsed.config;
}

double effective_horizon(const ExperimentConfig& cfg, const SdeModel& model) {
    return cfg.horizon > 0.0 ? cfg.horizon : model.horizon;
}

int run_converge(const ExperimentConfig& cfg) {
    const SdeModel model = make_model(cfg.model, cfg.params, cfg.horizon);
    const SchemeSpec family = make_scheme(cfg.scheme, cfg.params);
    const double T = effective_horizon(cfg, model);

    SweepOptions opts;
    opts.ref_refinement = cfg.ref_refinement;
    opts.threads = cfg.threads;
    if (cfg.exact_reference) {
        if (!model.exact_solution) {
            std::cerr << "error[config]: model '" << cfg.model << "' has no closed-form solution\n";
            return 2;
        }
        opts.reference = ErrorReference::ExactSolution;
    }

    const ConvergenceReport report =
        strong_error_sweep(model, family, cfg.resolutions, cfg.paths, cfg.seed, T, opts);

    std::cout << "model=" << cfg.model << " scheme=" << cfg.scheme << " T=" << T
              << " paths=" << cfg.paths << " seed=" << cfg.seed << "\n";
    std::cout << convergence_csv(report);
    std::cout << "fitted_order_T=" << report.fitted_order_T
              << " fitted_order_sup=" << report.fitted_order_sup << "\n";
    if (!cfg.out.empty()) emit_convergence_report(report, cfg, cfg.out);
    return 0;
}

int run_stability(const ExperimentConfig& cfg) {
    const SdeModel model = make_model(cfg.model, cfg.params, cfg.horizon);
    const SchemeSpec family = make_scheme(cfg.scheme, cfg.params);
    const double T = effective_horizon(cfg, model);

    std::vector<SchemeSpec> schemes;
    for (double r : cfg.resolutions) schemes.push_back(with_resolution(family, r, model, T));
    const MomentReport report =
        moment_sweep(model, schemes, cfg.moment_p, cfg.paths, T, cfg.seed, cfg.threads);

    std::cout << "scheme,resolution,estimate,std_error,diverged_fraction\n";
    for (const MomentRow& row : report.rows) {
        std::cout << row.scheme << ',' << format_sig(row.resolution) << ','
                  << format_sig(row.estimate) << ',' << format_sig(row.std_error) << ','
                  << format_sig(row.diverged_fraction) << "\n";
    }
    if (!cfg.out.empty()) emit_moment_report(report, cfg, cfg.out);
    return 0;
}

int run_steps(const ExperimentConfig& cfg) {
    const SdeModel model = make_model(cfg.model, cfg.params, cfg.horizon);
    const double T = effective_horizon(cfg, model);
    const StepCountReport report =
        step_count_stats(model, cfg.resolutions, cfg.paths, T, cfg.seed, cfg.threads);

    std::cout << "delta,mean_steps,max_steps\n";
    for (const StepCountRow& row : report.rows) {
        std::cout << format_sig(row.delta) << ',' << format_sig(row.mean_steps) << ','
                  << format_sig(row.max_steps) << "\n";
    }
    if (!cfg.out.empty()) emit_step_report(report, cfg, cfg.out);
    return 0;
}

int run_single(const ExperimentConfig& cfg) {
    const SdeModel model = make_model(cfg.model, cfg.params, cfg.horizon);
    const SchemeSpec family = make_scheme(cfg.scheme, cfg.params);
    const double T = effective_horizon(cfg, model);
    const SchemeSpec spec = with_resolution(family, cfg.resolutions.front(), model, T);

    BrownianPath w(model.noise_dim, cfg.seed, 0);
    const SimulatedPath path = simulate(model, spec, w, T);

    std::cout << "steps=" << path.step_count << " diverged=" << (path.diverged ? "yes" : "no");
    if (path.diverged) std::cout << " failure=" << path.failure;
    if (!path.diverged) {
        std::cout << " terminal=[";
        for (std::size_t i = 0; i < path.terminal_state().size(); ++i)
            std::cout << (i ? "," : "") << format_sig(path.terminal_state()[i]);
        std::cout << "]";
    }
    std::cout << "\n";
    if (!cfg.out.empty()) emit_trajectory(path, cfg, cfg.out);
    return 0;
}

int run_validate(const ExperimentConfig& cfg) {
    const SdeModel model = make_model(cfg.model, cfg.params, cfg.horizon);
    const TimestepPolicy policy = model.recommended_policy(cfg.resolutions.front());

    const auto samples = model_validation_samples(model, 10000, 1000.0, cfg.seed);
    const AssumptionReport ts = check_timestep_assumption(policy, model, model.growth, samples);
    std::optional<AssumptionReport> lb;
    if (model.growth.lower_bound)
        lb = check_lower_bound(policy, *model.growth.lower_bound, samples);

    std::cout << "timestep assumption: " << (ts.pass() ? "pass" : "VIOLATED") << " ("
              << ts.violations.size() << " of " << ts.samples_checked
              << " samples, worst margin " << format_sig(ts.worst_margin, 6) << ")\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(ts.violations.size(), 10); ++i) {
        const auto& v = ts.violations[i];
        std::cout << "  x=[";
        for (std::size_t k = 0; k < v.x.size(); ++k) std::cout << (k ? "," : "") << format_sig(v.x[k], 6);
        std::cout << "] lhs=" << format_sig(v.lhs, 6) << " bound=" << format_sig(v.bound, 6) << "\n";
    }
    if (lb) {
        std::cout << "timestep lower bound: " << (lb->pass() ? "pass" : "VIOLATED") << " ("
                  << lb->violations.size() << " of " << lb->samples_checked << " samples)\n";
    } else {
        std::cout << "timestep lower bound: no declared constants for this model\n";
    }
    if (!cfg.out.empty()) emit_validation(ts, lb, cfg, cfg.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive-timestep Euler-Maruyama toolkit: path simulation, strong-convergence "
                 "sweeps, stability experiments and timestep-assumption validation"};
    app.require_subcommand(0, 1);

    bool list = false;
    app.add_flag("--list", list, "list model and scheme names, then exit");

    RawOptions raw;
    CLI::App* converge = app.add_subcommand("converge", "strong-error sweep with coupled or exact reference");
    CLI::App* stability = app.add_subcommand("stability", "sup-moment estimates and divergence fractions");
    CLI::App* steps = app.add_subcommand("steps", "step-count statistics of the adaptive scheme");
    CLI::App* run = app.add_subcommand("run", "simulate one path and dump its knots");
    CLI::App* validate = app.add_subcommand("validate", "check the timestep assumptions for a model's recommended policy");
    for (CLI::App* cmd : {converge, stability, steps, run, validate}) add_common_options(cmd, raw);

    CLI11_PARSE(app, argc, argv);

    if (list) {
        std::cout << "models:";
        for (const auto& name : adem::model_names()) std::cout << ' ' << name;
        std::cout << "\nschemes:";
        for (const auto& name : adem::scheme_names()) std::cout << ' ' << name;
        std::cout << "\n";
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << "error[config]: a subcommand is required (run --help)\n";
        return 2;
    }

    try {
        if (converge->parsed()) return run_converge(resolve_config(converge, raw, "converge"));
        if (stability->parsed()) return run_stability(resolve_config(stability, raw, "stability"));
        if (steps->parsed()) return run_steps(resolve_config(steps, raw, "steps"));
        if (run->parsed()) return run_single(resolve_config(run, raw, "run"));
        if (validate->parsed()) return run_validate(resolve_config(validate, raw, "validate"));
    } catch (const std::invalid_argument& e) {
        std::cerr << "error[config]: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error[io]: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error[runtime]: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
