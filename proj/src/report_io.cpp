#include "adem/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace adem {

namespace {

using nlohmann::json;

std::string strip_extension(const std::string& path) {
    for (const char* ext : {".csv", ".json"}) {
        if (path.size() > std::strlen(ext) && path.ends_with(ext))
            return path.substr(0, path.size() - std::strlen(ext));
    }
    return path;
}

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // \n line endings everywhere
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    return out;
}

json config_echo(const ExperimentConfig& config) {
    json j;
    j["experiment"] = config.experiment;
    j["model"] = config.model;
    j["scheme"] = config.scheme;
    j["params"] = config.params;
    j["resolutions"] = config.resolutions;
    j["paths"] = config.paths;
    j["horizon"] = config.horizon;
    j["moment_p"] = config.moment_p;
    j["seed"] = config.seed;
    j["ref_refinement"] = config.ref_refinement;
    j["exact_reference"] = config.exact_reference;
    return j;
}

void write_json(const json& j, const std::string& path) {
    auto out = open_or_throw(path);
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write output file: " + path);
}

double json_safe(double v) { return std::isfinite(v) ? v : std::nan(""); }

}  // namespace

std::string format_sig(double value, int sig_digits) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";

    // round to sig_digits first, then re-render in plain decimal
    char ebuf[64];
    std::snprintf(ebuf, sizeof ebuf, "%.*e", sig_digits - 1, value);
    const char* epos = std::strchr(ebuf, 'e');
    const int exp10 = std::atoi(epos + 1);
    if (exp10 >= 18 || exp10 <= -18) return ebuf;  // decimal rendering would be unreadable
    const double rounded = std::strtod(ebuf, nullptr);

    int decimals = sig_digits - 1 - exp10;
    if (decimals < 0) decimals = 0;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
    return buf;
}

std::string convergence_csv(const ConvergenceReport& report) {
    std::ostringstream out;
    out << "resolution,avg_dt,rms_error_T,rms_error_sup,mean_steps,diverged_fraction\n";
    for (const SweepRow& row : report.rows) {
        out << format_sig(row.resolution) << ',' << format_sig(row.avg_dt) << ','
            << format_sig(row.rms_error_T) << ',' << format_sig(row.rms_error_sup) << ','
            << format_sig(row.mean_steps) << ',' << format_sig(row.diverged_fraction) << '\n';
    }
    return out.str();
}

void emit_convergence_report(const ConvergenceReport& report, const ExperimentConfig& config,
                             const std::string& out_path) {
    const std::string base = strip_extension(out_path);
    {
        auto out = open_or_throw(base + ".csv");
        out << convergence_csv(report);
        if (!out) throw std::runtime_error("cannot write output file: " + base + ".csv");
    }
    json j;
    j["config"] = config_echo(config);
    j["fitted_order_T"] = json_safe(report.fitted_order_T);
    j["fitted_order_sup"] = json_safe(report.fitted_order_sup);
    j["paths_per_point"] = report.paths_per_point;
    j["seed"] = report.seed;
    j["rows"] = json::array();
    for (const SweepRow& row : report.rows) {
        j["rows"].push_back({{"resolution", row.resolution},
                             {"avg_dt", json_safe(row.avg_dt)},
                             {"rms_error_T", json_safe(row.rms_error_T)},
                             {"rms_error_sup", json_safe(row.rms_error_sup)},
                             {"mean_steps", json_safe(row.mean_steps)},
                             {"diverged_fraction", row.diverged_fraction}});
    }
    write_json(j, base + ".json");
}

void emit_moment_report(const MomentReport& report, const ExperimentConfig& config,
                        const std::string& out_path) {
    const std::string base = strip_extension(out_path);
    {
        auto out = open_or_throw(base + ".csv");
        out << "scheme,resolution,estimate,std_error,diverged_fraction\n";
        for (const MomentRow& row : report.rows) {
            out << row.scheme << ',' << format_sig(row.resolution) << ','
                << format_sig(row.estimate) << ',' << format_sig(row.std_error) << ','
                << format_sig(row.diverged_fraction) << '\n';
        }
        if (!out) throw std::runtime_error("cannot write output file: " + base + ".csv");
    }
    json j;
    j["config"] = config_echo(config);
    j["p"] = report.p;
    j["paths"] = report.paths;
    j["seed"] = report.seed;
    j["rows"] = json::array();
    for (const MomentRow& row : report.rows) {
        j["rows"].push_back({{"scheme", row.scheme},
                             {"resolution", row.resolution},
                             {"estimate", json_safe(row.estimate)},
                             {"std_error", json_safe(row.std_error)},
                             {"diverged_fraction", row.diverged_fraction}});
    }
    write_json(j, base + ".json");
}

void emit_step_report(const StepCountReport& report, const ExperimentConfig& config,
                      const std::string& out_path) {
    const std::string base = strip_extension(out_path);
    {
        auto out = open_or_throw(base + ".csv");
        out << "delta,mean_steps,max_steps\n";
        for (const StepCountRow& row : report.rows) {
            out << format_sig(row.delta) << ',' << format_sig(row.mean_steps) << ','
                << format_sig(row.max_steps) << '\n';
        }
        if (!out) throw std::runtime_error("cannot write output file: " + base + ".csv");
    }
    json j;
    j["config"] = config_echo(config);
    j["paths"] = report.paths;
    j["seed"] = report.seed;
    j["rows"] = json::array();
    for (const StepCountRow& row : report.rows) {
        j["rows"].push_back({{"delta", row.delta},
                             {"mean_steps", row.mean_steps},
                             {"max_steps", row.max_steps}});
    }
    write_json(j, base + ".json");
}

void emit_trajectory(const SimulatedPath& path, const ExperimentConfig& config,
                     const std::string& out_path) {
    const std::string base = strip_extension(out_path);
    {
        auto out = open_or_throw(base + ".csv");
        out << "t";
        const std::size_t dim = path.states.empty() ? 0 : path.states.front().size();
        for (std::size_t i = 0; i < dim; ++i) out << ",x" << i;
        out << '\n';
        for (std::size_t k = 0; k < path.times.size(); ++k) {
            out << format_sig(path.times[k]);
            for (double c : path.states[k]) out << ',' << format_sig(c);
            out << '\n';
        }
        if (!out) throw std::runtime_error("cannot write output file: " + base + ".csv");
    }
    json j;
    j["config"] = config_echo(config);
    j["step_count"] = path.step_count;
    j["diverged"] = path.diverged;
    if (path.diverged) {
        j["failure"] = path.failure;
        j["divergence_time"] = json_safe(path.divergence_time);
    }
    j["solver_iterations"] = path.solver_iterations;
    write_json(j, base + ".json");
}

void emit_validation(const AssumptionReport& timestep_report,
                     const std::optional<AssumptionReport>& lower_bound_report,
                     const ExperimentConfig& config, const std::string& out_path) {
    const std::string base = strip_extension(out_path);
    json j;
    j["config"] = config_echo(config);
    auto dump_report = [](const AssumptionReport& r) {
        json out;
        out["samples_checked"] = r.samples_checked;
        out["pass"] = r.pass();
        out["violation_count"] = r.violations.size();
        out["worst_margin"] = json_safe(r.worst_margin);
        json vs = json::array();
        const std::size_t shown = std::min<std::size_t>(r.violations.size(), 20);
        for (std::size_t i = 0; i < shown; ++i) {
            vs.push_back({{"x", r.violations[i].x},
                          {"lhs", r.violations[i].lhs},
                          {"bound", r.violations[i].bound}});
        }
        out["violations"] = vs;
        return out;
    };
    j["timestep_assumption"] = dump_report(timestep_report);
    if (lower_bound_report) j["lower_bound"] = dump_report(*lower_bound_report);
    write_json(j, base + ".json");
}

}  // namespace adem
