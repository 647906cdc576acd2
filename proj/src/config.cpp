#include "adem/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "adem/models.hpp"
#include "adem/schemes.hpp"

namespace adem {

namespace {

using nlohmann::json;

const std::set<std::string> kExperiments = {"run", "converge", "stability", "steps", "validate"};

bool parse_kv(const std::string& item, std::string& key, double& value) {
    const auto pos = item.find('=');
    if (pos == std::string::npos || pos == 0) return false;
    key = item.substr(0, pos);
    try {
        std::size_t consumed = 0;
        value = std::stod(item.substr(pos + 1), &consumed);
        return consumed == item.size() - pos - 1;
    } catch (const std::exception&) {
        return false;
    }
}

void apply_file(const json& j, ExperimentConfig& cfg, std::vector<std::string>& errors) {
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "experiment") cfg.experiment = value.get<std::string>();
            else if (key == "model") cfg.model = value.get<std::string>();
            else if (key == "scheme") cfg.scheme = value.get<std::string>();
            else if (key == "out") cfg.out = value.get<std::string>();
            else if (key == "deltas") cfg.resolutions = value.get<std::vector<double>>();
            else if (key == "steps_list") {
                cfg.resolutions.clear();
                for (const auto& n : value) cfg.resolutions.push_back(1.0 / n.get<double>());
            } else if (key == "paths" || key == "M") cfg.paths = value.get<std::size_t>();
            else if (key == "horizon" || key == "T") cfg.horizon = value.get<double>();
            else if (key == "moment_p") cfg.moment_p = value.get<double>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "threads") cfg.threads = value.get<unsigned>();
            else if (key == "ref_refinement") cfg.ref_refinement = value.get<int>();
            else if (key == "exact_reference") cfg.exact_reference = value.get<bool>();
            else if (key == "params") {
                for (const auto& [pk, pv] : value.items()) cfg.params[pk] = pv.get<double>();
            } else {
                errors.push_back("unknown config key: " + key);
            }
        } catch (const std::exception& e) {
            errors.push_back("bad value for config key '" + key + "': " + e.what());
        }
    }
}

void validate(ExperimentConfig& cfg, std::vector<std::string>& errors) {
    if (!kExperiments.count(cfg.experiment))
        errors.push_back("unknown experiment: '" + cfg.experiment +
                         "' (expected run, converge, stability, steps or validate)");

    const auto models = model_names();
    if (std::find(models.begin(), models.end(), cfg.model) == models.end())
        errors.push_back("unknown model: '" + cfg.model + "'");

    const auto schemes = scheme_names();
    if (std::find(schemes.begin(), schemes.end(), cfg.scheme) == schemes.end())
        errors.push_back("unknown scheme: '" + cfg.scheme + "'");

    if (cfg.resolutions.empty()) {
        if (cfg.experiment == "run" || cfg.experiment == "validate") {
            cfg.resolutions = {0.25};
        } else {
            errors.push_back("empty resolution list");
        }
    }
    for (double r : cfg.resolutions) {
        if (!(r > 0.0) || r > 1.0 || !std::isfinite(r)) {
            errors.push_back("resolutions must lie in (0, 1]");
            break;
        }
    }
    if (cfg.paths == 0) errors.push_back("paths must be positive");
    if (cfg.horizon < 0.0 || !std::isfinite(cfg.horizon))
        errors.push_back("horizon must be positive");
    if (cfg.moment_p < 1.0) errors.push_back("moment_p must be at least 1");
    if (cfg.ref_refinement < 2) errors.push_back("ref_refinement must be at least 2");

    // every --param key must mean something to the chosen model or scheme
    const auto mp = known_model_params(cfg.model);
    const auto sp = known_scheme_params(cfg.scheme);
    for (const auto& [key, value] : cfg.params) {
        (void)value;
        const bool known = std::find(mp.begin(), mp.end(), key) != mp.end() ||
                           std::find(sp.begin(), sp.end(), key) != sp.end();
        if (!known)
            errors.push_back("parameter '" + key + "' is not used by model '" + cfg.model +
                             "' or scheme '" + cfg.scheme + "'");
    }
}

}  // namespace

ParseResult parse_config(const std::optional<std::string>& config_file,
                         const ConfigOverrides& overrides,
                         const std::optional<std::string>& env_seed) {
    ParseResult result;
    ExperimentConfig& cfg = result.config;

    if (env_seed) {
        try {
            cfg.seed = std::stoull(*env_seed);
        } catch (const std::exception&) {
            result.errors.push_back("ADEM_SEED is not a valid unsigned integer: " + *env_seed);
        }
    }

    if (config_file) {
        std::ifstream in(*config_file);
        if (!in) {
            result.errors.push_back("cannot open config file: " + *config_file);
        } else {
            try {
                json j = json::parse(in);
                apply_file(j, cfg, result.errors);
            } catch (const std::exception& e) {
                result.errors.push_back("cannot parse config file: " + std::string(e.what()));
            }
        }
    }

    // flags override file values
    if (overrides.experiment) cfg.experiment = *overrides.experiment;
    if (overrides.model) cfg.model = *overrides.model;
    if (overrides.scheme) cfg.scheme = *overrides.scheme;
    if (overrides.out) cfg.out = *overrides.out;
    if (overrides.deltas) cfg.resolutions = *overrides.deltas;
    if (overrides.steps_list) {
        cfg.resolutions.clear();
        for (long long n : *overrides.steps_list) {
            if (n <= 0) {
                result.errors.push_back("steps-list entries must be positive");
                break;
            }
            cfg.resolutions.push_back(1.0 / static_cast<double>(n));
        }
    }
    if (overrides.paths) cfg.paths = *overrides.paths;
    if (overrides.horizon) cfg.horizon = *overrides.horizon;
    if (overrides.moment_p) cfg.moment_p = *overrides.moment_p;
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.threads) cfg.threads = *overrides.threads;
    if (overrides.ref_refinement) cfg.ref_refinement = *overrides.ref_refinement;
    if (overrides.exact_reference) cfg.exact_reference = *overrides.exact_reference;
    for (const std::string& item : overrides.params) {
        std::string key;
        double value = 0.0;
        if (parse_kv(item, key, value)) {
            cfg.params[key] = value;
        } else {
            result.errors.push_back("bad --param (expected key=value with numeric value): " + item);
        }
    }

    validate(cfg, result.errors);
    return result;
}

}  // namespace adem
