#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace adem {

// Fully resolved experiment description, shared by all CLI subcommands.
struct ExperimentConfig {
    std::string experiment;  // run | converge | stability | steps | validate
    std::string model;
    std::string scheme = "adaptive_em";
    std::map<std::string, double> params;  // model and scheme parameters by key
    std::vector<double> resolutions;       // deltas (adaptive) or h/T (fixed step)
    std::size_t paths = 1000;
    double horizon = 0.0;  // 0 means the model default
    double moment_p = 2.0;
    std::uint64_t seed = 12345;
    std::string out;
    unsigned threads = 0;  // 0 means hardware concurrency
    int ref_refinement = 4;
    bool exact_reference = false;  // converge against the closed form when available
};

// Option values as they arrive from the command line; unset fields do not
// override config-file values.
struct ConfigOverrides {
    std::optional<std::string> experiment;
    std::optional<std::string> model;
    std::optional<std::string> scheme;
    std::optional<std::string> out;
    std::optional<std::vector<double>> deltas;
    std::optional<std::vector<long long>> steps_list;
    std::optional<std::size_t> paths;
    std::optional<double> horizon;
    std::optional<double> moment_p;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<int> ref_refinement;
    std::optional<bool> exact_reference;
    std::vector<std::string> params;  // raw key=value items
};

struct ParseResult {
    ExperimentConfig config;
    std::vector<std::string> errors;  // all validation problems, not just the first
    bool ok() const { return errors.empty(); }
};

// Merges defaults, an optional JSON config file, flag overrides and the
// ADEM_SEED fallback (in increasing precedence for the seed: default, env,
// file, flag) and validates everything against the catalogues.
ParseResult parse_config(const std::optional<std::string>& config_file,
                         const ConfigOverrides& overrides,
                         const std::optional<std::string>& env_seed);

}  // namespace adem
