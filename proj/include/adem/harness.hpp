#pragma once

#include <cstdint>

#include "adem/schemes.hpp"

namespace adem {

// Runs body(i) for i in [0, n).  Results must be written to per-index
// slots; with that discipline the output is identical for any thread
// count.  threads == 0 means hardware concurrency.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

enum class ErrorReference { CoupledRefinement, ExactSolution };

struct SampleError {
    double err_terminal = 0.0;
    double err_sup = 0.0;
    std::size_t steps = 0;
    bool diverged = false;
};

// Simulates the scheme at `resolution` and again at resolution /
// ref_refinement on the same Brownian path (bridge-refined), and returns
// the terminal-value and max-magnitude differences.
SampleError coupled_error_sample(const SdeModel& model, const SchemeSpec& family,
                                 double resolution, int ref_refinement, std::uint64_t seed,
                                 std::uint64_t path_index, double T);

// Same error metrics against the model's closed-form solution.
SampleError exact_error_sample(const SdeModel& model, const SchemeSpec& family, double resolution,
                               std::uint64_t seed, std::uint64_t path_index, double T);

struct SweepRow {
    double resolution = 0.0;
    double avg_dt = 0.0;  // T / mean(N_T)
    double rms_error_T = 0.0;
    double rms_error_sup = 0.0;
    double mean_steps = 0.0;
    double diverged_fraction = 0.0;
};

struct ConvergenceReport {
    std::vector<SweepRow> rows;  // sorted by avg_dt
    double fitted_order_T = std::numeric_limits<double>::quiet_NaN();
    double fitted_order_sup = std::numeric_limits<double>::quiet_NaN();
    std::size_t paths_per_point = 0;
    std::uint64_t seed = 0;
};

struct SweepOptions {
    int ref_refinement = 4;
    unsigned threads = 0;
    ErrorReference reference = ErrorReference::CoupledRefinement;
};

// Strong-error sweep: per resolution, RMS of the per-path errors over
// `paths` samples with deterministic per-path noise streams, then a
// least-squares order fit of log error against log average timestep.
ConvergenceReport strong_error_sweep(const SdeModel& model, const SchemeSpec& family,
                                     const std::vector<double>& resolutions, std::size_t paths,
                                     std::uint64_t seed, double T, const SweepOptions& options = {});

// Ordinary least-squares slope of log(error) against log(avg_dt).
double fit_order(std::span<const double> avg_dt, std::span<const double> error);

struct MomentRow {
    std::string scheme;
    double resolution = 0.0;
    double estimate = 0.0;    // mean of sup_t ||X||^p over non-diverged paths
    double std_error = 0.0;
    double diverged_fraction = 0.0;
};

struct MomentReport {
    std::vector<MomentRow> rows;
    double p = 2.0;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
};

// Monte Carlo estimate of E[sup_t ||X||^p] per scheme, with divergence
// fractions reported separately so exploding paths cannot poison the mean.
MomentReport moment_sweep(const SdeModel& model, const std::vector<SchemeSpec>& schemes, double p,
                          std::size_t paths, double T, std::uint64_t seed, unsigned threads = 0);

struct StepCountRow {
    double delta = 0.0;
    double mean_steps = 0.0;
    double max_steps = 0.0;
};

struct StepCountReport {
    std::vector<StepCountRow> rows;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
};

// Mean and max N_T for the model's recommended adaptive policy per delta.
StepCountReport step_count_stats(const SdeModel& model, const std::vector<double>& deltas,
                                 std::size_t paths, double T, std::uint64_t seed,
                                 unsigned threads = 0);

}  // namespace adem
