#pragma once

#include <string>

#include "adem/config.hpp"
#include "adem/harness.hpp"

namespace adem {

// Decimal rendering with the given number of significant digits (no
// exponent notation); "inf"/"nan" for non-finite values.
std::string format_sig(double value, int sig_digits = 9);

// Each emitter writes <base>.csv and <base>.json, where base is the output
// path with any trailing .csv/.json stripped.  Throws std::runtime_error
// with the path in the message when the files cannot be written.
void emit_convergence_report(const ConvergenceReport& report, const ExperimentConfig& config,
                             const std::string& out_path);
void emit_moment_report(const MomentReport& report, const ExperimentConfig& config,
                        const std::string& out_path);
void emit_step_report(const StepCountReport& report, const ExperimentConfig& config,
                      const std::string& out_path);
void emit_trajectory(const SimulatedPath& path, const ExperimentConfig& config,
                     const std::string& out_path);
void emit_validation(const AssumptionReport& timestep_report,
                     const std::optional<AssumptionReport>& lower_bound_report,
                     const ExperimentConfig& config, const std::string& out_path);

std::string convergence_csv(const ConvergenceReport& report);

}  // namespace adem
