#pragma once

#include <string>

#include "fdpr/config.hpp"

namespace fdpr {

/// Process exit codes of the command-line front end.
enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_admissibility = 4 };

/// Grid nodes with `per_axis` points on every axis, jittered when perturb > 0.
NodeSet build_nodes(const ExperimentConfig& config, int per_axis);
EvalGrid build_eval_grid(const ExperimentConfig& config);

/// Each runner validates the config and returns the full CSV (or, for
/// theory, key=value) text. Output is a pure function of the config.
std::string run_basis_dump(const ExperimentConfig& config);
std::string run_convergence(const ExperimentConfig& config);
std::string run_lebesgue(const ExperimentConfig& config);
std::string run_theory(const ExperimentConfig& config);

/// Dispatches on config.command.
std::string run(const ExperimentConfig& config);

/// Maps an exception thrown by run() to its exit code.
int exit_code_for(const std::exception& e);

}  // namespace fdpr
