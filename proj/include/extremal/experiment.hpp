#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace extremal {

// Exit-code contract shared by the C API and the command line tool.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolation = 2;

struct RunResult {
  int exit_code = kExitOk;
  std::string format;  // csv | json | text
  std::string data;    // everything meant for standard output
};

// config: {"command": ..., "params": {...}, "seed": u64, "format": ..., "precision": bits, "workers": n}.
// Unknown keys are rejected. Errors are thrown as extremal::Error.
RunResult run_experiment(const nlohmann::json& config);

// Fills defaults and validates the top level; params are checked per command in run_experiment.
nlohmann::json normalize_config(const nlohmann::json& config);

// Per-command parameter and column documentation, used by --help.
std::string command_help(const std::string& command);

}  // namespace extremal
