/**
 * @file runner.hpp
 * @brief Executes a validated RunConfig and writes its outputs.
 */
#pragma once

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "ptdiamond/bands.hpp"
#include "ptdiamond/cls.hpp"
#include "ptdiamond/config.hpp"
#include "ptdiamond/diagnostics.hpp"
#include "ptdiamond/evolve.hpp"
#include "ptdiamond/output.hpp"

namespace ptdiamond {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitValidation = 2,
  kExitNumerical = 3,
  kExitBlowUp = 4,
};

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::filesystem::path> files;  ///< data files (each has a .meta.json)
};

/// Runs one configuration; library errors are mapped to exit codes.
RunResult run(RunConfig config, std::ostream* progress = nullptr);

/// Parses a sweep document: {"threads": k, "runs": [config | {"scenario": name}]}.
std::vector<RunConfig> parse_sweep(const nlohmann::json& j, int& threads);

/// Runs independent configurations on a small worker pool.
std::vector<RunResult> run_all(const std::vector<RunConfig>& runs, int threads);

}  // namespace ptdiamond
