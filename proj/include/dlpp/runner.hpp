// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dlpp/config.hpp"

namespace dlpp {

enum class Command { Solve, Simulate, Compare, Path, Tasep, Convergence };

Command parse_command(std::string_view name);
std::string to_string(Command command);

struct RunResult {
    int exit_status = 0;
    std::vector<std::filesystem::path> artifacts;
    /// The command's summary report (also written to <command>_report.json).
    nlohmann::json report;
};

/// Runs one experiment command and writes its artifacts under out_dir. Every
/// artifact gets a <artifact>.meta.json sidecar with the config hash, seeds
/// and version. CSV/NDJSON artifacts are byte-identical across runs with the
/// same config; reports carry timings and are not.
RunResult run(const ExperimentConfig& config, Command command, const std::filesystem::path& out_dir);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dlpp
