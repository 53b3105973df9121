#pragma once

#include "hitfit/estimator.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hitfit {

struct InputDigest {
    std::string path;
    std::string sha256;
};

/// Everything needed to reproduce a batch run: tool version, digests of the
/// input files, the full configuration, and the results. Only
/// wall_clock_seconds varies between identical runs.
struct RunReport {
    std::string tool_version;
    std::string command;
    std::vector<InputDigest> inputs;
    SimOptions sim_options;
    double grid_dt = 1.0;
    FitConfig fit_config;
    std::vector<std::string> channel_names;
    std::vector<FitResult> results;
    double wall_clock_seconds = 0.0;
};

/// Serializes the report as JSON with a stable key order.
[[nodiscard]] std::string render_report(const RunReport& report);

/// Lowercase hex SHA-256 of a file's bytes.
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

} // namespace hitfit
