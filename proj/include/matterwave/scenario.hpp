#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "matterwave/config.hpp"

namespace matterwave {

struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::string> notes;  // one per column: meaning and unit
    std::vector<std::vector<double>> rows;

    void add_column(std::string column, std::string note);
    /// Throws std::logic_error if the row width differs from the column count.
    void add_row(std::vector<double> row);
};

struct ScenarioResult {
    std::vector<ResultTable> tables;
    nlohmann::ordered_json summary;
};

/// Runs one configured scenario. Solver failures propagate as NumericalError.
[[nodiscard]] ScenarioResult run_scenario(const ScenarioConfig& c);

/// Writes <dir>/<name>_<table>.csv per table and <dir>/<name>_summary.json.
/// Returns the written paths. Throws std::runtime_error with the path on I/O failure.
std::vector<std::filesystem::path> write_outputs(const ScenarioResult& r, const ScenarioConfig& c,
                                                 const std::filesystem::path& dir);

/// CSV text for one table: '#' provenance lines, column header, rows with 12
/// significant digits in scientific notation.
[[nodiscard]] std::string format_csv(const ResultTable& t, const ScenarioConfig& c);

[[nodiscard]] std::string version_string();

/// 16 hex digits identifying the numerical conventions baked into the outputs.
[[nodiscard]] std::string conventions_hash();
[[nodiscard]] const std::string& conventions_text();

struct BuiltinScenario {
    std::string name;
    std::string text;
};

/// Scenario files shipped in scenarios/, compiled in.
[[nodiscard]] const std::vector<BuiltinScenario>& builtin_scenarios();
[[nodiscard]] const BuiltinScenario* find_builtin(const std::string& name);

}  // namespace matterwave
