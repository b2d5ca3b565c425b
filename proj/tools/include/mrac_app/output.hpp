#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrac/harness.hpp"
#include "mrac/matching.hpp"
#include "mrac/metrics.hpp"

namespace mrac::app {

inline constexpr const char* kToolVersion = "0.3.0";

/// 17 significant digits, so parsing the text gives back the same double.
std::string format_double(double v);
double parse_double(std::string_view text);

std::vector<std::string> csv_columns(const RunRecord& record);
std::string record_to_csv(const RunRecord& record);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
CsvTable parse_csv(const std::string& text);

nlohmann::json config_to_json(const ScenarioConfig& cfg);
nlohmann::json metrics_to_json(const MetricsSummary& m);
nlohmann::json summary_json(const RunRecord& record, const MetricsSummary& m);
nlohmann::json matched_gains_json(const MatchedGains& g, double residual);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct OutputBundle {
  std::filesystem::path timeseries;
  std::filesystem::path summary;
  std::filesystem::path config_echo;
};

/// <out_dir>/<name>.csv, <name>.summary.json and <name>.config.yaml.
OutputBundle write_outputs(const RunRecord& record, const MetricsSummary& m,
                           const std::filesystem::path& out_dir);

}  // namespace mrac::app
