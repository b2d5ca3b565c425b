#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "mrac/harness.hpp"
#include "mrac/matching.hpp"

namespace mrac::app {

/// Schema or parse failure; `line` and `column` are 1-based (0 if unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, int column, const std::string& what);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// `boeing-case-i`, `boeing-case-ii`, `boeing-baseline` (underscores accepted).
std::optional<ScenarioConfig> builtin_scenario(const std::string& name);

/// Parses a YAML scenario; polynomials are written highest power first.
/// Validates the result, so design errors (e.g. a non-Hurwitz Omega) are
/// reported against the line of the offending key.
ScenarioConfig parse_scenario(const std::string& text, const std::string& source = "<string>");
ScenarioConfig load_scenario_file(const std::string& path);

/// Built-in name or path.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

/// Canonical YAML that parses back to the same configuration.
std::string scenario_to_yaml(const ScenarioConfig& cfg);

/// plant (P, Z, kp), optional structure.omega and reference.Rm. Missing Rm
/// defaults to (s+1)^{n*}. Only structure is checked; numeric preconditions
/// (such as kp != 0) are left to the matching solver.
MatchingProblem parse_matching_problem(const std::string& text,
                                       const std::string& source = "<string>");
MatchingProblem load_matching_file(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace mrac::app
