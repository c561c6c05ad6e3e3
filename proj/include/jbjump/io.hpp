#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jbjump/detect.hpp"
#include "jbjump/estimators.hpp"
#include "jbjump/montecarlo.hpp"
#include "jbjump/simulate.hpp"

namespace jbjump {

inline constexpr const char* kToolVersion = "0.1.0";

/// Contents of a path CSV with header `t,x[,x_cont,jump_count]`.
struct PathData {
  std::vector<double> t;
  std::vector<double> x;
  std::optional<std::vector<double>> x_cont;
  std::optional<std::vector<std::size_t>> jump_counts;  ///< n entries
  double h = 0.0;  ///< inferred grid step
};

/// Reads and validates a path CSV. The grid must be strictly increasing and
/// uniform: every spacing within 1e-9 relative of (t_n - t_0)/n.
/// Throws MalformedRow (with line number) or NonUniformGrid.
PathData read_path_csv(const std::filesystem::path& file);
PathData parse_path_csv(const std::string& text);

/// Columns t,x,x_cont,jump_count; jump_count is empty on the first row.
std::string format_path_csv(const SamplePath& path);

/// Config, jump law and jump marks for a simulated path.
nlohmann::json path_sidecar(const SamplePath& path);

nlohmann::json jump_law_to_json(const JumpLaw& law);
/// Accepts {"kind": "none"|"gamma"|"bilateral_ig", ..., "intensity": x}.
JumpLaw jump_law_from_json(const nlohmann::json& j);
/// Parses "gamma:4,1", "big:2,1,4,1" or "none".
JumpLaw parse_jump_law(const std::string& spec, double intensity);

nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json to_json(const EstimateReport& r);
nlohmann::json to_json(const JbResult& r);
nlohmann::json to_json(const DetectionState& st);
nlohmann::json to_json(const McSummary& s);

nlohmann::json scenario_to_json(const Scenario& s);
/// Unknown keys are rejected.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario read_scenario(const std::filesystem::path& file);

/// Whole-file helpers; throw Error on I/O failure.
std::string read_text_file(const std::filesystem::path& file);
void write_text_file(const std::filesystem::path& file, const std::string& text);

}  // namespace jbjump
