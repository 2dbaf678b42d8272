#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wbf/environment.hpp"
#include "wbf/estimators.hpp"
#include "wbf/planners.hpp"
#include "wbf/scoring.hpp"
#include "json.hpp"

namespace wbf {

struct RobotSpec {
  Position start;
  PlannerSpec planner;
};

struct BenchConfig {
  std::vector<std::string> geometries{"miniberry-10", "miniberry-30", "miniberry-100"};
  std::vector<std::string> estimators{"adaptive-disk", "gp"};
  std::vector<int> observation_counts{25, 50, 100, 200, 400, 800};
  /// Timings below this are repeated and averaged.
  double min_timing_seconds = 0.05;
};

/// Everything a run needs; parsed from a JSON document.
struct ScenarioConfig {
  std::string geometry = "miniberry-30";
  std::uint64_t seed = 0;
  int days = 1;
  int steps_per_day = 500;
  int warmup_days = 0;
  int threads = 1;
  EnvironmentParams environment{};
  std::vector<RobotSpec> robots;
  EstimatorSpec estimator{};
  int estimator_stride = 1;
  ScoreConfig score{};
  std::vector<int> scoring_timepoints;  // elapsed step counts; empty = end of every day
  double feasibility_cutoff = 10.0;
  std::string output_dir = "wbf-output";
  bool export_csv_snapshots = true;
  BenchConfig bench{};

  nlohmann::json canonical;  // normalized document, seed override applied
  std::string hash() const;  // FNV-1a of the canonical document
};

/// Throws ConfigError on a missing seed, unknown keys or invalid values.
ScenarioConfig parse_config(const nlohmann::json& doc, std::optional<std::uint64_t> seed_override = std::nullopt);

/// Reads a config file. A missing or unreadable file is a ConfigError naming the path.
ScenarioConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace wbf
