#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wbf/config.hpp"
#include "wbf/scoring.hpp"
#include "wbf/world.hpp"

namespace wbf {

struct EstimationTiming {
  int timestep = 0;
  std::size_t observations = 0;
  double seconds = 0.0;
  bool cutoff_hit = false;
  bool failed = false;
};

struct RunRecord {
  std::string config_hash;
  std::vector<Observation> observations;  // also the per-timestep robot positions
  std::vector<LossPoint> loss_series;
  std::vector<int> scoring_steps;
  std::vector<FieldSlice> truth_snapshots;
  std::vector<FieldSlice> estimate_snapshots;
  std::optional<ScoreReport> final_report;  // absent when the run has no scoring timepoint
  std::vector<EstimationTiming> timings;
  std::vector<std::string> warnings;
  int final_day = 0;
};

/// Runs the full observe / move / estimate / score loop. Estimator errors and
/// cutoff overruns are recorded and the run continues with the last model.
RunRecord run_scenario(const ScenarioConfig& config);

/// positions.csv, observations.csv, loss_series.csv, score_report.txt,
/// timings.csv, run_log.txt and snapshots/{truth,estimate}/<m>_<step>.wbfg.
void write_run_outputs(const RunRecord& record, const ScenarioConfig& config, const std::filesystem::path& dir);

struct CostRow {
  std::string geometry;
  std::string estimator;
  int observations = 0;
  double seconds = 0.0;
  bool cutoff_hit = false;
};

/// Times one full three-field estimation per (geometry, estimator, N) on N
/// uniform-random observations; stops escalating N after a cutoff hit.
std::vector<CostRow> bench_estimator_cost(const ScenarioConfig& config);

/// `geometry,estimator,n_obs,seconds,cutoff_hit`
std::string cost_table_csv(const std::vector<CostRow>& rows);

/// Per-day environment export (warmup applied first): snapshots/day_<d>/ and census.csv.
void export_environment_trajectory(const ScenarioConfig& config, const std::filesystem::path& dir);

/// `day,disease,s,i,r,v`
std::string census_csv_header();

struct SnapshotSet {
  std::vector<int> steps;
  std::vector<FieldSlice> slices;
};

/// Reads `<measurement>_<step>.wbfg` files from a directory.
SnapshotSet read_snapshot_dir(const std::filesystem::path& dir);

/// Offline scoring of two snapshot directories against a config's geometry and weights.
ScoreReport score_snapshots(const std::filesystem::path& truth_dir, const std::filesystem::path& estimate_dir,
                            const ScenarioConfig& config);

}  // namespace wbf
