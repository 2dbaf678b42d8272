#include "wbf/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <regex>
#include <set>

#include "wbf/errors.hpp"
#include "wbf/grid_io.hpp"
#include "wbf/rng.hpp"

namespace wbf {

namespace {

namespace fs = std::filesystem;

std::string step_name(Measurement m, int step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06d", std::string(measurement_name(m)).c_str(), step);
  return buf;
}

void write_slice(const fs::path& dir, const FieldSlice& slice, int step, bool csv) {
  for (Measurement m : kMeasurements) {
    const std::string base = step_name(m, step);
    write_grid_binary(dir / (base + ".wbfg"), slice[index_of(m)]);
    if (csv) write_grid_csv(dir / (base + ".csv"), slice[index_of(m)]);
  }
}

Environment warmed_environment(const ScenarioConfig& config, std::shared_ptr<const Geometry> geometry) {
  Environment env = init_environment(std::move(geometry), config.environment);
  env.threads = config.threads;
  for (int d = 0; d < config.warmup_days; ++d) advance_day(env, config.environment);
  return env;
}

std::string census_rows(const Environment& env) {
  std::string out;
  char buf[160];
  for (Measurement m : {Measurement::Tylcv, Measurement::Ccr}) {
    const Census c = env.census(m);
    std::snprintf(buf, sizeof buf, "%d,%s,%zu,%zu,%zu,%zu\n", env.day(), std::string(measurement_name(m)).c_str(), c.s,
                  c.i, c.r, c.v);
    out += buf;
  }
  return out;
}

}  // namespace

RunRecord run_scenario(const ScenarioConfig& config) {
  using Clock = std::chrono::steady_clock;
  RunRecord record;
  record.config_hash = config.hash();

  const auto geometry = make_geometry(config.geometry);
  const MaskSet masks = relevance_masks(*geometry);
  Environment env = warmed_environment(config, geometry);

  const int total_steps = config.days * config.steps_per_day;
  if (total_steps == 0 || config.robots.empty()) {
    for (int d = 0; d < config.days; ++d) advance_day(env, config.environment);
    record.final_day = env.day();
    return record;
  }

  std::vector<Position> starts;
  for (const RobotSpec& r : config.robots) starts.push_back(r.start);
  World world(std::move(env), config.environment, starts, config.steps_per_day);

  std::vector<std::unique_ptr<Planner>> planners;
  for (const RobotSpec& r : config.robots) {
    planners.push_back(make_planner(r.planner, *geometry, config.score, total_steps, r.start));
  }

  std::set<int> timepoints(config.scoring_timepoints.begin(), config.scoring_timepoints.end());
  if (timepoints.empty()) {
    for (int d = 1; d <= config.days; ++d) timepoints.insert(d * config.steps_per_day);
  }

  InformationModel model =
      InformationModel::prior(geometry, config.estimator.adaptive_disk.default_value, config.estimator.id());
  bool track_alive = true;
  int truth_day = -1;
  FieldSlice truth;

  auto process = [&](const World& w) {
    const int elapsed = w.clock().elapsed;
    const bool diagnostic = elapsed % config.estimator_stride == 0 || elapsed == total_steps;
    const bool scoring = timepoints.contains(elapsed);
    if (track_alive && (diagnostic || scoring)) {
      const auto started = Clock::now();
      EstimationTiming timing{elapsed, w.observations().size(), 0.0, false, false};
      try {
        EstimateResult result = estimate(w.observations(), geometry, config.estimator, Deadline(config.feasibility_cutoff));
        model = std::move(result.model);
        timing.seconds = result.seconds;
        if (timing.seconds > config.feasibility_cutoff) timing.cutoff_hit = true;
      } catch (const DeadlineExceeded&) {
        timing.seconds = std::chrono::duration<double>(Clock::now() - started).count();
        timing.cutoff_hit = true;
      } catch (const EstimatorError& e) {
        timing.seconds = std::chrono::duration<double>(Clock::now() - started).count();
        timing.failed = true;
        record.warnings.push_back("step " + std::to_string(elapsed) + ": " + e.what() + "; keeping the last model");
      }
      if (timing.cutoff_hit) {
        track_alive = false;
        record.warnings.push_back("step " + std::to_string(elapsed) + ": estimation exceeded the " +
                                  std::to_string(config.feasibility_cutoff) +
                                  " s feasibility cutoff; estimation track stopped");
      }
      record.timings.push_back(timing);
    }
    if (!diagnostic && !scoring) return;
    if (truth_day != w.environment().day()) {
      truth = w.environment().snapshot();
      truth_day = w.environment().day();
    }
    if (diagnostic) {
      const ScoreReport r = compute_loss(truth, model.values, masks, config.score);
      record.loss_series.push_back(LossPoint{elapsed, r.total_loss, r.component});
    }
    if (scoring) {
      record.scoring_steps.push_back(elapsed);
      record.truth_snapshots.push_back(truth);
      record.estimate_snapshots.push_back(model.values);
    }
  };

  bool processed = false;
  world.on_day_end = [&](const World& w) {
    process(w);
    processed = true;
  };

  std::vector<Move> moves(planners.size());
  for (int step = 0; step < total_steps; ++step) {
    for (std::size_t r = 0; r < planners.size(); ++r) {
      PlannerContext ctx{world.robots()[r].position, step, geometry.get(), &model};
      moves[r] = planners[r]->next_move(ctx);
    }
    processed = false;
    world.step(moves);
    if (!processed) process(world);
  }

  record.observations = world.observations();
  record.warnings.insert(record.warnings.begin(), world.warnings().begin(), world.warnings().end());
  record.final_day = world.environment().day();
  if (!record.truth_snapshots.empty()) {
    record.final_report = compute_loss(record.truth_snapshots, record.estimate_snapshots, masks, config.score);
  }
  return record;
}

void write_run_outputs(const RunRecord& record, const ScenarioConfig& config, const fs::path& dir) {
  std::string positions = "timestep,day,robot_id,x,y\n";
  char buf[96];
  for (const Observation& o : record.observations) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d\n", o.timestep, o.day, o.robot_id, o.position.x, o.position.y);
    positions += buf;
  }
  write_file_atomic(dir / "positions.csv", positions);
  write_file_atomic(dir / "observations.csv", observations_csv(record.observations));
  write_file_atomic(dir / "loss_series.csv", loss_series_csv(record.loss_series));
  if (record.final_report) write_file_atomic(dir / "score_report.txt", format_score_report(*record.final_report));

  std::string timings = "timestep,n_obs,seconds,cutoff_hit,failed\n";
  for (const EstimationTiming& t : record.timings) {
    std::snprintf(buf, sizeof buf, "%d,%zu,%.6f,%d,%d\n", t.timestep, t.observations, t.seconds, t.cutoff_hit ? 1 : 0,
                  t.failed ? 1 : 0);
    timings += buf;
  }
  write_file_atomic(dir / "timings.csv", timings);

  std::string log = "config_hash = " + record.config_hash + "\n";
  log += "seed = " + std::to_string(config.seed) + "\n";
  log += "estimator = " + config.estimator.id() + "\n";
  log += "estimator_stride = " + std::to_string(config.estimator_stride) + "\n";
  for (const std::string& w : record.warnings) log += "warning: " + w + "\n";
  write_file_atomic(dir / "run_log.txt", log);

  for (std::size_t l = 0; l < record.scoring_steps.size(); ++l) {
    write_slice(dir / "snapshots" / "truth", record.truth_snapshots[l], record.scoring_steps[l],
                config.export_csv_snapshots);
    write_slice(dir / "snapshots" / "estimate", record.estimate_snapshots[l], record.scoring_steps[l],
                config.export_csv_snapshots);
  }
}

std::vector<CostRow> bench_estimator_cost(const ScenarioConfig& config) {
  using Clock = std::chrono::steady_clock;
  std::vector<CostRow> rows;
  for (const std::string& geometry_name : config.bench.geometries) {
    const auto geometry = make_geometry(geometry_name);
    for (const std::string& estimator_name : config.bench.estimators) {
      EstimatorSpec spec = config.estimator;
      spec.kind = parse_estimator_kind(estimator_name);
      for (int n : config.bench.observation_counts) {
        CounterRng rng(hash_combine(config.seed, hash_name(geometry_name)), "bench/" + std::to_string(n));
        std::vector<Observation> obs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          Observation& o = obs[static_cast<std::size_t>(i)];
          o.timestep = i;
          o.position = Position{static_cast<int>(rng.below(static_cast<std::uint64_t>(geometry->width()))),
                                static_cast<int>(rng.below(static_cast<std::uint64_t>(geometry->height())))};
          for (float& v : o.values) v = static_cast<float>(rng.uniform());
        }

        CostRow row{geometry_name, estimator_name, n, 0.0, false};
        int repetitions = 0;
        const auto started = Clock::now();
        try {
          double elapsed = 0.0;
          do {
            (void)estimate(obs, geometry, spec, Deadline(config.feasibility_cutoff));
            ++repetitions;
            elapsed = std::chrono::duration<double>(Clock::now() - started).count();
          } while (elapsed < config.bench.min_timing_seconds && repetitions < 1000);
          row.seconds = elapsed / repetitions;
          row.cutoff_hit = row.seconds > config.feasibility_cutoff;
        } catch (const DeadlineExceeded&) {
          row.seconds = std::chrono::duration<double>(Clock::now() - started).count();
          row.cutoff_hit = true;
        }
        rows.push_back(row);
        if (row.cutoff_hit) break;
      }
    }
  }
  return rows;
}

std::string cost_table_csv(const std::vector<CostRow>& rows) {
  std::string out = "geometry,estimator,n_obs,seconds,cutoff_hit\n";
  char buf[160];
  for (const CostRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%d,%.6f,%d\n", r.geometry.c_str(), r.estimator.c_str(), r.observations,
                  r.seconds, r.cutoff_hit ? 1 : 0);
    out += buf;
  }
  return out;
}

std::string census_csv_header() { return "day,disease,s,i,r,v\n"; }

void export_environment_trajectory(const ScenarioConfig& config, const fs::path& dir) {
  const auto geometry = make_geometry(config.geometry);
  Environment env = warmed_environment(config, geometry);
  std::string census = census_csv_header();
  for (int d = 0; d <= config.days; ++d) {
    if (d > 0) advance_day(env, config.environment);
    char name[32];
    std::snprintf(name, sizeof name, "day_%04d", env.day());
    write_slice(dir / "snapshots" / name, env.snapshot(), env.day(), config.export_csv_snapshots);
    census += census_rows(env);
  }
  write_file_atomic(dir / "census.csv", census);
}

SnapshotSet read_snapshot_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("snapshot directory '" + dir.string() + "' does not exist");
  static const std::regex pattern(R"((tylcv|ccr|humidity)_(\d+)\.wbfg)");
  std::map<int, std::array<std::optional<FieldGrid>, kMeasurementCount>> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch match;
    const std::string file = entry.path().filename().string();
    if (!std::regex_match(file, match, pattern)) continue;
    const Measurement m = parse_measurement(match[1].str());
    found[std::stoi(match[2].str())][index_of(m)] = read_grid_binary(entry.path());
  }
  if (found.empty()) throw ConfigError("no <measurement>_<step>.wbfg snapshots in '" + dir.string() + "'");
  SnapshotSet set;
  for (auto& [step, grids] : found) {
    FieldSlice slice;
    for (Measurement m : kMeasurements) {
      if (!grids[index_of(m)]) {
        throw ConfigError("snapshot step " + std::to_string(step) + " in '" + dir.string() + "' lacks " +
                          std::string(measurement_name(m)));
      }
      slice[index_of(m)] = std::move(*grids[index_of(m)]);
    }
    set.steps.push_back(step);
    set.slices.push_back(std::move(slice));
  }
  return set;
}

ScoreReport score_snapshots(const fs::path& truth_dir, const fs::path& estimate_dir, const ScenarioConfig& config) {
  const SnapshotSet truth = read_snapshot_dir(truth_dir);
  const SnapshotSet estimate = read_snapshot_dir(estimate_dir);
  if (truth.steps != estimate.steps) throw ConfigError("truth and estimate snapshots cover different timepoints");
  const Geometry geometry = build_geometry(config.geometry);
  for (const FieldSlice& s : truth.slices) {
    for (const FieldGrid& g : s) {
      if (g.width() != geometry.width() || g.height() != geometry.height()) {
        throw ConfigError("snapshot grid size does not match geometry '" + config.geometry + "'");
      }
    }
  }
  return compute_loss(truth.slices, estimate.slices, relevance_masks(geometry), config.score);
}

}  // namespace wbf
