#include <gtest/gtest.h>

#include <filesystem>
#include <cstring>
#include <fstream>
#include <functional>

#include "wbf/errors.hpp"
#include "wbf/grid_io.hpp"
#include "wbf/harness.hpp"

using namespace wbf;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wbf-test-" + name);
  fs::remove_all(p);
  return p;
}

json small_run() {
  return json{{"geometry", "miniberry-10"}, {"seed", 5},        {"steps_per_day", 40},
              {"planner", "lawnmower"},     {"estimator", "adaptive-disk"}, {"estimator_stride", 10}};
}

}  // namespace

TEST(GridIo, BinaryLayoutAndRoundTrip) {
  FieldGrid g(3, 2);
  for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] = 0.1f * static_cast<float>(i) + 1e-7f;
  const std::string bytes = encode_grid_binary(g);
  ASSERT_EQ(bytes.size(), 16u + 6u * 4u);
  EXPECT_EQ(bytes.substr(0, 4), "WBFG");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 3);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 2);
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 1);
  float second;
  std::memcpy(&second, bytes.data() + 16 + 4, 4);
  EXPECT_EQ(second, g(1, 0));
  EXPECT_EQ(decode_grid_binary(bytes), g);
  EXPECT_EQ(decode_grid_csv(encode_grid_csv(g)), g);
}

TEST(GridIo, CorruptInputIsRejected) {
  const std::string bytes = encode_grid_binary(FieldGrid(2, 2, 0.5f));
  EXPECT_ANY_THROW(decode_grid_binary(bytes.substr(0, 20)));
  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_ANY_THROW(decode_grid_binary(bad));
}

TEST(GridIo, AtomicWriteLeavesNoTempFile) {
  const fs::path dir = scratch("atomic");
  write_file_atomic(dir / "a" / "b.txt", "hello");
  EXPECT_EQ(read_file(dir / "a" / "b.txt"), "hello");
  write_file_atomic(dir / "a" / "b.txt", "again");
  EXPECT_EQ(read_file(dir / "a" / "b.txt"), "again");
  for (const auto& e : fs::directory_iterator(dir / "a")) EXPECT_EQ(e.path().filename(), "b.txt");
  fs::remove_all(dir);
}

TEST(Config, SeedIsMandatory) {
  json doc = small_run();
  doc.erase("seed");
  EXPECT_THROW(parse_config(doc), ConfigError);
  EXPECT_EQ(parse_config(doc, 9u).seed, 9u);
}

TEST(Config, UnknownKeysAndNamesAreRejected) {
  for (auto mutate : std::vector<std::function<void(json&)>>{
           [](json& d) { d["colour"] = "red"; },
           [](json& d) { d["geometry"] = "blueberry"; },
           [](json& d) { d["planner"] = "zigzag"; },
           [](json& d) { d["estimator"] = "kriging"; },
           [](json& d) { d["environment"] = json{{"tylcv", {{"p_totl", 0.1}}}}; },
           [](json& d) { d["score"] = json{{"weights", {{"tylcv", -1.0}}}}; },
           [](json& d) { d["gp"] = json{{"restarts", -1}}; },
           [](json& d) { d["estimator_stride"] = 0; },
           [](json& d) { d["days"] = "two"; },
           [](json& d) { d["scoring_timepoints"] = json::array({41}); },
       }) {
    json doc = small_run();
    mutate(doc);
    EXPECT_THROW(parse_config(doc), ConfigError) << doc.dump();
  }
}

TEST(Config, ValuesAreApplied) {
  json doc = small_run();
  doc["environment"] = json{{"tylcv", {{"p_total", 0.5}, {"kernel_radius", 1}}},
                            {"humidity", {{"initial", 0.25}}}};
  doc["score"] = json{{"weights", {{"ccr", 0.7}}}, {"asymmetry", {{"humidity", {2.0, 3.0}}}}};
  doc["robots"] = json{{"count", 2}, {"starts", {{1, 2}}}};
  doc["planners"] = json::array({"spiral", "random-waypoint"});
  const ScenarioConfig c = parse_config(doc);
  EXPECT_EQ(c.environment.tylcv.p_total, 0.5);
  EXPECT_EQ(c.environment.tylcv.kernel.radius, 1);
  EXPECT_EQ(c.environment.humidity.initial, 0.25);
  EXPECT_EQ(c.score.weights[1], 0.7);
  EXPECT_EQ(c.score.weights[0], 1.0);
  EXPECT_EQ(c.score.asymmetry[2].c_plus, 3.0);
  ASSERT_EQ(c.robots.size(), 2u);
  EXPECT_EQ(c.robots[0].start, (Position{1, 2}));
  EXPECT_EQ(c.robots[1].planner.type, "random-waypoint");
  EXPECT_NE(c.robots[0].planner.seed, c.robots[1].planner.seed);
}

TEST(Config, HashIgnoresThreadsAndOutput) {
  json a = small_run();
  json b = small_run();
  b["threads"] = 4;
  b["output_dir"] = "/tmp/elsewhere";
  EXPECT_EQ(parse_config(a).hash(), parse_config(b).hash());
  b["seed"] = 6;
  EXPECT_NE(parse_config(a).hash(), parse_config(b).hash());
}

TEST(Config, MissingFileNamesThePath) {
  try {
    load_config("/nonexistent/scenario.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/scenario.json"), std::string::npos);
  }
}

TEST(RunScenario, CountsAndSeries) {
  const ScenarioConfig c = parse_config(small_run());
  const RunRecord r = run_scenario(c);
  EXPECT_EQ(r.observations.size(), 40u);
  ASSERT_EQ(r.loss_series.size(), 4u);
  EXPECT_EQ(r.loss_series.back().timestep, 40);
  ASSERT_TRUE(r.final_report.has_value());
  EXPECT_EQ(r.scoring_steps, (std::vector<int>{40}));
  EXPECT_EQ(r.final_report->total_loss, r.loss_series.back().total);
  EXPECT_EQ(r.final_day, 1);
  for (const auto& t : r.timings) EXPECT_GT(t.seconds, 0.0);
}

TEST(RunScenario, StrideTenOnFiveHundredSteps) {
  json doc = small_run();
  doc["geometry"] = "miniberry-30";
  doc["steps_per_day"] = 500;
  const RunRecord r = run_scenario(parse_config(doc));
  EXPECT_EQ(r.loss_series.size(), 50u);
}

TEST(RunScenario, TwiceIsIdentical) {
  json doc = small_run();
  doc["planner"] = "random-waypoint";
  doc["days"] = 2;
  doc["estimator_stride"] = 3;
  const RunRecord a = run_scenario(parse_config(doc));
  doc["threads"] = 3;
  const RunRecord b = run_scenario(parse_config(doc));
  EXPECT_EQ(loss_series_csv(a.loss_series), loss_series_csv(b.loss_series));
  EXPECT_EQ(format_score_report(*a.final_report), format_score_report(*b.final_report));
  EXPECT_EQ(a.config_hash, b.config_hash);
  EXPECT_EQ(a.scoring_steps, (std::vector<int>{40, 80}));
}

TEST(RunScenario, PureEnvironmentTrajectory) {
  json doc = small_run();
  doc["days"] = 15;
  doc["steps_per_day"] = 0;
  doc["robots"] = json{{"count", 0}};
  const RunRecord r = run_scenario(parse_config(doc));
  EXPECT_EQ(r.final_day, 15);
  EXPECT_TRUE(r.observations.empty());
  EXPECT_FALSE(r.final_report.has_value());
}

TEST(RunScenario, CutoffStopsEstimationTrackNotRun) {
  json doc = small_run();
  doc["estimator"] = "gp";
  doc["feasibility_cutoff"] = 1e-9;
  const RunRecord r = run_scenario(parse_config(doc));
  EXPECT_EQ(r.observations.size(), 40u);
  ASSERT_EQ(r.timings.size(), 1u);
  EXPECT_TRUE(r.timings[0].cutoff_hit);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_TRUE(r.final_report.has_value());
}

TEST(RunScenario, OfflineScoreReproducesFinalLoss) {
  json doc = small_run();
  doc["days"] = 2;
  doc["planner"] = "spiral";
  const ScenarioConfig c = parse_config(doc);
  const RunRecord r = run_scenario(c);
  const fs::path dir = scratch("offline");
  write_run_outputs(r, c, dir);
  for (const char* f : {"positions.csv", "observations.csv", "loss_series.csv", "score_report.txt", "timings.csv",
                        "run_log.txt"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const ScoreReport offline = score_snapshots(dir / "snapshots" / "truth", dir / "snapshots" / "estimate", c);
  EXPECT_EQ(offline.total_loss, r.final_report->total_loss);
  EXPECT_EQ(format_score_report(offline), read_file(dir / "score_report.txt"));
  const ScoreReport self = score_snapshots(dir / "snapshots" / "truth", dir / "snapshots" / "truth", c);
  EXPECT_EQ(self.total_loss, 0.0);
  fs::remove_all(dir);
}

TEST(Bench, CutoffStopsEscalation) {
  json doc = small_run();
  doc["feasibility_cutoff"] = 0.02;
  doc["bench"] = json{{"geometries", {"miniberry-30"}},
                      {"estimators", {"adaptive-disk", "gp"}},
                      {"observation_counts", {10, 50, 400, 800}},
                      {"min_timing_seconds", 0.0}};
  const auto rows = bench_estimator_cost(parse_config(doc));
  int gp_rows = 0;
  bool hit = false;
  for (const CostRow& row : rows) {
    if (row.estimator != "gp") continue;
    ++gp_rows;
    EXPECT_FALSE(hit) << "row after a cutoff hit";
    hit |= row.cutoff_hit;
  }
  EXPECT_TRUE(hit);
  EXPECT_LT(gp_rows, 4);
  const std::string csv = cost_table_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "geometry,estimator,n_obs,seconds,cutoff_hit");
}

TEST(GenEnv, WritesDailySnapshotsAndCensus) {
  json doc = small_run();
  doc["days"] = 3;
  doc["export_csv_snapshots"] = false;
  const fs::path dir = scratch("genenv");
  export_environment_trajectory(parse_config(doc), dir);
  EXPECT_TRUE(fs::exists(dir / "snapshots" / "day_0003" / "tylcv_000003.wbfg"));
  const std::string census = read_file(dir / "census.csv");
  EXPECT_EQ(census.substr(0, census.find('\n') + 1), census_csv_header());
  EXPECT_EQ(std::count(census.begin(), census.end(), '\n'), 1 + 4 * 2);
  fs::remove_all(dir);
}

TEST(Config, ShippedExamplesParse) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(WBF_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    SCOPED_TRACE(entry.path().string());
    const ScenarioConfig c = load_config(entry.path());
    EXPECT_TRUE(is_geometry_name(c.geometry));
    ++count;
  }
  EXPECT_GE(count, 8);
}
