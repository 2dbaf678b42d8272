// wbf: command-line front end for the benchmark.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wbf/errors.hpp"
#include "wbf/grid_io.hpp"
#include "wbf/harness.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Options {
  std::string config;
  std::string env_dir;
  std::string info_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<int> threads;
};

wbf::ScenarioConfig load(const Options& o) {
  wbf::ScenarioConfig c = wbf::load_config(o.config, o.seed);
  if (o.output) c.output_dir = *o.output;
  if (o.threads) {
    if (*o.threads < 1) throw wbf::ConfigError("--threads must be >= 1");
    c.threads = *o.threads;
    c.estimator.threads = *o.threads;
  }
  return c;
}

int cmd_run(const Options& o) {
  const wbf::ScenarioConfig config = load(o);
  const wbf::RunRecord record = wbf::run_scenario(config);
  wbf::write_run_outputs(record, config, config.output_dir);
  if (record.final_report) {
    std::cout << "final loss " << record.final_report->total_loss << " (score " << record.final_report->score()
              << ")\n";
  }
  for (const auto& w : record.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "outputs written to " << config.output_dir << "\n";
  return 0;
}

int cmd_bench(const Options& o) {
  const wbf::ScenarioConfig config = load(o);
  const auto rows = wbf::bench_estimator_cost(config);
  const std::string csv = wbf::cost_table_csv(rows);
  wbf::write_file_atomic(std::filesystem::path(config.output_dir) / "estimator_cost.csv", csv);
  std::cout << csv;
  return 0;
}

int cmd_gen_env(const Options& o) {
  const wbf::ScenarioConfig config = load(o);
  wbf::export_environment_trajectory(config, config.output_dir);
  std::cout << "environment trajectory written to " << config.output_dir << "\n";
  return 0;
}

int cmd_score(const Options& o) {
  const wbf::ScenarioConfig config = load(o);
  const wbf::ScoreReport report = wbf::score_snapshots(o.env_dir, o.info_dir, config);
  std::cout << wbf::format_score_report(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wbf: farm gridworld benchmark for informative path planning"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--seed", o.seed, "Override the config's master seed");
  app.add_option("--output", o.output, "Override the config's output directory");
  app.add_option("--threads", o.threads, "Worker threads (results do not depend on it)");

  auto* run = app.add_subcommand("run", "Run a scenario and write its result files");
  run->add_option("config", o.config, "Scenario config (JSON)")->required();
  auto* bench = app.add_subcommand("bench-cost", "Estimator wall-clock scaling benchmark");
  bench->add_option("config", o.config, "Benchmark config (JSON)")->required();
  auto* gen = app.add_subcommand("gen-env", "Export an environment trajectory only");
  gen->add_option("config", o.config, "Scenario config (JSON)")->required();
  auto* score = app.add_subcommand("score", "Score estimate snapshots against truth snapshots");
  score->add_option("env-snapshots", o.env_dir, "Directory of truth <measurement>_<step>.wbfg files")->required();
  score->add_option("info-snapshots", o.info_dir, "Directory of estimate <measurement>_<step>.wbfg files")->required();
  score->add_option("config", o.config, "Config providing geometry and score weights")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(o);
    if (*bench) return cmd_bench(o);
    if (*gen) return cmd_gen_env(o);
    if (*score) return cmd_score(o);
  } catch (const wbf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
