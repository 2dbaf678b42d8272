#include "wbf/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "wbf/errors.hpp"
#include "wbf/rng.hpp"

namespace wbf {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a table");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

Bounds get_bounds(const json& obj, const char* key, Bounds fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto v = get_or<std::vector<double>>(obj, key, {}, where);
  if (v.size() != 2) throw ConfigError(std::string(key) + " in " + where + " must be [lo, hi]");
  return Bounds{v[0], v[1]};
}

PropagationKernel parse_kernel(const json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty()) throw ConfigError(where + ".kernel must be a square array of rows");
  const auto side = rows.size();
  if (side % 2 == 0) throw ConfigError(where + ".kernel side must be odd");
  PropagationKernel k = empty_kernel(static_cast<int>(side / 2));
  for (std::size_t y = 0; y < side; ++y) {
    if (!rows[y].is_array() || rows[y].size() != side) throw ConfigError(where + ".kernel must be square");
    for (std::size_t x = 0; x < side; ++x) {
      if (!rows[y][x].is_number()) throw ConfigError(where + ".kernel entries must be numbers");
      k.weights[y * side + x] = rows[y][x].get<double>();
    }
  }
  return k;
}

EpidemicParams parse_epidemic(const json& obj, EpidemicParams p, std::uint64_t seed, const std::string& where) {
  reject_unknown(obj, {"p_total", "infect_duration", "seeds", "kernel_radius", "kernel", "rng_seed"}, where);
  p.p_total = get_or(obj, "p_total", p.p_total, where);
  p.infect_duration = get_or(obj, "infect_duration", p.infect_duration, where);
  p.seeds = get_or(obj, "seeds", p.seeds, where);
  if (obj.contains("kernel")) {
    p.kernel = parse_kernel(obj.at("kernel"), where);
  } else {
    p.kernel = inverse_square_kernel(get_or(obj, "kernel_radius", p.kernel.radius, where));
  }
  p.rng_seed = get_or(obj, "rng_seed", seed, where);
  p.validate();
  return p;
}

HumidityParams parse_humidity(const json& obj, std::uint64_t seed) {
  const std::string where = "environment.humidity";
  reject_unknown(obj, {"evaporation_rate", "shower_period", "showers_per_event", "shower_amplitude", "h", "w", "initial",
                       "rng_seed"},
                 where);
  HumidityParams p;
  p.evaporation_rate = get_or(obj, "evaporation_rate", p.evaporation_rate, where);
  p.shower_period = get_or(obj, "shower_period", p.shower_period, where);
  p.showers_per_event = get_or(obj, "showers_per_event", p.showers_per_event, where);
  p.shower_amplitude = get_or(obj, "shower_amplitude", p.shower_amplitude, where);
  p.h = get_or(obj, "h", p.h, where);
  p.w = get_or(obj, "w", p.w, where);
  p.initial = get_or(obj, "initial", p.initial, where);
  p.rng_seed = get_or(obj, "rng_seed", seed, where);
  p.validate();
  return p;
}

std::array<double, kMeasurementCount> per_measurement(const json& obj, std::array<double, kMeasurementCount> values,
                                                      const std::string& where) {
  reject_unknown(obj, {"tylcv", "ccr", "humidity"}, where);
  for (Measurement m : kMeasurements) {
    values[index_of(m)] = get_or(obj, std::string(measurement_name(m)).c_str(), values[index_of(m)], where);
  }
  return values;
}

ScoreConfig parse_score(const json& obj) {
  ScoreConfig s;
  if (obj.contains("weights")) s.weights = per_measurement(obj.at("weights"), s.weights, "score.weights");
  if (obj.contains("asymmetry")) {
    const json& a = obj.at("asymmetry");
    reject_unknown(a, {"tylcv", "ccr", "humidity"}, "score.asymmetry");
    for (Measurement m : kMeasurements) {
      const std::string name(measurement_name(m));
      if (!a.contains(name)) continue;
      const Bounds pair = get_bounds(a, name.c_str(), {}, "score.asymmetry");
      s.asymmetry[index_of(m)] = AsymmetryPair{pair.lo, pair.hi};
    }
  }
  s.validate();
  return s;
}

GPParams parse_gp(const json& obj, std::uint64_t seed) {
  const std::string where = "gp";
  reject_unknown(obj, {"length_scale", "signal_variance", "noise_variance", "length_scale_bounds",
                       "signal_variance_bounds", "noise_variance_bounds", "restarts", "max_iterations", "tolerance",
                       "optimize", "center_targets", "jitter", "max_jitter_tries", "predict_batch", "rng_seed"},
                 where);
  GPParams p;
  p.initial.length_scale = get_or(obj, "length_scale", p.initial.length_scale, where);
  p.initial.signal_variance = get_or(obj, "signal_variance", p.initial.signal_variance, where);
  p.initial.noise_variance = get_or(obj, "noise_variance", p.initial.noise_variance, where);
  p.length_scale_bounds = get_bounds(obj, "length_scale_bounds", p.length_scale_bounds, where);
  p.signal_variance_bounds = get_bounds(obj, "signal_variance_bounds", p.signal_variance_bounds, where);
  p.noise_variance_bounds = get_bounds(obj, "noise_variance_bounds", p.noise_variance_bounds, where);
  p.restarts = get_or(obj, "restarts", p.restarts, where);
  p.max_iterations = get_or(obj, "max_iterations", p.max_iterations, where);
  p.tolerance = get_or(obj, "tolerance", p.tolerance, where);
  p.optimize = get_or(obj, "optimize", p.optimize, where);
  p.center_targets = get_or(obj, "center_targets", p.center_targets, where);
  p.jitter = get_or(obj, "jitter", p.jitter, where);
  p.max_jitter_tries = get_or(obj, "max_jitter_tries", p.max_jitter_tries, where);
  p.predict_batch = get_or(obj, "predict_batch", p.predict_batch, where);
  p.rng_seed = get_or(obj, "rng_seed", seed, where);
  p.validate();
  return p;
}

AdaptiveDiskParams parse_adaptive_disk(const json& obj) {
  reject_unknown(obj, {"r_min", "default_value"}, "adaptive_disk");
  AdaptiveDiskParams p;
  p.r_min = get_or(obj, "r_min", p.r_min, "adaptive_disk");
  if (obj.contains("default_value")) {
    p.default_value = per_measurement(obj.at("default_value"), p.default_value, "adaptive_disk.default_value");
  }
  p.validate();
  return p;
}

Position parse_position(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    throw ConfigError(where + " must be [x, y]");
  }
  return Position{v[0].get<int>(), v[1].get<int>()};
}

}  // namespace

std::string ScenarioConfig::hash() const {
  // Knobs that cannot change results stay out of the hash.
  nlohmann::json doc = canonical;
  doc.erase("threads");
  doc.erase("output_dir");
  const std::uint64_t h = hash_name(doc.dump());
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ScenarioConfig parse_config(const json& doc, std::optional<std::uint64_t> seed_override) {
  reject_unknown(doc, {"geometry", "seed", "days", "steps_per_day", "warmup_days", "threads", "environment", "robots",
                       "planner", "planners", "planner_seed", "estimator", "adaptive_disk", "gp", "estimator_stride",
                       "score", "scoring_timepoints", "feasibility_cutoff", "output_dir", "export_csv_snapshots",
                       "bench", "description"},
                 "config");
  ScenarioConfig c;
  c.canonical = doc;
  if (seed_override) {
    c.seed = *seed_override;
    c.canonical["seed"] = *seed_override;
  } else if (doc.contains("seed")) {
    c.seed = get_or<std::uint64_t>(doc, "seed", 0, "config");
  } else {
    throw ConfigError("config has no 'seed' (it is mandatory; --seed also sets it)");
  }

  c.geometry = get_or<std::string>(doc, "geometry", c.geometry, "config");
  if (!is_geometry_name(c.geometry)) throw ConfigError("unknown geometry '" + c.geometry + "'");
  c.days = get_or(doc, "days", c.days, "config");
  c.steps_per_day = get_or(doc, "steps_per_day", c.steps_per_day, "config");
  c.warmup_days = get_or(doc, "warmup_days", c.warmup_days, "config");
  c.threads = get_or(doc, "threads", c.threads, "config");
  c.estimator_stride = get_or(doc, "estimator_stride", c.estimator_stride, "config");
  c.feasibility_cutoff = get_or(doc, "feasibility_cutoff", c.feasibility_cutoff, "config");
  c.output_dir = get_or<std::string>(doc, "output_dir", c.output_dir, "config");
  c.export_csv_snapshots = get_or(doc, "export_csv_snapshots", c.export_csv_snapshots, "config");
  if (c.days < 0 || c.steps_per_day < 0 || c.warmup_days < 0) throw ConfigError("days, steps_per_day and warmup_days must be >= 0");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.estimator_stride < 1) throw ConfigError("estimator_stride must be >= 1");
  if (!(c.feasibility_cutoff > 0.0)) throw ConfigError("feasibility_cutoff must be > 0");

  const json empty = json::object();
  const json& env = doc.contains("environment") ? doc.at("environment") : empty;
  reject_unknown(env, {"tylcv", "ccr", "humidity"}, "environment");
  const EnvironmentParams defaults;
  c.environment.tylcv = parse_epidemic(env.value("tylcv", empty), defaults.tylcv, hash_combine(c.seed, hash_name("tylcv")),
                                       "environment.tylcv");
  c.environment.ccr =
      parse_epidemic(env.value("ccr", empty), defaults.ccr, hash_combine(c.seed, hash_name("ccr")), "environment.ccr");
  c.environment.humidity = parse_humidity(env.value("humidity", empty), hash_combine(c.seed, hash_name("humidity")));

  // Robots: count + optional starts and per-robot planners.
  int count = 1;
  std::vector<Position> starts;
  if (doc.contains("robots")) {
    const json& r = doc.at("robots");
    reject_unknown(r, {"count", "starts"}, "robots");
    count = get_or(r, "count", count, "robots");
    if (r.contains("starts")) {
      if (!r.at("starts").is_array()) throw ConfigError("robots.starts must be a list of [x, y]");
      for (const auto& s : r.at("starts")) starts.push_back(parse_position(s, "robots.starts[]"));
    }
  }
  if (count < 0) throw ConfigError("robots.count must be >= 0");
  if (starts.size() > static_cast<std::size_t>(count)) throw ConfigError("more robot starts than robots");
  const std::string planner = get_or<std::string>(doc, "planner", "lawnmower", "config");
  const auto planners = get_or<std::vector<std::string>>(doc, "planners", {}, "config");
  if (!planners.empty() && planners.size() != static_cast<std::size_t>(count)) {
    throw ConfigError("'planners' must list one planner per robot");
  }
  const auto planner_seed = get_or<std::uint64_t>(doc, "planner_seed", hash_combine(c.seed, hash_name("planner")), "config");
  for (int i = 0; i < count; ++i) {
    RobotSpec spec;
    spec.start = static_cast<std::size_t>(i) < starts.size() ? starts[static_cast<std::size_t>(i)] : Position{0, 0};
    spec.planner.type = planners.empty() ? planner : planners[static_cast<std::size_t>(i)];
    spec.planner.seed = i == 0 ? planner_seed : hash_combine(planner_seed, static_cast<std::uint64_t>(i));
    if (spec.planner.type != "lawnmower" && spec.planner.type != "adaptive-lawnmower" && spec.planner.type != "spiral" &&
        spec.planner.type != "random-waypoint") {
      throw ConfigError("unknown planner '" + spec.planner.type + "'");
    }
    c.robots.push_back(spec);
  }

  c.estimator.kind = parse_estimator_kind(get_or<std::string>(doc, "estimator", "adaptive-disk", "config"));
  c.estimator.threads = c.threads;
  if (doc.contains("adaptive_disk")) c.estimator.adaptive_disk = parse_adaptive_disk(doc.at("adaptive_disk"));
  c.estimator.gp = parse_gp(doc.value("gp", empty), hash_combine(c.seed, hash_name("gp")));

  c.score = parse_score(doc.value("score", empty));
  reject_unknown(doc.value("score", empty), {"weights", "asymmetry"}, "score");
  c.scoring_timepoints = get_or<std::vector<int>>(doc, "scoring_timepoints", {}, "config");
  for (int t : c.scoring_timepoints) {
    if (t < 1 || t > c.days * c.steps_per_day) throw ConfigError("scoring timepoint " + std::to_string(t) + " outside the run");
  }

  if (doc.contains("bench")) {
    const json& b = doc.at("bench");
    reject_unknown(b, {"geometries", "estimators", "observation_counts", "min_timing_seconds"}, "bench");
    c.bench.geometries = get_or(b, "geometries", c.bench.geometries, "bench");
    c.bench.estimators = get_or(b, "estimators", c.bench.estimators, "bench");
    c.bench.observation_counts = get_or(b, "observation_counts", c.bench.observation_counts, "bench");
    c.bench.min_timing_seconds = get_or(b, "min_timing_seconds", c.bench.min_timing_seconds, "bench");
    for (const auto& g : c.bench.geometries) {
      if (!is_geometry_name(g)) throw ConfigError("unknown geometry '" + g + "' in bench.geometries");
    }
    for (const auto& e : c.bench.estimators) (void)parse_estimator_kind(e);
    for (std::size_t i = 1; i < c.bench.observation_counts.size(); ++i) {
      if (c.bench.observation_counts[i] <= c.bench.observation_counts[i - 1]) {
        throw ConfigError("bench.observation_counts must be strictly ascending");
      }
    }
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc, seed_override);
}

}  // namespace wbf
