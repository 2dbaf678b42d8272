#include "wbf/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "wbf/errors.hpp"
#include "wbf/parallel.hpp"
#include "wbf/rng.hpp"

namespace wbf {

namespace {

/// Strict "a beats b" for cells equidistant from both observations.
bool more_recent(const Observation& a, const Observation& b, Measurement m) {
  if (a.timestep != b.timestep) return a.timestep > b.timestep;
  if (a.robot_id != b.robot_id) return a.robot_id > b.robot_id;
  return a.values[index_of(m)] < b.values[index_of(m)];
}

}  // namespace

InformationModel InformationModel::prior(std::shared_ptr<const Geometry> geometry,
                                         const std::array<double, kMeasurementCount>& defaults,
                                         std::string estimator_id) {
  InformationModel model;
  for (std::size_t i = 0; i < kMeasurementCount; ++i) {
    model.values[i] = FieldGrid(geometry->width(), geometry->height(), static_cast<float>(defaults[i]));
  }
  model.geometry = std::move(geometry);
  model.estimator_id = std::move(estimator_id);
  return model;
}

void AdaptiveDiskParams::validate() const {
  if (r_min < 1) throw ConfigError("adaptive-disk: r_min must be >= 1");
}

int adaptive_disk_radius(std::size_t observations, std::size_t area, int r_min) {
  if (observations == 0) return r_min;
  const double r = std::sqrt(static_cast<double>(area) / (std::numbers::pi * static_cast<double>(observations)));
  return std::max(r_min, static_cast<int>(std::lround(r)));
}

FieldGrid estimate_adaptive_disk(std::span<const Observation> observations, Measurement m,
                                 const AdaptiveDiskParams& params, int width, int height, int threads,
                                 const Deadline& deadline) {
  params.validate();
  const std::size_t mi = index_of(m);
  FieldGrid out(width, height, static_cast<float>(params.default_value[mi]));
  if (observations.empty()) return out;
  const int r = adaptive_disk_radius(observations.size(), out.size(), params.r_min);
  const long long r2 = static_cast<long long>(r) * r;

  parallel_for(0, static_cast<std::size_t>(height), threads, [&](std::size_t lo, std::size_t hi) {
    for (int y = static_cast<int>(lo); y < static_cast<int>(hi); ++y) {
      deadline.check();
      for (int x = 0; x < width; ++x) {
        const Observation* best = nullptr;
        long long best_d2 = r2 + 1;
        for (const Observation& o : observations) {
          const long long dx = o.position.x - x;
          const long long dy = o.position.y - y;
          const long long d2 = dx * dx + dy * dy;
          if (d2 < best_d2 || (d2 == best_d2 && best && more_recent(o, *best, m))) {
            best = &o;
            best_d2 = d2;
          }
        }
        if (best) out(x, y) = best->values[mi];
      }
    }
  }, 4);
  return out;
}

TrainingSet training_set(std::span<const Observation> observations, Measurement m) {
  TrainingSet data;
  const auto n = static_cast<Eigen::Index>(observations.size());
  data.inputs.resize(n, 2);
  data.targets.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Observation& o = observations[static_cast<std::size_t>(i)];
    data.inputs(i, 0) = o.position.x;
    data.inputs(i, 1) = o.position.y;
    data.targets[i] = o.values[index_of(m)];
  }
  return data;
}

std::string EstimatorSpec::id() const { return kind == EstimatorKind::AdaptiveDisk ? "adaptive-disk" : "gp"; }

EstimatorKind parse_estimator_kind(std::string_view name) {
  if (name == "adaptive-disk") return EstimatorKind::AdaptiveDisk;
  if (name == "gp") return EstimatorKind::GaussianProcess;
  throw ConfigError("unknown estimator '" + std::string(name) + "' (expected adaptive-disk or gp)");
}

EstimateResult estimate(std::span<const Observation> observations, std::shared_ptr<const Geometry> geometry,
                        const EstimatorSpec& spec, const Deadline& deadline) {
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  const int width = geometry->width();
  const int height = geometry->height();

  EstimateResult result;
  result.model = InformationModel::prior(geometry, spec.adaptive_disk.default_value, spec.id());
  result.model.observation_count = observations.size();
  try {
    for (Measurement m : kMeasurements) {
      const std::size_t i = index_of(m);
      if (spec.kind == EstimatorKind::AdaptiveDisk) {
        result.model.values[i] =
            estimate_adaptive_disk(observations, m, spec.adaptive_disk, width, height, spec.threads, deadline);
        continue;
      }
      if (observations.empty()) continue;
      GPParams params = spec.gp;
      params.rng_seed = hash_combine(spec.gp.rng_seed, i);
      const GaussianProcess gp = gp_fit(training_set(observations, m), params, deadline);
      GPGridPrediction pred = gp_predict(gp, width, height, params.predict_batch, spec.threads, deadline);
      for (float& v : pred.mean.data()) v = std::clamp(v, 0.0f, 1.0f);
      result.model.values[i] = std::move(pred.mean);
      result.model.uncertainty[i] = std::move(pred.variance);
    }
  } catch (const DeadlineExceeded&) {
    throw;
  } catch (const std::exception& e) {
    throw EstimatorError(spec.id() + ": " + e.what());
  }
  result.seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return result;
}

}  // namespace wbf
