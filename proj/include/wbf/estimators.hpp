#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "wbf/deadline.hpp"
#include "wbf/gaussian_process.hpp"
#include "wbf/geometry.hpp"
#include "wbf/scoring.hpp"
#include "wbf/world.hpp"

namespace wbf {

/// Estimated fields I(x, y, t, :) for one timepoint.
struct InformationModel {
  std::shared_ptr<const Geometry> geometry;
  FieldSlice values;
  std::array<std::optional<FieldGrid>, kMeasurementCount> uncertainty;
  std::string estimator_id;
  std::size_t observation_count = 0;

  /// Uniform model filled with the per-measurement defaults.
  static InformationModel prior(std::shared_ptr<const Geometry> geometry, const std::array<double, kMeasurementCount>& defaults,
                                std::string estimator_id);
};

struct AdaptiveDiskParams {
  int r_min = 1;
  /// Value of cells no disk reaches: diseases healthy (1), humidity 0.5.
  std::array<double, kMeasurementCount> default_value{1.0, 1.0, 0.5};
  void validate() const;
};

/// r(N) = max(r_min, round(sqrt(area / (pi N)))); r_min for N = 0.
int adaptive_disk_radius(std::size_t observations, std::size_t area, int r_min);

/// Each cell takes the value of the nearest observation within r(N)
/// (Euclidean); ties go to the later timestep, then the higher robot id, then
/// the lower value. Cells outside every disk take the default. Cost is
/// O(cells * N).
FieldGrid estimate_adaptive_disk(std::span<const Observation> observations, Measurement m,
                                 const AdaptiveDiskParams& params, int width, int height, int threads = 1,
                                 const Deadline& deadline = {});

/// Positions and the m-th value of each observation.
TrainingSet training_set(std::span<const Observation> observations, Measurement m);

enum class EstimatorKind { AdaptiveDisk, GaussianProcess };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::AdaptiveDisk;
  AdaptiveDiskParams adaptive_disk{};
  GPParams gp{};
  int threads = 1;

  std::string id() const;
};

/// Throws ConfigError for anything but "adaptive-disk" / "gp".
EstimatorKind parse_estimator_kind(std::string_view name);

struct EstimateResult {
  InformationModel model;
  double seconds = 0.0;
};

/// Runs the estimator once per measurement. GP means are clamped to [0, 1];
/// with no observations the GP returns the prior defaults. Errors are
/// rethrown as EstimatorError tagged with the estimator id; DeadlineExceeded
/// propagates unchanged.
EstimateResult estimate(std::span<const Observation> observations, std::shared_ptr<const Geometry> geometry,
                        const EstimatorSpec& spec, const Deadline& deadline = {});

}  // namespace wbf
