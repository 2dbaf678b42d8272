#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "wbf/geometry.hpp"
#include "wbf/grid.hpp"

namespace wbf {

using FieldSlice = std::array<FieldGrid, kMeasurementCount>;
using MaskSet = std::array<MaskGrid, kMeasurementCount>;

struct AsymmetryPair {
  double c_minus = 1.0;  // truth >= estimate
  double c_plus = 1.0;   // truth < estimate
};

/// Defaults: TYLCV w=1.0 (1, 10), CCR w=0.2 (1, 10), humidity w=0.1 (1, 1).
struct ScoreConfig {
  std::array<double, kMeasurementCount> weights{1.0, 0.2, 0.1};
  std::array<AsymmetryPair, kMeasurementCount> asymmetry{AsymmetryPair{1.0, 10.0}, AsymmetryPair{1.0, 10.0},
                                                         AsymmetryPair{1.0, 1.0}};
  void validate() const;
};

/// c_plus * (a - b)^2 if a < b, else c_minus * (a - b)^2.
constexpr double asymmetric_error(double truth, double estimate, double c_minus, double c_plus) {
  const double d = truth - estimate;
  return (truth < estimate ? c_plus : c_minus) * d * d;
}

struct ScoreReport {
  double total_loss = 0.0;
  double normalizer = 0.0;  // c * sum_i w_i * |M_i|
  int timepoints = 0;
  std::array<double, kMeasurementCount> weights{};
  std::array<double, kMeasurementCount> mask_cells{};
  /// Masked AE sums per measurement, summed over timepoints.
  std::array<double, kMeasurementCount> error_sum{};
  /// w_i * error_sum_i / normalizer; these add up to total_loss.
  std::array<double, kMeasurementCount> component{};
  /// Masked AE sums per timepoint and measurement.
  std::vector<std::array<double, kMeasurementCount>> per_timepoint;

  double score() const { return -total_loss; }
};

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

/// Masked, weighted, asymmetric loss over c scoring timepoints.
/// Throws ContractViolation on shape mismatch and DegenerateNormalizer when
/// every mask is empty.
ScoreReport compute_loss(std::span<const FieldSlice> truth, std::span<const FieldSlice> estimate, const MaskSet& masks,
                         const ScoreConfig& config);

/// compute_loss with c = 1.
ScoreReport compute_loss(const FieldSlice& truth, const FieldSlice& estimate, const MaskSet& masks,
                         const ScoreConfig& config);

struct LossPoint {
  int timestep = 0;
  double total = 0.0;
  std::array<double, kMeasurementCount> component{};
};

struct LossSnapshot {
  int timestep = 0;
  const FieldSlice* truth = nullptr;
  const FieldSlice* estimate = nullptr;
};

/// Per-timestep loss with c = 1 for each snapshot pair.
std::vector<LossPoint> diagnostic_loss_series(std::span<const LossSnapshot> snapshots, const MaskSet& masks,
                                              const ScoreConfig& config);

/// `timestep,total_loss,tylcv_loss,ccr_loss,humidity_loss`
std::string loss_series_csv(std::span<const LossPoint> series);

/// Stable `key = value` text, doubles printed with 17 significant digits.
std::string format_score_report(const ScoreReport& report);

}  // namespace wbf
