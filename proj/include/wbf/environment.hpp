#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "wbf/geometry.hpp"
#include "wbf/grid.hpp"

namespace wbf {

enum class EpiState : std::uint8_t { S, I, R, V };

/// Square propagation kernel of side 2 * radius + 1, indexed by offset.
struct PropagationKernel {
  int radius = 0;
  std::vector<double> weights;  // row-major, (dy + radius) * side + (dx + radius)

  int side() const { return 2 * radius + 1; }
  double at(int dx, int dy) const {
    return weights[static_cast<std::size_t>((dy + radius) * side() + (dx + radius))];
  }
  double& at(int dx, int dy) {
    return weights[static_cast<std::size_t>((dy + radius) * side() + (dx + radius))];
  }
  double sum() const;
};

/// weight(d) proportional to 1/d^2 for Euclidean offset 0 < d, within the
/// (2r+1)^2 square; centre weight 0; weights normalized to sum 1.
PropagationKernel inverse_square_kernel(int radius);

/// Zero-filled kernel of the given radius, for hand-built stencils.
PropagationKernel empty_kernel(int radius);

struct EpidemicParams {
  double p_total = 0.35;
  PropagationKernel kernel = inverse_square_kernel(2);
  int infect_duration = 5;
  int seeds = 3;
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError if the kernel is malformed or a value is out of range.
  void validate() const;
};

struct HumidityParams {
  double evaporation_rate = 0.02;
  int shower_period = 3;
  int showers_per_event = 2;
  double shower_amplitude = 0.7;
  /// Effective shower extent in cells along x (h) and y (w); <= 0 means the grid width / height.
  double h = 0.0;
  double w = 0.0;
  double initial = 0.5;
  std::uint64_t rng_seed = 3;

  void validate() const;
};

struct EnvironmentParams {
  EpidemicParams tylcv{};
  EpidemicParams ccr{.p_total = 0.12, .kernel = inverse_square_kernel(2), .infect_duration = 10, .seeds = 3, .rng_seed = 2};
  HumidityParams humidity{};

  const EpidemicParams& epidemic(Measurement m) const { return m == Measurement::Ccr ? ccr : tylcv; }
};

struct DiseaseLayer {
  Grid<EpiState> state;
  Grid<std::uint16_t> age;
  FieldGrid value;  // plant health: 1 for S and V, 0 for I and R
};

struct Census {
  std::size_t s = 0;
  std::size_t i = 0;
  std::size_t r = 0;
  std::size_t v = 0;
  friend bool operator==(const Census&, const Census&) = default;
};

/// Ground truth E(x, y, t, :) at day granularity.
class Environment {
 public:
  Environment(std::shared_ptr<const Geometry> geometry, DiseaseLayer tylcv, DiseaseLayer ccr, FieldGrid humidity);

  const Geometry& geometry() const { return *geometry_; }
  std::shared_ptr<const Geometry> geometry_ptr() const { return geometry_; }
  int width() const { return geometry_->width(); }
  int height() const { return geometry_->height(); }

  int day() const { return day_; }

  const FieldGrid& field(Measurement m) const;
  const DiseaseLayer& disease(Measurement m) const;
  DiseaseLayer& disease(Measurement m);
  const FieldGrid& humidity() const { return humidity_; }
  FieldGrid& humidity() { return humidity_; }

  /// Current (tylcv, ccr, humidity) at a cell. Out of bounds: ContractViolation.
  std::array<float, kMeasurementCount> read_point(int x, int y) const;

  /// Copies of the three current fields.
  std::array<FieldGrid, kMeasurementCount> snapshot() const;

  Census census(Measurement disease) const;

  /// Worker count for the per-cell infection pass; output does not depend on it.
  int threads = 1;

 private:
  friend void advance_day(Environment&, const EnvironmentParams&);
  std::shared_ptr<const Geometry> geometry_;
  int day_ = 0;
  DiseaseLayer tylcv_;
  DiseaseLayer ccr_;
  FieldGrid humidity_;
};

/// Day 0: `seeds` infected cells per disease drawn without replacement from
/// its susceptibility mask, V outside the mask, humidity = params.initial.
Environment init_environment(std::shared_ptr<const Geometry> geometry, const EnvironmentParams& params);

/// One day of the SIRV automaton for one disease. Infection pressure on an S
/// cell is min(1, p_total * sum(kernel * [neighbour is I])); each S cell then
/// takes one Bernoulli draw from a stream keyed by (seed, day, cell).
void step_epidemic(Environment& env, Measurement disease, const EpidemicParams& params);

/// Evaporation then, on shower days, Gaussian bumps of peak `shower_amplitude`.
void step_humidity(Environment& env, const HumidityParams& params);

/// Both epidemics, humidity, then day += 1.
void advance_day(Environment& env, const EnvironmentParams& params);

/// Peak-normalized shower increment at (x, y) for a bump centred at (mx, my).
double shower_increment(double x, double y, double mx, double my, double h, double w, double amplitude);

}  // namespace wbf
