#include "wbf/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wbf/errors.hpp"
#include "wbf/parallel.hpp"
#include "wbf/rng.hpp"

namespace wbf {

namespace {

float health_of(EpiState s) { return (s == EpiState::S || s == EpiState::V) ? 1.0f : 0.0f; }

std::uint64_t disease_key(std::uint64_t seed, Measurement m, std::string_view stream) {
  return hash_combine(hash_combine(seed, hash_name(measurement_name(m))), hash_name(stream));
}

DiseaseLayer seed_disease(const Geometry& g, Measurement m, const EpidemicParams& params) {
  const MaskGrid mask = susceptibility_mask(g, m);
  DiseaseLayer layer{Grid<EpiState>(g.width(), g.height(), EpiState::V), Grid<std::uint16_t>(g.width(), g.height(), 0),
                     FieldGrid(g.width(), g.height(), 1.0f)};
  std::vector<std::size_t> susceptible;
  auto mask_data = mask.data();
  auto state = layer.state.data();
  for (std::size_t i = 0; i < mask_data.size(); ++i) {
    if (mask_data[i]) {
      state[i] = EpiState::S;
      susceptible.push_back(i);
    }
  }
  const auto seeds = static_cast<std::size_t>(params.seeds);
  if (seeds > susceptible.size()) {
    throw ConfigError(std::string(measurement_name(m)) + ": " + std::to_string(seeds) +
                      " infection seeds exceed the " + std::to_string(susceptible.size()) + " susceptible cells");
  }
  // Partial Fisher-Yates: the first `seeds` entries become a uniform sample without replacement.
  CounterRng rng(disease_key(params.rng_seed, m, "seeding"));
  for (std::size_t k = 0; k < seeds; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.below(susceptible.size() - k));
    std::swap(susceptible[k], susceptible[j]);
    state[susceptible[k]] = EpiState::I;
    layer.value.data()[susceptible[k]] = 0.0f;
  }
  return layer;
}

void validate_kernel(const PropagationKernel& k) {
  if (k.radius < 0) throw ConfigError("kernel radius must be >= 0");
  const auto side = static_cast<std::size_t>(k.side());
  if (k.weights.size() != side * side) throw ConfigError("kernel weight count does not match its side");
  for (double w : k.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("kernel weights must be finite and non-negative");
  }
  if (k.at(0, 0) != 0.0) throw ConfigError("kernel centre weight must be 0");
}

}  // namespace

double PropagationKernel::sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

PropagationKernel empty_kernel(int radius) {
  if (radius < 0) throw ConfigError("kernel radius must be >= 0");
  PropagationKernel k;
  k.radius = radius;
  k.weights.assign(static_cast<std::size_t>(k.side() * k.side()), 0.0);
  return k;
}

PropagationKernel inverse_square_kernel(int radius) {
  PropagationKernel k = empty_kernel(radius);
  if (radius == 0) return k;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const int d2 = dx * dx + dy * dy;
      if (d2 > 0) k.at(dx, dy) = 1.0 / d2;
    }
  }
  const double total = k.sum();
  for (double& w : k.weights) w /= total;
  return k;
}

void EpidemicParams::validate() const {
  validate_kernel(kernel);
  if (!(p_total >= 0.0) || !std::isfinite(p_total)) throw ConfigError("p_total must be finite and >= 0");
  if (infect_duration < 1 || infect_duration > 65535) throw ConfigError("infect_duration must be in [1, 65535]");
  if (seeds < 0) throw ConfigError("seeds must be >= 0");
}

void HumidityParams::validate() const {
  if (!(evaporation_rate >= 0.0)) throw ConfigError("evaporation_rate must be >= 0");
  if (!(shower_amplitude >= 0.0)) throw ConfigError("shower_amplitude must be >= 0");
  if (shower_period < 0) throw ConfigError("shower_period must be >= 0");
  if (showers_per_event < 0) throw ConfigError("showers_per_event must be >= 0");
  if (!(initial >= 0.0 && initial <= 1.0)) throw ConfigError("initial humidity must be in [0, 1]");
}

Environment::Environment(std::shared_ptr<const Geometry> geometry, DiseaseLayer tylcv, DiseaseLayer ccr,
                         FieldGrid humidity)
    : geometry_(std::move(geometry)), tylcv_(std::move(tylcv)), ccr_(std::move(ccr)), humidity_(std::move(humidity)) {}

const FieldGrid& Environment::field(Measurement m) const {
  switch (m) {
    case Measurement::Tylcv: return tylcv_.value;
    case Measurement::Ccr: return ccr_.value;
    case Measurement::Humidity: break;
  }
  return humidity_;
}

const DiseaseLayer& Environment::disease(Measurement m) const {
  if (!is_disease(m)) throw ContractViolation("humidity is not a disease layer");
  return m == Measurement::Tylcv ? tylcv_ : ccr_;
}

DiseaseLayer& Environment::disease(Measurement m) {
  if (!is_disease(m)) throw ContractViolation("humidity is not a disease layer");
  return m == Measurement::Tylcv ? tylcv_ : ccr_;
}

std::array<float, kMeasurementCount> Environment::read_point(int x, int y) const {
  if (!humidity_.contains(x, y)) {
    throw ContractViolation("read_point(" + std::to_string(x) + ", " + std::to_string(y) + ") outside the grid");
  }
  return {tylcv_.value(x, y), ccr_.value(x, y), humidity_(x, y)};
}

std::array<FieldGrid, kMeasurementCount> Environment::snapshot() const {
  return {tylcv_.value, ccr_.value, humidity_};
}

Census Environment::census(Measurement m) const {
  Census c;
  for (EpiState s : disease(m).state.data()) {
    switch (s) {
      case EpiState::S: ++c.s; break;
      case EpiState::I: ++c.i; break;
      case EpiState::R: ++c.r; break;
      case EpiState::V: ++c.v; break;
    }
  }
  return c;
}

Environment init_environment(std::shared_ptr<const Geometry> geometry, const EnvironmentParams& params) {
  if (!geometry) throw ContractViolation("init_environment needs a geometry");
  params.tylcv.validate();
  params.ccr.validate();
  params.humidity.validate();
  DiseaseLayer tylcv = seed_disease(*geometry, Measurement::Tylcv, params.tylcv);
  DiseaseLayer ccr = seed_disease(*geometry, Measurement::Ccr, params.ccr);
  FieldGrid humidity(geometry->width(), geometry->height(), static_cast<float>(params.humidity.initial));
  return Environment(geometry, std::move(tylcv), std::move(ccr), std::move(humidity));
}

void step_epidemic(Environment& env, Measurement m, const EpidemicParams& params) {
  DiseaseLayer& layer = env.disease(m);
  const int width = env.width();
  const int height = env.height();
  const int radius = params.kernel.radius;
  auto state = layer.state.data();

  std::vector<std::size_t> infected;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state[i] == EpiState::I) infected.push_back(i);
  }
  if (infected.empty()) return;

  // Only S cells within the kernel footprint of an I cell can have non-zero pressure.
  MaskGrid candidate(width, height, 0);
  for (std::size_t idx : infected) {
    const int cx = static_cast<int>(idx % static_cast<std::size_t>(width));
    const int cy = static_cast<int>(idx / static_cast<std::size_t>(width));
    for (int y = std::max(0, cy - radius); y <= std::min(height - 1, cy + radius); ++y) {
      for (int x = std::max(0, cx - radius); x <= std::min(width - 1, cx + radius); ++x) {
        if (params.kernel.at(cx - x, cy - y) > 0.0 && layer.state(x, y) == EpiState::S) candidate(x, y) = 1;
      }
    }
  }

  const CounterRng draws(hash_combine(disease_key(params.rng_seed, m, "infection"), static_cast<std::uint64_t>(env.day())));
  MaskGrid newly_infected(width, height, 0);
  parallel_for(0, static_cast<std::size_t>(height), env.threads, [&](std::size_t row_lo, std::size_t row_hi) {
    for (int y = static_cast<int>(row_lo); y < static_cast<int>(row_hi); ++y) {
      for (int x = 0; x < width; ++x) {
        if (!candidate(x, y)) continue;
        double pressure = 0.0;
        for (int dy = -radius; dy <= radius; ++dy) {
          const int ny = y + dy;
          if (ny < 0 || ny >= height) continue;
          for (int dx = -radius; dx <= radius; ++dx) {
            const int nx = x + dx;
            if (nx < 0 || nx >= width) continue;
            if (layer.state(nx, ny) == EpiState::I) pressure += params.kernel.at(dx, dy);
          }
        }
        const double p = std::min(1.0, params.p_total * pressure);
        if (draws.uniform_at(layer.state.index(x, y)) < p) newly_infected(x, y) = 1;
      }
    }
  }, 16);

  for (std::size_t idx : infected) {
    std::uint16_t& age = layer.age.data()[idx];
    ++age;
    if (age >= params.infect_duration) state[idx] = EpiState::R;
  }
  auto fresh = newly_infected.data();
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    if (!fresh[i]) continue;
    state[i] = EpiState::I;
    layer.age.data()[i] = 0;
  }
  auto value = layer.value.data();
  for (std::size_t i = 0; i < state.size(); ++i) value[i] = health_of(state[i]);
}

double shower_increment(double x, double y, double mx, double my, double h, double w, double amplitude) {
  const double sx = h / 8.0;
  const double sy = w / 8.0;
  const double gx = std::exp(-0.5 * (x - mx) * (x - mx) / (sx * sx));
  const double gy = std::exp(-0.5 * (y - my) * (y - my) / (sy * sy));
  return amplitude * gx * gy;
}

void step_humidity(Environment& env, const HumidityParams& params) {
  FieldGrid& hum = env.humidity();
  const int width = env.width();
  const int height = env.height();
  for (float& v : hum.data()) {
    v = static_cast<float>(std::clamp(static_cast<double>(v) - params.evaporation_rate, 0.0, 1.0));
  }
  if (params.shower_period <= 0 || env.day() % params.shower_period != 0) return;
  if (params.showers_per_event == 0 || params.shower_amplitude == 0.0) return;

  const double h = params.h > 0.0 ? params.h : width;
  const double w = params.w > 0.0 ? params.w : height;
  CounterRng rng(hash_combine(CounterRng(params.rng_seed, "showers").key(), static_cast<std::uint64_t>(env.day())));
  Grid<double> increment(width, height, 0.0);
  std::vector<double> gx(static_cast<std::size_t>(width));
  std::vector<double> gy(static_cast<std::size_t>(height));
  for (int s = 0; s < params.showers_per_event; ++s) {
    const double mx = rng.uniform(0.0, std::max(0, width - 1));
    const double my = rng.uniform(0.0, std::max(0, height - 1));
    // The bump is separable; evaluate each axis once.
    for (int x = 0; x < width; ++x) gx[static_cast<std::size_t>(x)] = shower_increment(x, my, mx, my, h, w, 1.0);
    for (int y = 0; y < height; ++y) gy[static_cast<std::size_t>(y)] = shower_increment(mx, y, mx, my, h, w, 1.0);
    for (int y = 0; y < height; ++y) {
      const double ay = params.shower_amplitude * gy[static_cast<std::size_t>(y)];
      if (ay == 0.0) continue;
      for (int x = 0; x < width; ++x) increment(x, y) += ay * gx[static_cast<std::size_t>(x)];
    }
  }
  auto out = hum.data();
  auto inc = increment.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(std::clamp(static_cast<double>(out[i]) + inc[i], 0.0, 1.0));
  }
}

void advance_day(Environment& env, const EnvironmentParams& params) {
  step_epidemic(env, Measurement::Tylcv, params.tylcv);
  step_epidemic(env, Measurement::Ccr, params.ccr);
  step_humidity(env, params.humidity);
  ++env.day_;
}

}  // namespace wbf
