#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wbf/environment.hpp"

namespace wbf {

struct Robot {
  int id = 0;
  Position position;
};

struct Observation {
  int robot_id = 0;
  Position position;
  int timestep = 0;  // global step index, 0-based
  int day = 0;
  std::array<float, kMeasurementCount> values{};
};

struct WorldClock {
  int timestep = 0;  // within the current day
  int day = 0;
  int steps_per_day = 1;
  int elapsed = 0;   // total steps taken
};

/// Robots acting on an environment. Each step every robot observes its cell,
/// then moves one king move; the environment is frozen within a day.
class World {
 public:
  World(Environment env, EnvironmentParams params, std::vector<Position> starts, int steps_per_day);

  /// Observe then move. Moves outside [-1, 1] or off-grid are clamped and a
  /// warning is logged. Invokes the day-end hook and advance_day on rollover.
  std::vector<Observation> step(std::span<const Move> moves);

  /// Called once per completed day, before the environment advances.
  std::function<void(const World&)> on_day_end;

  const Environment& environment() const { return env_; }
  Environment& environment() { return env_; }
  const std::vector<Robot>& robots() const { return robots_; }
  const std::vector<Observation>& observations() const { return log_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const WorldClock& clock() const { return clock_; }

 private:
  Environment env_;
  EnvironmentParams params_;
  std::vector<Robot> robots_;
  WorldClock clock_;
  std::vector<Observation> log_;
  std::vector<std::string> warnings_;
};

/// CSV with header `timestep,day,robot_id,x,y,tylcv,ccr,humidity`.
std::string observations_csv(std::span<const Observation> observations);

}  // namespace wbf
