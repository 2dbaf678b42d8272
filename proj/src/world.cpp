#include "wbf/world.hpp"

#include <algorithm>
#include <cstdio>

#include "wbf/errors.hpp"

namespace wbf {

World::World(Environment env, EnvironmentParams params, std::vector<Position> starts, int steps_per_day)
    : env_(std::move(env)), params_(std::move(params)) {
  if (steps_per_day < 1) throw ConfigError("steps_per_day must be >= 1 for a world with robots");
  clock_.steps_per_day = steps_per_day;
  clock_.day = env_.day();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (!env_.field(Measurement::Humidity).contains(starts[i])) {
      throw ConfigError("robot " + std::to_string(i) + " starts outside the grid");
    }
    robots_.push_back(Robot{static_cast<int>(i), starts[i]});
  }
}

std::vector<Observation> World::step(std::span<const Move> moves) {
  if (moves.size() != robots_.size()) throw ContractViolation("one move per robot is required");
  std::vector<Observation> observed;
  observed.reserve(robots_.size());
  for (Robot& robot : robots_) {
    const Position p = robot.position;
    observed.push_back(Observation{robot.id, p, clock_.elapsed, clock_.day, env_.read_point(p.x, p.y)});

    const Move m = moves[static_cast<std::size_t>(robot.id)];
    const Move unit{std::clamp(m.dx, -1, 1), std::clamp(m.dy, -1, 1)};
    Position next{std::clamp(p.x + unit.dx, 0, env_.width() - 1), std::clamp(p.y + unit.dy, 0, env_.height() - 1)};
    if (unit != m || next.x != p.x + unit.dx || next.y != p.y + unit.dy) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "step %d: robot %d move (%d,%d) at (%d,%d) clamped to (%d,%d)", clock_.elapsed,
                    robot.id, m.dx, m.dy, p.x, p.y, next.x, next.y);
      warnings_.emplace_back(buf);
    }
    robot.position = next;
  }
  log_.insert(log_.end(), observed.begin(), observed.end());

  ++clock_.elapsed;
  if (++clock_.timestep == clock_.steps_per_day) {
    if (on_day_end) on_day_end(*this);
    advance_day(env_, params_);
    clock_.timestep = 0;
    clock_.day = env_.day();
  }
  return observed;
}

std::string observations_csv(std::span<const Observation> observations) {
  std::string out = "timestep,day,robot_id,x,y,tylcv,ccr,humidity\n";
  char buf[192];
  for (const Observation& o : observations) {
    const int n = std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%.9g,%.9g,%.9g\n", o.timestep, o.day, o.robot_id,
                                o.position.x, o.position.y, static_cast<double>(o.values[0]),
                                static_cast<double>(o.values[1]), static_cast<double>(o.values[2]));
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

}  // namespace wbf
