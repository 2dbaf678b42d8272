#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wbf/geometry.hpp"
#include "wbf/grid.hpp"
#include "wbf/rng.hpp"
#include "wbf/scoring.hpp"

namespace wbf {

struct InformationModel;

struct PlannerBudget {
  int total_steps = 0;
  int steps_used = 0;
  int remaining() const { return total_steps - steps_used; }
};

/// Path as corner waypoints; consecutive waypoints are joined by king-move
/// lines (diagonal first, then straight), one cell per move.
using Waypoints = std::vector<Position>;

/// Exact number of unit moves needed to walk the waypoints.
std::size_t path_length(std::span<const Position> waypoints);

/// Every cell visited along the waypoints, starting cell included.
std::vector<Position> expand_cells(std::span<const Position> waypoints);

/// Unit moves between consecutive cells of the expanded path.
std::vector<Move> expand_moves(std::span<const Position> waypoints);

enum class Corner { TopLeft, TopRight, BottomLeft, BottomRight };

/// Corner of the region closest (Chebyshev) to `from`; ties resolve in enum order.
Corner nearest_corner(const CellRect& region, Position from);
Position corner_position(const CellRect& region, Corner corner);

/// Boustrophedon over horizontal rows y0, y0 + s, ... starting at `corner`.
/// Row turns with s >= 2 cut the corner with one diagonal move.
Waypoints lawnmower_waypoints(const CellRect& region, int spacing, Corner corner = Corner::TopLeft);

/// Inward rectangular spiral from the top-left corner with ring spacing s.
Waypoints spiral_waypoints(const CellRect& region, int spacing);

struct CoveragePlan {
  std::vector<Move> moves;
  int spacing = 0;          // 0 when nothing was planned
  bool fits_budget = false; // false: sparsest pattern still too long, moves truncated
  Position end;
};

/// Smallest spacing whose exact path (transit from `start` included) fits the
/// remaining budget. If none fits the sparsest pattern is used and truncated.
CoveragePlan plan_lawnmower(const PlannerBudget& budget, const CellRect& region, Position start);
CoveragePlan plan_lawnmower(const PlannerBudget& budget, const CellRect& region);
CoveragePlan plan_spiral(const PlannerBudget& budget, const CellRect& region, Position start);
CoveragePlan plan_spiral(const PlannerBudget& budget, const CellRect& region);

struct AdaptivePlan {
  std::vector<Move> moves;
  int tomato_budget = 0;
  int tomato_spacing = 0;
  int strawberry_spacing = 0;  // 0 if the strawberry region is never entered
};

/// Tomato region first, then strawberry, the budget split by the weight share
/// (w_tylcv + w_hum) : (w_ccr + w_hum). Transit moves count against the budget.
AdaptivePlan plan_adaptive_lawnmower(const PlannerBudget& budget, const Geometry& geometry, const ScoreConfig& weights,
                                     Position start);

struct PlannerContext {
  Position position;
  int timestep = 0;
  const Geometry* geometry = nullptr;
  const InformationModel* model = nullptr;  // unused by the open-loop planners
};

class Planner {
 public:
  virtual ~Planner() = default;
  virtual Move next_move(const PlannerContext& ctx) = 0;
  virtual std::string_view name() const = 0;
};

/// Replays a precomputed move list, then stays put.
class ScriptedPlanner final : public Planner {
 public:
  ScriptedPlanner(std::string name, std::vector<Move> moves) : name_(std::move(name)), moves_(std::move(moves)) {}
  Move next_move(const PlannerContext&) override;
  std::string_view name() const override { return name_; }
  const std::vector<Move>& moves() const { return moves_; }

 private:
  std::string name_;
  std::vector<Move> moves_;
  std::size_t next_ = 0;
};

/// Heads for a uniformly drawn cell with sign(dx), sign(dy) moves; draws a
/// new waypoint on arrival.
class RandomWaypointPlanner final : public Planner {
 public:
  RandomWaypointPlanner(std::uint64_t seed, int width, int height);
  Move next_move(const PlannerContext& ctx) override;
  std::string_view name() const override { return "random-waypoint"; }
  Position waypoint() const { return waypoint_; }

 private:
  CounterRng rng_;
  int width_;
  int height_;
  Position waypoint_{};
  bool has_waypoint_ = false;
};

std::unique_ptr<RandomWaypointPlanner> plan_random_waypoint(std::uint64_t seed, int width, int height);

struct PlannerSpec {
  std::string type = "lawnmower";  // lawnmower | adaptive-lawnmower | spiral | random-waypoint
  std::uint64_t seed = 0;
};

/// Throws ConfigError on an unknown planner type.
std::unique_ptr<Planner> make_planner(const PlannerSpec& spec, const Geometry& geometry, const ScoreConfig& weights,
                                      int budget, Position start);

}  // namespace wbf
