#include "wbf/planners.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "wbf/errors.hpp"

namespace wbf {

namespace {

int sign(int v) { return (v > 0) - (v < 0); }

int chebyshev(Position a, Position b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

void push_unique(Waypoints& w, Position p) {
  if (w.empty() || w.back() != p) w.push_back(p);
}

/// Maps local pattern coordinates (origin at the chosen corner) into the region.
Waypoints place(const Waypoints& local, const CellRect& region, Corner corner) {
  const bool flip_x = corner == Corner::TopRight || corner == Corner::BottomRight;
  const bool flip_y = corner == Corner::BottomLeft || corner == Corner::BottomRight;
  Waypoints out;
  out.reserve(local.size());
  for (Position p : local) {
    out.push_back(Position{region.x0 + (flip_x ? region.width() - 1 - p.x : p.x),
                           region.y0 + (flip_y ? region.height() - 1 - p.y : p.y)});
  }
  return out;
}

Waypoints with_transit(Position start, Waypoints pattern) {
  Waypoints w{start};
  for (Position p : pattern) push_unique(w, p);
  return w;
}

template <class MakePattern>
CoveragePlan fit_spacing(const PlannerBudget& budget, const CellRect& region, Position start, int max_spacing,
                         MakePattern&& make) {
  CoveragePlan plan;
  plan.end = start;
  if (region.empty() || budget.remaining() <= 0) return plan;
  const auto limit = static_cast<std::size_t>(budget.remaining());
  Waypoints chosen;
  for (int s = 1; s <= max_spacing; ++s) {
    Waypoints w = with_transit(start, make(s));
    const bool fits = path_length(w) <= limit;
    if (fits || s == max_spacing) {
      chosen = std::move(w);
      plan.spacing = s;
      plan.fits_budget = fits;
      break;
    }
  }
  plan.moves = expand_moves(chosen);
  if (plan.moves.size() > limit) plan.moves.resize(limit);
  for (Move m : plan.moves) {
    plan.end.x += m.dx;
    plan.end.y += m.dy;
  }
  return plan;
}

}  // namespace

std::size_t path_length(std::span<const Position> waypoints) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) n += static_cast<std::size_t>(chebyshev(waypoints[i - 1], waypoints[i]));
  return n;
}

std::vector<Position> expand_cells(std::span<const Position> waypoints) {
  std::vector<Position> cells;
  if (waypoints.empty()) return cells;
  Position cur = waypoints.front();
  cells.push_back(cur);
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const Position target = waypoints[i];
    while (cur != target) {
      cur.x += sign(target.x - cur.x);
      cur.y += sign(target.y - cur.y);
      cells.push_back(cur);
    }
  }
  return cells;
}

std::vector<Move> expand_moves(std::span<const Position> waypoints) {
  const std::vector<Position> cells = expand_cells(waypoints);
  std::vector<Move> moves;
  moves.reserve(cells.empty() ? 0 : cells.size() - 1);
  for (std::size_t i = 1; i < cells.size(); ++i) {
    moves.push_back(Move{cells[i].x - cells[i - 1].x, cells[i].y - cells[i - 1].y});
  }
  return moves;
}

Position corner_position(const CellRect& region, Corner corner) {
  switch (corner) {
    case Corner::TopLeft: return {region.x0, region.y0};
    case Corner::TopRight: return {region.x1 - 1, region.y0};
    case Corner::BottomLeft: return {region.x0, region.y1 - 1};
    case Corner::BottomRight: break;
  }
  return {region.x1 - 1, region.y1 - 1};
}

Corner nearest_corner(const CellRect& region, Position from) {
  Corner best = Corner::TopLeft;
  int best_d = chebyshev(from, corner_position(region, best));
  for (Corner c : {Corner::TopRight, Corner::BottomLeft, Corner::BottomRight}) {
    const int d = chebyshev(from, corner_position(region, c));
    if (d < best_d) {
      best = c;
      best_d = d;
    }
  }
  return best;
}

Waypoints lawnmower_waypoints(const CellRect& region, int spacing, Corner corner) {
  if (region.empty()) return {};
  if (spacing < 1) throw ContractViolation("lawnmower spacing must be >= 1");
  const int w = region.width();
  const int h = region.height();
  const int rows = (h - 1) / spacing + 1;
  Waypoints local;
  local.push_back({0, 0});
  push_unique(local, {w - 1, 0});
  for (int k = 1; k < rows; ++k) {
    const int y = k * spacing;
    const int from_x = (k % 2 == 1) ? w - 1 : 0;
    const int to_x = w - 1 - from_x;
    if (spacing == 1 || w == 1) {
      push_unique(local, {from_x, y});
    } else {
      // Drop to the row above, then enter the row diagonally.
      push_unique(local, {from_x, y - 1});
      push_unique(local, {from_x + sign(to_x - from_x), y});
    }
    push_unique(local, {to_x, y});
  }
  return place(local, region, corner);
}

Waypoints spiral_waypoints(const CellRect& region, int spacing) {
  if (region.empty()) return {};
  if (spacing < 1) throw ContractViolation("spiral spacing must be >= 1");
  int l = region.x0;
  int t = region.y0;
  int r = region.x1 - 1;
  int b = region.y1 - 1;
  const int s = spacing;
  Waypoints w{{l, t}};
  while (true) {
    push_unique(w, {r, t});
    if (t == b) break;
    push_unique(w, {r, b});
    if (l == r) break;
    push_unique(w, {l, b});
    const bool inner_ring = l + s <= r - s && t + s <= b - s;
    if (!inner_ring) {
      if (t + 1 < b) push_unique(w, {l, t + 1});
      break;
    }
    push_unique(w, {l, t + s});
    push_unique(w, {l + s, t + s});
    l += s;
    t += s;
    r -= s;
    b -= s;
  }
  return w;
}

CoveragePlan plan_lawnmower(const PlannerBudget& budget, const CellRect& region, Position start) {
  const Corner corner = nearest_corner(region, start);
  return fit_spacing(budget, region, start, std::max(1, region.height()),
                     [&](int s) { return lawnmower_waypoints(region, s, corner); });
}

CoveragePlan plan_lawnmower(const PlannerBudget& budget, const CellRect& region) {
  return plan_lawnmower(budget, region, Position{region.x0, region.y0});
}

CoveragePlan plan_spiral(const PlannerBudget& budget, const CellRect& region, Position start) {
  return fit_spacing(budget, region, start, std::max({1, region.width(), region.height()}),
                     [&](int s) { return spiral_waypoints(region, s); });
}

CoveragePlan plan_spiral(const PlannerBudget& budget, const CellRect& region) {
  return plan_spiral(budget, region, Position{region.x0, region.y0});
}

AdaptivePlan plan_adaptive_lawnmower(const PlannerBudget& budget, const Geometry& geometry, const ScoreConfig& weights,
                                     Position start) {
  const CellRect tomato = client_crop_bounds(geometry, CropKind::Tomato);
  const CellRect strawberry = client_crop_bounds(geometry, CropKind::Strawberry);
  if (tomato.empty() || strawberry.empty()) throw ContractViolation("adaptive lawnmower needs both crop regions");

  const double w_tylcv = weights.weights[index_of(Measurement::Tylcv)];
  const double w_ccr = weights.weights[index_of(Measurement::Ccr)];
  const double w_hum = weights.weights[index_of(Measurement::Humidity)];
  const double tomato_share = (w_tylcv + w_hum) / (w_tylcv + w_ccr + 2.0 * w_hum);

  AdaptivePlan plan;
  const int total = std::max(0, budget.remaining());
  plan.tomato_budget = static_cast<int>(std::floor(total * tomato_share));

  CoveragePlan first = plan_lawnmower(PlannerBudget{plan.tomato_budget, 0}, tomato, start);
  const bool overflow = !first.fits_budget;
  if (overflow) {
    // Even the sparsest tomato sweep overflows its share: it gets the whole
    // budget and the strawberry region is not visited.
    first = plan_lawnmower(PlannerBudget{total, 0}, tomato, start);
  }
  plan.tomato_spacing = first.spacing;
  plan.moves = std::move(first.moves);

  const int remaining = total - static_cast<int>(plan.moves.size());
  const int transit = chebyshev(first.end, corner_position(strawberry, nearest_corner(strawberry, first.end)));
  if (!overflow && remaining > transit) {
    CoveragePlan second = plan_lawnmower(PlannerBudget{remaining, 0}, strawberry, first.end);
    plan.strawberry_spacing = second.spacing;
    plan.moves.insert(plan.moves.end(), second.moves.begin(), second.moves.end());
  }
  if (plan.moves.size() > static_cast<std::size_t>(total)) plan.moves.resize(static_cast<std::size_t>(total));
  return plan;
}

Move ScriptedPlanner::next_move(const PlannerContext&) {
  if (next_ >= moves_.size()) return Move{0, 0};
  return moves_[next_++];
}

RandomWaypointPlanner::RandomWaypointPlanner(std::uint64_t seed, int width, int height)
    : rng_(seed, "random-waypoint"), width_(width), height_(height) {
  if (width < 1 || height < 1) throw ContractViolation("random waypoint needs a non-empty grid");
}

Move RandomWaypointPlanner::next_move(const PlannerContext& ctx) {
  const Position pos = ctx.position;
  if (width_ * height_ == 1) return Move{0, 0};
  while (!has_waypoint_ || waypoint_ == pos) {
    waypoint_.x = static_cast<int>(rng_.below(static_cast<std::uint64_t>(width_)));
    waypoint_.y = static_cast<int>(rng_.below(static_cast<std::uint64_t>(height_)));
    has_waypoint_ = true;
  }
  return Move{sign(waypoint_.x - pos.x), sign(waypoint_.y - pos.y)};
}

std::unique_ptr<RandomWaypointPlanner> plan_random_waypoint(std::uint64_t seed, int width, int height) {
  return std::make_unique<RandomWaypointPlanner>(seed, width, height);
}

std::unique_ptr<Planner> make_planner(const PlannerSpec& spec, const Geometry& geometry, const ScoreConfig& weights,
                                      int budget, Position start) {
  const CellRect whole{0, 0, geometry.width(), geometry.height()};
  const PlannerBudget b{budget, 0};
  if (spec.type == "lawnmower") {
    return std::make_unique<ScriptedPlanner>(spec.type, plan_lawnmower(b, whole, start).moves);
  }
  if (spec.type == "spiral") {
    return std::make_unique<ScriptedPlanner>(spec.type, plan_spiral(b, whole, start).moves);
  }
  if (spec.type == "adaptive-lawnmower") {
    return std::make_unique<ScriptedPlanner>(spec.type, plan_adaptive_lawnmower(b, geometry, weights, start).moves);
  }
  if (spec.type == "random-waypoint") return plan_random_waypoint(spec.seed, geometry.width(), geometry.height());
  throw ConfigError("unknown planner '" + spec.type +
                    "' (expected lawnmower, adaptive-lawnmower, spiral or random-waypoint)");
}

}  // namespace wbf
