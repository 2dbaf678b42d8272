#include <gtest/gtest.h>

#include <map>
#include <set>

#include "planner_oracles.hpp"
#include "wbf/errors.hpp"
#include "wbf/planners.hpp"

using namespace wbf;

namespace {

std::vector<Position> walk(Position start, const std::vector<Move>& moves) {
  std::vector<Position> cells{start};
  for (Move m : moves) {
    EXPECT_LE(std::abs(m.dx), 1);
    EXPECT_LE(std::abs(m.dy), 1);
    start.x += m.dx;
    start.y += m.dy;
    cells.push_back(start);
  }
  return cells;
}

std::set<std::pair<int, int>> visited(const std::vector<Position>& cells) {
  std::set<std::pair<int, int>> s;
  for (Position p : cells) s.emplace(p.x, p.y);
  return s;
}

bool inside(const CellRect& r, Position p) { return p.x >= r.x0 && p.x < r.x1 && p.y >= r.y0 && p.y < r.y1; }

}  // namespace

TEST(Lawnmower, FullBudgetVisitsEveryCellOnce) {
  const CellRect r{0, 0, 10, 10};
  const CoveragePlan plan = plan_lawnmower(PlannerBudget{100, 0}, r);
  EXPECT_EQ(plan.spacing, 1);
  EXPECT_TRUE(plan.fits_budget);
  const auto cells = walk({0, 0}, plan.moves);
  EXPECT_EQ(cells.size(), 100u);
  EXPECT_EQ(visited(cells).size(), 100u);
}

TEST(Lawnmower, BudgetFiftyOnTenByTen) {
  const CellRect r{0, 0, 10, 10};
  const CoveragePlan plan = plan_lawnmower(PlannerBudget{50, 0}, r);
  int expected = 0;
  for (int s = 1; s <= 10; ++s) {
    if (wbf_test::lawnmower_length(10, 10, s) <= 50) {
      expected = s;
      break;
    }
  }
  EXPECT_EQ(expected, 2);
  EXPECT_EQ(plan.spacing, 2);
  EXPECT_EQ(static_cast<long>(plan.moves.size()), wbf_test::lawnmower_length(10, 10, 2));
  // Count sweep rows: rows where nearly the whole width was traversed.
  std::map<int, int> per_row;
  for (auto [x, y] : visited(walk({0, 0}, plan.moves))) ++per_row[y];
  int sweeps = 0;
  for (auto [y, n] : per_row) sweeps += n >= 9;
  EXPECT_EQ(sweeps, 5);
}

TEST(Lawnmower, SingleRowIsStraightLine) {
  for (int n : {1, 2, 7, 30}) {
    const CoveragePlan plan = plan_lawnmower(PlannerBudget{100, 0}, CellRect{0, 0, n, 1});
    EXPECT_EQ(plan.moves.size(), static_cast<std::size_t>(n - 1));
    for (Move m : plan.moves) EXPECT_EQ(m, (Move{1, 0}));
  }
}

TEST(Lawnmower, ZeroAreaIsEmptyPlan) {
  EXPECT_TRUE(plan_lawnmower(PlannerBudget{100, 0}, CellRect{3, 3, 3, 9}).moves.empty());
  EXPECT_TRUE(plan_spiral(PlannerBudget{100, 0}, CellRect{0, 0, 4, 0}).moves.empty());
}

TEST(Lawnmower, LengthMatchesClosedFormAndSpacingIsMinimal) {
  for (int w = 1; w <= 12; ++w) {
    for (int h = 1; h <= 12; ++h) {
      for (int s = 1; s <= h; ++s) {
        const Waypoints wp = lawnmower_waypoints(CellRect{0, 0, w, h}, s);
        ASSERT_EQ(static_cast<long>(path_length(wp)), wbf_test::lawnmower_length(w, h, s)) << w << "x" << h << " s" << s;
      }
      for (int budget : {1, 5, w * h / 2, w * h}) {
        const CoveragePlan plan = plan_lawnmower(PlannerBudget{budget, 0}, CellRect{0, 0, w, h});
        ASSERT_LE(plan.moves.size(), static_cast<std::size_t>(budget));
        if (plan.fits_budget) {
          ASSERT_LE(wbf_test::lawnmower_length(w, h, plan.spacing), budget);
          if (plan.spacing > 1) ASSERT_GT(wbf_test::lawnmower_length(w, h, plan.spacing - 1), budget);
        }
      }
    }
  }
}

TEST(Spiral, FiveByFiveVisitsAllCellsIn24Moves) {
  const CoveragePlan plan = plan_spiral(PlannerBudget{100, 0}, CellRect{0, 0, 5, 5});
  EXPECT_EQ(plan.spacing, 1);
  EXPECT_EQ(plan.moves.size(), 24u);
  EXPECT_EQ(visited(walk({0, 0}, plan.moves)).size(), 25u);
}

TEST(Spiral, ThreeByThreeEndsAtCentre) {
  const CoveragePlan plan = plan_spiral(PlannerBudget{100, 0}, CellRect{0, 0, 3, 3});
  EXPECT_EQ(plan.end, (Position{1, 1}));
  EXPECT_EQ(walk({0, 0}, plan.moves).back(), (Position{1, 1}));
}

TEST(Spiral, WideSpacingIsBorderLoop) {
  const CellRect r{0, 0, 6, 5};
  const auto cells = expand_cells(spiral_waypoints(r, 6));
  for (Position p : cells) {
    EXPECT_TRUE(p.x == 0 || p.y == 0 || p.x == 5 || p.y == 4) << p.x << "," << p.y;
  }
  // Every border cell is visited.
  EXPECT_EQ(visited(cells).size(), 18u);
}

TEST(Spiral, LengthMatchesClosedFormAndCoversWithSpacingOne) {
  for (int w = 1; w <= 12; ++w) {
    for (int h = 1; h <= 12; ++h) {
      const CellRect r{0, 0, w, h};
      for (int s = 1; s <= std::max(w, h); ++s) {
        ASSERT_EQ(static_cast<long>(path_length(spiral_waypoints(r, s))), wbf_test::spiral_length(w, h, s))
            << w << "x" << h << " s" << s;
      }
      const CoveragePlan plan = plan_spiral(PlannerBudget{w * h, 0}, r);
      const auto cells = visited(walk({0, 0}, plan.moves));
      ASSERT_EQ(cells.size(), static_cast<std::size_t>(w * h)) << w << "x" << h;
    }
  }
}

TEST(Planners, MovesStayInsideRegionFromAnyStart) {
  const CellRect r{2, 3, 9, 11};
  for (Position start : {Position{2, 3}, Position{8, 10}, Position{0, 0}, Position{15, 4}}) {
    for (int budget : {10, 40, 80}) {
      for (const CoveragePlan& plan :
           {plan_lawnmower(PlannerBudget{budget, 0}, r, start), plan_spiral(PlannerBudget{budget, 0}, r, start)}) {
        EXPECT_LE(plan.moves.size(), static_cast<std::size_t>(budget));
        const auto cells = walk(start, plan.moves);
        // After entering the region the path never leaves it.
        bool entered = false;
        for (Position p : cells) {
          if (inside(r, p)) entered = true;
          else EXPECT_FALSE(entered);
        }
      }
    }
  }
}

TEST(Planners, StartingFromAnotherCornerMirrorsThePattern) {
  const CellRect r{0, 0, 8, 8};
  const CoveragePlan a = plan_lawnmower(PlannerBudget{40, 0}, r, Position{0, 0});
  const CoveragePlan b = plan_lawnmower(PlannerBudget{40, 0}, r, Position{7, 7});
  ASSERT_EQ(a.moves.size(), b.moves.size());
  for (std::size_t i = 0; i < a.moves.size(); ++i) EXPECT_EQ(a.moves[i], (Move{-b.moves[i].dx, -b.moves[i].dy}));
}

TEST(Adaptive, DefaultWeightsSweepTomatoDenser) {
  const Geometry g = build_geometry("miniberry-30");
  const AdaptivePlan plan = plan_adaptive_lawnmower(PlannerBudget{500, 0}, g, ScoreConfig{}, Position{0, 0});
  EXPECT_GT(plan.strawberry_spacing, 0);
  EXPECT_LE(plan.tomato_spacing, plan.strawberry_spacing);
  EXPECT_LE(plan.moves.size(), 500u);
  EXPECT_EQ(plan.tomato_budget, static_cast<int>(500 * 1.1 / 1.4));
}

TEST(Adaptive, EqualWeightsGiveEqualDensity) {
  const Geometry g = build_geometry("miniberry-30");
  ScoreConfig cfg;
  cfg.weights = {1.0, 1.0, 1.0};
  const AdaptivePlan plan = plan_adaptive_lawnmower(PlannerBudget{500, 0}, g, cfg, Position{0, 0});
  EXPECT_EQ(plan.tomato_budget, 250);
  EXPECT_EQ(plan.tomato_spacing, plan.strawberry_spacing);
}

TEST(Adaptive, SmallBudgetNeverEntersStrawberry) {
  const Geometry g = build_geometry("miniberry-30");
  for (int budget : {10, 17}) {
    const AdaptivePlan plan = plan_adaptive_lawnmower(PlannerBudget{budget, 0}, g, ScoreConfig{}, Position{0, 0});
    EXPECT_EQ(plan.strawberry_spacing, 0);
    EXPECT_LE(plan.moves.size(), static_cast<std::size_t>(budget));
    for (Position p : walk({0, 0}, plan.moves)) EXPECT_EQ(g.cell(p.x, p.y).kind, CropKind::Tomato);
  }
}

TEST(Adaptive, TomatoVisitedFirst) {
  const Geometry g = build_geometry("miniberry-30");
  for (int budget : {30, 100, 300, 500, 2000}) {
    const AdaptivePlan plan = plan_adaptive_lawnmower(PlannerBudget{budget, 0}, g, ScoreConfig{}, Position{0, 0});
    const auto cells = walk({0, 0}, plan.moves);
    std::size_t first_tomato = cells.size(), first_strawberry = cells.size();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const CropKind k = g.cell(cells[i].x, cells[i].y).kind;
      if (k == CropKind::Tomato) first_tomato = std::min(first_tomato, i);
      if (k == CropKind::Strawberry) first_strawberry = std::min(first_strawberry, i);
    }
    EXPECT_LE(first_tomato, first_strawberry) << budget;
    for (Position p : cells) EXPECT_TRUE(p.x >= 0 && p.x < 30 && p.y >= 0 && p.y < 30);
  }
}

TEST(RandomWaypoint, ChebyshevGeodesicsBetweenWaypoints) {
  RandomWaypointPlanner planner(42, 30, 30);
  Position pos{0, 0};
  Position target{-1, -1};
  int steps_left = 0;
  for (int t = 0; t < 2000; ++t) {
    const Move m = planner.next_move(PlannerContext{pos, t});
    if (planner.waypoint() != target) {
      EXPECT_EQ(steps_left, 0);
      target = planner.waypoint();
      steps_left = std::max(std::abs(target.x - pos.x), std::abs(target.y - pos.y));
      EXPECT_GT(steps_left, 0);
    }
    EXPECT_TRUE(m.dx != 0 || m.dy != 0);
    pos.x += m.dx;
    pos.y += m.dy;
    ASSERT_TRUE(pos.x >= 0 && pos.x < 30 && pos.y >= 0 && pos.y < 30);
    --steps_left;
  }
}

TEST(RandomWaypoint, SameSeedSameTrajectory) {
  auto a = plan_random_waypoint(7, 30, 30);
  auto b = plan_random_waypoint(7, 30, 30);
  auto c = plan_random_waypoint(8, 30, 30);
  Position pa{5, 5}, pb{5, 5}, pc{5, 5};
  bool differs = false;
  for (int t = 0; t < 300; ++t) {
    const Move ma = a->next_move(PlannerContext{pa, t});
    const Move mb = b->next_move(PlannerContext{pb, t});
    const Move mc = c->next_move(PlannerContext{pc, t});
    ASSERT_EQ(ma, mb);
    differs |= !(ma == mc);
    pa.x += ma.dx; pa.y += ma.dy;
    pb.x += mb.dx; pb.y += mb.dy;
    pc.x += mc.dx; pc.y += mc.dy;
  }
  EXPECT_TRUE(differs);
}

TEST(RandomWaypoint, ArrivalTriggersImmediateRedraw) {
  RandomWaypointPlanner planner(3, 10, 10);
  const Move first = planner.next_move(PlannerContext{Position{0, 0}, 0});
  const Position w = planner.waypoint();
  const Move at_target = planner.next_move(PlannerContext{w, 1});
  EXPECT_NE(planner.waypoint(), w);
  EXPECT_TRUE(at_target.dx != 0 || at_target.dy != 0);
  (void)first;
}

TEST(MakePlanner, UnknownTypeIsConfigError) {
  const Geometry g = build_geometry("miniberry-10");
  EXPECT_THROW(make_planner(PlannerSpec{"zigzag", 0}, g, ScoreConfig{}, 10, Position{}), ConfigError);
  EXPECT_EQ(make_planner(PlannerSpec{"spiral", 0}, g, ScoreConfig{}, 10, Position{})->name(), "spiral");
}
