#include <gtest/gtest.h>

#include <map>

#include "wbf/planners.hpp"
#include "wbf/world.hpp"

using namespace wbf;

namespace {

World make_world(std::vector<Position> starts, int steps_per_day, EnvironmentParams p = {}) {
  auto g = make_geometry("miniberry-30");
  return World(init_environment(g, p), p, std::move(starts), steps_per_day);
}

}  // namespace

TEST(World, StationaryObservationKeepsPosition) {
  World w = make_world({{4, 7}}, 10);
  const Move stay{0, 0};
  const auto obs = w.step(std::span(&stay, 1));
  ASSERT_EQ(obs.size(), 1u);
  EXPECT_EQ(obs[0].position, (Position{4, 7}));
  EXPECT_EQ(w.robots()[0].position, (Position{4, 7}));
}

TEST(World, FiveHundredStepsOneRobot) {
  World w = make_world({{0, 0}}, 500);
  RandomWaypointPlanner planner(9, 30, 30);
  for (int t = 0; t < 500; ++t) {
    const Move m = planner.next_move(PlannerContext{w.robots()[0].position, t});
    w.step(std::span(&m, 1));
  }
  EXPECT_EQ(w.observations().size(), 500u);
  EXPECT_TRUE(w.warnings().empty());
}

TEST(World, TwoRobotsOrderedByTimestepThenId) {
  World w = make_world({{0, 0}, {29, 29}}, 4);
  const std::array<Move, 2> moves{Move{1, 1}, Move{-1, -1}};
  for (int t = 0; t < 10; ++t) w.step(moves);
  const auto& log = w.observations();
  ASSERT_EQ(log.size(), 20u);
  for (std::size_t i = 0; i < log.size(); ++i) {
    EXPECT_EQ(log[i].timestep, static_cast<int>(i / 2));
    EXPECT_EQ(log[i].robot_id, static_cast<int>(i % 2));
  }
  EXPECT_EQ(log[19].position, (Position{20, 20}));
}

TEST(World, ObservationsMatchGroundTruthAndMovesAreKingSteps) {
  World w = make_world({{3, 3}}, 7);
  RandomWaypointPlanner planner(1, 30, 30);
  Position prev = w.robots()[0].position;
  for (int t = 0; t < 60; ++t) {
    const Move m = planner.next_move(PlannerContext{prev, t});
    const auto truth = w.environment().read_point(prev.x, prev.y);
    const auto obs = w.step(std::span(&m, 1));
    EXPECT_EQ(obs[0].values, truth);
    const Position now = w.robots()[0].position;
    EXPECT_LE(std::abs(now.x - prev.x), 1);
    EXPECT_LE(std::abs(now.y - prev.y), 1);
    prev = now;
  }
  EXPECT_EQ(w.clock().day, 60 / 7);
  EXPECT_EQ(w.clock().timestep, 60 % 7);
  EXPECT_EQ(w.environment().day(), 60 / 7);
}

TEST(World, EnvironmentFrozenWithinADay) {
  EnvironmentParams p;
  p.tylcv.seeds = 30;
  p.humidity.shower_period = 1;
  World w = make_world({{0, 0}, {0, 0}}, 25, p);
  const std::array<Move, 2> moves{Move{1, 0}, Move{-1, 0}};
  for (int t = 0; t < 100; ++t) w.step(moves);
  std::map<std::tuple<int, int, int>, std::array<float, 3>> seen;
  for (const Observation& o : w.observations()) {
    const auto key = std::make_tuple(o.day, o.position.x, o.position.y);
    auto [it, inserted] = seen.emplace(key, o.values);
    if (!inserted) EXPECT_EQ(it->second, o.values);
  }
}

TEST(World, OutOfBoundsMovesClampWithWarning) {
  World w = make_world({{0, 0}}, 10);
  const Move off{-1, 0};
  w.step(std::span(&off, 1));
  EXPECT_EQ(w.robots()[0].position, (Position{0, 0}));
  const Move big{3, 2};
  w.step(std::span(&big, 1));
  EXPECT_EQ(w.robots()[0].position, (Position{1, 1}));
  EXPECT_EQ(w.warnings().size(), 2u);
}

TEST(World, DayHookRunsBeforeAdvance) {
  World w = make_world({{0, 0}}, 3);
  std::vector<int> hook_days;
  w.on_day_end = [&](const World& world) { hook_days.push_back(world.environment().day()); };
  const Move stay{0, 0};
  for (int t = 0; t < 9; ++t) w.step(std::span(&stay, 1));
  EXPECT_EQ(hook_days, (std::vector<int>{0, 1, 2}));
}

TEST(World, ObservationCsvHeader) {
  World w = make_world({{2, 5}}, 10);
  const Move stay{0, 0};
  w.step(std::span(&stay, 1));
  const std::string csv = observations_csv(w.observations());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "timestep,day,robot_id,x,y,tylcv,ccr,humidity");
  EXPECT_EQ(csv.substr(csv.find('\n') + 1), "0,0,0,2,5,1,1,0.5\n");
}
