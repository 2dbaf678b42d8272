#include <gtest/gtest.h>

#include <random>

#include "../oracles.hpp"
#include "wbf/errors.hpp"
#include "wbf/scoring.hpp"

using namespace wbf;

namespace {

FieldSlice constant_slice(int w, int h, float v) { return {FieldGrid(w, h, v), FieldGrid(w, h, v), FieldGrid(w, h, v)}; }

MaskSet full_masks(int w, int h) { return {MaskGrid(w, h, 1), MaskGrid(w, h, 1), MaskGrid(w, h, 1)}; }

struct RandomProblem {
  std::vector<FieldSlice> truth, estimate;
  MaskSet masks;
  ScoreConfig cfg;
};

RandomProblem random_problem(std::mt19937_64& rng, int w, int h, int c) {
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  std::uniform_real_distribution<double> pos(0.05, 3.0);
  RandomProblem p;
  for (int l = 0; l < c; ++l) {
    FieldSlice t = constant_slice(w, h, 0), e = constant_slice(w, h, 0);
    for (std::size_t i = 0; i < 3; ++i) {
      for (float& v : t[i].data()) v = unit(rng);
      for (float& v : e[i].data()) v = unit(rng);
    }
    p.truth.push_back(t);
    p.estimate.push_back(e);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    p.masks[i] = MaskGrid(w, h, 0);
    for (auto& v : p.masks[i].data()) v = unit(rng) < 0.6f;
    p.masks[i](0, 0) = 1;
    p.cfg.weights[i] = pos(rng);
    p.cfg.asymmetry[i] = AsymmetryPair{pos(rng), pos(rng)};
  }
  return p;
}

}  // namespace

TEST(AsymmetricError, Basics) {
  EXPECT_EQ(asymmetric_error(0.3, 0.3, 1, 10), 0.0);
  EXPECT_EQ(asymmetric_error(0.0, 1.0, 1, 10), 10.0);  // missed disease
  EXPECT_EQ(asymmetric_error(1.0, 0.0, 1, 10), 1.0);   // false alarm
  EXPECT_EQ(asymmetric_error(0.2, 0.7, 1, 1), asymmetric_error(0.7, 0.2, 1, 1));
  const double delta = 0.25;
  EXPECT_DOUBLE_EQ(asymmetric_error(0.5, 0.5 + delta, 1, 10), 10 * asymmetric_error(0.5, 0.5 - delta, 1, 10));
}

TEST(ComputeLoss, PerfectModelScoresZero) {
  const FieldSlice s = constant_slice(4, 4, 0.3f);
  const ScoreReport r = compute_loss(s, s, full_masks(4, 4), ScoreConfig{});
  EXPECT_EQ(r.total_loss, 0.0);
  EXPECT_EQ(r.score(), 0.0);
}

TEST(ComputeLoss, TwoByTwoHandExample) {
  FieldSlice truth = constant_slice(2, 2, 0.0f);
  FieldSlice est = constant_slice(2, 2, 0.0f);
  est[0](1, 0) = 0.5f;
  est[0](1, 1) = 1.0f;
  MaskSet masks{MaskGrid(2, 2, 1), MaskGrid(2, 2, 0), MaskGrid(2, 2, 0)};
  ScoreConfig cfg;
  cfg.weights = {1.0, 1.0, 1.0};
  cfg.asymmetry[0] = AsymmetryPair{1.0, 1.0};
  const ScoreReport r = compute_loss(truth, est, masks, cfg);
  EXPECT_DOUBLE_EQ(r.total_loss, 0.3125);
  EXPECT_DOUBLE_EQ(wbf_test::naive_loss({truth}, {est}, masks, cfg), 0.3125);
}

TEST(ComputeLoss, MatchesNaiveOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 20);
    const int h = 1 + static_cast<int>(rng() % 20);
    const int c = 1 + static_cast<int>(rng() % 4);
    const RandomProblem p = random_problem(rng, w, h, c);
    const ScoreReport r = compute_loss(p.truth, p.estimate, p.masks, p.cfg);
    const double oracle = wbf_test::naive_loss(p.truth, p.estimate, p.masks, p.cfg);
    EXPECT_NEAR(r.total_loss, oracle, 1e-12 * oracle);
    EXPECT_EQ(r.timepoints, c);
    EXPECT_NEAR(r.component[0] + r.component[1] + r.component[2], r.total_loss, 1e-15 * r.total_loss);
  }
}

TEST(ComputeLoss, WeightScalingLeavesLossUnchanged) {
  std::mt19937_64 rng(5);
  RandomProblem p = random_problem(rng, 12, 9, 2);
  const double base = compute_loss(p.truth, p.estimate, p.masks, p.cfg).total_loss;
  for (double lambda : {2.0, 0.5, 1e3}) {
    ScoreConfig scaled = p.cfg;
    for (double& w : scaled.weights) w *= lambda;
    EXPECT_NEAR(compute_loss(p.truth, p.estimate, p.masks, scaled).total_loss, base, 1e-14 * base);
  }
  ScoreConfig doubled = p.cfg;
  for (double& w : doubled.weights) w *= 2.0;
  EXPECT_EQ(compute_loss(p.truth, p.estimate, p.masks, doubled).total_loss, base);
}

TEST(ComputeLoss, UnmaskedCorruptionIsInvisible) {
  std::mt19937_64 rng(9);
  RandomProblem p = random_problem(rng, 15, 15, 3);
  const ScoreReport before = compute_loss(p.truth, p.estimate, p.masks, p.cfg);
  for (auto& slice : p.estimate) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t k = 0; k < slice[i].size(); ++k) {
        if (!p.masks[i].data()[k]) slice[i].data()[k] = 123.0f;
      }
    }
  }
  const ScoreReport after = compute_loss(p.truth, p.estimate, p.masks, p.cfg);
  EXPECT_EQ(before.total_loss, after.total_loss);
}

TEST(ComputeLoss, NonNegativeAndZeroOnlyWhenMatching) {
  std::mt19937_64 rng(11);
  RandomProblem p = random_problem(rng, 6, 6, 2);
  EXPECT_GT(compute_loss(p.truth, p.estimate, p.masks, p.cfg).total_loss, 0.0);
  EXPECT_EQ(compute_loss(p.truth, p.truth, p.masks, p.cfg).total_loss, 0.0);
}

TEST(ComputeLoss, ErrorPaths) {
  const FieldSlice a = constant_slice(3, 3, 0.5f);
  const FieldSlice b = constant_slice(3, 4, 0.5f);
  EXPECT_THROW(compute_loss(a, b, full_masks(3, 3), ScoreConfig{}), ContractViolation);
  EXPECT_THROW(compute_loss(a, a, full_masks(4, 4), ScoreConfig{}), ContractViolation);
  const MaskSet empty{MaskGrid(3, 3, 0), MaskGrid(3, 3, 0), MaskGrid(3, 3, 0)};
  EXPECT_THROW(compute_loss(a, a, empty, ScoreConfig{}), DegenerateNormalizer);
  const std::vector<FieldSlice> two{a, a};
  const std::vector<FieldSlice> one{a};
  EXPECT_THROW(compute_loss(two, one, full_masks(3, 3), ScoreConfig{}), ContractViolation);
}

TEST(PairwiseSum, AgreesWithLongDoubleSum) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> v(100003);
  long double ref = 0;
  for (double& x : v) {
    x = u(rng);
    ref += x;
  }
  EXPECT_NEAR(pairwise_sum(v), static_cast<double>(ref), 1e-10);
  EXPECT_EQ(pairwise_sum(std::span<const double>{}), 0.0);
}

TEST(LossSeries, ConstantModelWithinDayIsConstant) {
  std::mt19937_64 rng(3);
  RandomProblem p = random_problem(rng, 8, 8, 1);
  std::vector<LossSnapshot> snaps;
  for (int t = 0; t < 5; ++t) snaps.push_back(LossSnapshot{t * 10, &p.truth[0], &p.estimate[0]});
  const auto series = diagnostic_loss_series(snaps, p.masks, p.cfg);
  ASSERT_EQ(series.size(), 5u);
  for (const auto& pt : series) EXPECT_EQ(pt.total, series[0].total);
  const std::string csv = loss_series_csv(series);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "timestep,total_loss,tylcv_loss,ccr_loss,humidity_loss");
}

TEST(ScoreReport, TextIsStable) {
  const FieldSlice a = constant_slice(2, 2, 0.5f);
  FieldSlice b = a;
  b[2](0, 0) = 0.0f;
  const ScoreReport r = compute_loss(a, b, full_masks(2, 2), ScoreConfig{});
  const std::string text = format_score_report(r);
  EXPECT_EQ(text, format_score_report(compute_loss(a, b, full_masks(2, 2), ScoreConfig{})));
  EXPECT_NE(text.find("total_loss = "), std::string::npos);
  EXPECT_NE(text.find("score = "), std::string::npos);
}
