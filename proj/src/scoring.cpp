#include "wbf/scoring.hpp"

#include <cmath>
#include <cstdio>

#include "wbf/errors.hpp"

namespace wbf {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_shape(const FieldGrid& a, const MaskGrid& m, const char* what) {
  if (a.width() != m.width() || a.height() != m.height()) {
    throw ContractViolation(std::string("compute_loss: ") + what + " shape does not match its mask");
  }
}

}  // namespace

void ScoreConfig::validate() const {
  for (std::size_t i = 0; i < kMeasurementCount; ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) throw ConfigError("score weights must be finite and > 0");
    if (!(asymmetry[i].c_minus >= 0.0) || !(asymmetry[i].c_plus >= 0.0)) {
      throw ConfigError("asymmetry weights must be >= 0");
    }
  }
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 8;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

ScoreReport compute_loss(std::span<const FieldSlice> truth, std::span<const FieldSlice> estimate, const MaskSet& masks,
                         const ScoreConfig& config) {
  if (truth.empty()) throw ContractViolation("compute_loss needs at least one scoring timepoint");
  if (truth.size() != estimate.size()) throw ContractViolation("compute_loss: timepoint counts differ");

  ScoreReport report;
  report.timepoints = static_cast<int>(truth.size());
  report.weights = config.weights;
  report.per_timepoint.assign(truth.size(), {});

  std::vector<double> cells;
  double weighted_mask = 0.0;
  for (std::size_t i = 0; i < kMeasurementCount; ++i) {
    const MaskGrid& mask = masks[i];
    const auto mask_data = mask.data();
    std::size_t count = 0;
    for (auto v : mask_data) count += v ? 1 : 0;
    report.mask_cells[i] = static_cast<double>(count);
    weighted_mask += config.weights[i] * report.mask_cells[i];

    const AsymmetryPair c = config.asymmetry[i];
    std::vector<double> per_time(truth.size());
    for (std::size_t l = 0; l < truth.size(); ++l) {
      check_shape(truth[l][i], mask, "truth");
      check_shape(estimate[l][i], mask, "estimate");
      const auto e = truth[l][i].data();
      const auto est = estimate[l][i].data();
      cells.assign(mask_data.size(), 0.0);
      for (std::size_t k = 0; k < mask_data.size(); ++k) {
        if (mask_data[k]) cells[k] = asymmetric_error(e[k], est[k], c.c_minus, c.c_plus);
      }
      per_time[l] = pairwise_sum(cells);
      report.per_timepoint[l][i] = per_time[l];
    }
    report.error_sum[i] = pairwise_sum(per_time);
  }
  if (!(weighted_mask > 0.0)) throw DegenerateNormalizer("all relevance masks are empty");

  report.normalizer = static_cast<double>(truth.size()) * weighted_mask;
  for (std::size_t i = 0; i < kMeasurementCount; ++i) {
    report.component[i] = config.weights[i] * report.error_sum[i] / report.normalizer;
  }
  double numerator = 0.0;
  for (std::size_t i = 0; i < kMeasurementCount; ++i) numerator += config.weights[i] * report.error_sum[i];
  report.total_loss = numerator / report.normalizer;
  return report;
}

ScoreReport compute_loss(const FieldSlice& truth, const FieldSlice& estimate, const MaskSet& masks,
                         const ScoreConfig& config) {
  return compute_loss(std::span<const FieldSlice>(&truth, 1), std::span<const FieldSlice>(&estimate, 1), masks,
                      config);
}

std::vector<LossPoint> diagnostic_loss_series(std::span<const LossSnapshot> snapshots, const MaskSet& masks,
                                              const ScoreConfig& config) {
  std::vector<LossPoint> series;
  series.reserve(snapshots.size());
  for (const LossSnapshot& s : snapshots) {
    const ScoreReport r = compute_loss(*s.truth, *s.estimate, masks, config);
    series.push_back(LossPoint{s.timestep, r.total_loss, r.component});
  }
  return series;
}

std::string loss_series_csv(std::span<const LossPoint> series) {
  std::string out = "timestep,total_loss,tylcv_loss,ccr_loss,humidity_loss\n";
  for (const LossPoint& p : series) {
    out += std::to_string(p.timestep);
    out += ',' + fmt17(p.total);
    for (double c : p.component) out += ',' + fmt17(c);
    out += '\n';
  }
  return out;
}

std::string format_score_report(const ScoreReport& report) {
  std::string out;
  auto line = [&out](const std::string& key, const std::string& value) { out += key + " = " + value + "\n"; };
  line("total_loss", fmt17(report.total_loss));
  line("score", fmt17(report.score()));
  line("timepoints", std::to_string(report.timepoints));
  line("normalizer", fmt17(report.normalizer));
  for (Measurement m : kMeasurements) {
    const std::size_t i = index_of(m);
    const std::string name(measurement_name(m));
    line(name + ".weight", fmt17(report.weights[i]));
    line(name + ".mask_cells", fmt17(report.mask_cells[i]));
    line(name + ".error_sum", fmt17(report.error_sum[i]));
    line(name + ".loss", fmt17(report.component[i]));
  }
  for (std::size_t l = 0; l < report.per_timepoint.size(); ++l) {
    for (Measurement m : kMeasurements) {
      line("timepoint." + std::to_string(l) + "." + std::string(measurement_name(m)) + ".error_sum",
           fmt17(report.per_timepoint[l][index_of(m)]));
    }
  }
  return out;
}

}  // namespace wbf
