#include "wbf/gaussian_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "wbf/errors.hpp"
#include "wbf/parallel.hpp"
#include "wbf/rng.hpp"

namespace wbf {

namespace {

using Vec3 = Eigen::Vector3d;

Vec3 to_log(const GPHyper& h) {
  return Vec3(std::log(h.length_scale), std::log(h.signal_variance), std::log(h.noise_variance));
}

GPHyper from_log(const Vec3& t) { return GPHyper{std::exp(t[0]), std::exp(t[1]), std::exp(t[2])}; }

struct LogBounds {
  Vec3 lo;
  Vec3 hi;
  Vec3 clamp(const Vec3& t) const { return t.cwiseMax(lo).cwiseMin(hi); }
};

LogBounds log_bounds(const GPParams& p) {
  return LogBounds{Vec3(std::log(p.length_scale_bounds.lo), std::log(p.signal_variance_bounds.lo),
                        std::log(p.noise_variance_bounds.lo)),
                   Vec3(std::log(p.length_scale_bounds.hi), std::log(p.signal_variance_bounds.hi),
                        std::log(p.noise_variance_bounds.hi))};
}

/// Squared pairwise distances between the rows of `a` and `b`.
Eigen::MatrixXd squared_distances(const Eigen::MatrixX2d& a, const Eigen::MatrixX2d& b) {
  Eigen::MatrixXd d2(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double dx = a(i, 0) - b(j, 0);
      const double dy = a(i, 1) - b(j, 1);
      d2(i, j) = dx * dx + dy * dy;
    }
  }
  return d2;
}

/// sf2 * exp(-d2 / (2 l^2)); entries that would underflow into subnormals are
/// set to zero, which keeps the arithmetic on the fast path.
Eigen::MatrixXd rbf_matrix(const Eigen::MatrixXd& d2, const GPHyper& hyper) {
  const double inv = 1.0 / (2.0 * hyper.length_scale * hyper.length_scale);
  const double sf2 = hyper.signal_variance;
  return d2.unaryExpr([inv, sf2](double d) {
    const double arg = -inv * d;
    return arg < -700.0 ? 0.0 : sf2 * std::exp(arg);
  });
}

LogLikelihood likelihood(const Eigen::MatrixXd& d2, const Eigen::VectorXd& targets, const GPHyper& hyper,
                         const GPParams& params, bool with_gradient) {
  const auto n = targets.size();
  const Eigen::MatrixXd rbf_part = rbf_matrix(d2, hyper);
  Eigen::MatrixXd k = rbf_part;
  k.diagonal().array() += hyper.noise_variance;

  const Eigen::LLT<Eigen::MatrixXd> llt = robust_cholesky(k, params);
  const Eigen::VectorXd alpha = llt.solve(targets);
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();

  LogLikelihood out;
  out.value = -0.5 * targets.dot(alpha) - 0.5 * log_det - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  if (!with_gradient) return out;

  // d/dtheta = 1/2 tr((alpha alpha^T - K^-1) dK/dtheta)
  Eigen::MatrixXd w = alpha * alpha.transpose();
  w.noalias() -= llt.solve(Eigen::MatrixXd::Identity(n, n));
  const double inv = 1.0 / (hyper.length_scale * hyper.length_scale);
  out.gradient[0] = 0.5 * inv * w.cwiseProduct(rbf_part).cwiseProduct(d2).sum();
  out.gradient[1] = 0.5 * w.cwiseProduct(rbf_part).sum();
  out.gradient[2] = 0.5 * hyper.noise_variance * w.trace();
  return out;
}

/// Training inputs reduced to what the likelihood needs.
struct FitProblem {
  Eigen::MatrixXd d2;
  Eigen::VectorXd targets;
};

double evaluate_or_minus_inf(const FitProblem& data, const Vec3& theta, const GPParams& params) {
  try {
    return likelihood(data.d2, data.targets, from_log(theta), params, false).value;
  } catch (const EstimatorError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

struct LocalOptimum {
  Vec3 theta;
  double value;
};

LocalOptimum ascend(const FitProblem& data, const Vec3& start, const LogBounds& bounds, const GPParams& params,
                    const Deadline& deadline) {
  constexpr double kArmijo = 1e-4;
  constexpr double kMaxLogStep = 2.0;
  Vec3 theta = bounds.clamp(start);
  LogLikelihood current;
  try {
    current = likelihood(data.d2, data.targets, from_log(theta), params, true);
  } catch (const EstimatorError&) {
    return LocalOptimum{theta, -std::numeric_limits<double>::infinity()};
  }
  double step = 1.0;
  for (int it = 0; it < params.max_iterations; ++it) {
    deadline.check();
    const Vec3 g = current.gradient;
    const double gmax = g.cwiseAbs().maxCoeff();
    if (!(gmax > 0.0) || !std::isfinite(gmax)) break;
    step = std::min(step, kMaxLogStep / gmax);

    bool accepted = false;
    Vec3 candidate;
    for (int ls = 0; ls < 40; ++ls) {
      candidate = bounds.clamp(theta + step * g);
      const Vec3 delta = candidate - theta;
      if (delta.cwiseAbs().maxCoeff() < 1e-12) break;
      const double value = evaluate_or_minus_inf(data, candidate, params);
      if (value >= current.value + kArmijo * g.dot(delta)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    LogLikelihood next;
    try {
      next = likelihood(data.d2, data.targets, from_log(candidate), params, true);
    } catch (const EstimatorError&) {
      break;
    }
    const double improvement = next.value - current.value;
    theta = candidate;
    current = next;
    step *= 2.0;
    if (improvement < params.tolerance * (1.0 + std::abs(current.value))) break;
  }
  return LocalOptimum{theta, current.value};
}

TrainingSet centred(const TrainingSet& data, bool center, double& mean) {
  mean = center && data.size() > 0 ? data.targets.mean() : 0.0;
  TrainingSet out = data;
  out.targets.array() -= mean;
  return out;
}

}  // namespace

void GPParams::validate() const {
  auto check = [](Bounds b, double init, const char* what) {
    if (!(b.lo > 0.0) || !(b.hi >= b.lo)) throw ConfigError(std::string("gp: bad bounds for ") + what);
    if (!(init > 0.0)) throw ConfigError(std::string("gp: initial ") + what + " must be > 0");
  };
  check(length_scale_bounds, initial.length_scale, "length_scale");
  check(signal_variance_bounds, initial.signal_variance, "signal_variance");
  check(noise_variance_bounds, initial.noise_variance, "noise_variance");
  if (restarts < 0) throw ConfigError("gp: restarts must be >= 0");
  if (max_iterations < 0) throw ConfigError("gp: max_iterations must be >= 0");
  if (!(jitter > 0.0)) throw ConfigError("gp: jitter must be > 0");
  if (predict_batch == 0) throw ConfigError("gp: predict_batch must be > 0");
}

double rbf(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const GPHyper& hyper) {
  const double d2 = (a - b).squaredNorm();
  return hyper.signal_variance * std::exp(-d2 / (2.0 * hyper.length_scale * hyper.length_scale));
}

Eigen::MatrixXd training_covariance(const Eigen::MatrixX2d& inputs, const GPHyper& hyper) {
  Eigen::MatrixXd k = rbf_matrix(squared_distances(inputs, inputs), hyper);
  k.diagonal().array() += hyper.noise_variance;
  return k;
}

Eigen::LLT<Eigen::MatrixXd> robust_cholesky(const Eigen::MatrixXd& cov, const GPParams& params) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt;
  double jitter = params.jitter;
  for (int attempt = 0; attempt < params.max_jitter_tries; ++attempt, jitter *= 2.0) {
    Eigen::MatrixXd jittered = cov;
    jittered.diagonal().array() += jitter;
    llt.compute(jittered);
    if (llt.info() == Eigen::Success) return llt;
  }
  throw EstimatorError("gp: Cholesky factorization failed after " + std::to_string(params.max_jitter_tries) +
                       " jitter escalations");
}

LogLikelihood log_marginal_likelihood(const TrainingSet& data, const GPHyper& hyper, const GPParams& params,
                                      bool with_gradient) {
  return likelihood(squared_distances(data.inputs, data.inputs), data.targets, hyper, params, with_gradient);
}

GaussianProcess::GaussianProcess(TrainingSet data, const GPHyper& hyper, const GPParams& params) : hyper_(hyper) {
  if (data.size() == 0) throw ContractViolation("gp: at least one training point is required");
  if (static_cast<std::size_t>(data.inputs.rows()) != data.size()) throw ContractViolation("gp: input/target count mismatch");
  data_ = centred(data, params.center_targets, mean_);
  chol_ = robust_cholesky(training_covariance(data_.inputs, hyper_), params);
  alpha_ = chol_.solve(data_.targets);
  const double log_det = 2.0 * chol_.matrixLLT().diagonal().array().log().sum();
  lml_ = -0.5 * data_.targets.dot(alpha_) - 0.5 * log_det -
         0.5 * static_cast<double>(data_.size()) * std::log(2.0 * std::numbers::pi);
}

std::pair<double, double> GaussianProcess::predict(const Eigen::Vector2d& query) const {
  Eigen::MatrixX2d q(1, 2);
  q.row(0) = query.transpose();
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  predict(q, mean, variance);
  return {mean[0], variance[0]};
}

void GaussianProcess::predict(const Eigen::MatrixX2d& queries, Eigen::VectorXd& mean, Eigen::VectorXd& variance) const {
  const Eigen::MatrixXd k_star = rbf_matrix(squared_distances(data_.inputs, queries), hyper_);
  mean = k_star.transpose() * alpha_;
  mean.array() += mean_;
  const Eigen::MatrixXd v = chol_.matrixL().solve(k_star);
  variance = (hyper_.signal_variance - v.colwise().squaredNorm().transpose().array()).max(0.0);
}

GaussianProcess gp_fit(const TrainingSet& data, const GPParams& params, const Deadline& deadline) {
  params.validate();
  if (data.size() == 0) throw ContractViolation("gp_fit: at least one observation is required");
  if (!params.optimize) return GaussianProcess(data, params.initial, params);

  double mean = 0.0;
  const TrainingSet centred_data = centred(data, params.center_targets, mean);
  const FitProblem work{squared_distances(centred_data.inputs, centred_data.inputs), centred_data.targets};
  const LogBounds bounds = log_bounds(params);

  std::vector<Vec3> starts{bounds.clamp(to_log(params.initial))};
  CounterRng rng(params.rng_seed, "gp-restarts");
  for (int r = 0; r < params.restarts; ++r) {
    Vec3 t;
    for (int j = 0; j < 3; ++j) t[j] = rng.uniform(bounds.lo[j], bounds.hi[j]);
    starts.push_back(t);
  }

  LocalOptimum best{starts.front(), -std::numeric_limits<double>::infinity()};
  for (const Vec3& start : starts) {
    deadline.check();
    const LocalOptimum local = ascend(work, start, bounds, params, deadline);
    if (local.value > best.value) best = local;
  }
  if (!std::isfinite(best.value)) throw EstimatorError("gp_fit: no start point produced a finite likelihood");
  return GaussianProcess(data, from_log(best.theta), params);
}

GPGridPrediction gp_predict(const GaussianProcess& gp, int width, int height, std::size_t batch, int threads,
                            const Deadline& deadline) {
  GPGridPrediction out{FieldGrid(width, height), FieldGrid(width, height)};
  const std::size_t cells = out.mean.size();
  batch = std::max<std::size_t>(batch, 1);
  const std::size_t batches = (cells + batch - 1) / batch;
  parallel_for(0, batches, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t b = lo; b < hi; ++b) {
      deadline.check();
      const std::size_t first = b * batch;
      const std::size_t count = std::min(batch, cells - first);
      Eigen::MatrixX2d q(static_cast<Eigen::Index>(count), 2);
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t idx = first + k;
        q(static_cast<Eigen::Index>(k), 0) = static_cast<double>(idx % static_cast<std::size_t>(width));
        q(static_cast<Eigen::Index>(k), 1) = static_cast<double>(idx / static_cast<std::size_t>(width));
      }
      Eigen::VectorXd mean;
      Eigen::VectorXd variance;
      gp.predict(q, mean, variance);
      for (std::size_t k = 0; k < count; ++k) {
        out.mean.data()[first + k] = static_cast<float>(mean[static_cast<Eigen::Index>(k)]);
        out.variance.data()[first + k] = static_cast<float>(variance[static_cast<Eigen::Index>(k)]);
      }
    }
  }, 1);
  return out;
}

}  // namespace wbf
