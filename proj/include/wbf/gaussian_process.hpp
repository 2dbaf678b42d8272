#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <span>

#include "wbf/deadline.hpp"
#include "wbf/grid.hpp"

namespace wbf {

/// RBF + white-noise kernel hyperparameters.
struct GPHyper {
  double length_scale = 3.0;
  double signal_variance = 0.1;
  double noise_variance = 1e-2;
};

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct GPParams {
  GPHyper initial{};
  Bounds length_scale_bounds{0.5, 50.0};
  Bounds signal_variance_bounds{1e-3, 10.0};
  Bounds noise_variance_bounds{1e-6, 1.0};
  int restarts = 5;
  int max_iterations = 60;
  double tolerance = 1e-6;
  bool optimize = true;
  bool center_targets = true;
  double jitter = 1e-10;     // first diagonal jitter tried after a failed factorization
  int max_jitter_tries = 12; // jitter doubles each retry
  std::size_t predict_batch = 2048;
  std::uint64_t rng_seed = 11;

  void validate() const;
};

/// 2-D inputs (cell coordinates) and scalar targets.
struct TrainingSet {
  Eigen::MatrixX2d inputs;
  Eigen::VectorXd targets;
  std::size_t size() const { return static_cast<std::size_t>(targets.size()); }
};

/// k(a, b) = signal_variance * exp(-|a - b|^2 / (2 length_scale^2)).
double rbf(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const GPHyper& hyper);

/// K(X, X) including noise_variance on the diagonal.
Eigen::MatrixXd training_covariance(const Eigen::MatrixX2d& inputs, const GPHyper& hyper);

/// Cholesky of `cov`, adding jitter * 2^k to the diagonal on failure.
/// Throws EstimatorError once the retries are exhausted.
Eigen::LLT<Eigen::MatrixXd> robust_cholesky(const Eigen::MatrixXd& cov, const GPParams& params);

struct LogLikelihood {
  double value = 0.0;
  /// d value / d log(length_scale, signal_variance, noise_variance)
  Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
};

/// -1/2 y^T K^-1 y - 1/2 log|K| - N/2 log 2 pi for the given (already centred) targets.
LogLikelihood log_marginal_likelihood(const TrainingSet& data, const GPHyper& hyper, const GPParams& params,
                                      bool with_gradient = true);

class GaussianProcess {
 public:
  /// Conditions on `data` with fixed hyperparameters.
  GaussianProcess(TrainingSet data, const GPHyper& hyper, const GPParams& params);

  const GPHyper& hyper() const { return hyper_; }
  double target_mean() const { return mean_; }
  double log_marginal_likelihood() const { return lml_; }
  std::size_t size() const { return data_.size(); }

  /// Posterior mean and latent variance at one point.
  std::pair<double, double> predict(const Eigen::Vector2d& query) const;

  /// Posterior mean and variance for a batch of query points (rows).
  void predict(const Eigen::MatrixX2d& queries, Eigen::VectorXd& mean, Eigen::VectorXd& variance) const;

 private:
  TrainingSet data_;  // targets centred
  GPHyper hyper_;
  double mean_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd alpha_;
  double lml_ = 0.0;
};

/// Maximizes the log marginal likelihood by projected gradient ascent on the
/// log-hyperparameters with backtracking, from params.initial and
/// params.restarts log-uniform draws inside the bounds; keeps the best.
GaussianProcess gp_fit(const TrainingSet& data, const GPParams& params, const Deadline& deadline = {});

struct GPGridPrediction {
  FieldGrid mean;
  FieldGrid variance;
};

/// Posterior over every cell (x, y) of a width x height grid, in row-major
/// batches of params.predict_batch cells.
GPGridPrediction gp_predict(const GaussianProcess& gp, int width, int height, std::size_t batch = 2048,
                            int threads = 1, const Deadline& deadline = {});

}  // namespace wbf
