#pragma once

#include <stdexcept>
#include <string>

namespace wbf {

/// Invalid or unresolvable configuration. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Numerical failure inside an estimator (e.g. Cholesky after max jitter).
class EstimatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scoring with an all-zero relevance mask set.
class DegenerateNormalizer : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by long computations when their wall-clock deadline passes.
class DeadlineExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wbf
