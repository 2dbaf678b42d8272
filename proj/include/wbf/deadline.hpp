#pragma once

#include <chrono>
#include <optional>

#include "wbf/errors.hpp"

namespace wbf {

/// Wall-clock budget for one estimation. A default-constructed deadline never expires.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  explicit Deadline(double seconds)
      : at_(Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))) {}

  bool expired() const { return at_ && Clock::now() >= *at_; }
  void check() const {
    if (expired()) throw DeadlineExceeded("estimation exceeded its wall-clock cutoff");
  }

 private:
  std::optional<Clock::time_point> at_;
};

}  // namespace wbf
