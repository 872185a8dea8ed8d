#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace uavsc {

/// Raised for any scenario problem; `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// An optimizer block could not produce a feasible iterate.
class OptimizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Endpoints cannot be joined within the flight envelope.
class InfeasibleTrajectory : public OptimizationError {
 public:
  InfeasibleTrajectory(const std::string& what, double min_period_s)
      : OptimizationError(what), min_period_s_(min_period_s) {}

  double min_period_s() const noexcept { return min_period_s_; }

 private:
  double min_period_s_;
};

}  // namespace uavsc
