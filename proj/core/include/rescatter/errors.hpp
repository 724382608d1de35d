#pragma once

#include <stdexcept>
#include <string>

namespace rescatter {

// Invalid arguments are reported with std::invalid_argument. The types below
// cover the failure classes the driver maps onto distinct exit codes.

/// Inconsistent or unparsable configuration (grid layout, config files).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure broke down or failed to converge.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Probability reached the outer margin of the simulation box.
class BoxTooSmallError : public std::runtime_error {
 public:
  BoxTooSmallError(const std::string& what, double time, double leak)
      : std::runtime_error(what), time_(time), leak_(leak) {}

  double time() const noexcept { return time_; }
  double leak() const noexcept { return leak_; }

 private:
  double time_;
  double leak_;
};

}  // namespace rescatter
