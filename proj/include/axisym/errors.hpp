#pragma once

#include <stdexcept>
#include <string>

namespace axisym {

/// Invalid user input: bad dimensions, inconsistent configuration, wrong shapes.
class config_error : public std::invalid_argument {
public:
  explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

/// The discrete run left the regime where its output means anything
/// (NaN, overflow, a solver that failed to reach its tolerance).
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

}  // namespace axisym
