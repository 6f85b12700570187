#pragma once

#include <stdexcept>
#include <string>

namespace chol {

// Raised when an iterative solver stops before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what + " (residual " + std::to_string(residual) +
                           " after " + std::to_string(iterations) + " iterations)"),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// A kernel set that fails the sampled interaction bounds.
class KernelAssumptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration or kernel description. `key` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace chol
