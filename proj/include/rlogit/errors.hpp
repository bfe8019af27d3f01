#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlogit {

// Invalid argument to a numerical routine (NaN input, out-of-range parameter,
// mismatched grids).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The vanishing-noise weights max{U,0}^{1/kappa} are all zero, so the target
// distribution is undefined.
class DegenerateWeights : public std::runtime_error {
 public:
  explicit DegenerateWeights(std::size_t step = 0)
      : std::runtime_error("degenerate weights: every utility is <= 0 (step " +
                           std::to_string(step) + ")"),
        step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// A run configuration failed validation. Carries one message per bad field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
  explicit ConfigError(const std::string& issue)
      : ConfigError(std::vector<std::string>{issue}) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "invalid configuration";
    for (const auto& s : issues) out += "\n  " + s;
    return out;
  }
  std::vector<std::string> issues_;
};

// File could not be read, parsed or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rlogit
