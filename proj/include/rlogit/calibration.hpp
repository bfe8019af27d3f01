#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlogit/dynamics.hpp"
#include "rlogit/measure.hpp"
#include "rlogit/utility.hpp"

namespace rlogit {

// Pooled catch values, each divided by its own year's maximum.
struct EmpiricalSample {
  std::vector<double> values;
  std::vector<std::pair<std::string, long>> per_year_max;
};

// Population mean and standard deviation. Throws DomainError when empty.
Moments empirical_stats(const EmpiricalSample& sample);

// Histogram density over `bins` uniform cells of [0,1]; 1.0 falls in the last bin.
std::vector<double> empirical_pdf(const EmpiricalSample& sample, std::size_t bins);

// Integration settings shared by every stationary solve during calibration.
struct SolverSettings {
  Grid grid{500};
  double dt = 1e-3;
  double delta = 1e-11;
  std::size_t max_steps = 1'000'000;
};

// A candidate for the calibrated quantities. c, d, alpha and epsilon live in
// the CompetitionParams.
struct ModelPoint {
  CompetitionParams utility;
  double kappa = 1.0;
  std::optional<double> eta = 0.01;  // empty = vanishing-noise limit
};

class NotStationary : public std::runtime_error {
 public:
  explicit NotStationary(std::size_t steps)
      : std::runtime_error("no stationary state within " + std::to_string(steps) + " steps") {}
};

struct ObjectiveValue {
  double objective;
  Moments model;
  std::size_t steps;
};

// Runs the dynamic from the uniform measure to stationarity and returns
// ((m - m*)/m*)^2 + ((s - s*)/s*)^2. Throws DegenerateWeights or NotStationary.
ObjectiveValue fit_objective(const ModelPoint& point, const Moments& target,
                             const SolverSettings& solver);

enum class FitParam { A = 0, B = 1, Eta = 2, Kappa = 3 };
inline constexpr std::array<FitParam, 4> kFitParams = {FitParam::A, FitParam::B,
                                                       FitParam::Eta, FitParam::Kappa};
const char* to_string(FitParam p);
FitParam fit_param_from_string(const std::string& name);

struct Bounds {
  double lo;
  double hi;
};

struct FitSpec {
  ModelPoint start;  // values of the parameters that are not free
  std::vector<std::pair<FitParam, Bounds>> free;
  std::size_t points_per_axis = 5;
  std::size_t refinement_levels = 2;  // 0 = plain grid search
  double shrink = 0.5;                // bounds width factor per level
  SolverSettings solver;

  // Throws DomainError on invalid bounds or settings.
  void validate() const;
};

struct FitEvaluation {
  ModelPoint point;
  std::size_t level;
  std::optional<ObjectiveValue> value;  // empty when the run failed
  std::string failure;
};

struct FitResult {
  ModelPoint best;
  ObjectiveValue value;
  std::vector<FitEvaluation> log;
  std::vector<double> level_best;  // incumbent objective after each level
};

class FitFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Multi-level coordinate grid search over the free parameters. Ties go to the
// lexicographically smaller point in (a, b, eta, kappa) order. Throws
// FitFailed when every evaluation fails.
FitResult fit_search(const FitSpec& spec, const Moments& target);

double get(const ModelPoint& p, FitParam which);
void set(ModelPoint& p, FitParam which, double value);

}  // namespace rlogit
