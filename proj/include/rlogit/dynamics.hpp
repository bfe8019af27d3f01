#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rlogit/kexp.hpp"
#include "rlogit/measure.hpp"
#include "rlogit/utility.hpp"

namespace rlogit {

// Noise intensity eta > 0, or the vanishing-noise limit eta -> 0.
class NoiseMode {
 public:
  static NoiseMode positive(double eta);
  static NoiseMode vanishing_limit() { return NoiseMode(std::nullopt); }

  bool is_limit() const { return !eta_.has_value(); }
  // Throws DomainError in limit mode.
  double eta() const;

 private:
  explicit NoiseMode(std::optional<double> eta) : eta_(eta) {}
  std::optional<double> eta_;
};

struct DynamicConfig {
  Kappa kappa{1.0};
  NoiseMode noise = NoiseMode::positive(0.01);
  double dt = 1e-3;
  double delta = 1e-11;
  Grid grid{500};

  // Throws ConfigError listing every violated constraint.
  void validate() const;
};

// Softmax of e_k(U/eta), computed in log space. Requires positive noise.
GridMeasure logit_weights(const DynamicConfig& config, std::span<const double> u);

// Normalized max{U,0}^{1/kappa}. Requires limit mode and kappa > 0; throws
// DegenerateWeights when every U_i <= 0.
GridMeasure limit_weights(const DynamicConfig& config, std::span<const double> u);

// logit_weights or limit_weights, per the configured noise mode.
GridMeasure target_weights(const DynamicConfig& config, std::span<const double> u);

// weights(U(mu)) - mu.
std::vector<double> rhs(const DynamicConfig& config, const UtilityModel& model,
                        const GridMeasure& mu);

// (1 - dt) mu + dt weights(U(mu)).
GridMeasure euler_step(const DynamicConfig& config, const UtilityModel& model,
                       const GridMeasure& mu);

enum class Termination { ReachedFinalTime, Stationary };

const char* to_string(Termination t);

struct Snapshot {
  double time;
  GridMeasure measure;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  Termination termination = Termination::ReachedFinalTime;
  std::size_t steps = 0;                     // Euler steps taken
  std::optional<std::size_t> stationary_k;   // smallest k meeting the criterion

  const GridMeasure& final_measure() const { return snapshots.back().measure; }
};

// Fixed-step Euler integration to t_final, recording the measure at each of
// record_times (snapped to the nearest multiple of dt). The initial state is
// always the first snapshot. DegenerateWeights carries the failing step.
Trajectory run_until(const DynamicConfig& config, const UtilityModel& model,
                     const GridMeasure& init, double t_final,
                     std::span<const double> record_times);

// Steps until max_i N |mu_{k+1,i} - mu_{k,i}| <= delta and returns mu_{k+1}.
// Gives up after max_steps with termination ReachedFinalTime.
Trajectory run_to_stationary(const DynamicConfig& config, const UtilityModel& model,
                             const GridMeasure& init, std::size_t max_steps);

struct ConvergenceRow {
  double eta;
  double time;
  double error;               // max-norm PDF error against the limit run
  std::optional<double> rate; // against the next larger eta; empty for the largest
};

// Max-norm PDF error of each positive-noise run against the limit equation at
// each requested time. Rows are ordered by time, then by increasing eta.
std::vector<ConvergenceRow> eta_convergence_table(const DynamicConfig& base,
                                                  const UtilityModel& model,
                                                  const GridMeasure& init,
                                                  std::span<const double> etas,
                                                  std::span<const double> times);

// max_i |a_i - b_i| on the PDF scale.
double max_pdf_distance(const GridMeasure& a, const GridMeasure& b);

}  // namespace rlogit
