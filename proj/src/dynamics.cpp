#include "rlogit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "rlogit/csv_format.hpp"
#include "rlogit/errors.hpp"

namespace rlogit {

NoiseMode NoiseMode::positive(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("noise intensity eta must be finite and > 0");
  }
  return NoiseMode(eta);
}

double NoiseMode::eta() const {
  if (!eta_) throw DomainError("eta requested in vanishing-limit mode");
  return *eta_;
}

void DynamicConfig::validate() const {
  std::vector<std::string> issues;
  if (noise.is_limit() && kappa.is_zero()) {
    issues.emplace_back("dynamic.eta: the vanishing-noise limit requires kappa > 0");
  }
  if (!(dt > 0.0 && dt <= 1.0)) issues.emplace_back("dynamic.dt: must lie in (0, 1]");
  if (!(delta > 0.0)) issues.emplace_back("dynamic.delta: must be > 0");
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedFinalTime: return "reached_final_time";
    case Termination::Stationary: return "stationary";
  }
  return "unknown";
}

namespace {

void require_size(const DynamicConfig& config, std::span<const double> u) {
  if (u.size() != config.grid.size()) {
    throw DomainError("utility vector size does not match the grid");
  }
}

// Converts nonnegative weights (finite, positive sum) into a measure without
// the generic entry checks.
GridMeasure normalize(const Grid& grid, std::vector<double> w) {
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return GridMeasure::from_probabilities(grid, std::move(w));
}

}  // namespace

GridMeasure logit_weights(const DynamicConfig& config, std::span<const double> u) {
  require_size(config, u);
  const double eta = config.noise.eta();
  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) throw DomainError("logit_weights: non-finite utility");
    w[i] = log_e_kappa(config.kappa, u[i] / eta);
  }
  const double top = *std::max_element(w.begin(), w.end());
  for (double& v : w) v = std::exp(v - top);
  return normalize(config.grid, std::move(w));
}

GridMeasure limit_weights(const DynamicConfig& config, std::span<const double> u) {
  require_size(config, u);
  if (!config.noise.is_limit()) throw DomainError("limit_weights: noise mode is not the limit");
  if (config.kappa.is_zero()) throw DomainError("limit_weights: requires kappa > 0");
  const double power = 1.0 / config.kappa.value();
  std::vector<double> w(u.size());
  bool any_positive = false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) throw DomainError("limit_weights: non-finite utility");
    if (u[i] > 0.0) {
      w[i] = power == 1.0 ? u[i] : std::pow(u[i], power);
      any_positive = any_positive || w[i] > 0.0;
    } else {
      w[i] = 0.0;
    }
  }
  if (!any_positive) throw DegenerateWeights();
  return normalize(config.grid, std::move(w));
}

GridMeasure target_weights(const DynamicConfig& config, std::span<const double> u) {
  return config.noise.is_limit() ? limit_weights(config, u) : logit_weights(config, u);
}

std::vector<double> rhs(const DynamicConfig& config, const UtilityModel& model,
                        const GridMeasure& mu) {
  const auto target = target_weights(config, model.evaluate(mu));
  std::vector<double> r(mu.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = target[i] - mu[i];
  return r;
}

GridMeasure euler_step(const DynamicConfig& config, const UtilityModel& model,
                       const GridMeasure& mu) {
  if (!(config.dt > 0.0 && config.dt <= 1.0)) throw DomainError("euler_step: dt must lie in (0, 1]");
  const auto target = target_weights(config, model.evaluate(mu));
  const double keep = 1.0 - config.dt;
  std::vector<double> next(mu.size());
  for (std::size_t i = 0; i < next.size(); ++i) {
    next[i] = keep * mu[i] + config.dt * target[i];
  }
  return GridMeasure::from_probabilities(mu.grid(), std::move(next));
}

namespace {

void check_run_inputs(const DynamicConfig& config, const UtilityModel& model,
                      const GridMeasure& init) {
  config.validate();
  if (!(model.grid() == config.grid) || !(init.grid() == config.grid)) {
    throw DomainError("model, initial measure and config must share one grid");
  }
}

GridMeasure step_or_throw(const DynamicConfig& config, const UtilityModel& model,
                          const GridMeasure& mu, std::size_t step) {
  try {
    return euler_step(config, model, mu);
  } catch (const DegenerateWeights&) {
    throw DegenerateWeights(step);
  }
}

}  // namespace

Trajectory run_until(const DynamicConfig& config, const UtilityModel& model,
                     const GridMeasure& init, double t_final,
                     std::span<const double> record_times) {
  check_run_inputs(config, model, init);
  if (!(t_final > 0.0)) throw DomainError("run_until: t_final must be > 0");
  const auto total_steps = static_cast<std::size_t>(std::llround(t_final / config.dt));
  if (total_steps == 0) throw DomainError("run_until: t_final is shorter than one step");

  std::vector<std::size_t> record_steps;
  for (double t : record_times) {
    if (!(t >= 0.0 && t <= t_final)) {
      throw DomainError("run_until: record time " + format_real(t) + " outside [0, t_final]");
    }
    const auto s = static_cast<std::size_t>(std::llround(t / config.dt));
    if (s > 0) record_steps.push_back(std::min(s, total_steps));
  }
  std::sort(record_steps.begin(), record_steps.end());
  record_steps.erase(std::unique(record_steps.begin(), record_steps.end()), record_steps.end());

  Trajectory traj;
  traj.snapshots.push_back({0.0, init});
  GridMeasure mu = init;
  auto next_record = record_steps.begin();
  for (std::size_t step = 1; step <= total_steps; ++step) {
    mu = step_or_throw(config, model, mu, step - 1);
    if (next_record != record_steps.end() && *next_record == step) {
      traj.snapshots.push_back({static_cast<double>(step) * config.dt, mu});
      ++next_record;
    }
  }
  traj.steps = total_steps;
  traj.termination = Termination::ReachedFinalTime;
  return traj;
}

Trajectory run_to_stationary(const DynamicConfig& config, const UtilityModel& model,
                             const GridMeasure& init, std::size_t max_steps) {
  check_run_inputs(config, model, init);
  if (max_steps == 0) throw DomainError("run_to_stationary: max_steps must be >= 1");

  Trajectory traj;
  traj.snapshots.push_back({0.0, init});
  GridMeasure mu = init;
  for (std::size_t k = 0; k < max_steps; ++k) {
    GridMeasure next = step_or_throw(config, model, mu, k);
    const bool settled = max_pdf_distance(next, mu) <= config.delta;
    mu = std::move(next);
    if (settled) {
      traj.termination = Termination::Stationary;
      traj.stationary_k = k;
      traj.steps = k + 1;
      traj.snapshots.push_back({static_cast<double>(k + 1) * config.dt, mu});
      return traj;
    }
  }
  traj.termination = Termination::ReachedFinalTime;
  traj.steps = max_steps;
  traj.snapshots.push_back({static_cast<double>(max_steps) * config.dt, mu});
  return traj;
}

double max_pdf_distance(const GridMeasure& a, const GridMeasure& b) {
  if (!(a.grid() == b.grid())) throw DomainError("max_pdf_distance: grid mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return static_cast<double>(a.size()) * d;
}

std::vector<ConvergenceRow> eta_convergence_table(const DynamicConfig& base,
                                                  const UtilityModel& model,
                                                  const GridMeasure& init,
                                                  std::span<const double> etas,
                                                  std::span<const double> times) {
  if (base.kappa.is_zero()) throw DomainError("eta_convergence_table: requires kappa > 0");
  if (etas.empty() || times.empty()) throw DomainError("eta_convergence_table: empty eta or time list");
  std::vector<double> sorted_etas(etas.begin(), etas.end());
  std::sort(sorted_etas.begin(), sorted_etas.end());
  if (std::adjacent_find(sorted_etas.begin(), sorted_etas.end()) != sorted_etas.end()) {
    throw DomainError("eta_convergence_table: duplicate eta");
  }
  for (double e : sorted_etas) {
    if (!(e > 0.0)) throw DomainError("eta_convergence_table: eta must be > 0");
  }
  const double horizon = *std::max_element(times.begin(), times.end());

  // Snapshot of a run at each requested time, keyed by the time as recorded.
  auto run_at_times = [&](const NoiseMode& noise) {
    DynamicConfig cfg = base;
    cfg.noise = noise;
    auto traj = run_until(cfg, model, init, horizon, times);
    std::vector<GridMeasure> at;
    for (double t : times) {
      const auto s = std::llround(t / base.dt);
      auto it = std::find_if(traj.snapshots.begin(), traj.snapshots.end(), [&](const Snapshot& snap) {
        return std::llround(snap.time / base.dt) == s;
      });
      at.push_back(it->measure);
    }
    return at;
  };

  const auto reference = run_at_times(NoiseMode::vanishing_limit());
  std::vector<std::vector<double>> errors;  // [eta][time]
  for (double eta : sorted_etas) {
    const auto run = run_at_times(NoiseMode::positive(eta));
    std::vector<double> e(times.size());
    for (std::size_t t = 0; t < times.size(); ++t) e[t] = max_pdf_distance(run[t], reference[t]);
    errors.push_back(std::move(e));
  }

  std::vector<ConvergenceRow> rows;
  for (std::size_t t = 0; t < times.size(); ++t) {
    for (std::size_t i = 0; i < sorted_etas.size(); ++i) {
      ConvergenceRow row{sorted_etas[i], times[t], errors[i][t], std::nullopt};
      if (i + 1 < sorted_etas.size()) {
        row.rate = std::log(errors[i + 1][t] / errors[i][t]) /
                   std::log(sorted_etas[i + 1] / sorted_etas[i]);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace rlogit
