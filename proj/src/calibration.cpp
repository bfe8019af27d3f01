#include "rlogit/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "rlogit/errors.hpp"

namespace rlogit {

Moments empirical_stats(const EmpiricalSample& sample) {
  if (sample.values.empty()) throw DomainError("empirical_stats: empty sample");
  const double n = static_cast<double>(sample.values.size());
  double mean = 0.0;
  for (double v : sample.values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sample.values) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / n)};
}

std::vector<double> empirical_pdf(const EmpiricalSample& sample, std::size_t bins) {
  if (sample.values.empty()) throw DomainError("empirical_pdf: empty sample");
  if (bins < 2) throw DomainError("empirical_pdf: need at least 2 bins");
  const Grid grid(bins);
  std::vector<double> density(bins, 0.0);
  for (double v : sample.values) density[grid.cell_of(v)] += 1.0;
  const double scale = static_cast<double>(bins) / static_cast<double>(sample.values.size());
  for (double& d : density) d *= scale;
  return density;
}

ObjectiveValue fit_objective(const ModelPoint& point, const Moments& target,
                             const SolverSettings& solver) {
  if (!(target.mean > 0.0) || !(target.std > 0.0)) {
    throw DomainError("fit_objective: target moments must be positive");
  }
  DynamicConfig cfg{Kappa(point.kappa),
                    point.eta ? NoiseMode::positive(*point.eta) : NoiseMode::vanishing_limit(),
                    solver.dt, solver.delta, solver.grid};
  const CompetitionUtility model(point.utility, solver.grid);
  const auto traj =
      run_to_stationary(cfg, model, GridMeasure::uniform(solver.grid), solver.max_steps);
  if (traj.termination != Termination::Stationary) throw NotStationary(traj.steps);
  const Moments m = mean_and_std(traj.final_measure());
  const double em = (m.mean - target.mean) / target.mean;
  const double es = (m.std - target.std) / target.std;
  return {em * em + es * es, m, traj.steps};
}

const char* to_string(FitParam p) {
  switch (p) {
    case FitParam::A: return "a";
    case FitParam::B: return "b";
    case FitParam::Eta: return "eta";
    case FitParam::Kappa: return "kappa";
  }
  return "?";
}

FitParam fit_param_from_string(const std::string& name) {
  for (FitParam p : kFitParams) {
    if (name == to_string(p)) return p;
  }
  throw DomainError("unknown fit parameter `" + name + "` (expected a, b, eta or kappa)");
}

double get(const ModelPoint& p, FitParam which) {
  switch (which) {
    case FitParam::A: return p.utility.a;
    case FitParam::B: return p.utility.b;
    case FitParam::Eta: return p.eta.value_or(0.0);
    case FitParam::Kappa: return p.kappa;
  }
  return 0.0;
}

void set(ModelPoint& p, FitParam which, double value) {
  switch (which) {
    case FitParam::A: p.utility.a = value; break;
    case FitParam::B: p.utility.b = value; break;
    case FitParam::Eta: p.eta = value; break;
    case FitParam::Kappa: p.kappa = value; break;
  }
}

void FitSpec::validate() const {
  std::vector<FitParam> seen;
  for (const auto& [param, b] : free) {
    const std::string name = to_string(param);
    if (std::find(seen.begin(), seen.end(), param) != seen.end()) {
      throw DomainError("fit: parameter " + name + " listed twice");
    }
    seen.push_back(param);
    if (!(b.lo < b.hi)) throw DomainError("fit: bounds for " + name + " must satisfy lo < hi");
    if (param == FitParam::Kappa && !(b.lo >= 0.0 && b.hi <= 1.0)) {
      throw DomainError("fit: kappa bounds must lie in [0, 1]");
    }
    if (param == FitParam::Eta && !(b.lo > 0.0)) throw DomainError("fit: eta bounds must be > 0");
    if ((param == FitParam::A || param == FitParam::B) && !(b.lo >= 0.0)) {
      throw DomainError("fit: " + name + " bounds must be >= 0");
    }
  }
  if (points_per_axis < 1) throw DomainError("fit: points_per_axis must be >= 1");
  if (!(shrink > 0.0 && shrink < 1.0)) throw DomainError("fit: shrink must lie in (0, 1)");
}

namespace {

using Key = std::tuple<double, double, double, double>;

Key key_of(const ModelPoint& p) {
  return {p.utility.a, p.utility.b, p.eta.value_or(0.0), p.kappa};
}

std::vector<double> axis(const Bounds& b, std::size_t points) {
  if (points == 1) return {0.5 * (b.lo + b.hi)};
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) {
    v[i] = b.lo + (b.hi - b.lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  v.back() = b.hi;
  return v;
}

}  // namespace

FitResult fit_search(const FitSpec& spec, const Moments& target) {
  spec.validate();
  auto free = spec.free;
  std::sort(free.begin(), free.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Bounds> bounds;
  for (const auto& f : free) bounds.push_back(f.second);

  FitResult result;
  std::map<Key, std::optional<ObjectiveValue>> cache;
  std::optional<ModelPoint> best;
  std::optional<ObjectiveValue> best_value;

  auto consider = [&](const ModelPoint& p, const ObjectiveValue& v) {
    const bool better = !best_value || v.objective < best_value->objective ||
                        (v.objective == best_value->objective && key_of(p) < key_of(*best));
    if (better) {
      best = p;
      best_value = v;
    }
  };

  for (std::size_t level = 0; level <= spec.refinement_levels; ++level) {
    std::vector<std::vector<double>> axes;
    for (const auto& b : bounds) axes.push_back(axis(b, spec.points_per_axis));

    // Odometer over the cartesian product, last free parameter fastest, so
    // points are visited in lexicographic order of (a, b, eta, kappa).
    std::vector<std::size_t> idx(axes.size(), 0);
    for (bool done = false; !done;) {
      ModelPoint p = spec.start;
      for (std::size_t i = 0; i < axes.size(); ++i) set(p, free[i].first, axes[i][idx[i]]);

      FitEvaluation eval{p, level, std::nullopt, {}};
      const Key key = key_of(p);
      if (auto hit = cache.find(key); hit != cache.end()) {
        eval.value = hit->second;
        if (!eval.value) eval.failure = "failed (cached)";
      } else {
        try {
          eval.value = fit_objective(p, target, spec.solver);
        } catch (const DegenerateWeights& e) {
          eval.failure = e.what();
        } catch (const NotStationary& e) {
          eval.failure = e.what();
        } catch (const ConfigError& e) {
          eval.failure = e.what();
        } catch (const DomainError& e) {
          eval.failure = e.what();
        }
        cache.emplace(key, eval.value);
      }
      if (eval.value) consider(p, *eval.value);
      result.log.push_back(std::move(eval));

      done = true;
      for (std::size_t i = axes.size(); i-- > 0;) {
        if (++idx[i] < axes[i].size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
    }

    if (!best_value) break;
    result.level_best.push_back(best_value->objective);
    if (free.empty()) break;

    for (std::size_t i = 0; i < free.size(); ++i) {
      const Bounds& orig = free[i].second;
      const double center = get(*best, free[i].first);
      const double half = 0.5 * spec.shrink * (bounds[i].hi - bounds[i].lo);
      bounds[i] = {std::max(orig.lo, center - half), std::min(orig.hi, center + half)};
    }
  }

  if (!best_value) throw FitFailed("fit: every objective evaluation failed");
  result.best = *best;
  result.value = *best_value;
  return result;
}

}  // namespace rlogit
