#include "rlogit/utility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rlogit/errors.hpp"

namespace rlogit {

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw DomainError(std::string(what) + ": grid mismatch");
}

double ramp(double y, double x, double epsilon) {
  return std::clamp((y - x + epsilon) / epsilon, 0.0, 1.0);
}

// |t|^c with 0^0 = 1.
double abs_pow(double t, double c) {
  if (c == 0.0) return 1.0;
  if (c == 1.0) return std::abs(t);
  return std::pow(std::abs(t), c);
}

}  // namespace

BilinearKernel::BilinearKernel(const Grid& grid, const KernelFn& f)
    : grid_(grid), matrix_(grid.size(), grid.size()) {
  const auto x = grid.midpoints();
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double v = f(x[j], x[k]);
      if (!std::isfinite(v)) throw DomainError("BilinearKernel: non-finite kernel value");
      matrix_(j, k) = v;
    }
  }
}

std::vector<double> BilinearKernel::evaluate(const GridMeasure& mu) const {
  require_same_grid(grid_, mu.grid(), "bilinear utility");
  std::vector<double> u(grid_.size());
  Eigen::Map<const Eigen::VectorXd> m(mu.masses().data(), mu.size());
  Eigen::Map<Eigen::VectorXd>(u.data(), u.size()).noalias() = matrix_ * m;
  return u;
}

double ramp_tail_mass(const GridMeasure& mu, double x, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("ramp_tail_mass: epsilon must be > 0");
  double s = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    s += ramp(mu.grid().midpoint(k), x, epsilon) * mu[k];
  }
  return s;
}

std::vector<double> ramp_tail_masses(const GridMeasure& mu, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("ramp_tail_masses: epsilon must be > 0");
  const Grid& g = mu.grid();
  const std::size_t n = mu.size();
  // suffix[j] = sum_{k >= j} mu_k; the ramp is exactly 1 on those cells.
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] + mu[k];

  std::vector<double> tail(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = g.midpoint(j);
    double s = suffix[j];
    for (std::size_t k = j; k-- > 0;) {
      const double y = g.midpoint(k);
      if (y <= x - epsilon) break;
      s += ramp(y, x, epsilon) * mu[k];
    }
    tail[j] = s;
  }
  return tail;
}

void CompetitionParams::validate() const {
  auto fail = [](const std::string& m) { throw DomainError("competition params: " + m); };
  if (!(a >= 0.0) || !std::isfinite(a)) fail("a must be >= 0");
  if (!(b >= 0.0) || !std::isfinite(b)) fail("b must be >= 0");
  if (!(c >= 0.0) || !std::isfinite(c)) fail("c must be >= 0");
  if (!(d >= 0.0) || !std::isfinite(d)) fail("d must be >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
  if (epsilon && !(*epsilon > 0.0 && std::isfinite(*epsilon))) fail("epsilon must be > 0");
}

CompetitionUtility::CompetitionUtility(const CompetitionParams& params,
                                       const Grid& grid)
    : params_((params.validate(), params)),
      epsilon_(params.epsilon_for(grid)),
      kernel_(grid, [a = params.a, b = params.b, c = params.c](double x, double y) {
        return -a * x * x + b * abs_pow(x - y, c);
      }) {}

std::vector<double> CompetitionUtility::evaluate(const GridMeasure& mu) const {
  auto u = kernel_.evaluate(mu);
  if (params_.d != 0.0) {
    const auto tail = ramp_tail_masses(mu, epsilon_);
    for (std::size_t j = 0; j < u.size(); ++j) {
      u[j] += params_.d * std::max(params_.alpha - tail[j], 0.0);
    }
  }
  return u;
}

std::vector<double> competition_utility(const CompetitionParams& params,
                                        const GridMeasure& mu) {
  return CompetitionUtility(params, mu.grid()).evaluate(mu);
}

double lipschitz_ratio_sample(const UtilityModel& model, const GridMeasure& mu,
                              const GridMeasure& nu) {
  const double dist = variational_distance(mu, nu);
  if (!(dist > 0.0)) throw DomainError("lipschitz_ratio_sample: measures coincide");
  const auto u = model.evaluate(mu);
  const auto v = model.evaluate(nu);
  double diff = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) diff = std::max(diff, std::abs(u[j] - v[j]));
  return diff / dist;
}

}  // namespace rlogit
