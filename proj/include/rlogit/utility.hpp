#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rlogit/measure.hpp"

namespace rlogit {

// U(x; mu) evaluated at every cell midpoint of a fixed grid.
class UtilityModel {
 public:
  virtual ~UtilityModel() = default;

  virtual const Grid& grid() const = 0;
  virtual std::vector<double> evaluate(const GridMeasure& mu) const = 0;
};

// U_j = sum_k f(x_j, x_k) mu_k with the N x N matrix f(x_j, x_k) precomputed.
class BilinearKernel final : public UtilityModel {
 public:
  using KernelFn = std::function<double(double x, double y)>;

  BilinearKernel(const Grid& grid, const KernelFn& f);

  const Grid& grid() const override { return grid_; }
  std::vector<double> evaluate(const GridMeasure& mu) const override;

  double entry(std::size_t j, std::size_t k) const { return matrix_(j, k); }
  // max_{j,k} |f(x_j, x_k)|
  double sup_norm() const { return matrix_.cwiseAbs().maxCoeff(); }

 private:
  Grid grid_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> matrix_;
};

// Regularized upper-tail mass int max{0, min{1, (y - x + eps)/eps}} mu(dy)
// under the midpoint rule.
double ramp_tail_mass(const GridMeasure& mu, double x, double epsilon);

// ramp_tail_mass at every midpoint of mu's grid, via suffix sums. O(N * eps*N).
std::vector<double> ramp_tail_masses(const GridMeasure& mu, double epsilon);

// Competition utility
//   U(x; mu) = int (-a x^2 + b |x - y|^c) mu(dy) + d max{alpha - T_eps(x; mu), 0}
// where T_eps is the ramp-regularized tail mass.
struct CompetitionParams {
  double a = 0.27;
  double b = 0.23;
  double c = 1.0;
  double d = 1.0;
  double alpha = 0.2;
  std::optional<double> epsilon;  // defaults to the grid width 1/N

  // Throws DomainError naming the first offending field.
  void validate() const;
  double epsilon_for(const Grid& grid) const {
    return epsilon.value_or(grid.width());
  }
};

class CompetitionUtility final : public UtilityModel {
 public:
  CompetitionUtility(const CompetitionParams& params, const Grid& grid);

  const Grid& grid() const override { return kernel_.grid(); }
  std::vector<double> evaluate(const GridMeasure& mu) const override;

  const CompetitionParams& params() const { return params_; }
  double epsilon() const { return epsilon_; }

 private:
  CompetitionParams params_;
  double epsilon_;
  BilinearKernel kernel_;
};

// Convenience wrapper matching the free-function naming used elsewhere.
std::vector<double> competition_utility(const CompetitionParams& params,
                                        const GridMeasure& mu);

// max_j |U_j(mu) - U_j(nu)| / ||mu - nu||. Requires mu != nu.
double lipschitz_ratio_sample(const UtilityModel& model, const GridMeasure& mu,
                              const GridMeasure& nu);

}  // namespace rlogit
