#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace rlogit {

// Uniform partition of [0,1] into N cells [(i-1)/N, i/N), the last one closed.
// Cells are indexed from 0 here; cell i has midpoint (i + 1/2)/N.
class Grid {
 public:
  explicit Grid(std::size_t n_cells);

  std::size_t size() const { return n_; }
  double width() const { return 1.0 / static_cast<double>(n_); }
  double midpoint(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n_);
  }
  std::vector<double> midpoints() const;

  // Cell containing x in [0,1].
  std::size_t cell_of(double x) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t n_;
};

// Probability masses over the cells of a Grid. Immutable once built; every
// mass is >= 0 and the masses sum to 1 within kMassTolerance.
class GridMeasure {
 public:
  static constexpr double kMassTolerance = 1e-9;

  static GridMeasure uniform(const Grid& grid);
  static GridMeasure point_mass(const Grid& grid, std::size_t cell);

  // Normalizes nonnegative weights. Throws DomainError on negative entries,
  // non-finite entries or an all-zero vector.
  static GridMeasure from_masses(const Grid& grid, std::vector<double> raw);

  // Adopts masses that already form a probability vector, without
  // renormalizing. Throws DomainError when the invariants do not hold.
  static GridMeasure from_probabilities(const Grid& grid,
                                        std::vector<double> masses);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return masses_.size(); }
  std::span<const double> masses() const { return masses_; }
  double operator[](std::size_t i) const { return masses_[i]; }

  // Piecewise-constant density N * mass_i.
  std::vector<double> pdf() const;

 private:
  GridMeasure(Grid grid, std::vector<double> masses)
      : grid_(grid), masses_(std::move(masses)) {}

  Grid grid_;
  std::vector<double> masses_;
};

// sup_g |int g d(mu - nu)| over |g| <= 1, which for two piecewise-constant
// densities on one grid is the L1 distance of the cell masses.
double variational_distance(const GridMeasure& mu, const GridMeasure& nu);

// Splits every cell into `factor` equal sub-cells carrying equal mass. The
// density is unchanged.
GridMeasure refine(const GridMeasure& mu, std::size_t factor);

// Variational distance between measures on different grids, computed exactly
// on the least common multiple grid.
double variational_distance_refined(const GridMeasure& mu,
                                    const GridMeasure& nu);

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

// Midpoint-quadrature mean and population standard deviation.
Moments mean_and_std(const GridMeasure& mu);

// CSV with header `x_mid,mass,pdf`.
void write_measure_csv(std::ostream& os, const GridMeasure& mu);

}  // namespace rlogit
