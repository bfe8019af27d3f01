#include "rlogit/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "rlogit/csv_format.hpp"
#include "rlogit/errors.hpp"

namespace rlogit {

Grid::Grid(std::size_t n_cells) : n_(n_cells) {
  if (n_cells < 2) throw DomainError("grid needs at least 2 cells");
}

std::vector<double> Grid::midpoints() const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = midpoint(i);
  return x;
}

std::size_t Grid::cell_of(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("cell_of: x outside [0,1]");
  const auto i = static_cast<std::size_t>(x * static_cast<double>(n_));
  return std::min(i, n_ - 1);
}

GridMeasure GridMeasure::uniform(const Grid& grid) {
  return GridMeasure(grid, std::vector<double>(grid.size(), grid.width()));
}

GridMeasure GridMeasure::point_mass(const Grid& grid, std::size_t cell) {
  if (cell >= grid.size()) throw DomainError("point_mass: cell out of range");
  std::vector<double> m(grid.size(), 0.0);
  m[cell] = 1.0;
  return GridMeasure(grid, std::move(m));
}

GridMeasure GridMeasure::from_masses(const Grid& grid, std::vector<double> raw) {
  if (raw.size() != grid.size()) {
    throw DomainError("from_masses: expected " + std::to_string(grid.size()) +
                      " entries, got " + std::to_string(raw.size()));
  }
  for (double w : raw) {
    if (!std::isfinite(w) || w < 0.0) {
      throw DomainError("from_masses: entries must be finite and nonnegative");
    }
  }
  const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
  if (!(total > 0.0)) throw DomainError("from_masses: degenerate (all-zero) weights");
  for (double& w : raw) w /= total;
  return GridMeasure(grid, std::move(raw));
}

GridMeasure GridMeasure::from_probabilities(const Grid& grid,
                                            std::vector<double> masses) {
  if (masses.size() != grid.size()) {
    throw DomainError("from_probabilities: size does not match grid");
  }
  double total = 0.0;
  for (double w : masses) {
    if (!std::isfinite(w) || w < 0.0) {
      throw DomainError("from_probabilities: entries must be finite and nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw DomainError("from_probabilities: masses sum to " + format_real(total));
  }
  return GridMeasure(grid, std::move(masses));
}

std::vector<double> GridMeasure::pdf() const {
  const double n = static_cast<double>(size());
  std::vector<double> p(masses_.size());
  std::transform(masses_.begin(), masses_.end(), p.begin(),
                 [n](double m) { return n * m; });
  return p;
}

double variational_distance(const GridMeasure& mu, const GridMeasure& nu) {
  if (!(mu.grid() == nu.grid())) {
    throw DomainError("variational_distance: grid mismatch");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) d += std::abs(mu[i] - nu[i]);
  return d;
}

GridMeasure refine(const GridMeasure& mu, std::size_t factor) {
  if (factor == 0) throw DomainError("refine: factor must be positive");
  if (factor == 1) return mu;
  const Grid fine(mu.size() * factor);
  std::vector<double> m;
  m.reserve(fine.size());
  const double share = 1.0 / static_cast<double>(factor);
  for (double w : mu.masses()) m.insert(m.end(), factor, w * share);
  return GridMeasure::from_probabilities(fine, std::move(m));
}

double variational_distance_refined(const GridMeasure& mu,
                                    const GridMeasure& nu) {
  const std::size_t l = std::lcm(mu.size(), nu.size());
  return variational_distance(refine(mu, l / mu.size()), refine(nu, l / nu.size()));
}

Moments mean_and_std(const GridMeasure& mu) {
  const Grid& g = mu.grid();
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double x = g.midpoint(i);
    m1 += x * mu[i];
    m2 += x * x * mu[i];
  }
  return {m1, std::sqrt(std::max(0.0, m2 - m1 * m1))};
}

void write_measure_csv(std::ostream& os, const GridMeasure& mu) {
  const auto pdf = mu.pdf();
  os << "x_mid,mass,pdf\n";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    os << format_real(mu.grid().midpoint(i)) << ',' << format_real(mu[i]) << ','
       << format_real(pdf[i]) << '\n';
  }
}

}  // namespace rlogit
