#pragma once

// Kaniadakis kappa-exponential
//
//   e_k(z) = (k z + sqrt(k^2 z^2 + 1))^(1/k),   e_0(z) = exp(z),
//
// evaluated through its logarithm ln e_k(z) = asinh(k z) / k, which cannot
// overflow and keeps full relative accuracy for negative z.

namespace rlogit {

// Shape parameter of the kappa-exponential, restricted to [0, 1].
class Kappa {
 public:
  explicit Kappa(double value);

  double value() const { return value_; }
  bool is_zero() const { return value_ == 0.0; }

  friend bool operator==(Kappa, Kappa) = default;

 private:
  double value_;
};

// ln e_k(z). Identity at k = 0. Throws DomainError on NaN.
double log_e_kappa(Kappa kappa, double z);

// e_k(z). May overflow to +inf at k = 0; softmax code uses log_e_kappa.
double e_kappa(Kappa kappa, double z);

// d/dz e_k(z) = e_k(z) / sqrt(k^2 z^2 + 1).
double d_e_kappa(Kappa kappa, double z);

// | (eta/(2k))^(1/k) e_k(u/eta) - u^(1/k) |, the gap between the rescaled
// noisy weight and its vanishing-noise limit. O(eta) for fixed u > 0.
// Requires k > 0, eta > 0, u > 0.
double scaled_limit_residual(Kappa kappa, double eta, double u);

}  // namespace rlogit
