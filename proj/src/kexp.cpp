#include "rlogit/kexp.hpp"

#include <cmath>
#include <string>

#include "rlogit/errors.hpp"

namespace rlogit {

Kappa::Kappa(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError("kappa must lie in [0, 1], got " + std::to_string(value));
  }
}

namespace {

// asinh is odd; evaluate on |s| so negative arguments never see cancellation.
double odd_asinh(double s) { return std::copysign(std::asinh(std::abs(s)), s); }

void require_finite(double z, const char* what) {
  if (std::isnan(z)) throw DomainError(std::string(what) + ": NaN argument");
}

}  // namespace

double log_e_kappa(Kappa kappa, double z) {
  require_finite(z, "log_e_kappa");
  if (kappa.is_zero()) return z;
  const double k = kappa.value();
  return odd_asinh(k * z) / k;
}

double e_kappa(Kappa kappa, double z) { return std::exp(log_e_kappa(kappa, z)); }

double d_e_kappa(Kappa kappa, double z) {
  require_finite(z, "d_e_kappa");
  if (kappa.is_zero()) return std::exp(z);
  const double k = kappa.value();
  // e_k(z) / sqrt(k^2 z^2 + 1) in log space; hypot avoids squaring overflow.
  return std::exp(log_e_kappa(kappa, z) - std::log(std::hypot(k * z, 1.0)));
}

double scaled_limit_residual(Kappa kappa, double eta, double u) {
  if (kappa.is_zero()) {
    throw DomainError("scaled_limit_residual: undefined at kappa = 0");
  }
  if (!(eta > 0.0) || !(u > 0.0)) {
    throw DomainError("scaled_limit_residual: requires eta > 0 and u > 0");
  }
  const double inv_k = 1.0 / kappa.value();
  // log of the ratio (eta/(2k))^(1/k) e_k(u/eta) / u^(1/k)
  const double log_ratio = inv_k * std::log(eta / (2.0 * kappa.value())) +
                           log_e_kappa(kappa, u / eta) - inv_k * std::log(u);
  return std::pow(u, inv_k) * std::abs(std::expm1(log_ratio));
}

}  // namespace rlogit
