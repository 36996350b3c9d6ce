#include "fraclap/special_constants.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclap/errors.hpp"

namespace fraclap {
namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Lanczos series for Gamma(z + 1), z >= -0.5.
double lanczos_sum(double z) {
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
  return acc;
}

void require_positive(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "gamma: argument must be positive and finite, got " << x;
    throw DomainError(msg.str());
  }
}

}  // namespace

double gamma(double x) {
  require_positive(x);
  if (x < 0.5) {
    // Reflection keeps the series argument in its accurate range.
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) *
         lanczos_sum(z);
}

double log_gamma(double x) {
  require_positive(x);
  if (x < 0.5) {
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(lanczos_sum(z));
}

void require_order(int n, double s) {
  if (n < 1) throw DomainError("dimension n must be >= 1");
  if (!(s > 0.0 && s < 1.0)) {
    std::ostringstream msg;
    msg << "order s must lie in (0, 1), got " << s;
    throw DomainError(msg.str());
  }
}

double sphere_measure(int n) {
  if (n < 1) throw DomainError("dimension n must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / gamma(0.5 * n);
}

double c_ns(int n, double s) {
  require_order(n, s);
  const double half_n = 0.5 * n;
  // Gamma ratio through logs so large n does not overflow.
  const double log_ratio = log_gamma(half_n + s) - log_gamma(1.0 - s);
  return s * std::pow(4.0, s) * std::exp(log_ratio) / std::pow(std::numbers::pi, half_n);
}

ConstantSet constant_set(int n, double s) {
  require_order(n, s);
  const double half_n = 0.5 * n;
  const double pi_half_n = std::pow(std::numbers::pi, half_n);
  ConstantSet out;
  out.n = n;
  out.s = s;
  out.c = c_ns(n, s);
  out.a = std::sin(std::numbers::pi * s) * gamma(half_n) / (pi_half_n * std::numbers::pi);
  out.C_pois = out.a;
  if (n > 2.0 * s) {
    out.b = gamma(half_n - s) / (std::pow(4.0, s) * pi_half_n * gamma(s));
  }
  const double gs = gamma(s);
  out.kappa = gamma(half_n) / (std::pow(4.0, s) * pi_half_n * gs * gs);
  // int_{R^n} (1 + |w|^2)^{-(n+2s)/2} dw = pi^{n/2} Gamma(s) / Gamma(n/2 + s).
  out.B_half = std::exp(log_gamma(half_n + s) - log_gamma(s)) / pi_half_n;
  out.omega = sphere_measure(n);
  return out;
}

}  // namespace fraclap
