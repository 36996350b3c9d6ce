#pragma once

#include <optional>

namespace fraclap {

/// Gamma function for positive real arguments (Lanczos approximation,
/// g = 7, nine terms; relative error near machine precision).
double gamma(double x);

/// Natural logarithm of gamma(x) for x > 0.
double log_gamma(double x);

/// Normalization of the singular-integral form:
///   c_{n,s} = s 4^s Gamma(n/2 + s) / (pi^{n/2} Gamma(1 - s)),
/// the reciprocal of int_{R^n} (1 - cos z_1) / |z|^{n+2s} dz.
double c_ns(int n, double s);

/// Measure of the unit sphere S^{n-1}; omega(1) = 2 (two points).
double sphere_measure(int n);

/// Every kernel constant needed for one (n, s) pair.
struct ConstantSet {
  int n = 1;
  double s = 0.5;
  double c = 0.0;        ///< singular-integral constant
  double a = 0.0;        ///< s-mean kernel constant
  double C_pois = 0.0;   ///< ball Poisson kernel constant (same closed form as a)
  std::optional<double> b;  ///< fundamental-solution constant, only when n > 2s
  double kappa = 0.0;    ///< Green function constant
  double B_half = 0.0;   ///< half-space extension kernel constant
  double omega = 0.0;    ///< measure of S^{n-1}
};

ConstantSet constant_set(int n, double s);

/// Validates (n, s); throws DomainError outside n in [1, 3], s in (0, 1).
void require_order(int n, double s);

}  // namespace fraclap
