#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fraclap/geometry.hpp"

namespace fraclap::quad {

struct Tolerance {
  double abs = 1e-12;
  double rel = 1e-10;

  double bound(double value) const;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evals = 0;
  bool converged = true;

  Result& operator+=(const Result& other);
};

using Integrand = std::function<double(double)>;

/// Gauss-Legendre rule on [-1, 1]; computed once per order and cached.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const Rule& gauss_legendre(int order);

/// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Interior
/// breakpoints (kinks, jumps of the integrand) seed the initial partition.
/// Panels are refined largest-error first until the summed error estimate
/// is below tol or max_evals is exhausted.
Result gauss_kronrod(const Integrand& f, double a, double b, const Tolerance& tol,
                     std::size_t max_evals = 200000,
                     std::span<const double> breakpoints = {});

/// Double-exponential (tanh-sinh) rule on [a, b]; robust to integrable
/// algebraic or logarithmic endpoint singularities. Levels are refined by
/// halving the step until consecutive levels agree to tol.
Result tanh_sinh(const Integrand& f, double a, double b, const Tolerance& tol,
                 int max_level = 10);

/// Same rule after splitting [a, b] at interior breakpoints.
Result tanh_sinh_split(const Integrand& f, double a, double b, const Tolerance& tol,
                       std::span<const double> breakpoints, int max_level = 10);

/// Integral over the unit sphere S^{n-1} (counting measure on {-1, 1} for
/// n = 1) of f(direction).
Result sphere(int n, const std::function<double(const Point&)>& f, const Tolerance& tol,
              std::size_t max_evals = 200000);

/// Same integral for integrands with f(-theta) = f(theta): only a half
/// sphere is sampled and the result doubled, so paired evaluations stay
/// exactly symmetric.
Result symmetric_sphere(int n, const std::function<double(const Point&)>& f,
                        const Tolerance& tol, std::size_t max_evals = 200000);

}  // namespace fraclap::quad
