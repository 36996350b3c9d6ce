#pragma once

#include <functional>
#include <vector>

namespace fraclap {

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  double derivative(double x) const;
  double front() const { return xs_.front(); }
  double back() const { return xs_.back(); }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> second_;  // second derivatives at the knots
};

/// Polynomial interpolant on [a, b] through Chebyshev points of the first
/// kind, evaluated by the barycentric formula. Endpoints are never sampled,
/// which suits functions only computable in the open interval.
class ChebyshevInterpolant {
 public:
  ChebyshevInterpolant() = default;
  ChebyshevInterpolant(double a, double b, std::vector<double> values);

  /// Chebyshev points of the first kind mapped to [a, b], ascending.
  static std::vector<double> nodes(double a, double b, int count);

  double operator()(double x) const;
  const std::vector<double>& values() const { return values_; }

 private:
  double a_ = -1.0;
  double b_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> weights_;
};

}  // namespace fraclap
