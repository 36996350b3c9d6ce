#include "fraclap/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclap/errors.hpp"

namespace fraclap {

CubicSpline::CubicSpline(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  const std::size_t n = xs_.size();
  if (n < 2 || ys_.size() != n) throw UsageError("spline needs >= 2 matching samples");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(xs_[i] > xs_[i - 1])) throw UsageError("spline abscissae must increase strictly");
  }
  second_.assign(n, 0.0);
  if (n == 2) return;
  // Tridiagonal solve for the natural spline (Thomas algorithm).
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = xs_[i] - xs_[i - 1];
    const double h1 = xs_[i + 1] - xs_[i];
    const double rhs = 6.0 * ((ys_[i + 1] - ys_[i]) / h1 - (ys_[i] - ys_[i - 1]) / h0);
    const double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
    c[i] = h1 / diag;
    d[i] = (rhs - h0 * d[i - 1]) / diag;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    second_[i] = d[i] - c[i] * second_[i + 1];
  }
}

double CubicSpline::operator()(double x) const {
  const std::size_t n = xs_.size();
  if (x <= xs_.front()) {
    const double slope = derivative(xs_.front());
    return ys_.front() + slope * (x - xs_.front());
  }
  if (x >= xs_.back()) {
    const double slope = derivative(xs_.back());
    return ys_.back() + slope * (x - xs_.back());
  }
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t hi = std::min<std::size_t>(n - 1, it - xs_.begin());
  const std::size_t lo = hi - 1;
  const double h = xs_[hi] - xs_[lo];
  const double a = (xs_[hi] - x) / h;
  const double b = (x - xs_[lo]) / h;
  return a * ys_[lo] + b * ys_[hi] +
         ((a * a * a - a) * second_[lo] + (b * b * b - b) * second_[hi]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
  const std::size_t n = xs_.size();
  x = std::clamp(x, xs_.front(), xs_.back());
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t hi = std::clamp<std::size_t>(it - xs_.begin(), 1, n - 1);
  const std::size_t lo = hi - 1;
  const double h = xs_[hi] - xs_[lo];
  const double a = (xs_[hi] - x) / h;
  const double b = (x - xs_[lo]) / h;
  return (ys_[hi] - ys_[lo]) / h +
         (-(3.0 * a * a - 1.0) * second_[lo] + (3.0 * b * b - 1.0) * second_[hi]) * h / 6.0;
}

std::vector<double> ChebyshevInterpolant::nodes(double a, double b, int count) {
  std::vector<double> out(count);
  for (int k = 0; k < count; ++k) {
    // Descending cosines give ascending nodes.
    const double t = -std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * count));
    out[k] = 0.5 * (a + b) + 0.5 * (b - a) * t;
  }
  return out;
}

ChebyshevInterpolant::ChebyshevInterpolant(double a, double b, std::vector<double> values)
    : a_(a), b_(b), values_(std::move(values)) {
  const int count = static_cast<int>(values_.size());
  if (count < 1) throw UsageError("Chebyshev interpolant needs at least one value");
  nodes_ = nodes(a, b, count);
  weights_.resize(count);
  for (int k = 0; k < count; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + 1.0) / (2.0 * count);
    weights_[k] = ((k % 2 == 0) ? 1.0 : -1.0) * std::sin(theta);
  }
}

double ChebyshevInterpolant::operator()(double x) const {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const double diff = x - nodes_[k];
    if (diff == 0.0) return values_[k];
    const double w = weights_[k] / diff;
    num += w * values_[k];
    den += w;
  }
  return num / den;
}

}  // namespace fraclap
