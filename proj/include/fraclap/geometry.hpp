#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace fraclap {

inline constexpr int kMaxDim = 3;

/// A point of R^n for n <= 3. Components beyond the working dimension are
/// kept at zero so norms and dot products can ignore the dimension.
using Point = std::array<double, kMaxDim>;

inline Point make_point(double x0, double x1 = 0.0, double x2 = 0.0) {
  return Point{x0, x1, x2};
}

inline double dot(const Point& a, const Point& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline Point operator+(const Point& a, const Point& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Point operator-(const Point& a, const Point& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Point operator*(double k, const Point& a) {
  return {k * a[0], k * a[1], k * a[2]};
}

inline double distance(const Point& a, const Point& b) { return norm(a - b); }

/// Axis-aligned box used for sampling and seminorm estimation.
struct Box {
  Point lo{};
  Point hi{};
};

}  // namespace fraclap
