#pragma once

#include <functional>
#include <vector>

#include "fraclap/field_model.hpp"
#include "fraclap/pointwise_op.hpp"
#include "fraclap/quadrature_spec.hpp"

namespace fraclap {

/// Heights y_k = 2^{-k}, k = 3..10.
std::vector<double> default_y_levels();

/// v(x, y) = int P(x - xi, y) u(xi) dxi with the half-space kernel
/// P(z, y) = B y^{2s} / (|z|^2 + y^2)^{(n+2s)/2}, B = B_half(n, s).
/// Throws DomainError for y <= 0 and PreconditionError when the field is
/// not declared bounded.
double extend(const ScalarField& field, const Point& x, double y, double s,
              const QuadratureSpec& spec = {});

/// The extension of a base field, evaluable anywhere in the upper half space.
struct ExtensionField {
  ScalarField base;
  double s = 0.5;
  std::vector<double> y_levels = default_y_levels();
  QuadratureSpec spec;

  double operator()(const Point& x, double y) const { return extend(base, x, y, s, spec); }
};

ExtensionField make_extension(const ScalarField& base, double s, const QuadratureSpec& spec = {});

/// Weighted conormal limit and the operator value recovered from it.
struct TraceResult {
  OpValue op;                        ///< -kappa * lim y^{1-2s} v_y
  double limit = 0.0;                ///< lim_{y->0} y^{1-2s} v_y (extrapolated)
  double kappa = 0.0;                ///< proportionality used for op
  double kappa_theory = 0.0;         ///< c_{n,s} / (2 s B_half)
  bool kappa_calibrated = false;     ///< true when kappa came from the spectral oracle
  std::vector<double> levels;        ///< heights used
  std::vector<double> v_minus_u;     ///< v(x, y_k) - u(x)
  std::vector<double> quotients;     ///< difference quotients in the variable y^{2s}
  std::vector<double> extrapolated;  ///< last Richardson column
};

/// Recovers (-Delta)^s u(x) from the extension. At each pair of adjacent
/// heights the difference quotient of v in the variable y^{2s} is formed;
/// Richardson extrapolation removes the powers y^{2-2s}, y^2 and y^{4-2s}.
/// The limit times 2s is lim y^{1-2s} v_y. kappa is calibrated once per
/// (n, s) against the spectral multiplier on the gaussian (n <= 2) and
/// cached; for n = 3 the closed-form value is used.
///
/// Requires at least three geometric levels (UsageError) and a field in
/// L^1_s that is smooth enough at x (PreconditionError). A non-monotone
/// extrapolation sequence yields a NotConverged result.
TraceResult conormal_trace(const ScalarField& field, const Point& x, double s,
                           const std::vector<double>& levels = default_y_levels(),
                           const QuadratureSpec& spec = {});

/// Calibrated kappa(n, s); computed on first use and cached.
double calibrated_kappa(int n, double s);

enum class ResidualMode { Strong, Weak };

/// Region of the (x, y) plane for one-dimensional bases.
struct PlaneBox {
  double x_lo = -1.0;
  double x_hi = 1.0;
  double y_lo = 0.5;
  double y_hi = 2.0;
};

/// Strong mode: maximum over the interior nodes of a grid with step h of
/// the conservative five-point approximation of div(y^{1-2s} grad v); the
/// box must lie in y > 0 (UsageError otherwise). Weak mode: the box must
/// straddle y = 0; returns the largest weak-form integral
///   int int |y|^{1-2s} grad V . grad phi
/// of the even reflection V over a fixed family of ten smooth bumps phi
/// placed inside the box. h sets the quadrature resolution. n = 1 only.
double weighted_divergence_residual(const ExtensionField& ext, const PlaneBox& box, double h,
                                    ResidualMode mode = ResidualMode::Strong);

/// Gradient of v at (x, y), y > 0, from differentiated kernels (n = 1).
struct ExtensionGradient {
  double vx = 0.0;
  double vy = 0.0;
};
ExtensionGradient extension_gradient(const ScalarField& field, double x, double y, double s,
                                     const QuadratureSpec& spec = {});

}  // namespace fraclap
