#pragma once

#include <optional>
#include <vector>

#include "fraclap/field_model.hpp"
#include "fraclap/quadrature_spec.hpp"

namespace fraclap {

/// Dirichlet problem on the ball B_r centred at the origin:
///   (-Delta)^s u = f in B_r,   u = g outside B_r.
struct BallProblem {
  int n = 1;
  double r = 1.0;
  double s = 0.5;
  std::optional<ScalarField> f;  ///< interior source
  std::optional<ScalarField> g;  ///< exterior datum
  /// Radii |y| > r across which g is not smooth or its support starts or
  /// ends; they become breakpoints of the exterior quadrature.
  std::vector<double> g_radii;

  /// Throws UsageError (missing data, dimension mismatch, r <= 0),
  /// DomainError for (n, s) out of range and PreconditionError when g is not
  /// in L^1_s.
  void validate() const;
};

struct KernelValue {
  double value = 0.0;
};

/// s-mean kernel A_r(y): zero on the closed ball, a r^{2s} / ((|y|^2 - r^2)^s |y|^n)
/// outside.
KernelValue mean_kernel(const Point& y, double r, int n, double s);

/// int A_r(y) u(x - y) dy. Each direction is integrated in t = r / |y| on
/// (0, 1), which absorbs the tail and leaves only endpoint singularities.
/// Divergent or unconverged quadrature raises ConvergenceError.
/// PreconditionError when B_r(x) reaches a declared singular point or the
/// field is not in L^1_s.
double s_mean_average(const ScalarField& field, const Point& x, double r, double s,
                      const QuadratureSpec& spec = {});

/// C ((r^2 - |x|^2) / (|y|^2 - r^2))^s |y - x|^{-n}; DomainError unless
/// |x| < r < |y|.
KernelValue poisson_kernel_ball(const Point& x, const Point& y, double r, int n, double s);

/// int_{|y| > r} g(y) P_r(x, y) dy. Requires prob.g; DomainError unless |x| < r.
double solve_homogeneous(const BallProblem& prob, const Point& x, const QuadratureSpec& spec = {});

/// b |x|^{2s-n} for n > 2s, -(1/pi) log|x| for n = 1, s = 1/2. Other
/// cases with 2s >= n raise UnsupportedError; x = 0 raises SingularityError.
double fundamental_solution(const Point& x, int n, double s);

/// Green function of B_r. With R = (r^2 - |x|^2)(r^2 - |z|^2) / (r^2 |x - z|^2):
///   kappa |z - x|^{2s-n} int_0^R t^{s-1} (t + 1)^{-n/2} dt,
/// and the closed logarithmic form for n = 1, s = 1/2. SingularityError
/// for x = z, DomainError when a point is outside the open ball.
KernelValue green_function(const Point& x, const Point& z, double r, int n, double s);

/// int_0^R t^{s-1} (1 + t)^{-n/2} dt.
double green_incomplete_integral(double R, int n, double s);

/// int_{B_r} G(x, y) f(y) dy, integrated in polar coordinates around x.
/// Requires prob.f.
double solve_nonhomogeneous(const BallProblem& prob, const Point& x,
                            const QuadratureSpec& spec = {});

/// Sum of the two representations; each part is skipped when its datum is
/// absent, so the result reduces exactly to either one.
double solve_full(const BallProblem& prob, const Point& x, const QuadratureSpec& spec = {});

/// The solution as a field on R^n: solve_full inside B_r and g (or zero)
/// outside. Every interior evaluation runs the quadrature. In one dimension
/// the points +-r are declared singular.
ScalarField ball_solution_field(const BallProblem& prob, const QuadratureSpec& spec = {});

/// One-dimensional tabulation of the solution. On B_r the nonhomogeneous
/// part is stored as (r^2 - x^2)^s h(x) with h a Chebyshev interpolant;
/// the homogeneous part gets the same treatment when g vanishes at +-r
/// and is interpolated directly otherwise. Outside B_r the field is g (or
/// zero). `nodes` Chebyshev points are used per interpolant.
ScalarField tabulated_ball_solution(const BallProblem& prob, int nodes = 48,
                                    const QuadratureSpec& spec = {});

/// Closed form for f = 1, g = 0:
///   (r^2 - |x|^2)^s Gamma(n/2) / (4^s Gamma(1 + s) Gamma(n/2 + s)).
double unit_source_solution(const Point& x, double r, int n, double s);

}  // namespace fraclap
