#pragma once

#include <cstddef>
#include <vector>

#include "fraclap/field_model.hpp"
#include "fraclap/quadrature_spec.hpp"

namespace fraclap {

enum class OpStatus { Converged, NotConverged };

/// Result of one operator evaluation.
struct OpValue {
  double value = 0.0;
  double err_est = 0.0;
  std::size_t nodes_used = 0;
  OpStatus status = OpStatus::Converged;
  /// True when a declared singular point lies close to x; the error
  /// estimate is then only a heuristic.
  bool heuristic = false;

  bool converged() const { return status == OpStatus::Converged; }
};

/// Smallest and largest order accepted by the direct quadrature.
inline constexpr double kMinOrder = 1e-3;
inline constexpr double kMaxOrder = 1.0 - 1e-3;

/// (-Delta)^s u(x) from the symmetric second-difference integral
///   (c_{n,s} / 2) int (2u(x) - u(x+y) - u(x-y)) / |y|^{n+2s} dy
/// in radial-angular coordinates. The ball B_delta around x is replaced by
/// the second-order Taylor term, with delta halved until the change is
/// below a tenth of the tolerance; the far field uses the decay metadata.
///
/// Throws DomainError for s outside [kMinOrder, kMaxOrder] and
/// PreconditionError when the field is not in L^1_s or not smooth enough
/// at x. Budget exhaustion returns a NotConverged value instead.
OpValue frac_lap_point(const ScalarField& field, const Point& x, double s,
                       const QuadratureSpec& spec = {});

/// Evaluates every point independently (possibly in parallel); output i
/// belongs to points[i] and is identical to a single-point call.
std::vector<OpValue> frac_lap_grid(const ScalarField& field, const std::vector<Point>& points,
                                   double s, const QuadratureSpec& spec = {});

struct Pairing {
  double lhs = 0.0;  ///< int (-Delta)^s u * v
  double rhs = 0.0;  ///< int u * (-Delta)^s v
};

/// Both sides of the integration-by-parts identity over the box
/// [-half_width, half_width]^n, by composite Gauss-Legendre quadrature
/// (panels per axis, `order` nodes per panel).
Pairing pairing_check(const ScalarField& u, const ScalarField& v, double s,
                      const QuadratureSpec& spec = {}, double half_width = 6.0,
                      int panels = 24, int order = 8);

}  // namespace fraclap
