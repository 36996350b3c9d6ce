#include "fraclap/quadrature_spec.hpp"

#include <cmath>
#include <sstream>

#include "fraclap/errors.hpp"

namespace fraclap {

void QuadratureSpec::validate() const {
  std::ostringstream msg;
  if (!(delta > 0.0) || !(delta < R_mid) || !std::isfinite(R_mid)) {
    msg << "quadrature spec needs 0 < delta < R_mid (delta=" << delta << ", R_mid=" << R_mid
        << ")";
    throw UsageError(msg.str());
  }
  if (!(tol_rel > 0.0) || !(tol_abs > 0.0)) throw UsageError("quadrature tolerances must be > 0");
  if (max_nodes < 100) throw UsageError("quadrature node budget must be >= 100");
}

QuadratureSpec QuadratureSpec::refined(double factor, double budget_factor) const {
  QuadratureSpec out = *this;
  out.tol_rel *= factor;
  out.tol_abs *= factor;
  out.max_nodes = static_cast<std::size_t>(static_cast<double>(max_nodes) * budget_factor);
  return out;
}

}  // namespace fraclap
