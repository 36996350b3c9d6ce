#pragma once

#include <cstddef>

#include "fraclap/quadrature.hpp"

namespace fraclap {

enum class TailMode { AnalyticPower, NumericCompactified };

/// Tolerances, cutoffs and node budget for singular-integral evaluation.
struct QuadratureSpec {
  double delta = 0.1;       ///< inner cutoff radius (shrunk adaptively)
  double R_mid = 4.0;       ///< near/far split radius
  double tol_rel = 1e-9;
  double tol_abs = 1e-11;
  std::size_t max_nodes = 4'000'000;  ///< budget of integrand evaluations
  TailMode tail_mode = TailMode::AnalyticPower;

  /// Throws UsageError unless 0 < delta < R_mid, tolerances > 0 and
  /// max_nodes >= 100.
  void validate() const;

  quad::Tolerance tolerance() const { return quad::Tolerance{tol_abs, tol_rel}; }

  /// Same spec with both tolerances scaled by factor and the node budget
  /// multiplied by budget_factor; used for refinement studies.
  QuadratureSpec refined(double factor, double budget_factor = 2.0) const;
};

}  // namespace fraclap
