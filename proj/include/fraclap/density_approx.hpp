#pragma once

#include <cstddef>
#include <vector>

#include "fraclap/field_model.hpp"
#include "fraclap/quadrature_spec.hpp"
#include "fraclap/report.hpp"

namespace fraclap {

/// Functions that are s-harmonic in B_1 (one dimension), each the ball
/// solution for a smooth bump datum supported in B_R \ B_1.
///
/// Elements come in mirror pairs: element 2k has its bump at +centers[k],
/// element 2k + 1 at -centers[k]; an odd count ends with a lone + element.
/// Every prefix of the list is itself a basis, which gives nested families.
struct HarmonicBasis {
  double R = 3.0;
  double s = 0.5;
  double width = 0.1;
  std::vector<double> centers;   ///< signed bump centres, one per element
  std::vector<ScalarField> elements;

  std::size_t size() const { return elements.size(); }
  HarmonicBasis prefix(std::size_t m) const;
};

/// Width used when build_basis is given width <= 0: (R - 1) / (k + 1) for
/// k = ceil(m / 2) bumps per side.
double default_bump_width(double R, std::size_t m);

/// Bump centres are the k interior points of an equispaced grid on
/// (1 + width/2, R - width/2), k = ceil(m / 2), ordered from the inside out.
/// Each datum is a rescaled bump_field (plateau on the middle half of its
/// support) and each element is tabulated with `nodes` Chebyshev points.
/// UsageError unless m >= 1, width > 0 after defaulting and R > 1 + width;
/// UnsupportedError for n != 1.
HarmonicBasis build_basis(double R, std::size_t m, double width, double s, int n = 1,
                          int nodes = 64, const QuadratureSpec& spec = {});

enum class ApproxNorm { C0, C1 };

struct ApproxOptions {
  ApproxNorm norm = ApproxNorm::C0;
  double fit_radius = 0.75;     ///< least-squares samples lie in [-fit_radius, fit_radius]
  double report_radius = 0.5;   ///< achieved_error is measured on this ball
  int samples = 301;            ///< equispaced samples on the fit interval
  double ridge = 1e-10;         ///< relative to the largest squared singular value
};

struct ApproxResult {
  std::vector<double> coefficients;
  ApproxNorm norm = ApproxNorm::C0;
  double achieved_error = 0.0;    ///< on the report grid
  double validation_error = 0.0;  ///< same norm on a grid about four times finer
  double fit_error = 0.0;         ///< sup norm on the whole fit interval
  double condition_estimate = 0.0;
};

/// Ridge-regularized least squares over the sampled fit interval. Columns
/// are scaled to unit length before the SVD; the C1 norm adds rows for the
/// derivative (central differences, step 1e-5). The C1 error is
/// sup|e| + sup|e'|.
/// PreconditionError for a target that is not finite on the grid;
/// ConditioningError when the design matrix is zero or not finite.
ApproxResult approximate(const ScalarField& target, const HarmonicBasis& basis,
                         const ApproxOptions& options = {});

/// sum_k coefficients[k] * basis.elements[k].
ScalarField combination(const HarmonicBasis& basis, const std::vector<double>& coefficients);

struct HarnackDemoOptions {
  std::size_t m = 40;
  double R = 3.0;
  int samples = 301;
};

/// Fits w(x) = x^2 on B_{3/4} with the shortest prefix of mirror pairs
/// whose fit error reaches epsilon (the whole basis if none does), shifts
/// the fit by its minimum over the fit
/// grid to get u >= 0 there and reports inf and sup of u over B_{1/2}, the
/// location of the minimiser and the ratio sup / (inf + epsilon^2). The
/// infimum itself is zero by construction, so the floor epsilon^2 keeps the
/// ratio finite while still diverging as epsilon -> 0.
/// Verdict: pass when the fit error on B_{3/4} is at most epsilon and the
/// minimiser lies in the closed ball B_{1/4}; reported when the fit misses
/// epsilon; fail otherwise.
Report harnack_failure_demo(double epsilon, const HarmonicBasis& basis, int samples = 301);
Report harnack_failure_demo(double epsilon, double s, const HarnackDemoOptions& options = {});

}  // namespace fraclap
