#pragma once

#include <cstddef>
#include <vector>

#include "fraclap/field_model.hpp"

namespace fraclap {

/// Uniform periodic grid on [-L/2, L/2)^dim with N nodes per axis.
struct PeriodicGrid {
  int dim = 1;
  double L = 40.0;
  std::size_t N = 1024;

  /// Throws UsageError unless dim is 1 or 2, L > 0 and N is a power of
  /// two with N >= 8.
  void validate() const;
  double spacing() const { return L / static_cast<double>(N); }
  std::size_t size() const { return dim == 1 ? N : N * N; }
  double coordinate(std::size_t j) const { return -0.5 * L + spacing() * static_cast<double>(j); }
  /// Node of flat index i (row-major, last axis fastest).
  Point node(std::size_t i) const;
};

/// Samples on a periodic grid. `trusted` is cleared when the data are not
/// small on the box boundary, i.e. when periodisation may be visible.
struct SampledField {
  PeriodicGrid grid;
  std::vector<double> values;
  bool trusted = true;

  /// Value at the grid node nearest to x, or UsageError when x is not a
  /// node up to 1e-9 of the spacing.
  double at_node(const Point& x) const;
};

SampledField sample_field(const ScalarField& field, const PeriodicGrid& grid);

/// True when every boundary sample is below 1e-12 in magnitude.
bool boundary_small(const SampledField& f);

/// Fourier multiplier (2 pi |k| / L)^{2s} applied with FFTW; the zero mode
/// is removed. Throws DomainError for s outside (0, 1) and
/// ConditioningError when the inverse transform has an imaginary part above
/// 1e-10 times the input norm.
SampledField frac_lap_spectral(const SampledField& f, double s);

/// Orders s then t applied as the product of both multipliers; requires
/// s, t in (0, 1) and s + t <= 1 (DomainError otherwise).
SampledField semigroup_compose(const SampledField& f, double s, double t);

}  // namespace fraclap
