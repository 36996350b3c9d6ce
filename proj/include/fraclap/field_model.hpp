#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fraclap/geometry.hpp"
#include "fraclap/quadrature_spec.hpp"

namespace fraclap {

enum class SmoothnessKind { C0, Holder, C1Holder, C2, Cinf };

/// One regularity class; order() is the total Hoelder order
/// (C0 -> 0, Holder(a) -> a, C1_Holder(a) -> 1 + a, C2 -> 2, Cinf -> inf).
struct Regularity {
  SmoothnessKind kind = SmoothnessKind::Cinf;
  double alpha = 0.0;

  double order() const;

  static Regularity c0() { return {SmoothnessKind::C0, 0.0}; }
  static Regularity holder(double a) { return {SmoothnessKind::Holder, a}; }
  static Regularity c1_holder(double a) { return {SmoothnessKind::C1Holder, a}; }
  static Regularity c2() { return {SmoothnessKind::C2, 0.0}; }
  static Regularity cinf() { return {SmoothnessKind::Cinf, 0.0}; }
};

/// Declared smoothness: `global` holds on all of R^n, `local` holds on the
/// complement of the singular points. The smoothness radius at x is the
/// distance to the nearest singular point.
struct Smoothness {
  Regularity global = Regularity::cinf();
  Regularity local = Regularity::cinf();
  std::vector<Point> singular_points;

  double smoothness_radius(const Point& x) const;
  /// Regularity order that may be used in a neighbourhood of x.
  double order_at(const Point& x) const;
};

enum class DecayKind { CompactSupport, PowerDecay, Bounded };

/// Tail metadata. CompactSupport(R): u = 0 for |x| > R. PowerDecay(p, M):
/// |u(x)| <= M (1 + |x|)^{-p} (p may be negative for growing fields).
/// Bounded(M): |u| <= M.
struct Decay {
  DecayKind kind = DecayKind::Bounded;
  double radius = 0.0;
  double exponent = 0.0;
  double bound = 1.0;

  static Decay compact(double radius, double bound = 1.0) {
    return {DecayKind::CompactSupport, radius, 0.0, bound};
  }
  static Decay power(double exponent, double bound) {
    return {DecayKind::PowerDecay, 0.0, exponent, bound};
  }
  static Decay bounded(double bound) { return {DecayKind::Bounded, 0.0, 0.0, bound}; }

  bool is_bounded() const;
  /// Effective decay exponent p used for tail planning (0 for bounded and
  /// +inf for compact support).
  double tail_exponent() const;
};

using FieldEval = std::function<double(const Point&)>;
using FieldGrad = std::function<Point(const Point&)>;

/// A real function on R^n with the metadata quadrature planning relies on.
struct ScalarField {
  int dim = 1;
  FieldEval eval;
  FieldGrad grad;  ///< optional; empty when not available
  Smoothness smoothness;
  Decay decay;
  std::string name;

  double operator()(const Point& x) const { return eval(x); }
};

struct FieldCatalogEntry {
  std::string name;
  ScalarField field;
  std::string notes;
};

/// Parameters for catalog construction. Not every entry uses every field.
struct FieldParams {
  double value = 1.0;     ///< constant value / amplitude
  double s = 0.5;         ///< exponent of the xplus field
  double period = 8.0;    ///< torus length of the fourier mode
  int mode = 1;           ///< wavenumber of the fourier mode
  Point center{};         ///< shift of the gaussian
};

ScalarField constant_field(int dim, double value);
/// exp(-|x - center|^2).
ScalarField gaussian_field(int dim, const Point& center = Point{});
/// Smooth radial bump, identically 1 on B_1 and 0 outside B_2.
ScalarField bump_field(int dim);
/// x_+^s in one dimension.
ScalarField xplus_field(double s);
/// |x|^2 on B_1, smoothly cut off to 0 outside B_2.
ScalarField windowed_quadratic_field(int dim);
/// cos(2 pi k x_1 / L), periodic on a torus of length L.
ScalarField fourier_mode_field(int dim, double period, int mode);

/// Smooth step: 1 for t <= 0, 0 for t >= 1, C-infinity in between.
double smooth_step(double t);

std::vector<std::string> catalog_names();
FieldCatalogEntry catalog_entry(const std::string& name, int dim, const FieldParams& params = {});
ScalarField catalog_field(const std::string& name, int dim, const FieldParams& params = {});

/// Builds a field from a 1D table (x strictly increasing) using a natural
/// cubic spline; zero outside the table (compact support).
ScalarField sampled_field_1d(std::vector<double> xs, std::vector<double> values,
                             std::string name = "sampled");

/// Linear combination a*u + b*w with merged metadata.
ScalarField combine(double a, const ScalarField& u, double b, const ScalarField& w);
/// x -> scale * u(lambda * x + shift); metadata transformed accordingly.
ScalarField transformed(const ScalarField& u, double lambda, const Point& shift = Point{},
                        double scale = 1.0);

struct L1sResult {
  bool finite = false;
  double value = std::numeric_limits<double>::infinity();
};

/// int |u(y)| / (1 + |y|^{n+2s}) dy, short-circuited to "divergent" when the
/// declared tail exponent p satisfies p + 2s <= 0.
L1sResult check_L1s(const ScalarField& field, double s, const QuadratureSpec& spec = {});

/// Largest |u(x)-u(y)| / |x-y|^alpha over sampled pairs with |x-y| >= h_min.
double holder_seminorm_samples(const std::vector<Point>& points, const std::vector<double>& values,
                               double alpha, double h_min);

/// Samples `per_axis` points per axis of the box (dim axes) and evaluates
/// the sampled seminorm. Throws UsageError for alpha outside (0, 1] or a
/// sample with fewer than two points.
double holder_seminorm(const ScalarField& field, double alpha, const Box& domain,
                       double h_min = 1e-3, int per_axis = 201);

std::vector<Point> grid_points(const Box& domain, int dim, int per_axis);

/// Randomized audit of declared metadata: zeros outside compact support,
/// gradient against central differences, finite values.
struct FieldAudit {
  bool finite = true;
  bool exterior_zero = true;
  bool gradient_consistent = true;
  double max_gradient_error = 0.0;
};
FieldAudit audit_field(const ScalarField& field, std::uint64_t seed, int samples = 64);

}  // namespace fraclap
