#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "fraclap/field_model.hpp"

namespace fraclap {

/// Philox4x32-10 counter-based generator. A stream is fixed by a 64-bit key
/// and a 64-bit stream id; draws advance the low half of the counter, so
/// streams never overlap. Satisfies UniformRandomBitGenerator.
class Philox {
 public:
  using result_type = std::uint32_t;

  Philox(std::uint64_t key, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform double in (0, 1) with 53 random bits; never 0 or 1.
  double uniform();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

/// One Philox4x32-10 block; exposed for known-answer checks.
std::array<std::uint32_t, 4> philox4x32_10(const std::array<std::uint32_t, 4>& counter,
                                           const std::array<std::uint32_t, 2>& key);

/// Ball or axis-aligned box; inscribed(x) is the distance from x to the
/// complement of the primitive (<= 0 outside).
struct Primitive {
  enum class Kind { Ball, Box };
  Kind kind = Kind::Ball;
  Point center{};
  double radius = 1.0;
  Point lo{};
  Point hi{};

  static Primitive ball(const Point& center, double radius);
  static Primitive box(const Point& lo, const Point& hi);
  double inscribed(const Point& x, int dim) const;
};

/// A single ball or a finite union of primitives.
struct McDomain {
  std::vector<Primitive> parts{Primitive::ball(Point{}, 1.0)};

  static McDomain single_ball(const Point& center, double radius);
  static McDomain union_of(std::vector<Primitive> parts);

  bool is_single_ball() const { return parts.size() == 1 && parts[0].kind == Primitive::Kind::Ball; }
  /// Radius of a ball around x inside the domain: the largest inscribed
  /// radius over the primitives that contain x (0 outside the domain).
  double inscribed_radius(const Point& x, int dim) const;
};

struct McConfig {
  std::uint64_t seed = 1;
  std::size_t N = 10000;
  std::size_t max_jumps = 10000;
  int dim = 1;
  double s = 0.5;
  McDomain domain;

  /// Throws UsageError for N = 0, max_jumps = 0 or an empty domain and
  /// DomainError for (dim, s) out of range.
  void validate() const;
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;  ///< sample standard deviation / sqrt(n_effective)
  std::size_t n_effective = 0;
  std::size_t truncated_walks = 0;
};

/// Exit position from the ball B_r(center) for the isotropic 2s-stable
/// process started at x. From the centre the radius is r / sqrt(W) with
/// W ~ Beta(s, 1 - s) and a uniform direction. Off-centre points use exact
/// rejection against the centred law when the acceptance rate is
/// reasonable, and otherwise chain centred exits from inscribed balls,
/// which is exact by the strong Markov property.
Point sample_exit(const Point& x, const Point& center, double r, int dim, double s, Philox& rng);

/// E g(X_tau) over config.N walks; walk i draws from stream i of the seed,
/// so the estimate does not depend on the thread count. A single-ball
/// domain takes one exact exit per walk; other domains jump out of the
/// largest inscribed ball until the walker leaves. Walks still inside after
/// max_jumps, or stuck closer than 1e-9 to the boundary, are counted as
/// truncated and left out of the mean.
McEstimate mc_solve_dirichlet(const ScalarField& g, const McConfig& config, const Point& x);

/// Exit points of the first `count` walks of mc_solve_dirichlet (for
/// diagnostics); truncated walks are omitted.
std::vector<Point> mc_exit_samples(const McConfig& config, const Point& x, std::size_t count);

struct GeneratorSample {
  double t = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
};

/// For each t, (1/t) E[u(x) - (u(x + X_t) + u(x - X_t)) / 2] over config.N
/// antithetic pairs, X_t = t^{1/(2s)} S with S symmetric 2s-stable,
/// E exp(i xi S) = exp(-|xi|^{2s}). Chambers-Mallows-Stuck in one
/// dimension; in higher dimensions sqrt(2A) G with A positive s-stable
/// (Kanter) and G standard normal. config.domain is not used.
/// DomainError for t <= 0; PreconditionError for unbounded fields or
/// insufficient smoothness at x.
std::vector<GeneratorSample> generator_check(const ScalarField& field, const Point& x,
                                             const std::vector<double>& t_values,
                                             const McConfig& config);

/// Weighted least-squares line through the samples, evaluated at t = 0.
struct Extrapolation {
  double value = 0.0;
  double std_error = 0.0;
};
Extrapolation extrapolate_to_zero(const std::vector<GeneratorSample>& samples);

/// Draws of the symmetric stable variable S used by generator_check.
Point sample_stable(int dim, double s, Philox& rng);

}  // namespace fraclap
