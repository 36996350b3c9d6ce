#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fraclap/ball_solver.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/levy_mc.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/pointwise_op.hpp"
#include "oracles.hpp"

using namespace fraclap;

namespace {

McConfig ball_config(int dim, double s, std::size_t N, std::uint64_t seed = 11) {
  McConfig c;
  c.dim = dim;
  c.s = s;
  c.N = N;
  c.seed = seed;
  c.domain = McDomain::single_ball(Point{}, 1.0);
  return c;
}

ScalarField right_half_indicator() {
  ScalarField f = constant_field(1, 1.0);
  f.eval = [](const Point& y) { return y[0] > 0.0 ? 1.0 : 0.0; };
  f.smoothness.global = Regularity::c0();
  f.smoothness.singular_points = {make_point(0.0)};
  f.name = "right_half";
  return f;
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("Philox known answers and uniforms") {
  using B = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10({0u, 0u, 0u, 0u}, {0u, 0u}) == B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  Philox a(0, 0);
  CHECK(a() == 0x6627e8d5u);
  Philox rng(5, 9);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 100000.0 - 0.5) < 0.005);
  Philox p1(3, 4), p2(3, 4), p3(3, 5);
  CHECK(p1() == p2());
  CHECK(p1() != p3());
}

TEST_CASE("exit samples: support, isotropy and mean payoff") {
  Philox rng(1, 0);
  for (int dim : {1, 2, 3}) {
    for (const Point& x : {make_point(0.0), make_point(0.5), make_point(0.97)}) {
      for (int i = 0; i < 2000; ++i) {
        const Point y = sample_exit(x, make_point(0.2), 1.3, dim, 0.4, rng);
        REQUIRE(distance(y, make_point(0.2)) > 1.3);
      }
    }
  }
  // Isotropy from the centre: chi-square over 16 sectors (15 dof, 0.1% level).
  const auto exits = mc_exit_samples(ball_config(2, 0.6, 100000), Point{}, 100000);
  std::vector<double> counts(16, 0.0);
  for (const auto& y : exits) {
    const double angle = std::atan2(y[1], y[0]) + std::numbers::pi;
    counts[std::min(15, static_cast<int>(angle / (2.0 * std::numbers::pi) * 16.0))] += 1.0;
  }
  const double expected = exits.size() / 16.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 37.70);

  // Mean payoff against quadrature, centred, rejection and chained branches.
  for (double x : {0.0, 0.4, 0.95}) {
    const double ref = oracle::poisson_integral_1d([](double y) { return std::exp(-y * y); }, x, 1.0, 0.5);
    const McEstimate e = mc_solve_dirichlet(gaussian_field(1), ball_config(1, 0.5, 100000), make_point(x));
    CHECK(std::abs(e.estimate - ref) < 3.0 * e.std_error);
  }
}

TEST_CASE("Dirichlet problem by Monte Carlo") {
  const McEstimate c = mc_solve_dirichlet(constant_field(1, 0.3), ball_config(1, 0.4, 5000), make_point(0.2));
  CHECK(c.estimate == 0.3);
  CHECK(c.std_error == 0.0);
  CHECK(c.n_effective == 5000);

  struct Case {
    int dim;
    double s;
  };
  for (const Case k : {Case{1, 0.5}, Case{2, 0.3}}) {
    BallProblem p;
    p.n = k.dim;
    p.s = k.s;
    p.g = gaussian_field(k.dim);
    for (const Point& x : {make_point(0.0), make_point(0.3, -0.2)}) {
      Point xx = x;
      if (k.dim == 1) xx[1] = 0.0;
      const McEstimate e = mc_solve_dirichlet(*p.g, ball_config(k.dim, k.s, 100000), xx);
      const double q = solve_homogeneous(p, xx);
      CHECK(std::abs(e.estimate - q) < 3.0 * e.std_error);
    }
  }

  const McEstimate half = mc_solve_dirichlet(right_half_indicator(), ball_config(1, 0.5, 100000), make_point(0.0));
  CHECK(std::abs(half.estimate - 0.5) < 3.0 * half.std_error);

  // Nonnegative payoffs give nonnegative estimates.
  const McEstimate pos =
      mc_solve_dirichlet(transformed(bump_field(1), 4.0, make_point(-10.0)), ball_config(1, 0.3, 20000), make_point(0.1));
  CHECK(pos.estimate >= 0.0);
}

TEST_CASE("reproducibility across thread counts") {
  const McConfig c = ball_config(2, 0.35, 20000, 99);
  set_thread_cap(1);
  const McEstimate a = mc_solve_dirichlet(gaussian_field(2), c, make_point(0.1, 0.2));
  set_thread_cap(3);
  const McEstimate b = mc_solve_dirichlet(gaussian_field(2), c, make_point(0.1, 0.2));
  set_thread_cap(0);
  const McEstimate d = mc_solve_dirichlet(gaussian_field(2), c, make_point(0.1, 0.2));
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  CHECK(a.estimate == d.estimate);
  McConfig other = c;
  other.seed = 100;
  CHECK(mc_solve_dirichlet(gaussian_field(2), other, make_point(0.1, 0.2)).estimate != a.estimate);
}

TEST_CASE("general domains: walk outside balls") {
  // (-1, 0.5) union (0, 1) is the interval (-1, 1).
  McConfig u = ball_config(1, 0.5, 100000, 5);
  u.domain = McDomain::union_of({Primitive::box(make_point(-1.0), make_point(0.5)),
                                  Primitive::box(make_point(0.0), make_point(1.0))});
  const McEstimate walk = mc_solve_dirichlet(gaussian_field(1), u, make_point(0.1));
  const McEstimate ball = mc_solve_dirichlet(gaussian_field(1), ball_config(1, 0.5, 100000, 6), make_point(0.1));
  const double se = std::hypot(walk.std_error, ball.std_error);
  CHECK(std::abs(walk.estimate - ball.estimate) < 3.0 * se);
  CHECK(walk.truncated_walks == 0);

  McConfig tight = u;
  tight.max_jumps = 1;
  tight.N = 2000;
  const McEstimate t = mc_solve_dirichlet(gaussian_field(1), tight, make_point(0.1));
  CHECK(t.truncated_walks > 0);
  CHECK(t.truncated_walks + t.n_effective == 2000);

  McConfig box = u;
  box.domain = McDomain::union_of({Primitive::box(make_point(-1.0), make_point(1.0))});
  CHECK_THROWS_AS(mc_solve_dirichlet(gaussian_field(1), box, make_point(1.0 - 1e-10)), GeometryError);
  CHECK_THROWS_AS(mc_solve_dirichlet(gaussian_field(1), box, make_point(2.0)), DomainError);
  McConfig bad = u;
  bad.N = 0;
  CHECK_THROWS_AS(bad.validate(), UsageError);
}

TEST_CASE("exit law grows with the ball") {
  // Exits scale with the radius, so larger balls push the law outward.
  double previous = 0.0;
  double first_ratio = 0.0;
  for (double r : {0.5, 1.0, 2.0}) {
    McConfig c = ball_config(1, 0.4, 20000, 17);
    c.domain = McDomain::single_ball(Point{}, r);
    std::vector<double> radii;
    for (const auto& y : mc_exit_samples(c, Point{}, 20000)) radii.push_back(norm(y));
    const double m = median(radii);
    CHECK(m > previous);
    if (first_ratio == 0.0) first_ratio = m / r;
    CHECK(std::abs(m / r - first_ratio) < 0.03 * first_ratio);
    previous = m;
  }
}

TEST_CASE("generator of the stable process") {
  McConfig c = ball_config(1, 0.5, 100000, 3);
  const std::vector<double> ts{0.0125, 0.025, 0.05};
  for (const auto& g : generator_check(constant_field(1, 2.0), make_point(0.3), ts, c)) {
    CHECK(g.estimate == 0.0);
    CHECK(g.std_error == 0.0);
  }
  const auto samples = generator_check(gaussian_field(1), make_point(0.0), ts, c);
  const Extrapolation ex = extrapolate_to_zero(samples);
  const double pw = frac_lap_point(gaussian_field(1), make_point(0.0), 0.5).value;
  CHECK(std::abs(ex.value - pw) <= std::max(3.0 * ex.std_error, 0.05 * pw));

  // Homogeneity: the estimator for u(2 .) at x matches 2^{2s} times the
  // estimator for u at 2x.
  for (double s : {0.35, 0.6}) {
    McConfig cs = ball_config(1, s, 100000, 8);
    const double x = 0.2;
    const auto a = extrapolate_to_zero(generator_check(transformed(gaussian_field(1), 2.0), make_point(x), ts, cs));
    const auto b = extrapolate_to_zero(generator_check(gaussian_field(1), make_point(2.0 * x), ts, cs));
    const double factor = std::pow(2.0, 2.0 * s);
    CHECK(std::abs(a.value - factor * b.value) < 3.0 * std::hypot(a.std_error, factor * b.std_error));
  }

  CHECK_THROWS_AS(generator_check(gaussian_field(1), make_point(0.0), {0.0}, c), DomainError);
  CHECK_THROWS_AS(generator_check(xplus_field(0.5), make_point(1.0), ts, c), PreconditionError);

  const std::vector<GeneratorSample> line{{0.1, 1.2, 0.01}, {0.2, 1.4, 0.01}, {0.4, 1.8, 0.01}};
  CHECK(extrapolate_to_zero(line).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stable samples in several dimensions") {
  // P(|S_1| > 1) for the symmetric alpha-stable law with unit scale.
  // For alpha = 1 (Cauchy) it is exactly 1/2.
  Philox rng(21, 0);
  int beyond = 0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) beyond += std::abs(sample_stable(1, 0.5, rng)[0]) > 1.0;
  CHECK(std::abs(beyond / double(count) - 0.5) < 0.005);
  // Isotropic construction: each coordinate of the 2D Cauchy-type vector
  // is a 1D symmetric stable variable with the same law.
  beyond = 0;
  for (int i = 0; i < count; ++i) beyond += std::abs(sample_stable(2, 0.5, rng)[1]) > 1.0;
  CHECK(std::abs(beyond / double(count) - 0.5) < 0.005);
}
