#include <chrono>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fraclap/errors.hpp"
#include "fraclap/pointwise_op.hpp"
#include "fraclap/special_constants.hpp"
#include "oracles.hpp"

using namespace fraclap;

TEST_CASE("constant field is annihilated") {
  for (int n = 1; n <= 3; ++n) {
    for (double s : {0.1, 0.5, 0.9}) {
      const auto r = frac_lap_point(constant_field(n, 2.5), make_point(0.3, -0.2, 0.1), s);
      CHECK(r.converged());
      CHECK(std::abs(r.value) < 1e-10);
    }
  }
}

TEST_CASE("gaussian matches the Fourier representation") {
  for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double x : {0.0, 0.4, 1.3, 3.0}) {
      const auto r = frac_lap_point(gaussian_field(1), make_point(x), s);
      const double ref = oracle::gaussian_fraclap(1, s, x);
      INFO("s=" << s << " x=" << x << " value=" << r.value << " ref=" << ref);
      CHECK(r.converged());
      CHECK(std::abs(r.value - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
      CHECK(std::abs(r.value - ref) <= 10.0 * r.err_est + 1e-9);
    }
  }
  CHECK(std::abs(oracle::gaussian_fraclap_fourier_1d(0.3, 0.7) - oracle::gaussian_fraclap(1, 0.3, 0.7)) < 1e-12);
  for (int n = 2; n <= 3; ++n) {
    for (double s : {0.25, 0.75}) {
      const Point x = make_point(0.3, 0.5, n == 3 ? -0.2 : 0.0);
      const auto r = frac_lap_point(gaussian_field(n), x, s);
      const double ref = oracle::gaussian_fraclap(n, s, norm(x));
      INFO("n=" << n << " s=" << s);
      CHECK(std::abs(r.value - ref) < 1e-7 * std::abs(ref));
    }
  }
}

TEST_CASE("x_+^s is s-harmonic on the positive half-line") {
  for (double s : {0.3, 0.5, 0.7}) {
    for (double x : {0.25, 0.5, 1.0, 2.0}) {
      const auto r = frac_lap_point(xplus_field(s), make_point(x), s);
      INFO("s=" << s << " x=" << x << " value=" << r.value);
      CHECK(std::abs(r.value) <= 1e-3 * (1.0 + std::pow(x, s)));
    }
    for (double x : {-0.5, -2.0}) {
      const auto r = frac_lap_point(xplus_field(s), make_point(x), s);
      const double ref = -c_ns(1, s) * oracle::xplus_negative_profile(s) * std::pow(-x, -s);
      CHECK(std::abs(r.value - ref) < 1e-6 * std::abs(ref));
    }
  }
}

TEST_CASE("grid evaluation is pure and order independent") {
  const auto g = gaussian_field(1);
  CHECK(frac_lap_grid(g, {}, 0.5).empty());
  std::vector<Point> pts;
  for (int i = 0; i <= 10; ++i) pts.push_back(make_point(-2.0 + 0.4 * i));
  pts.push_back(pts[3]);
  const auto grid = frac_lap_grid(g, pts, 0.4);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto single = frac_lap_point(g, pts[i], 0.4);
    CHECK(single.value == grid[i].value);
    CHECK(single.err_est == grid[i].err_est);
  }
  CHECK(grid[3].value == grid.back().value);
}

TEST_CASE("pairing identity") {
  const auto g = gaussian_field(1);
  const auto shifted = gaussian_field(1, make_point(0.7));
  for (const auto* v : {&g, &shifted}) {
    const auto p = pairing_check(g, *v, 0.5);
    CHECK(std::abs(p.lhs - p.rhs) < 1e-3 * std::abs(p.lhs));
  }
  const auto z = pairing_check(g, constant_field(1, 0.0), 0.5);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
}

TEST_CASE("homogeneity, linearity and invariances on the gaussian") {
  const auto g = gaussian_field(1);
  const double s = 0.35;
  for (double lambda : {0.5, 2.0}) {
    const auto gl = transformed(g, lambda);
    for (double x : {0.0, 0.3, 1.1}) {
      const auto a = frac_lap_point(gl, make_point(x), s);
      const auto b = frac_lap_point(g, make_point(lambda * x), s);
      const double scale = std::pow(lambda, 2.0 * s);
      CHECK(std::abs(a.value - scale * b.value) <= a.err_est + scale * b.err_est + 1e-10);
    }
  }
  const auto b = bump_field(1);
  const auto combo = combine(2.0, g, -3.0, b);
  for (double x : {0.2, 1.5}) {
    const auto lhs = frac_lap_point(combo, make_point(x), s);
    const auto u1 = frac_lap_point(g, make_point(x), s);
    const auto u2 = frac_lap_point(b, make_point(x), s);
    CHECK(std::abs(lhs.value - (2.0 * u1.value - 3.0 * u2.value)) <=
          lhs.err_est + 2.0 * u1.err_est + 3.0 * u2.err_est + 1e-9);
  }
  // Translation and rotation in two dimensions.
  const Point c = make_point(0.6, -0.3);
  const auto moved = gaussian_field(2, c);
  const auto base = frac_lap_point(gaussian_field(2), make_point(0.4, 0.2), s);
  const auto trans = frac_lap_point(moved, make_point(0.4, 0.2) + c, s);
  CHECK(std::abs(base.value - trans.value) < 1e-8);
  const double a = 0.9;
  const Point rotated = make_point(std::cos(a) * 0.4 - std::sin(a) * 0.2, std::sin(a) * 0.4 + std::cos(a) * 0.2);
  const auto rot = frac_lap_point(gaussian_field(2), rotated, s);
  CHECK(std::abs(base.value - rot.value) < 1e-8);
}

TEST_CASE("endpoint limits of the order") {
  const auto g = gaussian_field(1);
  for (double x : {-1.0, -0.3, 0.0, 0.5, 1.2}) {
    const double u = std::exp(-x * x);
    const double minus_lap = (2.0 - 4.0 * x * x) * u;
    const auto lo = frac_lap_point(g, make_point(x), 0.001);
    const auto hi = frac_lap_point(g, make_point(x), 0.999);
    CHECK(std::abs(lo.value - u) <= 0.02 * std::abs(u));
    CHECK(std::abs(hi.value - minus_lap) <= 0.02 * std::max(std::abs(minus_lap), 0.05));
  }
}

TEST_CASE("far-field decay of the bump") {
  for (int n = 1; n <= 2; ++n) {
    const double s = 0.4;
    std::vector<double> cs;
    for (double r : {4.0, 8.0}) {
      const auto v = frac_lap_point(bump_field(n), make_point(r), s);
      CHECK(v.value < 0.0);
      cs.push_back(-v.value * std::pow(r, n + 2.0 * s));
    }
    CHECK(std::max(cs[0], cs[1]) / std::min(cs[0], cs[1]) <= 10.0);
  }
}

TEST_CASE("error contract") {
  const auto g = gaussian_field(1);
  CHECK_THROWS_AS(frac_lap_point(g, make_point(0.0), 0.0005), DomainError);
  CHECK_THROWS_AS(frac_lap_point(g, make_point(0.0), 0.9995), DomainError);
  ScalarField grow;
  grow.dim = 1;
  grow.eval = [](const Point& x) { return x[0] * x[0]; };
  grow.decay = Decay::power(-2.0, 1.0);
  CHECK_THROWS_AS(frac_lap_point(grow, make_point(0.0), 0.5), PreconditionError);
  CHECK_THROWS_AS(frac_lap_point(xplus_field(0.3), make_point(0.0), 0.3), PreconditionError);
  QuadratureSpec tight;
  tight.max_nodes = 200;
  tight.tol_abs = 1e-15;
  tight.tol_rel = 1e-15;
  const auto r = frac_lap_point(xplus_field(0.5), make_point(1.0), 0.5, tight);
  CHECK(!r.converged());
  CHECK(r.nodes_used <= 200);
  CHECK(std::isfinite(r.err_est));
}
