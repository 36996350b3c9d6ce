#include <cmath>
#include <vector>

#include "doctest.h"
#include "fraclap/errors.hpp"
#include "fraclap/field_model.hpp"
#include "oracles.hpp"

using namespace fraclap;

TEST_CASE("catalog contains the required entries and they pass audits") {
  const auto names = catalog_names();
  CHECK(names.size() >= 6);
  std::uint64_t seed = 7;
  for (const auto& name : names) {
    for (int dim = 1; dim <= 3; ++dim) {
      if (name == "xplus" && dim > 1) {
        CHECK_THROWS_AS(catalog_field(name, dim), UsageError);
        continue;
      }
      const auto f = catalog_field(name, dim);
      const auto audit = audit_field(f, seed++, 64);
      INFO(name << " dim=" << dim << " grad err " << audit.max_gradient_error);
      CHECK(audit.finite);
      CHECK(audit.exterior_zero);
      CHECK(audit.gradient_consistent);
    }
  }
  CHECK_THROWS_AS(catalog_field("nope", 1), UsageError);
}

TEST_CASE("bump is 1 on B_1 and 0 outside B_2") {
  const auto b = bump_field(2);
  CHECK(b(make_point(0.3, 0.6)) == 1.0);
  CHECK(b(make_point(2.0, 0.1)) == 0.0);
  const double mid = b(make_point(1.5));
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
}

TEST_CASE("check_L1s: closed-form and divergent cases") {
  const auto one = check_L1s(constant_field(1, 1.0), 0.5);
  CHECK(one.finite);
  CHECK(std::abs(one.value - oracle::kPi) < 1e-8);

  for (int n = 1; n <= 3; ++n) {
    ScalarField grow;
    grow.dim = n;
    const double s = 0.4;
    grow.eval = [s](const Point& x) { return std::pow(norm(x), 2.0 * s); };
    grow.decay = Decay::power(-2.0 * s, 1.0);
    CHECK(!check_L1s(grow, s).finite);
  }
  const auto g = check_L1s(gaussian_field(2), 0.3);
  CHECK(g.finite);
  // Radial reference: 2 pi int r e^{-r^2} / (1 + r^{2.6}) dr.
  boost::math::quadrature::exp_sinh<double> es;
  const double ref = 2.0 * oracle::kPi *
                     es.integrate([](double r) { return r * std::exp(-r * r) / (1.0 + std::pow(r, 2.6)); });
  CHECK(std::abs(g.value - ref) < 1e-8);
  const auto x = check_L1s(xplus_field(0.5), 0.5);
  CHECK(x.finite);
}

TEST_CASE("check_L1s is monotone under pointwise domination") {
  const auto small = check_L1s(bump_field(1), 0.3);
  const auto big = check_L1s(constant_field(1, 1.0), 0.3);
  const auto scaled = check_L1s(transformed(bump_field(1), 1.0, Point{}, 0.5), 0.3);
  CHECK(small.value <= big.value);
  CHECK(scaled.value <= small.value);
  CHECK(std::abs(scaled.value - 0.5 * small.value) < 1e-9);
}

TEST_CASE("holder seminorm examples") {
  Box unit{make_point(0.0), make_point(1.0)};
  CHECK(holder_seminorm(constant_field(1, 3.0), 0.5, unit) == 0.0);
  ScalarField id;
  id.dim = 1;
  id.eval = [](const Point& x) { return x[0]; };
  CHECK(holder_seminorm(id, 1.0, unit) == doctest::Approx(1.0).epsilon(1e-12));

  Box sym{make_point(-1.0), make_point(1.0)};
  const auto xp = xplus_field(0.5);
  const double semi = holder_seminorm(xp, 0.5, sym, 1e-3, 401);
  // Brute-force reference on a finer pair grid.
  double ref = 0.0;
  const int m = 2001;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double a = -1.0 + 2.0 * i / (m - 1);
      const double b = -1.0 + 2.0 * j / (m - 1);
      if (b - a < 1e-3) continue;
      const double fa = a > 0 ? std::sqrt(a) : 0.0;
      const double fb = b > 0 ? std::sqrt(b) : 0.0;
      ref = std::max(ref, std::abs(fa - fb) / std::sqrt(b - a));
    }
  }
  CHECK(std::abs(semi - ref) < 1e-2);
  CHECK(std::abs(semi - 1.0) < 1e-2);
  CHECK(semi <= ref + 1e-12);

  const double scaled = holder_seminorm(transformed(xp, 1.0, Point{}, -3.0), 0.5, sym, 1e-3, 401);
  CHECK(std::abs(scaled - 3.0 * semi) <= 1e-14 * scaled);

  CHECK_THROWS_AS(holder_seminorm(xp, 0.0, sym), UsageError);
  CHECK_THROWS_AS(holder_seminorm(xp, 1.5, sym), UsageError);
  CHECK_THROWS_AS(holder_seminorm(xp, 0.5, sym, 1e-3, 1), UsageError);
}

TEST_CASE("seminorm estimator is monotone in the sample") {
  const auto g = gaussian_field(1);
  const auto pts = grid_points(Box{make_point(-2.0), make_point(2.0)}, 1, 101);
  std::vector<double> vals;
  for (const auto& p : pts) vals.push_back(g(p));
  std::vector<Point> sub(pts.begin(), pts.begin() + 50);
  std::vector<double> subv(vals.begin(), vals.begin() + 50);
  CHECK(holder_seminorm_samples(sub, subv, 0.7, 1e-3) <= holder_seminorm_samples(pts, vals, 0.7, 1e-3));
}

TEST_CASE("sampled fields, combinations and transforms keep metadata coherent") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 40; ++i) {
    xs.push_back(-1.0 + 0.05 * i);
    ys.push_back(1.0 - xs.back() * xs.back());
  }
  const auto f = sampled_field_1d(xs, ys);
  CHECK(f(make_point(0.5)) == doctest::Approx(0.75).epsilon(1e-4));
  CHECK(f(make_point(1.2)) == 0.0);
  CHECK(f.decay.kind == DecayKind::CompactSupport);
  CHECK(f.smoothness.singular_points.size() == 2);

  const auto c = combine(2.0, gaussian_field(1), -1.0, bump_field(1));
  CHECK(c(make_point(0.3)) == doctest::Approx(2.0 * std::exp(-0.09) - 1.0));
  CHECK(c.decay.kind == DecayKind::PowerDecay);
  CHECK(c.decay.exponent == 8.0);
  const auto audit = audit_field(c, 3);
  CHECK(audit.gradient_consistent);

  const auto t = transformed(xplus_field(0.5), 2.0, make_point(1.0));
  CHECK(t.smoothness.singular_points[0][0] == doctest::Approx(-0.5));
  CHECK(t(make_point(1.5)) == doctest::Approx(2.0));
  const auto tb = transformed(bump_field(1), 0.5);
  CHECK(tb.decay.radius == doctest::Approx(4.0));
  CHECK(audit_field(tb, 11).exterior_zero);
}
