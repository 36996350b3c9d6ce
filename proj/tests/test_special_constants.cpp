#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fraclap/errors.hpp"
#include "fraclap/special_constants.hpp"
#include "oracles.hpp"

using namespace fraclap;

TEST_CASE("gamma: classical values and defining integral") {
  CHECK(fraclap::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fraclap::gamma(0.5) == doctest::Approx(std::sqrt(oracle::kPi)).epsilon(1e-13));
  const double ref = oracle::gamma_integral(3.5);
  CHECK(std::abs(fraclap::gamma(3.5) - ref) / ref < 1e-12);
  CHECK(fraclap::gamma(3.5) == doctest::Approx(3.3233509704478426).epsilon(1e-13));
  for (double x : {0.1, 0.37, 1.25, 2.9, 7.3}) {
    const double r = oracle::gamma_integral(x);
    CHECK(std::abs(fraclap::gamma(x) - r) / r < 1e-11);
  }
}

TEST_CASE("gamma: domain errors") {
  CHECK_THROWS_AS(fraclap::gamma(0.0), DomainError);
  CHECK_THROWS_AS(fraclap::gamma(-1.5), DomainError);
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
}

TEST_CASE("gamma: recurrence and log-convexity on a grid") {
  for (int i = 1; i <= 200; ++i) {
    const double x = 0.05 * i;
    CHECK(std::abs(fraclap::gamma(x + 1.0) - x * fraclap::gamma(x)) / fraclap::gamma(x + 1.0) < 1e-12);
    const double h = 0.01;
    if (x > h) {
      const double second = log_gamma(x + h) - 2.0 * log_gamma(x) + log_gamma(x - h);
      CHECK(second > 0.0);
    }
  }
}

TEST_CASE("c_ns: closed form reciprocal of the cosine kernel integral") {
  CHECK(std::abs(c_ns(1, 0.5) - 1.0 / oracle::kPi) < 1e-12);
  CHECK(std::abs(oracle::cos_kernel_integral(1, 0.5) - oracle::kPi) < 1e-9);
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_real_distribution<double> order(0.05, 0.95);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = dim(rng);
    const double s = order(rng);
    const double prod = c_ns(n, s) * oracle::cos_kernel_integral(n, s);
    INFO("n=" << n << " s=" << s);
    CHECK(std::abs(prod - 1.0) < 1e-6);
  }
  CHECK_THROWS_AS(c_ns(1, 0.0), DomainError);
  CHECK_THROWS_AS(c_ns(1, 1.0), DomainError);
  CHECK_THROWS_AS(c_ns(0, 0.5), DomainError);
}

TEST_CASE("c_ns: measured endpoint limits of c / (s (1 - s))") {
  for (int n = 1; n <= 3; ++n) {
    const double omega = oracle::sphere_measure(n);
    const double lim0 = 2.0 / omega;
    const double lim1 = 4.0 * n / omega;
    double prev0 = 1e300;
    double prev1 = 1e300;
    for (double eps : {0.1, 0.01, 0.001}) {
      const double r0 = c_ns(n, eps) / (eps * (1.0 - eps));
      const double r1 = c_ns(n, 1.0 - eps) / (eps * (1.0 - eps));
      CHECK(std::abs(r0 - lim0) < prev0);
      CHECK(std::abs(r1 - lim1) < prev1);
      prev0 = std::abs(r0 - lim0);
      prev1 = std::abs(r1 - lim1);
    }
    CHECK(prev0 / lim0 < 5e-3);
    CHECK(prev1 / lim1 < 5e-3);
  }
  // Small-s limit also against direct quadrature of the kernel integral.
  const double s = 0.01;
  const double direct = 1.0 / (oracle::cos_kernel_integral(1, s) * s * (1.0 - s));
  CHECK(std::abs(direct - 1.0) < 2e-2);
}

TEST_CASE("constant_set: closed forms and positivity") {
  const auto k = constant_set(1, 0.5);
  CHECK(std::abs(k.a - 1.0 / oracle::kPi) < 1e-14);
  CHECK(k.a == k.C_pois);
  CHECK(!k.b.has_value());
  CHECK(constant_set(2, 0.75).b.has_value());
  CHECK(!constant_set(1, 0.75).b.has_value());
  CHECK(std::abs(*constant_set(2, 0.5).b - 1.0 / (2.0 * oracle::kPi)) < 1e-14);
  for (int n = 1; n <= 3; ++n) {
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const auto c = constant_set(n, s);
      for (double v : {c.c, c.a, c.C_pois, c.kappa, c.B_half, c.omega}) {
        CHECK(v > 0.0);
        CHECK(std::isfinite(v));
      }
      CHECK(std::abs(c.omega - oracle::sphere_measure(n)) < 1e-13 * c.omega);
      if (c.b) CHECK(*c.b > 0.0);
      // Half-space kernel B / (|z|^2 + 1)^{(n+2s)/2} integrates to one.
      boost::math::quadrature::exp_sinh<double> es;
      const double e = 0.5 * (n + 2.0 * s);
      const double mass =
          c.B_half * oracle::sphere_measure(n) *
          es.integrate([n, e](double r) { return std::pow(r, n - 1) * std::pow(1.0 + r * r, -e); },
                       1e-14);
      CHECK(std::abs(mass - 1.0) < 1e-10);
    }
  }
}
