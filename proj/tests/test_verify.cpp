#include <cmath>

#include "doctest.h"
#include "fraclap/errors.hpp"
#include "fraclap/verify.hpp"

using namespace fraclap;

namespace {

BallProblem problem_1d(double s, ScalarField g, std::vector<double> radii = {}) {
  BallProblem p;
  p.n = 1;
  p.s = s;
  p.g = std::move(g);
  p.g_radii = std::move(radii);
  return p;
}

ScalarField bump_on(double lo, double hi) {
  const double lambda = 4.0 / (hi - lo);
  return transformed(bump_field(1), lambda, make_point(-lambda * 0.5 * (lo + hi)));
}

}  // namespace

TEST_CASE("sample point layouts") {
  CHECK(ball_sample_points(1, 2.0).size() == 19);
  CHECK(ball_sample_points(1, 2.0).front()[0] == doctest::Approx(-1.8));
  CHECK(ball_sample_points(2, 1.0, 17).size() == 17);
  for (const auto& p : ball_sample_points(3, 1.0, 25)) CHECK(norm(p) < 1.0);
  CHECK_THROWS_AS(ball_sample_points(1, 1.0, 0), UsageError);
}

TEST_CASE("maximum principle check") {
  const auto pts = ball_sample_points(1, 1.0);
  const Report bump = check_max_principle(problem_1d(0.5, bump_on(1.5, 2.5), {1.5, 2.5}), pts);
  CHECK(bump.verdict == Verdict::Pass);
  CHECK(bump.value("u_min") > 0.0);
  CHECK(bump.value("strictly_positive") == 1.0);

  const Report zero = check_max_principle(problem_1d(0.5, constant_field(1, 0.0)), pts);
  CHECK(zero.verdict == Verdict::Pass);
  CHECK(zero.value("u_max_abs") <= 1e-10);

  ScalarField sign = combine(1.0, bump_on(1.5, 2.5), -1.0, bump_on(-2.5, -1.5));
  const Report skipped = check_max_principle(problem_1d(0.5, sign, {1.5, 2.5}), pts);
  CHECK(skipped.verdict == Verdict::Reported);
  CHECK(skipped.passed());
  CHECK(skipped.notes.find("precondition") != std::string::npos);

  BallProblem none;
  CHECK_THROWS_AS(check_max_principle(none, pts), UsageError);
}

TEST_CASE("comparison principle check") {
  const auto pts = ball_sample_points(1, 1.0);
  const BallProblem lo = problem_1d(0.3, bump_on(1.5, 2.5), {1.5, 2.5});
  const BallProblem hi = problem_1d(0.3, combine(1.0, bump_on(1.5, 2.5), 1.0, gaussian_field(1)), {1.5, 2.5});
  const Report ordered = check_comparison_principle(lo, hi, pts);
  CHECK(ordered.verdict == Verdict::Pass);
  CHECK(ordered.value("solution_gap_min") > 0.0);
  CHECK(check_comparison_principle(hi, lo, pts).verdict == Verdict::Reported);
  BallProblem other = hi;
  other.s = 0.6;
  CHECK_THROWS_AS(check_comparison_principle(lo, other, pts), UsageError);
}

TEST_CASE("Harnack checks") {
  HarnackCase k;
  k.n = 1;
  k.s = 0.4;
  k.x0 = make_point(0.3);
  k.r = 1.0;
  k.g = bump_on(2.0, 3.0);
  k.g_radii = {1.7, 2.7};
  HarnackOptions opt;
  opt.epsilons = {};
  const Report a = check_harnack({k}, opt);
  CHECK(a.verdict == Verdict::Pass);
  CHECK(a.value("case0.ratio") > 1.0);
  CHECK(std::isfinite(a.value("case0.ratio")));
  CHECK(a.value("case0.relative_change") <= 0.1);

  HarnackCase bad = k;
  bad.g = combine(1.0, bump_on(2.0, 3.0), -1.0, bump_on(-3.0, -2.0));
  bad.g_radii = {1.7, 2.3, 2.7, 3.3};
  CHECK_THROWS_AS(check_harnack({bad}, opt), PreconditionError);

  // Failure branch with an unreachable epsilon is inconclusive.
  HarnackOptions tiny;
  tiny.epsilons = {1e-12, 1e-13};
  const Report b = check_harnack({}, tiny);
  CHECK(b.verdict == Verdict::Reported);
}

TEST_CASE("regularity estimates") {
  ScalarField g = gaussian_field(1);
  g.name = "gaussian";
  RegularityOptions opt;
  opt.radii = {1.0, 2.0};
  const Report r = check_regularity_estimates({g}, 1.0, 0.3, opt);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.value("gaussian.relative_change") < 0.2);
  CHECK(r.value("gaussian.scaling_change") == 0.0);
  CHECK(r.value("C1_spread") < 2.0);
  CHECK_FALSE(r.threshold == std::nullopt);
  CHECK_THROWS_AS(check_regularity_estimates({g}, 0.5, 0.3), PreconditionError);
  CHECK_THROWS_AS(check_regularity_estimates({g}, 1.2, 0.3), PreconditionError);
}

TEST_CASE("default suites pass and are reproducible") {
  const auto first = run_suite("max");
  REQUIRE(first.size() == 5);
  for (const auto& r : first) CHECK(r.verdict == Verdict::Pass);
  CHECK(to_json(run_suite("max")).dump() == to_json(first).dump());

  const auto harnack = run_suite("harnack");
  REQUIRE(harnack.size() == 1);
  CHECK(harnack[0].verdict == Verdict::Pass);
  CHECK(harnack[0].value("failure.growth") >= 5.0);

  const auto reg = run_suite("regularity");
  REQUIRE(reg.size() == 1);
  CHECK(reg[0].verdict == Verdict::Pass);

  CHECK_THROWS_AS(run_suite("liouville"), UsageError);
}
