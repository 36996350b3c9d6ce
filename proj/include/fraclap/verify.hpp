#pragma once

#include <string>
#include <vector>

#include "fraclap/ball_solver.hpp"
#include "fraclap/report.hpp"

namespace fraclap {

/// Interior sample points of B_r: an even line in one dimension, rings of
/// eight directions (plus the centre) in two and three dimensions.
std::vector<Point> ball_sample_points(int n, double r, int count = 19);

/// Samples of the exterior datum on rays through the origin, from r out to
/// the datum's support radius (or 4r when the support is unbounded).
std::vector<double> exterior_samples(const BallProblem& prob, int radial = 200);

/// Nonnegative exterior data give u >= -1e-8 at every point. Zero data must
/// give |u| <= 1e-10, and nonzero data are flagged for strict positivity.
/// Sign-changing data skip the check with verdict "reported".
Report check_max_principle(const BallProblem& prob, const std::vector<Point>& points,
                           const QuadratureSpec& spec = {});

/// Ordered data (checked on exterior samples) give ordered solutions up to
/// -1e-8. Unordered data give "reported".
Report check_comparison_principle(const BallProblem& lower, const BallProblem& upper,
                                  const std::vector<Point>& points, const QuadratureSpec& spec = {});

/// u is s-harmonic in B_r(x0) with exterior datum g >= 0 (absolute
/// coordinates); g_radii are measured from x0.
struct HarnackCase {
  int n = 1;
  double s = 0.5;
  Point x0{};
  double r = 1.0;
  ScalarField g;
  std::vector<double> g_radii;
};

struct HarnackOptions {
  int samples = 21;                 ///< points per axis on B_{r/2}(x0)
  double stability = 0.10;          ///< allowed relative change under refinement
  std::vector<double> epsilons{0.05, 0.01};
  double demo_s = 0.5;
  double growth = 5.0;              ///< required ratio growth from first to last epsilon
};

/// Sup/inf ratios over B_{r/2}(x0) for every case, recomputed with a doubled
/// grid and tightened quadrature; each must move by at most `stability`.
/// The constant itself is only reported. The failure branch runs
/// harnack_failure_demo for each epsilon and requires the ratio to grow by
/// `growth`; an inconclusive demo turns the verdict into "reported" unless
/// something else failed.
Report check_harnack(const std::vector<HarnackCase>& cases, const HarnackOptions& options = {});

struct RegularityOptions {
  double half_width = 2.0;          ///< seminorms are sampled on [-half_width, half_width]
  int coarse = 41;                  ///< grid points; the fine grid has 2 * coarse - 1
  double h_min = 1e-3;
  double stability = 0.20;
  std::vector<double> radii{1.0, 2.0, 4.0};
  double derivative_spread = 2.0;   ///< allowed max / min of the scaled derivative bounds
};

/// Part 1 measures [(-Delta)^s u]_{C^{alpha-2s}} / [u]_{C^alpha} for each
/// one-dimensional field on two grids (stable within `stability`) and
/// checks that 2u gives the same ratio exactly. Part 2 solves the ball
/// problem with a bump datum on (1.25 r, 2.25 r) for each radius and
/// reports max |u'| r / sup|g| and max |u''| r^2 / sup|g| over B_{r/2},
/// whose spread over the radii must stay within `derivative_spread`.
/// PreconditionError unless 2s < alpha <= 1.
Report check_regularity_estimates(const std::vector<ScalarField>& fields, double alpha, double s,
                                  const RegularityOptions& options = {});

/// Default families: "max" (maximum and comparison principles), "harnack",
/// "regularity" or "all". UsageError for other names.
std::vector<Report> run_suite(const std::string& suite);

}  // namespace fraclap
