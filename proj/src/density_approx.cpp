#include "fraclap/density_approx.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "fraclap/ball_solver.hpp"
#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

constexpr double kDiffStep = 1e-5;

std::vector<double> line(double half_width, int count) {
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) xs[i] = -half_width + 2.0 * half_width * i / (count - 1);
  return xs;
}

double derivative(const ScalarField& f, double x) {
  return (f(make_point(x + kDiffStep)) - f(make_point(x - kDiffStep))) / (2.0 * kDiffStep);
}

ScalarField bump_datum(double center, double width) {
  const double lambda = 4.0 / width;
  ScalarField g = transformed(bump_field(1), lambda, make_point(-lambda * center));
  g.name = "bump";
  return g;
}

struct Errors {
  double sup = 0.0;
  double slope = 0.0;
};

Errors residual(const ScalarField& target, const HarmonicBasis& basis, const std::vector<double>& coef,
                const std::vector<double>& xs, bool with_slope) {
  Errors e;
  for (double x : xs) {
    const Point p = make_point(x);
    double fit = 0.0;
    double fit_slope = 0.0;
    for (std::size_t k = 0; k < coef.size(); ++k) {
      fit += coef[k] * basis.elements[k](p);
      if (with_slope) fit_slope += coef[k] * derivative(basis.elements[k], x);
    }
    e.sup = std::max(e.sup, std::abs(target(p) - fit));
    if (with_slope) e.slope = std::max(e.slope, std::abs(derivative(target, x) - fit_slope));
  }
  return e;
}

double in_norm(const Errors& e, ApproxNorm norm) {
  return norm == ApproxNorm::C0 ? e.sup : e.sup + e.slope;
}

}  // namespace

HarmonicBasis HarmonicBasis::prefix(std::size_t m) const {
  if (m == 0 || m > size()) throw UsageError("basis prefix length out of range");
  HarmonicBasis out = *this;
  out.centers.resize(m);
  out.elements.resize(m);
  return out;
}

double default_bump_width(double R, std::size_t m) {
  const double k = static_cast<double>((m + 1) / 2);
  return (R - 1.0) / (k + 1.0);
}

HarmonicBasis build_basis(double R, std::size_t m, double width, double s, int n, int nodes,
                          const QuadratureSpec& spec) {
  if (n != 1) throw UnsupportedError("harmonic bases are built in one dimension only");
  if (m == 0) throw UsageError("a harmonic basis needs at least one element");
  if (width <= 0.0) width = default_bump_width(R, m);
  if (!(width > 0.0) || !(R > 1.0 + width)) {
    throw UsageError("bump supports must fit inside B_R outside B_1 (need R > 1 + width)");
  }
  const std::size_t k = (m + 1) / 2;
  const double spacing = (R - 1.0 - width) / static_cast<double>(k + 1);

  HarmonicBasis basis;
  basis.R = R;
  basis.s = s;
  basis.width = width;
  for (std::size_t i = 0; basis.centers.size() < m; ++i) {
    const double c = 1.0 + 0.5 * width + static_cast<double>(i + 1) * spacing;
    basis.centers.push_back(c);
    if (basis.centers.size() < m) basis.centers.push_back(-c);
  }
  for (double c : basis.centers) {
    BallProblem prob;
    prob.n = 1;
    prob.r = 1.0;
    prob.s = s;
    prob.g = bump_datum(c, width);
    prob.g_radii = {std::abs(c) - 0.5 * width, std::abs(c) + 0.5 * width};
    ScalarField element = tabulated_ball_solution(prob, nodes, spec);
    element.name = "harmonic_bump";
    basis.elements.push_back(std::move(element));
  }
  return basis;
}

ApproxResult approximate(const ScalarField& target, const HarmonicBasis& basis, const ApproxOptions& options) {
  if (basis.size() == 0) throw UsageError("empty harmonic basis");
  if (options.samples < 3) throw UsageError("approximation needs at least three samples");
  if (!(options.fit_radius > 0.0 && options.fit_radius < 1.0) ||
      !(options.report_radius > 0.0 && options.report_radius <= options.fit_radius)) {
    throw UsageError("need 0 < report_radius <= fit_radius < 1");
  }
  if (!(options.ridge >= 0.0)) throw UsageError("ridge weight must be nonnegative");

  const bool c1 = options.norm == ApproxNorm::C1;
  const std::vector<double> xs = line(options.fit_radius, options.samples);
  const std::size_t rows = xs.size() * (c1 ? 2 : 1);
  const std::size_t cols = basis.size();

  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd b(rows);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Point p = make_point(xs[i]);
    b(i) = target(p);
    if (c1) b(xs.size() + i) = derivative(target, xs[i]);
    for (std::size_t k = 0; k < cols; ++k) {
      A(i, k) = basis.elements[k](p);
      if (c1) A(xs.size() + i, k) = derivative(basis.elements[k], xs[i]);
    }
  }
  if (!b.allFinite()) throw PreconditionError("approximation target is not finite on the sample grid");
  if (!A.allFinite()) throw ConditioningError("basis values are not finite on the sample grid");

  Eigen::VectorXd scale = A.colwise().norm().transpose();
  if ((scale.array() <= 0.0).any()) throw ConditioningError("a basis element vanishes on the sample grid");
  A = A * scale.cwiseInverse().asDiagonal();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double smax = sigma(0);
  const double smin = sigma(sigma.size() - 1);
  if (!(smax > 0.0)) throw ConditioningError("design matrix is zero");
  const double lambda = options.ridge * smax * smax;
  const Eigen::VectorXd filter = sigma.array() / (sigma.array().square() + lambda);
  const Eigen::VectorXd y = svd.matrixV() * (filter.asDiagonal() * (svd.matrixU().transpose() * b));
  const Eigen::VectorXd x = y.cwiseQuotient(scale);

  ApproxResult out;
  out.norm = options.norm;
  out.coefficients.assign(x.data(), x.data() + x.size());
  out.condition_estimate = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  out.achieved_error = in_norm(residual(target, basis, out.coefficients,
                                        line(options.report_radius, options.samples), c1),
                               options.norm);
  out.validation_error = in_norm(residual(target, basis, out.coefficients,
                                          line(options.report_radius, 4 * (options.samples - 1) + 1), c1),
                                 options.norm);
  out.fit_error = residual(target, basis, out.coefficients, xs, false).sup;
  return out;
}

ScalarField combination(const HarmonicBasis& basis, const std::vector<double>& coefficients) {
  if (coefficients.size() != basis.size()) throw UsageError("coefficient count does not match the basis");
  auto elements = std::make_shared<const std::vector<ScalarField>>(basis.elements);
  double bound = 0.0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    bound += std::abs(coefficients[k]) * basis.elements[k].decay.bound;
  }
  ScalarField out;
  out.dim = 1;
  out.name = "harmonic_combination";
  out.eval = [elements, coefficients](const Point& p) {
    double v = 0.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) v += coefficients[k] * (*elements)[k](p);
    return v;
  };
  out.smoothness.global = Regularity::holder(std::min(basis.s, 1.0));
  out.smoothness.singular_points = {make_point(-1.0), make_point(1.0)};
  out.decay = Decay::compact(basis.R, bound);
  return out;
}

Report harnack_failure_demo(double epsilon, const HarmonicBasis& basis, int samples) {
  if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
  ApproxOptions opt;
  opt.samples = samples;
  const ScalarField w = windowed_quadratic_field(1);
  // v_epsilon comes from the shortest prefix of mirror pairs that reaches
  // epsilon, falling back to the whole basis.
  HarmonicBasis used = basis;
  ApproxResult fit;
  for (std::size_t m = std::min<std::size_t>(2, basis.size());; m = std::min(basis.size(), m + 2)) {
    used = basis.prefix(m);
    fit = approximate(w, used, opt);
    if (fit.fit_error <= epsilon || m == basis.size()) break;
  }
  const ScalarField v = combination(used, fit.coefficients);

  // Minimum of v over the fit grid, which contains B_{1/2}.
  const std::vector<double> xs = line(opt.fit_radius, samples);
  std::vector<double> vs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) vs[i] = v(make_point(xs[i]));
  const auto lowest = std::min_element(vs.begin(), vs.end());
  const double v_min = *lowest;
  const double argmin = xs[static_cast<std::size_t>(lowest - vs.begin())];

  double u_inf = std::numeric_limits<double>::infinity();
  double u_sup = -std::numeric_limits<double>::infinity();
  double u_min_fit = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = vs[i] - v_min;
    u_min_fit = std::min(u_min_fit, u);
    if (std::abs(xs[i]) <= 0.5) {
      u_inf = std::min(u_inf, u);
      u_sup = std::max(u_sup, u);
    }
  }

  Report r;
  r.check_name = "harnack_failure_demo";
  r.inputs = {{"epsilon", epsilon}, {"s", basis.s}, {"m", basis.size()}, {"R", basis.R},
              {"width", basis.width}, {"samples", samples}};
  r.threshold = epsilon;
  r.add("m_used", static_cast<double>(used.size()));
  r.add("fit_error", fit.fit_error);
  r.add("v_at_0", v(make_point(0.0)));
  r.add("v_min", v_min);
  r.add("argmin", argmin);
  r.add("u_min_on_fit_grid", u_min_fit);
  r.add("inf_u_half_ball", u_inf);
  r.add("sup_u_half_ball", u_sup);
  r.add("ratio", u_sup / (u_inf + epsilon * epsilon));
  if (fit.fit_error > epsilon) {
    r.verdict = Verdict::Reported;
    r.notes = "fit error above epsilon; demo is not conclusive";
  } else {
    r.verdict = (std::abs(argmin) <= 0.25 && u_min_fit >= 0.0) ? Verdict::Pass : Verdict::Fail;
  }
  return r;
}

Report harnack_failure_demo(double epsilon, double s, const HarnackDemoOptions& options) {
  const HarmonicBasis basis = build_basis(options.R, options.m, 0.0, s);
  return harnack_failure_demo(epsilon, basis, options.samples);
}

}  // namespace fraclap
