#include "fraclap/ball_solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "fraclap/errors.hpp"
#include "fraclap/interpolation.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/special_constants.hpp"

namespace fraclap {

namespace {

constexpr int kMaxLevel = 12;

struct Accumulated {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;

  void add(const quad::Result& r) {
    value += r.value;
    error += r.error;
    converged = converged && r.converged;
  }
};

// int_0^1 F(t, 1 - t) dt for integrands with algebraic singularities at
// both ends. Pieces touching t = 1 are integrated in u = 1 - t so that the
// distance to the singular endpoint is exact for every node.
Accumulated integrate_unit(const std::function<double(double, double)>& F,
                           std::vector<double> cuts, const quad::Tolerance& tol) {
  cuts.push_back(0.0);
  cuts.push_back(0.5);
  cuts.push_back(1.0);
  std::erase_if(cuts, [](double c) { return !(c >= 0.0 && c <= 1.0); });
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Accumulated out;
  const quad::Tolerance part{tol.abs / static_cast<double>(cuts.size()), tol.rel};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (b == 1.0) {
      out.add(quad::tanh_sinh([&](double u) { return F(1.0 - u, u); }, 0.0, 1.0 - a, part, kMaxLevel));
    } else {
      out.add(quad::tanh_sinh([&](double t) { return F(t, 1.0 - t); }, a, b, part, kMaxLevel));
    }
  }
  return out;
}

void check_converged(const Accumulated& acc, const char* what) {
  const bool acceptable = acc.converged || acc.error <= 1e-7 * std::max(1.0, std::abs(acc.value));
  if (!acceptable || !std::isfinite(acc.value)) {
    std::ostringstream msg;
    msg << what << ": quadrature did not converge (value " << acc.value << ", error estimate "
        << acc.error << ")";
    throw ConvergenceError(msg.str());
  }
}

// Positive root rho of |x + rho theta| = R (|x| < R, theta a unit vector).
double ray_exit(const Point& x, const Point& theta, double R) {
  const double b = dot(x, theta);
  return -b + std::sqrt(b * b + (R - norm(x)) * (R + norm(x)));
}

void require_inside(const Point& x, double r) {
  if (!(norm(x) < r)) {
    std::ostringstream msg;
    msg << "point with |x|=" << norm(x) << " is not inside the ball of radius " << r;
    throw DomainError(msg.str());
  }
}

double ball_constant(int n, double s) { return constant_set(n, s).a; }

bool sufficiently_smooth_inside(const ScalarField& f, double r, double s) {
  if (f.smoothness.global.order() > 2.0 * s) return true;
  for (const auto& q : f.smoothness.singular_points) {
    if (norm(q) < r) return false;
  }
  return f.smoothness.local.order() > 2.0 * s;
}

}  // namespace

void BallProblem::validate() const {
  require_order(n, s);
  if (!(r > 0.0)) throw UsageError("ball radius must be positive");
  if (!f && !g) throw UsageError("a ball problem needs a source f, an exterior datum g, or both");
  if (f && f->dim != n) throw UsageError("source dimension differs from the problem dimension");
  if (g && g->dim != n) throw UsageError("datum dimension differs from the problem dimension");
  if (g && g->decay.tail_exponent() + 2.0 * s <= 0.0) {
    throw PreconditionError("exterior datum is not in L^1_s");
  }
  if (f && !sufficiently_smooth_inside(*f, r, s)) {
    throw PreconditionError("interior source is not Hoelder of order above 2s inside the ball");
  }
}

KernelValue mean_kernel(const Point& y, double r, int n, double s) {
  require_order(n, s);
  const double ry = norm(y);
  if (ry <= r) return {0.0};
  const double a = ball_constant(n, s);
  return {a * std::pow(r, 2.0 * s) / (std::pow((ry - r) * (ry + r), s) * std::pow(ry, n))};
}

double s_mean_average(const ScalarField& field, const Point& x, double r, double s,
                      const QuadratureSpec& spec) {
  const int n = field.dim;
  require_order(n, s);
  if (!(r > 0.0)) throw UsageError("averaging radius must be positive");
  if (field.decay.tail_exponent() + 2.0 * s <= 0.0) {
    throw PreconditionError("field is not in L^1_s");
  }
  if (!field.smoothness.singular_points.empty() &&
      field.smoothness.smoothness_radius(x) < r * (1.0 - 1e-12)) {
    throw PreconditionError("averaging ball reaches a declared singular point");
  }
  const double a = ball_constant(n, s);
  const quad::Tolerance tol{0.1 * spec.tol_abs, 0.1 * spec.tol_rel};
  bool ok = true;
  double worst = 0.0;
  auto direction = [&](const Point& theta) {
    std::vector<double> cuts;
    if (n == 1) {
      for (const auto& q : field.smoothness.singular_points) {
        const double d = x[0] - q[0];
        if (d != 0.0) cuts.push_back(r * theta[0] / d);
      }
    }
    if (field.decay.kind == DecayKind::CompactSupport && norm(x) < field.decay.radius) {
      cuts.push_back(r / ray_exit(x, -1.0 * theta, field.decay.radius));
    }
    const Accumulated acc = integrate_unit(
        [&](double t, double omt) {
          if (t <= 0.0 || omt <= 0.0) return 0.0;
          const double w = std::pow(t, 2.0 * s - 1.0) * std::pow(omt * (1.0 + t), -s);
          return w * field(x - (r / t) * theta);
        },
        cuts, tol);
    ok = ok && acc.converged;
    worst = std::max(worst, acc.error);
    return acc.value;
  };
  const quad::Result total = quad::sphere(n, direction, spec.tolerance(), spec.max_nodes);
  Accumulated acc;
  acc.value = a * total.value;
  acc.error = a * (total.error + worst);
  acc.converged = ok && total.converged;
  check_converged(acc, "s_mean_average");
  return acc.value;
}

KernelValue poisson_kernel_ball(const Point& x, const Point& y, double r, int n, double s) {
  require_order(n, s);
  const double rx = norm(x);
  const double ry = norm(y);
  if (!(rx < r && r < ry)) {
    throw DomainError("Poisson kernel needs |x| < r < |y|");
  }
  const double c = ball_constant(n, s);
  const double ratio = ((r - rx) * (r + rx)) / ((ry - r) * (ry + r));
  return {c * std::pow(ratio, s) * std::pow(distance(y, x), -n)};
}

double solve_homogeneous(const BallProblem& prob, const Point& x, const QuadratureSpec& spec) {
  prob.validate();
  if (!prob.g) throw UsageError("solve_homogeneous needs an exterior datum g");
  require_inside(x, prob.r);
  const ScalarField& g = *prob.g;
  const int n = prob.n;
  const double s = prob.s;
  const double r = prob.r;
  const double rx = norm(x);
  const double pre = ball_constant(n, s) * std::pow((r - rx) * (r + rx), s) * std::pow(r, n - 2.0 * s);

  std::vector<double> cuts;
  for (double rho : prob.g_radii) {
    if (rho > r) cuts.push_back(r / rho);
  }
  for (const auto& q : g.smoothness.singular_points) {
    if (norm(q) > r) cuts.push_back(r / norm(q));
  }
  if (g.decay.kind == DecayKind::CompactSupport && g.decay.radius > r) {
    cuts.push_back(r / g.decay.radius);
  }
  const quad::Tolerance tol{0.1 * spec.tol_abs / pre, 0.1 * spec.tol_rel};
  bool ok = true;
  double worst = 0.0;
  auto direction = [&](const Point& theta) {
    const Point edge = r * theta;
    const Accumulated acc = integrate_unit(
        [&](double t, double omt) {
          if (t <= 0.0 || omt <= 0.0) return 0.0;
          const double w = std::pow(t, 2.0 * s - 1.0) * std::pow(omt * (1.0 + t), -s) *
                           std::pow(distance(edge, t * x), -n);
          return w == 0.0 ? 0.0 : w * g((r / t) * theta);
        },
        cuts, tol);
    ok = ok && acc.converged;
    worst = std::max(worst, acc.error);
    return acc.value;
  };
  const quad::Result total =
      quad::sphere(n, direction, quad::Tolerance{spec.tol_abs / pre, spec.tol_rel}, spec.max_nodes);
  Accumulated acc;
  acc.value = pre * total.value;
  acc.error = pre * (total.error + worst);
  acc.converged = ok && total.converged;
  check_converged(acc, "solve_homogeneous");
  return acc.value;
}

double fundamental_solution(const Point& x, int n, double s) {
  require_order(n, s);
  const double rx = norm(x);
  if (rx == 0.0) throw SingularityError("fundamental solution is singular at the origin");
  if (n == 1 && s == 0.5) return -std::log(rx) / std::numbers::pi;
  const ConstantSet k = constant_set(n, s);
  if (!k.b) {
    std::ostringstream msg;
    msg << "fundamental solution for n=" << n << ", s=" << s << " (2s >= n) is not supported";
    throw UnsupportedError(msg.str());
  }
  return *k.b * std::pow(rx, 2.0 * s - n);
}

double green_incomplete_integral(double R, int n, double s) {
  if (!(R > 0.0)) return 0.0;
  const quad::Tolerance tol{1e-15, 1e-13};
  const double half_n = 0.5 * n;
  // t = sigma^{1/s} on (0, min(R, 1)) removes the endpoint singularity.
  const double upper = std::pow(std::min(R, 1.0), s);
  double value = quad::gauss_kronrod(
                     [&](double sigma) { return std::pow(1.0 + std::pow(sigma, 1.0 / s), -half_n); },
                     0.0, upper, tol)
                     .value /
                 s;
  if (R > 1.0) {
    // t = e^v on (1, R).
    value += quad::gauss_kronrod(
                 [&](double v) { return std::exp(s * v) * std::pow(1.0 + std::exp(v), -half_n); }, 0.0,
                 std::log(R), tol)
                 .value;
  }
  return value;
}

namespace {

// Green function with |z - x| = dist and the boundary factors
// (r^2 - |x|^2) and (r^2 - |z|^2) supplied by the caller.
double green_from_parts(double dist, double wx, double wz, double r, int n, double s) {
  const double R = wx * wz / (r * r * dist * dist);
  if (n == 1 && s == 0.5) return std::asinh(std::sqrt(R)) / std::numbers::pi;
  const double kappa = constant_set(n, s).kappa;
  return kappa * std::pow(dist, 2.0 * s - n) * green_incomplete_integral(R, n, s);
}

}  // namespace

KernelValue green_function(const Point& x, const Point& z, double r, int n, double s) {
  require_order(n, s);
  require_inside(x, r);
  require_inside(z, r);
  const double dist = distance(x, z);
  if (dist == 0.0) throw SingularityError("Green function is singular on the diagonal");
  const double rx = norm(x);
  const double rz = norm(z);
  return {green_from_parts(dist, (r - rx) * (r + rx), (r - rz) * (r + rz), r, n, s)};
}

double solve_nonhomogeneous(const BallProblem& prob, const Point& x, const QuadratureSpec& spec) {
  prob.validate();
  if (!prob.f) throw UsageError("solve_nonhomogeneous needs an interior source f");
  require_inside(x, prob.r);
  const ScalarField& f = *prob.f;
  const int n = prob.n;
  const double s = prob.s;
  const double r = prob.r;
  const double rx = norm(x);
  const double wx = (r - rx) * (r + rx);
  const quad::Tolerance tol{0.1 * spec.tol_abs, 0.1 * spec.tol_rel};
  bool ok = true;
  double worst = 0.0;
  auto direction = [&](const Point& theta) {
    // |x + rho theta|^2 - r^2 = (rho - hi)(rho - lo) with lo < 0 < hi.
    const double b = dot(x, theta);
    const double root = std::sqrt(b * b + wx);
    const double hi = -b + root;
    const double lo = -b - root;
    std::vector<double> breaks;
    for (const auto& q : f.smoothness.singular_points) {
      const double along = dot(q - x, theta);
      if (n == 1 && along > 0.0 && along < hi) breaks.push_back(along);
    }
    const quad::Result res = quad::tanh_sinh_split(
        [&](double rho) {
          if (rho <= 0.0 || rho >= hi) return 0.0;
          const double wz = (hi - rho) * (rho - lo);
          const double value = f(x + rho * theta);
          if (value == 0.0) return 0.0;
          return std::pow(rho, n - 1) * green_from_parts(rho, wx, wz, r, n, s) * value;
        },
        0.0, hi, tol, breaks, kMaxLevel);
    ok = ok && res.converged;
    worst = std::max(worst, res.error);
    return res.value;
  };
  const quad::Result total = quad::sphere(n, direction, spec.tolerance(), spec.max_nodes);
  Accumulated acc;
  acc.value = total.value;
  acc.error = total.error + worst;
  acc.converged = ok && total.converged;
  check_converged(acc, "solve_nonhomogeneous");
  return acc.value;
}

double solve_full(const BallProblem& prob, const Point& x, const QuadratureSpec& spec) {
  prob.validate();
  if (prob.f && prob.g) return solve_nonhomogeneous(prob, x, spec) + solve_homogeneous(prob, x, spec);
  if (prob.g) return solve_homogeneous(prob, x, spec);
  return solve_nonhomogeneous(prob, x, spec);
}

double unit_source_solution(const Point& x, double r, int n, double s) {
  require_order(n, s);
  const double rx = norm(x);
  if (rx >= r) return 0.0;
  return std::pow((r - rx) * (r + rx), s) * gamma(0.5 * n) /
         (std::pow(4.0, s) * gamma(1.0 + s) * gamma(0.5 * n + s));
}

namespace {

Smoothness solution_smoothness(const BallProblem& prob) {
  Smoothness out;
  double global = prob.s;
  if (prob.g) global = std::min(global, prob.g->smoothness.global.order());
  out.global = global >= 1.0 ? Regularity::c0() : Regularity::holder(std::max(global, 1e-6));
  if (global <= 0.0) out.global = Regularity::c0();
  out.local = Regularity::cinf();
  if (prob.n == 1) {
    out.singular_points = {make_point(-prob.r), make_point(prob.r)};
    if (prob.g) {
      for (const auto& q : prob.g->smoothness.singular_points) {
        if (norm(q) > prob.r) out.singular_points.push_back(q);
      }
      // Support edges of g also split the operator's quadrature.
      for (double rho : prob.g_radii) {
        out.singular_points.push_back(make_point(-rho));
        out.singular_points.push_back(make_point(rho));
      }
    }
    if (prob.f) {
      for (const auto& q : prob.f->smoothness.singular_points) {
        if (norm(q) < prob.r) out.singular_points.push_back(q);
      }
    }
  }
  return out;
}

Decay solution_decay(const BallProblem& prob, double interior_bound) {
  if (!prob.g) return Decay::compact(prob.r, interior_bound);
  Decay d = prob.g->decay;
  if (d.kind == DecayKind::CompactSupport) {
    d.radius = std::max(d.radius, prob.r);
    d.bound = std::max(d.bound, interior_bound);
  } else if (d.kind == DecayKind::Bounded) {
    d.bound = std::max(d.bound, interior_bound);
  } else {
    // Inside the ball |u| <= interior_bound, which the power bound covers
    // after enlarging M by (1 + r)^p.
    d.bound = std::max(d.bound, interior_bound * std::pow(1.0 + prob.r, std::max(0.0, d.exponent)));
  }
  return d;
}

}  // namespace

ScalarField ball_solution_field(const BallProblem& prob, const QuadratureSpec& spec) {
  prob.validate();
  ScalarField out;
  out.dim = prob.n;
  out.name = "ball_solution";
  out.smoothness = solution_smoothness(prob);
  double bound = prob.g ? prob.g->decay.bound : 0.0;
  if (prob.f) {
    bound += prob.f->decay.bound * unit_source_solution(Point{}, prob.r, prob.n, prob.s);
  }
  out.decay = solution_decay(prob, bound);
  auto shared = std::make_shared<BallProblem>(prob);
  out.eval = [shared, spec](const Point& x) {
    if (norm(x) < shared->r) return solve_full(*shared, x, spec);
    return shared->g ? (*shared->g)(x) : 0.0;
  };
  return out;
}

ScalarField tabulated_ball_solution(const BallProblem& prob, int nodes, const QuadratureSpec& spec) {
  prob.validate();
  if (prob.n != 1) throw UnsupportedError("tabulated ball solutions are one-dimensional");
  if (nodes < 4) throw UsageError("tabulation needs at least four nodes");
  const double r = prob.r;
  const double s = prob.s;
  const std::vector<double> xs = ChebyshevInterpolant::nodes(-r, r, nodes);
  auto weight = [r, s](double x) { return std::pow((r - x) * (r + x), s); };

  std::vector<double> nh(xs.size(), 0.0);
  std::vector<double> hom(xs.size(), 0.0);
  const bool weighted_hom =
      prob.g && (*prob.g)(make_point(r)) == 0.0 && (*prob.g)(make_point(-r)) == 0.0;
  parallel_for(xs.size(), [&](std::size_t i) {
    const Point x = make_point(xs[i]);
    if (prob.f) nh[i] = solve_nonhomogeneous(prob, x, spec) / weight(xs[i]);
    if (prob.g) {
      hom[i] = solve_homogeneous(prob, x, spec);
      if (weighted_hom) hom[i] /= weight(xs[i]);
    }
  });
  auto h_nh = std::make_shared<ChebyshevInterpolant>(-r, r, nh);
  auto h_hom = std::make_shared<ChebyshevInterpolant>(-r, r, hom);
  std::shared_ptr<const ScalarField> g;
  if (prob.g) g = std::make_shared<const ScalarField>(*prob.g);
  const bool has_f = prob.f.has_value();

  double bound = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double w = weight(xs[i]);
    bound = std::max(bound, std::abs(nh[i] * w + (weighted_hom ? hom[i] * w : hom[i])));
  }

  ScalarField out;
  out.dim = 1;
  out.name = "tabulated_ball_solution";
  out.smoothness = solution_smoothness(prob);
  out.decay = solution_decay(prob, 1.5 * bound);
  out.eval = [=](const Point& p) {
    const double x = p[0];
    if (std::abs(x) >= r) return g ? (*g)(p) : 0.0;
    const double w = std::pow((r - x) * (r + x), s);
    double value = has_f ? w * (*h_nh)(x) : 0.0;
    if (g) value += weighted_hom ? w * (*h_hom)(x) : (*h_hom)(x);
    return value;
  };
  return out;
}

}  // namespace fraclap
