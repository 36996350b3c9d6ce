#include "fraclap/pointwise_op.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fraclap/errors.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/special_constants.hpp"

namespace fraclap {

namespace {

// Field evaluations are counted against the node budget. Once the budget
// is spent the evaluator stops calling the field and reports exhaustion.
class BudgetedField {
 public:
  BudgetedField(const ScalarField& field, std::size_t budget) : field_(field), budget_(budget) {}

  double operator()(const Point& p) {
    if (used_ >= budget_) {
      exhausted_ = true;
      return 0.0;
    }
    ++used_;
    return field_(p);
  }

  std::size_t used() const { return used_; }
  bool exhausted() const { return exhausted_; }

 private:
  const ScalarField& field_;
  std::size_t budget_;
  std::size_t used_ = 0;
  bool exhausted_ = false;
};

// Evaluations of the sphere rule per radius, used to convert the field
// budget into a budget of radial nodes.
std::size_t sphere_cost(int n) {
  switch (n) {
    case 1: return 2;
    case 2: return 128;
    default: return 4096;
  }
}

// Laplacian by central differences with one Richardson step (fourth order).
double laplacian(BudgetedField& u, const Point& x, int n, double h) {
  const double u0 = u(x);
  auto second = [&](double step) {
    double acc = 0.0;
    for (int d = 0; d < n; ++d) {
      Point xp = x;
      Point xm = x;
      xp[d] += step;
      xm[d] -= step;
      acc += (u(xp) - 2.0 * u0 + u(xm)) / (step * step);
    }
    return acc;
  };
  return (4.0 * second(h) - second(2.0 * h)) / 3.0;
}

}  // namespace

OpValue frac_lap_point(const ScalarField& field, const Point& x, double s,
                       const QuadratureSpec& spec) {
  if (!(s >= kMinOrder && s <= kMaxOrder)) {
    std::ostringstream msg;
    msg << "order s=" << s << " outside the supported range [" << kMinOrder << ", " << kMaxOrder
        << "]";
    throw DomainError(msg.str());
  }
  require_order(field.dim, s);
  spec.validate();
  const int n = field.dim;
  const double p = field.decay.tail_exponent();
  if (p + 2.0 * s <= 0.0) {
    throw PreconditionError("field is not in L^1_s: declared growth is too fast for this order");
  }
  const double order = field.smoothness.order_at(x);
  if (!(order > 2.0 * s)) {
    std::ostringstream msg;
    msg << "field regularity " << order << " at x does not exceed 2s=" << 2.0 * s;
    throw PreconditionError(msg.str());
  }

  const ConstantSet k = constant_set(n, s);
  const double half_c = 0.5 * k.c;
  const double radius = field.smoothness.smoothness_radius(x);
  BudgetedField u(field, spec.max_nodes);
  const std::size_t radial_budget =
      std::max<std::size_t>(100, spec.max_nodes / sphere_cost(n));
  // Tolerances apply to the final value, which carries the factor c/2.
  const quad::Tolerance tol{0.25 * spec.tol_abs / half_c, spec.tol_rel};
  const quad::Tolerance sphere_tol{1e-15, 1e-12};

  OpValue out;
  out.heuristic = radius < spec.R_mid;
  bool converged = true;
  const double ux = u(x);

  // Angular integral of the second difference at radius rho.
  auto second_difference = [&](double rho) {
    const quad::Result r = quad::symmetric_sphere(
        n, [&](const Point& th) { return 2.0 * ux - u(x + rho * th) - u(x - rho * th); },
        sphere_tol, spec.max_nodes);
    return r.value;
  };
  auto kernel_integrand = [&](double rho) {
    return std::pow(rho, -1.0 - 2.0 * s) * second_difference(rho);
  };

  double delta = std::min(spec.delta, 0.5 * radius);
  const double r_mid = std::max(spec.R_mid, 2.0 * delta);
  std::vector<double> breaks;
  for (const auto& q : field.smoothness.singular_points) breaks.push_back(distance(x, q));
  std::sort(breaks.begin(), breaks.end());

  // Mid range [delta, R_mid].
  const quad::Result mid = quad::gauss_kronrod(kernel_integrand, delta, r_mid, tol, radial_budget, breaks);
  converged = converged && mid.converged;
  double err = mid.error;

  // Inner ball: Taylor term when the field is C^2 near x, otherwise zero.
  const bool taylor = order >= 2.0;
  double lap = 0.0;
  if (taylor) {
    const double h = std::min(2e-3, radius / 8.0);
    lap = laplacian(u, x, n, h);
  }
  auto inner = [&](double d) {
    if (!taylor) return 0.0;
    return -lap * (k.omega / n) * std::pow(d, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
  };
  double shells = 0.0;
  double inner_err = std::numeric_limits<double>::infinity();
  double previous = inner(delta);
  const double delta_floor = delta * 1e-7;
  while (delta > delta_floor) {
    const quad::Result shell = quad::gauss_kronrod(kernel_integrand, 0.5 * delta, delta, tol, radial_budget);
    converged = converged && shell.converged;
    err += shell.error;
    shells += shell.value;
    delta *= 0.5;
    const double current = inner(delta);
    inner_err = std::abs(current + shell.value - previous);
    previous = current;
    const double running = half_c * (mid.value + shells + current);
    const double bound = std::max(spec.tol_abs, spec.tol_rel * std::abs(running));
    if (half_c * inner_err < 0.1 * bound || u.exhausted()) break;
  }
  const double inner_value = previous;
  if (!(delta > delta_floor)) converged = false;
  err += inner_err;

  // Far field [R_mid, inf): the 2u(x) part is exact; the remaining part
  // -int rho^{-1-2s} T(rho) uses the decay metadata.
  const double analytic_tail = 2.0 * ux * k.omega * std::pow(r_mid, -2.0 * s) / (2.0 * s);
  auto pair_sum = [&](double rho) {
    const quad::Result r = quad::symmetric_sphere(
        n, [&](const Point& th) { return u(x + rho * th) + u(x - rho * th); }, sphere_tol,
        spec.max_nodes);
    return r.value;
  };
  const double xr = norm(x);
  double tail = 0.0;
  bool tail_done = false;
  if (field.decay.kind == DecayKind::CompactSupport) {
    const double rho_max = xr + field.decay.radius;
    if (rho_max > r_mid) {
      const quad::Result r = quad::gauss_kronrod(
          [&](double rho) { return -std::pow(rho, -1.0 - 2.0 * s) * pair_sum(rho); }, r_mid,
          rho_max, tol, radial_budget, breaks);
      converged = converged && r.converged;
      err += r.error;
      tail = r.value;
    }
    tail_done = true;
  } else if (field.decay.kind == DecayKind::PowerDecay && p > 0.0 &&
             spec.tail_mode == TailMode::AnalyticPower) {
    const double m = field.decay.bound;
    auto remainder = [&](double r) {
      return 2.0 * k.omega * m * std::pow(1.0 + r - xr, -p) * std::pow(r, -2.0 * s) / (2.0 * s);
    };
    double r_far = std::max(r_mid, 2.0 * xr + 1.0);
    while (half_c * remainder(r_far) > 0.1 * spec.tol_abs && r_far < 1e4 * std::max(r_mid, xr + 1.0)) {
      r_far *= 1.5;
    }
    if (half_c * remainder(r_far) <= 0.1 * spec.tol_abs) {
      const quad::Result r = quad::gauss_kronrod(
          [&](double rho) { return -std::pow(rho, -1.0 - 2.0 * s) * pair_sum(rho); }, r_mid,
          r_far, tol, radial_budget, breaks);
      converged = converged && r.converged;
      err += r.error + remainder(r_far);
      tail = r.value;
      tail_done = true;
    }
  }
  if (!tail_done) {
    // rho = R t^{-1/q} with q = 2s + p turns the tail into a bounded
    // integrand on (0, 1].
    const double q = 2.0 * s + (field.decay.kind == DecayKind::PowerDecay ? p : 0.0);
    std::vector<double> tbreaks;
    for (double b : breaks) {
      if (b > r_mid) tbreaks.push_back(std::pow(b / r_mid, -q));
    }
    const quad::Result r = quad::gauss_kronrod(
        [&](double t) {
          if (t <= 0.0) return 0.0;
          const double rho = r_mid * std::pow(t, -1.0 / q);
          return -std::pow(rho, -2.0 * s) * pair_sum(rho) / (q * t);
        },
        0.0, 1.0, tol, radial_budget, tbreaks);
    converged = converged && r.converged;
    err += r.error;
    tail = r.value;
  }

  out.value = half_c * (inner_value + shells + mid.value + tail + analytic_tail);
  out.err_est = half_c * err;
  out.nodes_used = u.used();
  if (!converged || u.exhausted() || !std::isfinite(out.value) || !std::isfinite(out.err_est)) {
    out.status = OpStatus::NotConverged;
    if (!std::isfinite(out.err_est)) out.err_est = std::numeric_limits<double>::max();
  }
  return out;
}

std::vector<OpValue> frac_lap_grid(const ScalarField& field, const std::vector<Point>& points,
                                   double s, const QuadratureSpec& spec) {
  std::vector<OpValue> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = frac_lap_point(field, points[i], s, spec); });
  return out;
}

Pairing pairing_check(const ScalarField& u, const ScalarField& v, double s,
                      const QuadratureSpec& spec, double half_width, int panels, int order) {
  if (u.dim != v.dim) throw UsageError("pairing_check: fields of different dimensions");
  if (u.dim > 2) throw UnsupportedError("pairing_check supports n <= 2");
  if (panels < 1 || order < 1 || !(half_width > 0.0)) throw UsageError("pairing_check: bad grid");
  const auto& rule = quad::gauss_legendre(order);
  std::vector<double> nodes;
  std::vector<double> weights;
  const double width = 2.0 * half_width / panels;
  for (int pnl = 0; pnl < panels; ++pnl) {
    const double a = -half_width + pnl * width;
    for (int i = 0; i < order; ++i) {
      nodes.push_back(a + 0.5 * width * (rule.nodes[i] + 1.0));
      weights.push_back(0.5 * width * rule.weights[i]);
    }
  }
  std::vector<Point> points;
  std::vector<double> w;
  if (u.dim == 1) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      points.push_back(make_point(nodes[i]));
      w.push_back(weights[i]);
    }
  } else {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        points.push_back(make_point(nodes[i], nodes[j]));
        w.push_back(weights[i] * weights[j]);
      }
    }
  }
  const auto lu = frac_lap_grid(u, points, s, spec);
  const auto lv = frac_lap_grid(v, points, s, spec);
  Pairing out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.lhs += w[i] * lu[i].value * v(points[i]);
    out.rhs += w[i] * u(points[i]) * lv[i].value;
  }
  return out;
}

}  // namespace fraclap
