#include "fraclap/extension_op.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>

#include "fraclap/errors.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/special_constants.hpp"
#include "fraclap/spectral_op.hpp"

namespace fraclap {

namespace {

const quad::Tolerance kSphereTol{1e-15, 1e-12};

// int_0^inf f over the half line: adaptive Gauss-Kronrod on [0, w] and the
// map r = w t^{-1/q} on the rest, which leaves a bounded integrand when f
// decays like r^{-1-q}.
quad::Result half_line(const quad::Integrand& f, double w, double q, const quad::Tolerance& tol,
                       std::vector<double> breaks, std::size_t budget) {
  std::sort(breaks.begin(), breaks.end());
  quad::Result out = quad::gauss_kronrod(f, 0.0, w, tol, budget, breaks);
  out += quad::gauss_kronrod(
      [&](double t) {
        if (t <= 0.0) return 0.0;
        const double r = w * std::pow(t, -1.0 / q);
        return f(r) * r / (q * t);
      },
      0.0, 1.0, tol, budget);
  return out;
}

void require_l1s(const ScalarField& field, double s) {
  if (field.decay.tail_exponent() + 2.0 * s <= 0.0) {
    throw PreconditionError("field is not in L^1_s for this order");
  }
}

// Radii at which the integrand in the radial variable around x may have
// reduced smoothness.
std::vector<double> feature_radii(const ScalarField& field, const Point& x) {
  std::vector<double> out;
  for (const auto& p : field.smoothness.singular_points) out.push_back(distance(x, p));
  if (field.decay.kind == DecayKind::CompactSupport) out.push_back(norm(x) + field.decay.radius);
  return out;
}

// D(y) = B int [(u(x+z) + u(x-z))/2 - u(x)] / (|z|^2 + y^2)^{(n+2s)/2} dz,
// so that v(x, y) - u(x) = y^{2s} D(y).
double regularised_difference(const ScalarField& field, const Point& x, double y, double s,
                              const ConstantSet& k, const QuadratureSpec& spec, bool& converged) {
  const int n = field.dim;
  const double a = 0.5 * (n + 2.0 * s);
  const double ux = field(x);
  const quad::Tolerance tol{1e-14, std::min(spec.tol_rel, 1e-11)};
  auto half_sum = [&](double rho) {
    return 0.5 * quad::symmetric_sphere(
                     n, [&](const Point& th) { return field(x + rho * th) + field(x - rho * th); },
                     kSphereTol)
                     .value;
  };
  auto weight = [&](double rho) { return std::pow(rho, n - 1) * std::pow(rho * rho + y * y, -a); };
  const double r_cut = std::max(spec.R_mid, 4.0);
  std::vector<double> breaks = feature_radii(field, x);
  breaks.push_back(y);
  std::vector<double> mid_breaks;
  for (double b : breaks) {
    if (b < r_cut) mid_breaks.push_back(b);
  }
  std::sort(mid_breaks.begin(), mid_breaks.end());
  const quad::Result mid = quad::gauss_kronrod(
      [&](double rho) { return weight(rho) * (half_sum(rho) - ux * k.omega); }, 0.0, r_cut, tol,
      spec.max_nodes, mid_breaks);
  converged = converged && mid.converged;

  // -u(x) omega int_R^inf rho^{n-1} (rho^2 + y^2)^{-a}: with rho = R / t and
  // t = tau^{1/(2s)} the integrand is smooth on [0, 1].
  const quad::Result flat = quad::gauss_kronrod(
      [&](double tau) {
        const double t = std::pow(tau, 0.5 / s);
        return std::pow(1.0 + (y * t / r_cut) * (y * t / r_cut), -a);
      },
      0.0, 1.0, tol, spec.max_nodes);
  const double flat_tail = -ux * k.omega * std::pow(r_cut, -2.0 * s) * flat.value / (2.0 * s);

  double far = 0.0;
  if (field.decay.kind == DecayKind::CompactSupport) {
    const double rho_max = norm(x) + field.decay.radius;
    if (rho_max > r_cut) {
      const quad::Result r = quad::gauss_kronrod([&](double rho) { return weight(rho) * half_sum(rho); },
                                                 r_cut, rho_max, tol, spec.max_nodes, breaks);
      converged = converged && r.converged;
      far = r.value;
    }
  } else {
    const double p = field.decay.kind == DecayKind::PowerDecay ? field.decay.exponent : 0.0;
    const double q = 2.0 * s + std::min(p, 8.0);
    const quad::Result r = quad::gauss_kronrod(
        [&](double t) {
          if (t <= 0.0) return 0.0;
          const double rho = r_cut * std::pow(t, -1.0 / q);
          return weight(rho) * half_sum(rho) * rho / (q * t);
        },
        0.0, 1.0, tol, spec.max_nodes);
    converged = converged && r.converged;
    far = r.value;
  }
  return k.B_half * (mid.value + flat_tail + far);
}

struct RawTrace {
  std::vector<double> v_minus_u;
  std::vector<double> quotients;
  std::vector<double> extrapolated;
  double limit = 0.0;
  double err = 0.0;
  bool converged = true;
};

RawTrace trace_limit(const ScalarField& field, const Point& x, double s,
                     const std::vector<double>& levels, const QuadratureSpec& spec) {
  const ConstantSet k = constant_set(field.dim, s);
  RawTrace out;
  const std::size_t m = levels.size();
  std::vector<double> d(m);
  bool ok = true;
  for (std::size_t i = 0; i < m; ++i) {
    d[i] = regularised_difference(field, x, levels[i], s, k, spec, ok);
    out.v_minus_u.push_back(std::pow(levels[i], 2.0 * s) * d[i]);
  }
  // Difference quotients in the variable y^{2s}.
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double t0 = std::pow(levels[i], 2.0 * s);
    const double t1 = std::pow(levels[i + 1], 2.0 * s);
    out.quotients.push_back((out.v_minus_u[i] - out.v_minus_u[i + 1]) / (t0 - t1));
  }
  const double ratio = levels[0] / levels[1];
  std::vector<double> col = out.quotients;
  for (double e : {2.0 - 2.0 * s, 2.0, 4.0 - 2.0 * s}) {
    if (col.size() < 2) break;
    const double f = std::pow(ratio, e);
    std::vector<double> next;
    for (std::size_t i = 0; i + 1 < col.size(); ++i) next.push_back((f * col[i + 1] - col[i]) / (f - 1.0));
    col = std::move(next);
  }
  out.extrapolated = col;
  const double best = col.back();
  const double scale = std::max(std::abs(best), 1e-300);
  double err = col.size() >= 2 ? std::abs(col[col.size() - 1] - col[col.size() - 2]) : std::abs(best);
  // The extrapolated column must settle: successive changes may not grow
  // beyond rounding-level noise.
  for (std::size_t i = 2; i < col.size(); ++i) {
    const double prev = std::abs(col[i - 1] - col[i - 2]);
    const double cur = std::abs(col[i] - col[i - 1]);
    if (cur > prev + 1e-10 * scale + 1e-13) ok = false;
  }
  out.limit = 2.0 * s * best;
  out.err = 2.0 * s * (err + 1e-11 * scale);
  out.converged = ok;
  return out;
}

void validate_levels(const std::vector<double>& levels) {
  if (levels.size() < 3) throw UsageError("conormal trace needs at least three heights");
  for (double y : levels) {
    if (!(y > 0.0)) throw DomainError("heights must be positive");
  }
  const double ratio = levels[0] / levels[1];
  if (!(ratio > 1.0)) throw UsageError("heights must decrease");
  for (std::size_t i = 1; i + 1 < levels.size(); ++i) {
    if (std::abs(levels[i] / levels[i + 1] - ratio) > 1e-9 * ratio) {
      throw UsageError("heights must form a geometric progression");
    }
  }
}

}  // namespace

std::vector<double> default_y_levels() {
  std::vector<double> out;
  for (int k = 3; k <= 10; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

double extend(const ScalarField& field, const Point& x, double y, double s,
              const QuadratureSpec& spec) {
  require_order(field.dim, s);
  if (!(y > 0.0)) throw DomainError("extension height y must be positive");
  if (!field.decay.is_bounded()) throw PreconditionError("extension requires a bounded field");
  const int n = field.dim;
  const ConstantSet k = constant_set(n, s);
  // With xi = x + y tan(phi) theta and psi = pi/2 - phi the kernel becomes
  // B sin^{2s-1}(psi) cos^{n-1}(psi) on [0, pi/2].
  auto shell = [&](double rho) {
    return quad::symmetric_sphere(
               n, [&](const Point& th) { return 0.5 * (field(x + rho * th) + field(x - rho * th)); },
               kSphereTol)
        .value;
  };
  auto integrand = [&](double psi) {
    if (psi <= 0.0) return 0.0;
    const double rho = y * std::cos(psi) / std::sin(psi);
    return std::pow(std::sin(psi), 2.0 * s - 1.0) * std::pow(std::cos(psi), n - 1) * shell(rho);
  };
  std::vector<double> breaks;
  for (double r : feature_radii(field, x)) {
    if (r > 0.0) breaks.push_back(std::atan(y / r));
  }
  for (double r : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) breaks.push_back(std::atan(y / r));
  const quad::Tolerance tol{1e-15, std::min(spec.tol_rel, 1e-12)};
  const quad::Result r = quad::tanh_sinh_split(integrand, 0.0, 0.5 * std::numbers::pi, tol, breaks, 12);
  return k.B_half * r.value;
}

ExtensionField make_extension(const ScalarField& base, double s, const QuadratureSpec& spec) {
  ExtensionField e;
  e.base = base;
  e.s = s;
  e.spec = spec;
  return e;
}

double calibrated_kappa(int n, double s) {
  require_order(n, s);
  static std::mutex mutex;
  static std::map<std::pair<int, double>, double> cache;
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(n, s);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  double kappa = 0.0;
  const ConstantSet k = constant_set(n, s);
  if (n > 2) {
    kappa = k.c / (2.0 * s * k.B_half);
  } else {
    const ScalarField g = gaussian_field(n);
    const PeriodicGrid grid = n == 1 ? PeriodicGrid{1, 1024.0, 32768} : PeriodicGrid{2, 64.0, 1024};
    const double reference = frac_lap_spectral(sample_field(g, grid), s).at_node(Point{});
    const RawTrace raw = trace_limit(g, Point{}, s, default_y_levels(), QuadratureSpec{});
    kappa = -reference / raw.limit;
  }
  cache.emplace(key, kappa);
  return kappa;
}

TraceResult conormal_trace(const ScalarField& field, const Point& x, double s,
                           const std::vector<double>& levels, const QuadratureSpec& spec) {
  require_order(field.dim, s);
  spec.validate();
  validate_levels(levels);
  require_l1s(field, s);
  const double order = field.smoothness.order_at(x);
  if (!(order > 2.0 * s)) throw PreconditionError("field is not smooth enough at x for the trace");

  const ConstantSet k = constant_set(field.dim, s);
  TraceResult out;
  out.levels = levels;
  out.kappa_theory = k.c / (2.0 * s * k.B_half);
  out.kappa = calibrated_kappa(field.dim, s);
  out.kappa_calibrated = field.dim <= 2;
  const RawTrace raw = trace_limit(field, x, s, levels, spec);
  out.v_minus_u = raw.v_minus_u;
  out.quotients = raw.quotients;
  out.extrapolated = raw.extrapolated;
  out.limit = raw.limit;
  out.op.value = -out.kappa * raw.limit;
  out.op.err_est = out.kappa * raw.err;
  out.op.heuristic = field.smoothness.smoothness_radius(x) < levels.front() * 8.0;
  out.op.status = raw.converged ? OpStatus::Converged : OpStatus::NotConverged;
  return out;
}

ExtensionGradient extension_gradient(const ScalarField& field, double x, double y, double s,
                                     const QuadratureSpec& spec) {
  if (field.dim != 1) throw UnsupportedError("extension gradient is implemented for n = 1");
  require_order(1, s);
  if (!(y > 0.0)) throw DomainError("extension height y must be positive");
  require_l1s(field, s);
  const ConstantSet k = constant_set(1, s);
  const double a = 0.5 + s;
  const Point px = make_point(x);
  const double ux = field(px);
  auto u = [&](double xi) { return field(make_point(xi)); };

  std::vector<double> breaks{1.0};
  double w_cut = 8.0;
  for (double r : feature_radii(field, px)) {
    breaks.push_back(r / y);
    w_cut = std::max(w_cut, 1.25 * r / y);
  }
  const quad::Tolerance tol{1e-14, std::min(spec.tol_rel, 1e-11)};
  const double p = field.decay.kind == DecayKind::PowerDecay ? field.decay.exponent : 0.0;
  const double tail_p = field.decay.kind == DecayKind::CompactSupport ? 0.0 : std::min(p, 8.0);

  // Odd kernel w (1 + w^2)^{-a-1}; tail ~ w^{-2-2s} times u.
  const quad::Result ix = half_line(
      [&](double w) { return w * std::pow(1.0 + w * w, -a - 1.0) * (u(x + y * w) - u(x - y * w)); },
      w_cut, 1.0 + 2.0 * s + std::max(tail_p, 0.0), tol, breaks, spec.max_nodes);
  // Even kernel with zero mean; the second difference keeps it accurate as
  // y -> 0. Tail ~ w^{-1-2s} times the bounded difference.
  const quad::Result iy = half_line(
      [&](double w) {
        const double q = 1.0 + w * w;
        const double kern = 2.0 * s * std::pow(q, -a) - (1.0 + 2.0 * s) * std::pow(q, -a - 1.0);
        return kern * (u(x + y * w) + u(x - y * w) - 2.0 * ux);
      },
      w_cut, 2.0 * s + std::max(tail_p, 0.0), tol, breaks, spec.max_nodes);
  ExtensionGradient g;
  g.vx = (1.0 + 2.0 * s) * k.B_half / y * ix.value;
  g.vy = k.B_half / y * iy.value;
  return g;
}

namespace {

double strong_residual(const ExtensionField& ext, const PlaneBox& box, double h) {
  if (!(box.y_lo > 0.0)) throw UsageError("strong residual needs a box strictly inside y > 0");
  const std::size_t nx = static_cast<std::size_t>(std::llround((box.x_hi - box.x_lo) / h));
  const std::size_t ny = static_cast<std::size_t>(std::llround((box.y_hi - box.y_lo) / h));
  if (nx < 2 || ny < 2) throw UsageError("grid step too large for the box");
  std::vector<double> v((nx + 1) * (ny + 1));
  parallel_for(v.size(), [&](std::size_t idx) {
    const std::size_t i = idx / (ny + 1);
    const std::size_t j = idx % (ny + 1);
    v[idx] = ext(make_point(box.x_lo + h * i), box.y_lo + h * j);
  });
  auto at = [&](std::size_t i, std::size_t j) { return v[i * (ny + 1) + j]; };
  const double e = 1.0 - 2.0 * ext.s;
  double worst = 0.0;
  for (std::size_t i = 1; i < nx; ++i) {
    for (std::size_t j = 1; j < ny; ++j) {
      const double y = box.y_lo + h * j;
      const double c = at(i, j);
      const double r = (std::pow(y, e) * (at(i + 1, j) - 2.0 * c + at(i - 1, j)) +
                        std::pow(y + 0.5 * h, e) * (at(i, j + 1) - c) -
                        std::pow(y - 0.5 * h, e) * (c - at(i, j - 1))) /
                       (h * h);
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

struct TestBump {
  double cx;
  double cy;
  double radius;

  // exp(1 - 1/(1 - q)) with q the scaled squared distance; peak value 1.
  double value(double x, double y) const {
    const double q = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (radius * radius);
    return q < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - q)) : 0.0;
  }
  std::pair<double, double> grad(double x, double y) const {
    const double r2 = radius * radius;
    const double q = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / r2;
    if (q >= 1.0) return {0.0, 0.0};
    const double f = std::exp(1.0 - 1.0 / (1.0 - q));
    const double dq = -f / ((1.0 - q) * (1.0 - q));
    return {dq * 2.0 * (x - cx) / r2, dq * 2.0 * (y - cy) / r2};
  }
};

double weak_residual(const ExtensionField& ext, const PlaneBox& box, double h) {
  if (!(box.y_lo < 0.0 && box.y_hi > 0.0)) {
    throw UsageError("weak residual needs a box straddling y = 0");
  }
  const double half_x = 0.5 * (box.x_hi - box.x_lo);
  const double radius = std::min(0.45 * half_x, 0.8 * std::min(-box.y_lo, box.y_hi));
  std::vector<TestBump> bumps;
  for (int j = 0; j < 10; ++j) {
    const double cx = box.x_lo + radius + (box.x_hi - box.x_lo - 2.0 * radius) * j / 9.0;
    const double cy = 0.25 * radius * static_cast<double>(j % 3 - 1);
    bumps.push_back({cx, cy, radius});
  }
  const int nodes = std::max(24, static_cast<int>(std::ceil(2.0 * radius / h)));
  const auto& rule = quad::gauss_legendre(nodes);
  const double s = ext.s;
  std::vector<double> result(bumps.size());
  for (std::size_t b = 0; b < bumps.size(); ++b) {
    const TestBump& tb = bumps[b];
    const double y_max = std::abs(tb.cy) + tb.radius;
    // y = y_max tau^2 clusters nodes at the weight singularity y = 0.
    std::vector<double> terms(static_cast<std::size_t>(nodes) * nodes);
    parallel_for(terms.size(), [&](std::size_t idx) {
      const int i = static_cast<int>(idx / nodes);
      const int j = static_cast<int>(idx % nodes);
      const double x = tb.cx + tb.radius * rule.nodes[i];
      const double tau = 0.5 * (rule.nodes[j] + 1.0);
      const double y = y_max * tau * tau;
      const double wx = tb.radius * rule.weights[i];
      const double wy = 0.5 * rule.weights[j] * 2.0 * y_max * tau;
      const auto up = tb.grad(x, y);
      const auto dn = tb.grad(x, -y);
      if (up.first == 0.0 && up.second == 0.0 && dn.first == 0.0 && dn.second == 0.0) {
        terms[idx] = 0.0;
        return;
      }
      const ExtensionGradient g = extension_gradient(ext.base, x, y, s, ext.spec);
      const double weight = std::pow(y, 1.0 - 2.0 * s);
      terms[idx] = wx * wy * weight *
                   (g.vx * (up.first + dn.first) + g.vy * (up.second - dn.second));
    });
    double acc = 0.0;
    for (double t : terms) acc += t;
    result[b] = acc;
  }
  double worst = 0.0;
  for (double r : result) worst = std::max(worst, std::abs(r));
  return worst;
}

}  // namespace

double weighted_divergence_residual(const ExtensionField& ext, const PlaneBox& box, double h,
                                    ResidualMode mode) {
  if (ext.base.dim != 1) throw UnsupportedError("divergence residual is implemented for n = 1");
  if (!(h > 0.0)) throw UsageError("grid step must be positive");
  if (!(box.x_hi > box.x_lo) || !(box.y_hi > box.y_lo)) throw UsageError("empty residual box");
  return mode == ResidualMode::Strong ? strong_residual(ext, box, h) : weak_residual(ext, box, h);
}

}  // namespace fraclap
