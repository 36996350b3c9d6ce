#include "fraclap/field_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "fraclap/errors.hpp"
#include "fraclap/interpolation.hpp"
#include "fraclap/special_constants.hpp"

namespace fraclap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) throw UsageError("field dimension must be 1, 2 or 3");
}

double radius_of(const Point& x) { return norm(x); }

// e^{-1/t} for t > 0, 0 otherwise, with its derivative.
double edge(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double edge_prime(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

double smooth_step_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = edge(1.0 - t);
  const double b = edge(t);
  const double den = a + b;
  return -(edge_prime(1.0 - t) * b + a * edge_prime(t)) / (den * den);
}

// Radial profile of the bump: psi(rho) = smooth_step(rho - 1).
double bump_profile(double rho) { return smooth_step(rho - 1.0); }
double bump_profile_prime(double rho) { return smooth_step_prime(rho - 1.0); }

}  // namespace

double Regularity::order() const {
  switch (kind) {
    case SmoothnessKind::C0: return 0.0;
    case SmoothnessKind::Holder: return alpha;
    case SmoothnessKind::C1Holder: return 1.0 + alpha;
    case SmoothnessKind::C2: return 2.0;
    case SmoothnessKind::Cinf: return kInf;
  }
  return 0.0;
}

double Smoothness::smoothness_radius(const Point& x) const {
  double r = kInf;
  for (const auto& p : singular_points) r = std::min(r, distance(x, p));
  return r;
}

double Smoothness::order_at(const Point& x) const {
  const double g = global.order();
  if (smoothness_radius(x) > 0.0) return std::max(g, local.order());
  return g;
}

bool Decay::is_bounded() const {
  switch (kind) {
    case DecayKind::CompactSupport: return true;
    case DecayKind::PowerDecay: return exponent >= 0.0;
    case DecayKind::Bounded: return true;
  }
  return false;
}

double Decay::tail_exponent() const {
  switch (kind) {
    case DecayKind::CompactSupport: return kInf;
    case DecayKind::PowerDecay: return exponent;
    case DecayKind::Bounded: return 0.0;
  }
  return 0.0;
}

double smooth_step(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = edge(1.0 - t);
  return a / (a + edge(t));
}

ScalarField constant_field(int dim, double value) {
  require_dim(dim);
  ScalarField f;
  f.dim = dim;
  f.eval = [value](const Point&) { return value; };
  f.grad = [](const Point&) { return Point{}; };
  f.decay = Decay::bounded(std::abs(value));
  f.name = "constant";
  return f;
}

ScalarField gaussian_field(int dim, const Point& center) {
  require_dim(dim);
  Point c{};
  for (int i = 0; i < dim; ++i) c[i] = center[i];
  ScalarField f;
  f.dim = dim;
  f.eval = [c](const Point& x) {
    const Point d = x - c;
    return std::exp(-dot(d, d));
  };
  f.grad = [c](const Point& x) {
    const Point d = x - c;
    return (-2.0 * std::exp(-dot(d, d))) * d;
  };
  // |u(x)| <= M (1 + |x|)^{-8}: with r = |x - c| and |x| <= r + |c| the
  // worst case is max_r (1 + |c| + r)^8 e^{-r^2}, found on a fine grid.
  const double shift = norm(c);
  double m = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double r = 1e-3 * i;
    m = std::max(m, std::pow(1.0 + shift + r, 8.0) * std::exp(-r * r));
  }
  f.decay = Decay::power(8.0, 1.05 * m);
  f.name = "gaussian";
  return f;
}

ScalarField bump_field(int dim) {
  require_dim(dim);
  ScalarField f;
  f.dim = dim;
  f.eval = [](const Point& x) { return bump_profile(radius_of(x)); };
  f.grad = [](const Point& x) {
    const double r = radius_of(x);
    if (r <= 1.0 || r >= 2.0) return Point{};
    return (bump_profile_prime(r) / r) * x;
  };
  f.decay = Decay::compact(2.0, 1.0);
  f.name = "bump";
  return f;
}

ScalarField xplus_field(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("xplus exponent must lie in (0, 1)");
  ScalarField f;
  f.dim = 1;
  f.eval = [s](const Point& x) { return x[0] > 0.0 ? std::pow(x[0], s) : 0.0; };
  f.grad = [s](const Point& x) {
    return x[0] > 0.0 ? make_point(s * std::pow(x[0], s - 1.0)) : Point{};
  };
  f.smoothness.global = Regularity::holder(s);
  f.smoothness.local = Regularity::cinf();
  f.smoothness.singular_points = {Point{}};
  f.decay = Decay::power(-s, 1.0);
  f.name = "xplus";
  return f;
}

ScalarField windowed_quadratic_field(int dim) {
  require_dim(dim);
  ScalarField f;
  f.dim = dim;
  f.eval = [](const Point& x) {
    const double r2 = dot(x, x);
    return r2 * bump_profile(std::sqrt(r2));
  };
  f.grad = [](const Point& x) {
    const double r = radius_of(x);
    if (r >= 2.0) return Point{};
    const double radial = 2.0 * bump_profile(r) + r * bump_profile_prime(r);
    return radial * x;
  };
  f.decay = Decay::compact(2.0, 4.0);
  f.name = "windowed_quadratic";
  return f;
}

ScalarField fourier_mode_field(int dim, double period, int mode) {
  require_dim(dim);
  if (!(period > 0.0)) throw UsageError("fourier mode period must be positive");
  const double k = 2.0 * std::numbers::pi * mode / period;
  ScalarField f;
  f.dim = dim;
  f.eval = [k](const Point& x) { return std::cos(k * x[0]); };
  f.grad = [k](const Point& x) { return make_point(-k * std::sin(k * x[0])); };
  f.decay = Decay::bounded(1.0);
  f.name = "fourier_mode";
  return f;
}

std::vector<std::string> catalog_names() {
  return {"constant", "gaussian", "bump", "xplus", "windowed_quadratic", "fourier_mode"};
}

FieldCatalogEntry catalog_entry(const std::string& name, int dim, const FieldParams& params) {
  FieldCatalogEntry e;
  e.name = name;
  if (name == "constant") {
    e.field = constant_field(dim, params.value);
    e.notes = "constant value; annihilated by the operator";
  } else if (name == "gaussian") {
    e.field = gaussian_field(dim, params.center);
    e.notes = "exp(-|x - center|^2); smooth, rapidly decaying";
  } else if (name == "bump") {
    e.field = bump_field(dim);
    e.notes = "radial bump, 1 on B_1, 0 outside B_2";
  } else if (name == "xplus") {
    if (dim != 1) throw UsageError("xplus is one-dimensional");
    e.field = xplus_field(params.s);
    e.notes = "x_+^s; s-harmonic on the positive half-line";
  } else if (name == "windowed_quadratic") {
    e.field = windowed_quadratic_field(dim);
    e.notes = "|x|^2 times the bump";
  } else if (name == "fourier_mode") {
    e.field = fourier_mode_field(dim, params.period, params.mode);
    e.notes = "cos(2 pi k x_1 / L); eigenfunction of the multiplier";
  } else {
    std::ostringstream msg;
    msg << "unknown catalog field '" << name << "'";
    throw UsageError(msg.str());
  }
  if (params.value != 1.0 && name != "constant") {
    const double a = params.value;
    ScalarField inner = e.field;
    e.field = transformed(inner, 1.0, Point{}, a);
  }
  return e;
}

ScalarField catalog_field(const std::string& name, int dim, const FieldParams& params) {
  return catalog_entry(name, dim, params).field;
}

ScalarField sampled_field_1d(std::vector<double> xs, std::vector<double> values,
                             std::string name) {
  auto spline = std::make_shared<const CubicSpline>(xs, values);
  const double lo = xs.front();
  const double hi = xs.back();
  double bound = 0.0;
  for (double v : values) bound = std::max(bound, std::abs(v));
  ScalarField f;
  f.dim = 1;
  f.eval = [spline, lo, hi](const Point& x) {
    return (x[0] >= lo && x[0] <= hi) ? (*spline)(x[0]) : 0.0;
  };
  f.grad = [spline, lo, hi](const Point& x) {
    return (x[0] > lo && x[0] < hi) ? make_point(spline->derivative(x[0])) : Point{};
  };
  f.smoothness.global = Regularity::c0();
  f.smoothness.local = Regularity::c2();
  f.smoothness.singular_points = {make_point(lo), make_point(hi)};
  // A natural spline between the knots can overshoot the samples slightly.
  f.decay = Decay::compact(std::max(std::abs(lo), std::abs(hi)), 1.5 * bound);
  f.name = std::move(name);
  return f;
}

namespace {

Regularity weaker(const Regularity& a, const Regularity& b) {
  return a.order() <= b.order() ? a : b;
}

Decay merged_decay(double a, const Decay& u, double b, const Decay& w) {
  const double ua = std::abs(a);
  const double wb = std::abs(b);
  if (ua == 0.0) return Decay{w.kind, w.radius, w.exponent, wb * w.bound};
  if (wb == 0.0) return Decay{u.kind, u.radius, u.exponent, ua * u.bound};
  if (u.kind == DecayKind::CompactSupport && w.kind == DecayKind::CompactSupport) {
    return Decay::compact(std::max(u.radius, w.radius), ua * u.bound + wb * w.bound);
  }
  // Compact support of radius R implies |u| <= M (1 + R)^p (1 + |x|)^{-p}
  // for any p; use the other summand's exponent.
  auto as_power = [](const Decay& d, double p) {
    switch (d.kind) {
      case DecayKind::CompactSupport: return d.bound * std::pow(1.0 + d.radius, std::max(p, 0.0));
      case DecayKind::PowerDecay: return d.bound;
      case DecayKind::Bounded: return d.bound;
    }
    return d.bound;
  };
  const double p = std::min(u.kind == DecayKind::CompactSupport ? kInf : u.tail_exponent(),
                            w.kind == DecayKind::CompactSupport ? kInf : w.tail_exponent());
  if (p == 0.0 && u.kind != DecayKind::PowerDecay && w.kind != DecayKind::PowerDecay) {
    return Decay::bounded(ua * u.bound + wb * w.bound);
  }
  return Decay::power(p, ua * as_power(u, p) + wb * as_power(w, p));
}

}  // namespace

ScalarField combine(double a, const ScalarField& u, double b, const ScalarField& w) {
  if (u.dim != w.dim) throw UsageError("combine: fields of different dimensions");
  ScalarField f;
  f.dim = u.dim;
  f.eval = [a, b, ue = u.eval, we = w.eval](const Point& x) { return a * ue(x) + b * we(x); };
  if (u.grad && w.grad) {
    f.grad = [a, b, ug = u.grad, wg = w.grad](const Point& x) {
      return a * ug(x) + b * wg(x);
    };
  }
  f.smoothness.global = weaker(u.smoothness.global, w.smoothness.global);
  f.smoothness.local = weaker(u.smoothness.local, w.smoothness.local);
  f.smoothness.singular_points = u.smoothness.singular_points;
  for (const auto& p : w.smoothness.singular_points) f.smoothness.singular_points.push_back(p);
  f.decay = merged_decay(a, u.decay, b, w.decay);
  f.name = "combination(" + u.name + "," + w.name + ")";
  return f;
}

ScalarField transformed(const ScalarField& u, double lambda, const Point& shift, double scale) {
  if (lambda == 0.0 || !std::isfinite(lambda)) throw UsageError("transformed: lambda must be nonzero");
  ScalarField f;
  f.dim = u.dim;
  f.eval = [ue = u.eval, lambda, shift, scale](const Point& x) {
    return scale * ue(lambda * x + shift);
  };
  if (u.grad) {
    f.grad = [ug = u.grad, lambda, shift, scale](const Point& x) {
      return (scale * lambda) * ug(lambda * x + shift);
    };
  }
  f.smoothness = u.smoothness;
  for (auto& p : f.smoothness.singular_points) p = (1.0 / lambda) * (p - shift);
  const double al = std::abs(lambda);
  const double sh = norm(shift);
  f.decay = u.decay;
  f.decay.bound *= std::abs(scale);
  switch (u.decay.kind) {
    case DecayKind::CompactSupport:
      f.decay.radius = (u.decay.radius + sh) / al;
      break;
    case DecayKind::PowerDecay: {
      // (1 + |lambda x + shift|)^{-p} <= K (1 + |x|)^{-p} with
      // K = max(1, 1/|lambda|)^p (1 + |shift|)^p for p >= 0 and the mirrored
      // bound for growing fields.
      const double p = u.decay.exponent;
      const double k = p >= 0.0
                           ? std::pow(std::max(1.0, 1.0 / al), p) * std::pow(1.0 + sh, p)
                           : std::pow(std::max(1.0, al) * (1.0 + sh), -p);
      f.decay.bound *= k;
      break;
    }
    case DecayKind::Bounded:
      break;
  }
  f.name = u.name + "(transformed)";
  return f;
}

L1sResult check_L1s(const ScalarField& field, double s, const QuadratureSpec& spec) {
  require_order(field.dim, s);
  spec.validate();
  L1sResult out;
  const int n = field.dim;
  const double p = field.decay.tail_exponent();
  if (p + 2.0 * s <= 0.0) return out;  // integrand ~ |y|^{-n-2s-p} fails to decay

  const quad::Tolerance tol = spec.tolerance();
  const std::size_t budget = spec.max_nodes;
  auto shell = [&](double rho) {
    const quad::Result r = quad::sphere(
        n, [&](const Point& th) { return std::abs(field(rho * th)); },
        quad::Tolerance{1e-14, 1e-10}, budget);
    return r.value;
  };
  auto radial = [&](double rho) {
    if (rho == 0.0) return n == 1 ? shell(0.0) : 0.0;
    return std::pow(rho, n - 1) / (1.0 + std::pow(rho, n + 2.0 * s)) * shell(rho);
  };

  std::vector<double> breaks;
  double r1 = 4.0;
  for (const auto& q : field.smoothness.singular_points) {
    breaks.push_back(norm(q));
    r1 = std::max(r1, norm(q) + 1.0);
  }
  const bool compact = field.decay.kind == DecayKind::CompactSupport;
  if (compact) r1 = field.decay.radius;
  std::sort(breaks.begin(), breaks.end());
  quad::Result near = quad::gauss_kronrod(radial, 0.0, r1, tol, budget, breaks);
  bool ok = near.converged;
  double value = near.value;
  if (!compact) {
    // rho = r1 t^{-1/q} maps (r1, inf) onto (0, 1] and flattens a tail that
    // behaves like rho^{-1-q}.
    const double q = 2.0 * s + std::max(p, 0.0);
    auto tail = [&](double t) {
      if (t <= 0.0) return 0.0;
      const double rho = r1 * std::pow(t, -1.0 / q);
      const double jac = rho / (q * t);
      return radial(rho) * jac;
    };
    quad::Result far = quad::gauss_kronrod(tail, 0.0, 1.0, tol, budget);
    ok = ok && far.converged;
    value += far.value;
  }
  if (ok && std::isfinite(value)) {
    out.finite = true;
    out.value = value;
  }
  return out;
}

double holder_seminorm_samples(const std::vector<Point>& points, const std::vector<double>& values,
                               double alpha, double h_min) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError("Hoelder exponent must lie in (0, 1]");
  if (points.size() < 2 || values.size() != points.size()) {
    throw UsageError("Hoelder seminorm needs at least two sample points");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = distance(points[i], points[j]);
      if (d < h_min) continue;
      best = std::max(best, std::abs(values[i] - values[j]) / std::pow(d, alpha));
    }
  }
  return best;
}

std::vector<Point> grid_points(const Box& domain, int dim, int per_axis) {
  require_dim(dim);
  if (per_axis < 1) throw UsageError("grid needs at least one point per axis");
  std::vector<double> axis_step(dim);
  for (int d = 0; d < dim; ++d) {
    axis_step[d] = per_axis > 1 ? (domain.hi[d] - domain.lo[d]) / (per_axis - 1) : 0.0;
  }
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(per_axis);
  std::vector<Point> out;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Point p{};
    std::size_t rest = idx;
    for (int d = 0; d < dim; ++d) {
      const std::size_t k = rest % per_axis;
      rest /= per_axis;
      p[d] = domain.lo[d] + axis_step[d] * static_cast<double>(k);
    }
    out.push_back(p);
  }
  return out;
}

double holder_seminorm(const ScalarField& field, double alpha, const Box& domain, double h_min,
                       int per_axis) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError("Hoelder exponent must lie in (0, 1]");
  const auto pts = grid_points(domain, field.dim, per_axis);
  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = field(pts[i]);
  return holder_seminorm_samples(pts, vals, alpha, h_min);
}

FieldAudit audit_field(const ScalarField& field, std::uint64_t seed, int samples) {
  FieldAudit audit;
  std::mt19937_64 rng(seed);
  const int n = field.dim;
  const bool compact = field.decay.kind == DecayKind::CompactSupport;
  const double box = compact ? 1.5 * field.decay.radius : 5.0;
  std::uniform_real_distribution<double> coord(-box, box);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double h = 1e-5;

  for (int i = 0; i < samples; ++i) {
    Point x{};
    for (int d = 0; d < n; ++d) x[d] = coord(rng);
    const double u = field(x);
    if (!std::isfinite(u)) audit.finite = false;

    if (compact) {
      Point dir{};
      for (int d = 0; d < n; ++d) dir[d] = gauss(rng);
      const double len = norm(dir);
      if (len > 0.0) {
        const double rad = field.decay.radius * (1.0 + 1e-9 + unit(rng));
        if (field((rad / len) * dir) != 0.0) audit.exterior_zero = false;
      }
    }

    if (field.grad && field.smoothness.smoothness_radius(x) > 1e-3 &&
        field.smoothness.order_at(x) >= 2.0) {
      const Point g = field.grad(x);
      for (int d = 0; d < n; ++d) {
        Point xp = x;
        Point xm = x;
        xp[d] += h;
        xm[d] -= h;
        const double fd = (field(xp) - field(xm)) / (2.0 * h);
        const double err = std::abs(fd - g[d]) / (1.0 + std::abs(g[d]) + std::abs(u));
        audit.max_gradient_error = std::max(audit.max_gradient_error, err);
      }
    }
  }
  audit.gradient_consistent = audit.max_gradient_error < 1e-6;
  return audit;
}

}  // namespace fraclap
