#include "fraclap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "fraclap/errors.hpp"

namespace fraclap::quad {

double Tolerance::bound(double value) const { return std::max(abs, rel * std::abs(value)); }

Result& Result::operator+=(const Result& other) {
  value += other.value;
  error += other.error;
  evals += other.evals;
  converged = converged && other.converged;
  return *this;
}

const Rule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  Rule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  // Ties broken by position so the refinement order is fully deterministic.
  bool operator<(const Panel& other) const {
    if (error != other.error) return error < other.error;
    return a > other.a;
  }
};

Panel gk15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  double err = std::abs(kronrod - gauss);
  if (!std::isfinite(kronrod)) err = std::numeric_limits<double>::infinity();
  return Panel{a, b, kronrod, err};
}

}  // namespace

Result gauss_kronrod(const Integrand& f, double a, double b, const Tolerance& tol,
                     std::size_t max_evals, std::span<const double> breakpoints) {
  Result out;
  if (a == b) return out;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = gk15(f, cuts[i], cuts[i + 1]);
    out.evals += 15;
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }

  while (total_err > tol.bound(total)) {
    if (out.evals + 30 > max_evals) {
      out.converged = false;
      break;
    }
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel can no longer be split in double precision.
      out.converged = false;
      break;
    }
    heap.pop();
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    out.evals += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum from the panels to avoid drift from the running updates.
  double sum = 0.0;
  double err = 0.0;
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const auto& p : panels) {
    sum += p.value;
    err += p.error;
  }
  out.value = sign * sum;
  out.error = err;
  if (!std::isfinite(out.value)) out.converged = false;
  return out;
}

Result tanh_sinh(const Integrand& f, double a, double b, const Tolerance& tol, int max_level) {
  Result out;
  if (a == b) return out;
  const double half = 0.5 * (b - a);
  const double center = 0.5 * (a + b);
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  constexpr double kTmax = 4.0;

  // Contribution of the node pair at +t and -t (or the single centre node).
  auto pair_sum = [&](double t, std::size_t& evals) {
    const double u = kHalfPi * std::sinh(t);
    const double cu = std::cosh(u);
    const double w = half * kHalfPi * std::cosh(t) / (cu * cu);
    if (t == 0.0) {
      ++evals;
      return w * f(center);
    }
    // Distance from the nearer endpoint, evaluated without cancellation.
    const double gap = std::abs(b - a) / (1.0 + std::exp(2.0 * u));
    double acc = 0.0;
    const double right = b - gap;
    const double left = a + gap;
    if (right < b && right > a) {
      acc += w * f(right);
      ++evals;
    }
    if (left > a && left < b) {
      acc += w * f(left);
      ++evals;
    }
    return acc;
  };

  double h = 1.0;
  double sum = pair_sum(0.0, out.evals);
  for (double t = h; t <= kTmax; t += h) sum += pair_sum(t, out.evals);
  double estimate = h * sum;
  double previous = estimate;
  out.converged = false;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    for (double t = h; t <= kTmax; t += 2.0 * h) sum += pair_sum(t, out.evals);
    estimate = h * sum;
    out.error = std::abs(estimate - previous);
    previous = estimate;
    if (level >= 3 && out.error <= tol.bound(estimate)) {
      out.converged = true;
      break;
    }
  }
  out.value = estimate;
  if (!std::isfinite(out.value)) out.converged = false;
  return out;
}

Result tanh_sinh_split(const Integrand& f, double a, double b, const Tolerance& tol,
                       std::span<const double> breakpoints, int max_level) {
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > std::min(a, b) && p < std::max(a, b)) cuts.push_back(p);
  }
  cuts.push_back(b);
  if (a < b) {
    std::sort(cuts.begin(), cuts.end());
  } else {
    std::sort(cuts.begin(), cuts.end(), std::greater<>());
  }
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Result out;
  const Tolerance part{tol.abs / std::max<std::size_t>(1, cuts.size() - 1), tol.rel};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    out += tanh_sinh(f, cuts[i], cuts[i + 1], part, max_level);
  }
  return out;
}

namespace {

// Adaptive trapezoid rule for a periodic integrand over one period
// [0, period); spectrally accurate for smooth periodic functions.
Result periodic_trapezoid(const Integrand& f, double period, const Tolerance& tol,
                          std::size_t max_evals) {
  Result out;
  std::size_t count = 8;
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) sum += f(period * i / count);
  out.evals = count;
  double estimate = sum * period / count;
  out.converged = false;
  while (out.evals + count <= max_evals) {
    double added = 0.0;
    for (std::size_t i = 0; i < count; ++i) added += f(period * (i + 0.5) / count);
    out.evals += count;
    sum += added;
    count *= 2;
    const double refined = sum * period / count;
    out.error = std::abs(refined - estimate);
    estimate = refined;
    if (count >= 32 && out.error <= tol.bound(estimate)) {
      out.converged = true;
      break;
    }
  }
  out.value = estimate;
  return out;
}

Result sphere_impl(int n, const std::function<double(const Point&)>& f, const Tolerance& tol,
                   std::size_t max_evals, bool half) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  switch (n) {
    case 1: {
      Result out;
      if (half) {
        out.value = 2.0 * f(make_point(1.0));
        out.evals = 1;
      } else {
        out.value = f(make_point(1.0)) + f(make_point(-1.0));
        out.evals = 2;
      }
      return out;
    }
    case 2: {
      const double period = half ? std::numbers::pi : kTwoPi;
      Result r = periodic_trapezoid(
          [&](double t) { return f(make_point(std::cos(t), std::sin(t))); }, period,
          Tolerance{half ? 0.5 * tol.abs : tol.abs, tol.rel}, max_evals);
      if (half) {
        r.value *= 2.0;
        r.error *= 2.0;
      }
      return r;
    }
    case 3: {
      const double z0 = half ? 0.0 : -1.0;
      std::size_t inner_evals = 0;
      bool inner_ok = true;
      const Tolerance inner{0.05 * tol.abs / kTwoPi, 0.05 * tol.rel};
      auto ring = [&](double z) {
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        Result r = periodic_trapezoid(
            [&](double psi) {
              return f(make_point(rho * std::cos(psi), rho * std::sin(psi), z));
            },
            kTwoPi, inner, max_evals / 8);
        inner_evals += r.evals;
        inner_ok = inner_ok && r.converged;
        return r.value;
      };
      Result r = gauss_kronrod(ring, z0, 1.0,
                               Tolerance{half ? 0.5 * tol.abs : tol.abs, tol.rel},
                               std::max<std::size_t>(64, max_evals / 64));
      r.evals = inner_evals;
      r.converged = r.converged && inner_ok;
      if (half) {
        r.value *= 2.0;
        r.error *= 2.0;
      }
      return r;
    }
    default:
      throw UnsupportedError("sphere quadrature supports n in {1, 2, 3}");
  }
}

}  // namespace

Result sphere(int n, const std::function<double(const Point&)>& f, const Tolerance& tol,
              std::size_t max_evals) {
  return sphere_impl(n, f, tol, max_evals, false);
}

Result symmetric_sphere(int n, const std::function<double(const Point&)>& f,
                        const Tolerance& tol, std::size_t max_evals) {
  return sphere_impl(n, f, tol, max_evals, true);
}

}  // namespace fraclap::quad
