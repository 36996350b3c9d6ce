#include "fraclap/levy_mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fraclap/errors.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/special_constants.hpp"

namespace fraclap {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr double kMinInscribed = 1e-9;

void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

std::array<std::uint32_t, 4> philox_block(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

// Welford accumulation; adding equal values keeps the mean exact.
struct Running {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++count;
    const double d = v - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (v - mean);
  }
  double std_error() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
  }
};

double exponential(Philox& rng) { return -std::log(rng.uniform()); }

// Box-Muller; both values of the pair are used by the caller when needed.
std::pair<double, double> normal_pair(Philox& rng) {
  const double rad = std::sqrt(-2.0 * std::log(rng.uniform()));
  const double ang = 2.0 * std::numbers::pi * rng.uniform();
  return {rad * std::cos(ang), rad * std::sin(ang)};
}

Point unit_direction(int dim, Philox& rng) {
  if (dim == 1) return make_point(rng.uniform() < 0.5 ? -1.0 : 1.0);
  for (;;) {
    const auto [a, b] = normal_pair(rng);
    Point p = make_point(a, b);
    if (dim == 3) p[2] = normal_pair(rng).first;
    const double len = norm(p);
    if (len > 0.0) return (1.0 / len) * p;
  }
}

// W ~ Beta(s, 1 - s) as a ratio of gamma variates; W = 0 is redrawn.
double beta_s(double s, Philox& rng) {
  for (;;) {
    std::gamma_distribution<double> ga(s, 1.0);
    std::gamma_distribution<double> gb(1.0 - s, 1.0);
    const double a = ga(rng);
    const double b = gb(rng);
    if (a > 0.0 && a + b > 0.0) return a / (a + b);
  }
}

Point centred_exit(const Point& center, double r, int dim, double s, Philox& rng) {
  return center + (r / std::sqrt(beta_s(s, rng))) * unit_direction(dim, rng);
}

}  // namespace

Philox::Philox(std::uint64_t key, std::uint64_t stream) {
  key_ = {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  counter_ = {0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
}

void Philox::refill() {
  block_ = philox_block(counter_, key_);
  if (++counter_[0] == 0) ++counter_[1];
  used_ = 0;
}

Philox::result_type Philox::operator()() {
  if (used_ == 4) refill();
  return block_[used_++];
}

double Philox::uniform() {
  const std::uint64_t a = (*this)() >> 5;
  const std::uint64_t b = (*this)() >> 6;
  return (static_cast<double>(a * 67108864u + b) + 0.5) * 0x1.0p-53;
}

std::array<std::uint32_t, 4> philox4x32_10(const std::array<std::uint32_t, 4>& counter,
                                           const std::array<std::uint32_t, 2>& key) {
  return philox_block(counter, key);
}

Primitive Primitive::ball(const Point& center, double radius) {
  if (!(radius > 0.0)) throw UsageError("ball primitive needs a positive radius");
  Primitive p;
  p.kind = Kind::Ball;
  p.center = center;
  p.radius = radius;
  return p;
}

Primitive Primitive::box(const Point& lo, const Point& hi) {
  Primitive p;
  p.kind = Kind::Box;
  p.lo = lo;
  p.hi = hi;
  return p;
}

double Primitive::inscribed(const Point& x, int dim) const {
  if (kind == Kind::Ball) return radius - distance(x, center);
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim; ++i) d = std::min({d, x[i] - lo[i], hi[i] - x[i]});
  return d;
}

McDomain McDomain::single_ball(const Point& center, double radius) {
  McDomain d;
  d.parts = {Primitive::ball(center, radius)};
  return d;
}

McDomain McDomain::union_of(std::vector<Primitive> parts) {
  McDomain d;
  d.parts = std::move(parts);
  return d;
}

double McDomain::inscribed_radius(const Point& x, int dim) const {
  double best = 0.0;
  for (const auto& p : parts) best = std::max(best, p.inscribed(x, dim));
  return best;
}

void McConfig::validate() const {
  require_order(dim, s);
  if (N == 0) throw UsageError("Monte Carlo sample count must be positive");
  if (max_jumps == 0) throw UsageError("max_jumps must be positive");
  if (domain.parts.empty()) throw UsageError("Monte Carlo domain has no parts");
  for (const auto& p : domain.parts) {
    if (p.kind == Primitive::Kind::Box) {
      for (int i = 0; i < dim; ++i) {
        if (!(p.hi[i] > p.lo[i])) throw UsageError("box primitive with empty extent");
      }
    }
  }
}

Point sample_exit(const Point& x, const Point& center, double r, int dim, double s, Philox& rng) {
  require_order(dim, s);
  const Point z = x - center;
  const double rz = norm(z);
  if (!(rz < r)) throw DomainError("sample_exit: start point is not inside the ball");
  if (rz == 0.0) return centred_exit(center, r, dim, s, rng);
  // P_r(z, y) / A_r(y) <= ((r^2 - |z|^2) / r^2)^s (r / (r - |z|))^dim.
  const double bound = std::pow((r - rz) * (r + rz) / (r * r), s) * std::pow(r / (r - rz), dim);
  if (bound <= 4.0) {
    for (;;) {
      const Point y = centred_exit(Point{}, r, dim, s, rng);
      const double accept = std::pow(norm(y) / distance(y, z) * (r - rz) / r, dim);
      if (rng.uniform() < accept) return center + y;
    }
  }
  Point pos = z;
  for (;;) {
    const Point y = centred_exit(pos, r - norm(pos), dim, s, rng);
    if (norm(y) > r) return center + y;
    pos = y;
  }
}

namespace {

struct WalkResult {
  Point exit{};
  bool truncated = false;
};

WalkResult walk(const McConfig& config, const Point& x, std::size_t index) {
  Philox rng(config.seed, index);
  WalkResult out;
  if (config.domain.is_single_ball()) {
    const Primitive& b = config.domain.parts[0];
    out.exit = sample_exit(x, b.center, b.radius, config.dim, config.s, rng);
    return out;
  }
  Point pos = x;
  for (std::size_t jump = 0; jump < config.max_jumps; ++jump) {
    const double d = config.domain.inscribed_radius(pos, config.dim);
    if (d <= 0.0) {
      out.exit = pos;
      return out;
    }
    if (d < kMinInscribed) break;
    pos = centred_exit(pos, d, config.dim, config.s, rng);
  }
  if (config.domain.inscribed_radius(pos, config.dim) <= 0.0) {
    out.exit = pos;
    return out;
  }
  out.truncated = true;
  return out;
}

void check_start(const McConfig& config, const Point& x) {
  const double d = config.domain.inscribed_radius(x, config.dim);
  if (d <= 0.0) throw DomainError("Monte Carlo start point is outside the domain");
  if (d < kMinInscribed) {
    std::ostringstream msg;
    msg << "inscribed ball radius " << d << " at the start point is below " << kMinInscribed;
    throw GeometryError(msg.str());
  }
}

}  // namespace

McEstimate mc_solve_dirichlet(const ScalarField& g, const McConfig& config, const Point& x) {
  config.validate();
  if (g.dim != config.dim) throw UsageError("payoff dimension differs from the configuration");
  check_start(config, x);
  std::vector<double> payoff(config.N, 0.0);
  std::vector<char> truncated(config.N, 0);
  parallel_for(config.N, [&](std::size_t i) {
    const WalkResult w = walk(config, x, i);
    truncated[i] = w.truncated ? 1 : 0;
    if (!w.truncated) payoff[i] = g(w.exit);
  });
  Running acc;
  McEstimate out;
  for (std::size_t i = 0; i < config.N; ++i) {
    if (truncated[i]) {
      ++out.truncated_walks;
    } else {
      acc.add(payoff[i]);
    }
  }
  out.n_effective = acc.count;
  out.estimate = acc.count > 0 ? acc.mean : std::numeric_limits<double>::quiet_NaN();
  out.std_error = acc.std_error();
  return out;
}

std::vector<Point> mc_exit_samples(const McConfig& config, const Point& x, std::size_t count) {
  config.validate();
  check_start(config, x);
  std::vector<WalkResult> walks(count);
  parallel_for(count, [&](std::size_t i) { walks[i] = walk(config, x, i); });
  std::vector<Point> out;
  for (const auto& w : walks) {
    if (!w.truncated) out.push_back(w.exit);
  }
  return out;
}

Point sample_stable(int dim, double s, Philox& rng) {
  const double alpha = 2.0 * s;
  if (dim == 1) {
    // Chambers-Mallows-Stuck, symmetric case.
    const double v = std::numbers::pi * (rng.uniform() - 0.5);
    const double w = exponential(rng);
    const double x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
                     std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
    return make_point(x);
  }
  // Kanter's representation of the positive s-stable law, E exp(-l A) = exp(-l^s).
  const double u = std::numbers::pi * rng.uniform();
  const double e = exponential(rng);
  const double a = std::sin(s * u) / std::pow(std::sin(u), 1.0 / s) *
                   std::pow(std::sin((1.0 - s) * u) / e, (1.0 - s) / s);
  const auto [g0, g1] = normal_pair(rng);
  Point gvec = make_point(g0, g1);
  if (dim == 3) gvec[2] = normal_pair(rng).first;
  return std::sqrt(2.0 * a) * gvec;
}

std::vector<GeneratorSample> generator_check(const ScalarField& field, const Point& x,
                                             const std::vector<double>& t_values,
                                             const McConfig& config) {
  config.validate();
  if (field.dim != config.dim) throw UsageError("field dimension differs from the configuration");
  if (!field.decay.is_bounded()) throw PreconditionError("generator check needs a bounded field");
  if (!(field.smoothness.order_at(x) > 2.0 * config.s)) {
    throw PreconditionError("field is not smooth enough at x for the generator check");
  }
  for (double t : t_values) {
    if (!(t > 0.0)) throw DomainError("generator check needs positive times");
  }
  const double ux = field(x);
  std::vector<GeneratorSample> out;
  for (std::size_t k = 0; k < t_values.size(); ++k) {
    const double t = t_values[k];
    const double scale = std::pow(t, 1.0 / (2.0 * config.s));
    std::vector<double> values(config.N);
    parallel_for(config.N, [&](std::size_t i) {
      Philox rng(config.seed, (static_cast<std::uint64_t>(k + 1) << 40) + i);
      const Point jump = scale * sample_stable(config.dim, config.s, rng);
      values[i] = (ux - 0.5 * (field(x + jump) + field(x - jump))) / t;
    });
    Running acc;
    for (double v : values) acc.add(v);
    out.push_back({t, acc.mean, acc.std_error()});
  }
  return out;
}

Extrapolation extrapolate_to_zero(const std::vector<GeneratorSample>& samples) {
  if (samples.empty()) throw UsageError("no samples to extrapolate");
  if (samples.size() == 1) return {samples[0].estimate, samples[0].std_error};
  bool weighted = true;
  for (const auto& p : samples) weighted = weighted && p.std_error > 0.0;
  double sw = 0.0, st = 0.0, stt = 0.0, sy = 0.0, sty = 0.0;
  for (const auto& p : samples) {
    const double w = weighted ? 1.0 / (p.std_error * p.std_error) : 1.0;
    sw += w;
    st += w * p.t;
    stt += w * p.t * p.t;
    sy += w * p.estimate;
    sty += w * p.t * p.estimate;
  }
  const double det = sw * stt - st * st;
  if (!(det > 0.0)) throw UsageError("extrapolation needs at least two distinct times");
  Extrapolation out;
  out.value = (stt * sy - st * sty) / det;
  out.std_error = weighted ? std::sqrt(stt / det) : 0.0;
  return out;
}

}  // namespace fraclap
