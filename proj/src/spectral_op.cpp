#include "fraclap/spectral_op.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <sstream>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

// Planner calls are not thread-safe in FFTW; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Signed wavenumber of FFT index j in (-N/2, N/2].
double wavenumber(std::size_t j, std::size_t n) {
  return j <= n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
}

class Transform {
 public:
  explicit Transform(const PeriodicGrid& g) : size_(g.size()) {
    data_ = fftw_alloc_complex(size_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    const int n = static_cast<int>(g.N);
    if (g.dim == 1) {
      forward_ = fftw_plan_dft_1d(n, data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_1d(n, data_, data_, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
      forward_ = fftw_plan_dft_2d(n, n, data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_2d(n, n, data_, data_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
  }
  ~Transform() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(data_);
  }
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  fftw_complex* data() { return data_; }
  void forward() { fftw_execute(forward_); }
  void backward() { fftw_execute(backward_); }

 private:
  std::size_t size_;
  fftw_complex* data_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

// Applies the multiplier produced by `symbol(|xi|)` with |xi| = 2 pi |k| / L.
template <typename Symbol>
SampledField apply_multiplier(const SampledField& f, Symbol symbol) {
  const PeriodicGrid& g = f.grid;
  g.validate();
  if (f.values.size() != g.size()) throw UsageError("sample count does not match the grid");
  Transform tr(g);
  fftw_complex* d = tr.data();
  double norm2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(f.values[i])) throw UsageError("non-finite sample");
    d[i][0] = f.values[i];
    d[i][1] = 0.0;
    norm2 += f.values[i] * f.values[i];
  }
  tr.forward();
  const double scale = 2.0 * std::numbers::pi / g.L;
  const double inv = 1.0 / static_cast<double>(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double k2 = 0.0;
    if (g.dim == 1) {
      const double k = wavenumber(i, g.N);
      k2 = k * k;
    } else {
      const double k0 = wavenumber(i / g.N, g.N);
      const double k1 = wavenumber(i % g.N, g.N);
      k2 = k0 * k0 + k1 * k1;
    }
    const double m = k2 == 0.0 ? 0.0 : symbol(scale * std::sqrt(k2)) * inv;
    d[i][0] *= m;
    d[i][1] *= m;
  }
  tr.backward();
  SampledField out;
  out.grid = g;
  out.values.resize(g.size());
  double imag = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.values[i] = d[i][0];
    imag = std::max(imag, std::abs(d[i][1]));
  }
  if (imag > 1e-10 * std::sqrt(norm2) && imag > 1e-300) {
    std::ostringstream msg;
    msg << "imaginary residue " << imag << " after the inverse transform";
    throw ConditioningError(msg.str());
  }
  out.trusted = f.trusted && boundary_small(f);
  return out;
}

}  // namespace

void PeriodicGrid::validate() const {
  if (dim != 1 && dim != 2) throw UsageError("periodic grids support dim 1 or 2");
  if (!(L > 0.0) || !std::isfinite(L)) throw UsageError("grid extent L must be positive");
  if (N < 8 || !is_power_of_two(N)) {
    std::ostringstream msg;
    msg << "grid size N=" << N << " must be a power of two >= 8";
    throw UsageError(msg.str());
  }
}

Point PeriodicGrid::node(std::size_t i) const {
  if (dim == 1) return make_point(coordinate(i));
  return make_point(coordinate(i / N), coordinate(i % N));
}

double SampledField::at_node(const Point& x) const {
  const double h = grid.spacing();
  std::size_t idx[2] = {0, 0};
  for (int d = 0; d < grid.dim; ++d) {
    const double pos = (x[d] + 0.5 * grid.L) / h;
    const double r = std::round(pos);
    if (std::abs(pos - r) > 1e-9 || r < 0.0 || r >= static_cast<double>(grid.N)) {
      throw UsageError("point is not a node of the periodic grid");
    }
    idx[d] = static_cast<std::size_t>(r);
  }
  return grid.dim == 1 ? values[idx[0]] : values[idx[0] * grid.N + idx[1]];
}

SampledField sample_field(const ScalarField& field, const PeriodicGrid& grid) {
  grid.validate();
  if (field.dim != grid.dim) throw UsageError("field and grid dimensions differ");
  SampledField out;
  out.grid = grid;
  out.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] = field(grid.node(i));
  out.trusted = boundary_small(out);
  return out;
}

bool boundary_small(const SampledField& f) {
  const auto& g = f.grid;
  constexpr double kLimit = 1e-12;
  if (g.dim == 1) return std::abs(f.values.front()) < kLimit;
  for (std::size_t j = 0; j < g.N; ++j) {
    if (std::abs(f.values[j]) >= kLimit) return false;            // first row
    if (std::abs(f.values[j * g.N]) >= kLimit) return false;      // first column
  }
  return true;
}

SampledField frac_lap_spectral(const SampledField& f, double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("spectral order must lie in (0, 1)");
  return apply_multiplier(f, [s](double xi) { return std::pow(xi, 2.0 * s); });
}

SampledField semigroup_compose(const SampledField& f, double s, double t) {
  if (!(s > 0.0 && s < 1.0) || !(t > 0.0 && t < 1.0)) {
    throw DomainError("semigroup orders must lie in (0, 1)");
  }
  if (s + t > 1.0) throw DomainError("semigroup composition requires s + t <= 1");
  return apply_multiplier(f, [s, t](double xi) {
    return std::pow(xi, 2.0 * s) * std::pow(xi, 2.0 * t);
  });
}

}  // namespace fraclap
