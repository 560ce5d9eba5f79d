#include "fhlab/spectral.hpp"

#include <fftw3.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <tuple>

namespace fhlab {
namespace {

// FFTW's planner is not re-entrant; plan execution on new arrays is. Plans
// are created once per (dim, n) under a lock and shared read-only afterwards.
class FftPlan {
 public:
  FftPlan(int dim, int n) {
    std::vector<int> dims(dim, n);
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= n;
    std::vector<Complex> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    // ESTIMATE keeps the algorithm choice (and so the rounding) reproducible.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft(dim, dims.data(), buf, buf, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft(dim, dims.data(), buf, buf, FFTW_BACKWARD, flags);
    if (!forward_ || !backward_) throw std::runtime_error("fftw: plan creation failed");
  }
  ~FftPlan() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void execute(bool forward, std::span<const Complex> in, std::span<Complex> out) const {
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(forward ? forward_ : backward_, src, dst);
  }

 private:
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const FftPlan& plan_for(const GridSpec& grid) {
  static std::map<std::pair<int, int>, std::unique_ptr<FftPlan>> cache;
  std::lock_guard lock(planner_mutex());
  auto key = std::make_pair(grid.dim(), grid.points_per_axis());
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<FftPlan>(grid.dim(), grid.points_per_axis())).first;
  return *it->second;
}

void check_buffers(const GridSpec& grid, std::size_t in, std::size_t out) {
  if (in != grid.size() || out != grid.size())
    throw std::invalid_argument("fft: buffer length does not match grid");
}

// Integral of (1 + |y|^2)^{-gamma/2} over [-1, 1]^{dim}, dim in {0, 1, 2}.
double face_integral(int dim, double gamma) {
  using boost::math::quadrature::gauss_kronrod;
  if (dim == 0) return 1.0;
  if (dim == 1) {
    auto f = [gamma](double y) { return std::pow(1.0 + y * y, -0.5 * gamma); };
    return gauss_kronrod<double, 61>::integrate(f, -1.0, 1.0, 15, 1e-15);
  }
  auto inner = [gamma](double y) {
    auto f = [gamma, y](double z) { return std::pow(1.0 + y * y + z * z, -0.5 * gamma); };
    return gauss_kronrod<double, 61>::integrate(f, -1.0, 1.0, 15, 1e-15);
  };
  return gauss_kronrod<double, 61>::integrate(inner, -1.0, 1.0, 15, 1e-15);
}

}  // namespace

void warn_once(const std::string& key, const std::string& message) {
  static std::mutex m;
  static std::set<std::string> seen;
  std::lock_guard lock(m);
  if (seen.insert(key).second) std::cerr << "[fhlab] warning: " << message << '\n';
}

void fft_forward(const GridSpec& grid, std::span<const Complex> in, std::span<Complex> out) {
  check_buffers(grid, in.size(), out.size());
  plan_for(grid).execute(true, in, out);
}

void fft_inverse(const GridSpec& grid, std::span<const Complex> in, std::span<Complex> out) {
  check_buffers(grid, in.size(), out.size());
  plan_for(grid).execute(false, in, out);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& z : out) z *= scale;
}

SpectralField forward_transform(const FieldState& field) {
  field.validate();
  SpectralField out(field.grid);
  fft_forward(field.grid, field.values, out.coeffs);
  return out;
}

FieldState inverse_transform(const SpectralField& spectrum) {
  FieldState out(spectrum.grid);
  fft_inverse(spectrum.grid, spectrum.coeffs, out.values);
  return out;
}

std::vector<double> fractional_symbol(const GridSpec& grid, double s, double m) {
  std::vector<double> symbol(grid.size());
  const double m2 = m * m;
  for (std::size_t i = 0; i < grid.size(); ++i) symbol[i] = std::pow(grid.wavenumber_sq(i) + m2, s);
  return symbol;
}

FieldState apply_symbol(const FieldState& field, std::span<const double> symbol) {
  if (symbol.size() != field.size()) throw std::invalid_argument("symbol length does not match grid");
  FieldState out(field.grid);
  fft_forward(field.grid, field.values, out.values);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= symbol[i];
  fft_inverse(field.grid, out.values, out.values);
  return out;
}

FieldState apply_fractional(const FieldState& field, double s, double m) {
  if (!(s > 0.0)) throw std::invalid_argument("apply_fractional: s must be positive");
  if (!(m >= 0.0)) throw std::invalid_argument("apply_fractional: m must be non-negative");
  if (s >= 0.5 * field.grid.dim())
    warn_once("s-range-" + std::to_string(s) + "-" + std::to_string(field.grid.dim()),
              "fractional order s=" + std::to_string(s) + " is outside 0 < s < N/2 for N=" +
                  std::to_string(field.grid.dim()));
  field.validate();
  return apply_symbol(field, fractional_symbol(field.grid, s, m));
}

double origin_cell_average(int dim, double spacing, double gamma) {
  if (!(gamma > 0.0) || !(gamma < dim))
    throw std::invalid_argument("origin_cell_average: need 0 < gamma < N");
  // Divergence theorem for a (-gamma)-homogeneous integrand reduces the
  // cube integral to a smooth integral over one face.
  const double unit_cube = 2.0 * dim / (dim - gamma) * face_integral(dim - 1, gamma);
  const double half = 0.5 * spacing;
  return std::pow(half, dim - gamma) * unit_cube / std::pow(spacing, dim);
}

double HartreeKernel::origin_value() const { return samples.front(); }

HartreeKernel build_hartree_kernel(const GridSpec& grid, double gamma, double weight, bool dealias) {
  if (!(gamma > 0.0)) throw std::invalid_argument("hartree kernel: gamma must be positive");
  if (!(gamma < grid.dim()))
    throw std::invalid_argument("hartree kernel: gamma must be below the dimension N=" +
                                std::to_string(grid.dim()) + " (origin cell average diverges)");
  HartreeKernel k{grid, gamma, weight, dealias, std::vector<double>(grid.size()), {}};
  const int n = grid.points_per_axis();
  const double h = grid.spacing();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    double r2 = 0.0;
    for (int d = 0; d < grid.dim(); ++d) {
      // minimum image: displacement index folded into [-n/2, n/2)
      const int j = idx[d] < n / 2 ? idx[d] : idx[d] - n;
      r2 += (j * h) * (j * h);
    }
    k.samples[i] = i == 0 ? origin_cell_average(grid.dim(), h, gamma) : std::pow(r2, -0.5 * gamma);
    k.samples[i] *= weight;
  }

  std::vector<Complex> spec(k.samples.begin(), k.samples.end());
  fft_forward(grid, spec, spec);
  const double vol = grid.cell_volume();
  double max_abs = 0.0, max_imag = 0.0;
  for (const auto& z : spec) {
    max_abs = std::max(max_abs, std::abs(z));
    max_imag = std::max(max_imag, std::abs(z.imag()));
  }
  if (max_imag > 1e-12 * std::max(max_abs, 1e-300))
    throw std::logic_error("hartree kernel: transform is not real");
  k.spectral_samples.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) k.spectral_samples[i] = vol * spec[i].real();
  return k;
}

std::vector<double> convolve_density(std::span<const double> density, const HartreeKernel& kernel) {
  const GridSpec& grid = kernel.grid;
  if (density.size() != grid.size()) throw GridMismatch("convolve_density: density length mismatch");
  std::vector<Complex> buf(density.begin(), density.end());
  fft_forward(grid, buf, buf);
  const int n = grid.points_per_axis();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double factor = kernel.spectral_samples[i];
    if (kernel.dealias) {
      const auto idx = grid.unflatten(i);
      for (int d = 0; d < grid.dim(); ++d)
        if (3 * std::abs(grid.mode_number(idx[d])) > n) factor = 0.0;
    }
    buf[i] *= factor;
  }
  fft_inverse(grid, buf, buf);
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = buf[i].real();
  return out;
}

std::vector<double> hartree_potential(const FieldState& field, const HartreeKernel& kernel) {
  require_same_grid(field.grid, kernel.grid, "hartree_convolve");
  std::vector<double> density(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) density[i] = std::norm(field.values[i]);
  return convolve_density(density, kernel);
}

FieldState hartree_convolve(const FieldState& field, const HartreeKernel& kernel) {
  field.validate();
  const auto pot = hartree_potential(field, kernel);
  FieldState out(field.grid);
  for (std::size_t i = 0; i < pot.size(); ++i) out.values[i] = pot[i];
  return out;
}

}  // namespace fhlab
