#include "fhlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fhlab {
namespace {

// h^N / n^N: turns sum |u_k|^2 over unnormalized coefficients into h^N sum |u|^2.
double spectral_weight(const GridSpec& grid) {
  return grid.cell_volume() / static_cast<double>(grid.size());
}

std::vector<Complex> transform(const FieldState& u) {
  std::vector<Complex> c(u.size());
  fft_forward(u.grid, u.values, c);
  return c;
}

}  // namespace

void ModelParams::validate(int dim) const {
  if (!(s > 0.0)) throw std::invalid_argument("model: s must be positive");
  if (!(m >= 0.0)) throw std::invalid_argument("model: m must be non-negative");
  if (!(gamma > 0.0) || !(gamma < dim))
    throw std::invalid_argument("model: gamma must satisfy 0 < gamma < N");
  if (!(gamma < 4.0 * s)) throw std::invalid_argument("model: gamma must satisfy gamma < 4s");
  if (!(mass_target > 0.0)) throw std::invalid_argument("model: mass_target must be positive");
  if (!std::isfinite(hartree_weight)) throw std::invalid_argument("model: hartree_weight must be finite");
  potential.validate(dim);
  if (s >= 0.5 * dim)
    warn_once("model-s-" + std::to_string(s) + "-" + std::to_string(dim),
              "s=" + std::to_string(s) + " is outside 0 < s < N/2 for N=" + std::to_string(dim));
}

HartreeKernel make_kernel(const GridSpec& grid, const ModelParams& params, bool dealias) {
  return build_hartree_kernel(grid, params.gamma, params.hartree_weight, dealias);
}

SigmaForm::SigmaForm(const GridSpec& grid, const ModelParams& params)
    : grid_(grid),
      potential_(sample_potential_values(grid, params.potential)),
      symbol_(fractional_symbol(grid, params.s, params.m)) {}

Complex SigmaForm::inner(const FieldState& u, const FieldState& v) const {
  require_same_grid(u.grid, grid_, "sigma_inner");
  require_same_grid(v.grid, grid_, "sigma_inner");
  const auto cu = transform(u);
  const auto cv = transform(v);
  Complex kin = 0.0, pot = 0.0;
  for (std::size_t i = 0; i < cu.size(); ++i) {
    kin += symbol_[i] * cu[i] * std::conj(cv[i]);
    pot += potential_[i] * u.values[i] * std::conj(v.values[i]);
  }
  return spectral_weight(grid_) * kin + grid_.cell_volume() * pot;
}

double SigmaForm::norm_sq(const FieldState& u) const {
  require_same_grid(u.grid, grid_, "sigma_norm");
  const auto cu = transform(u);
  double kin = 0.0, pot = 0.0;
  for (std::size_t i = 0; i < cu.size(); ++i) {
    kin += symbol_[i] * std::norm(cu[i]);
    pot += potential_[i] * std::norm(u.values[i]);
  }
  return spectral_weight(grid_) * kin + grid_.cell_volume() * pot;
}

static const ModelParams& validated(const ModelParams& params, int dim) {
  params.validate(dim);
  return params;
}

Hamiltonian::Hamiltonian(const ModelParams& params, const HartreeKernel& kernel)
    : params_(validated(params, kernel.grid.dim())), kernel_(kernel), form_(kernel.grid, params) {
  if (kernel_.gamma != params_.gamma)
    throw std::invalid_argument("hamiltonian: kernel gamma " + std::to_string(kernel_.gamma) +
                                " does not match model gamma " + std::to_string(params_.gamma));
  if (kernel_.weight != params_.hartree_weight)
    throw std::invalid_argument("hamiltonian: kernel weight does not match model hartree_weight");
}

Hamiltonian::Evaluation Hamiltonian::evaluate(const FieldState& u) const {
  require_same_grid(u.grid, grid(), "hamiltonian");
  const GridSpec& g = grid();
  const double vol = g.cell_volume();
  Evaluation ev;

  auto coeffs = transform(u);
  double kin = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    kin += symbol()[i] * std::norm(coeffs[i]);
    coeffs[i] *= symbol()[i];
  }
  fft_inverse(g, coeffs, coeffs);
  ev.kinetic_applied = std::move(coeffs);

  std::vector<double> density(u.size());
  double mass_sum = 0.0, pot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    density[i] = std::norm(u.values[i]);
    mass_sum += density[i];
    pot += potential()[i] * density[i];
  }
  ev.mean_field = convolve_density(density, kernel_);
  double hart = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) hart += ev.mean_field[i] * density[i];

  ev.mass = vol * mass_sum;
  ev.energy.kinetic = 0.5 * spectral_weight(g) * kin;
  ev.energy.potential = 0.5 * vol * pot;
  ev.energy.hartree = 0.25 * vol * hart;
  ev.energy.total = ev.energy.kinetic + ev.energy.potential - ev.energy.hartree;
  return ev;
}

FieldState Hamiltonian::gradient(const FieldState& u, const Evaluation& ev) const {
  require_same_grid(u.grid, grid(), "hamiltonian gradient");
  FieldState out(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i)
    out.values[i] = ev.kinetic_applied[i] + (potential()[i] - ev.mean_field[i]) * u.values[i];
  return out;
}

double mass(const FieldState& field) {
  double sum = 0.0;
  for (const auto& z : field.values) sum += std::norm(z);
  return field.grid.cell_volume() * sum;
}

Complex l2_inner(const FieldState& u, const FieldState& v) {
  require_same_grid(u.grid, v.grid, "l2_inner");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u.values[i] * std::conj(v.values[i]);
  return u.grid.cell_volume() * sum;
}

double hs_seminorm_sq(const FieldState& field, double s) {
  field.validate();
  const auto c = transform(field);
  double sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    // pow(0, 0) == 1 keeps the s = 0 case equal to the mass.
    sum += std::pow(field.grid.wavenumber_sq(i), s) * std::norm(c[i]);
  }
  return spectral_weight(field.grid) * sum;
}

double sigma_norm_sq(const FieldState& field, const ModelParams& params) {
  field.validate();
  return SigmaForm(field.grid, params).norm_sq(field);
}

EnergyBreakdown energy(const FieldState& field, const ModelParams& params, const HartreeKernel& kernel) {
  field.validate();
  return Hamiltonian(params, kernel).energy(field);
}

FieldState energy_gradient(const FieldState& field, const ModelParams& params, const HartreeKernel& kernel) {
  field.validate();
  return Hamiltonian(params, kernel).gradient(field);
}

double gn_ratio(const FieldState& field, const ModelParams& params, const HartreeKernel& kernel) {
  const Hamiltonian ham(params, kernel);
  const auto ev = ham.evaluate(field);
  if (!(ev.mass > 0.0)) throw std::invalid_argument("gn_ratio: zero field");
  const double hs = hs_seminorm_sq(field, params.s);
  const double s = params.s, gamma = params.gamma;
  const double denom = std::pow(hs, gamma / (2.0 * s)) * std::pow(ev.mass, (4.0 * s - gamma) / (2.0 * s));
  return 4.0 * ev.energy.hartree / denom;
}

HardyResult hardy_sup(const FieldState& field, double s) {
  const int dim = field.grid.dim();
  if (!(s > 0.0) || !(2.0 * s < dim)) throw std::invalid_argument("hardy_sup: need 0 < 2s < N");
  field.validate();
  const auto kernel = build_hartree_kernel(field.grid, 2.0 * s);
  const auto pot = hartree_potential(field, kernel);
  HardyResult r;
  r.sup = *std::max_element(pot.begin(), pot.end());
  r.hs_seminorm_sq = hs_seminorm_sq(field, s);
  if (r.sup == 0.0)
    r.ratio = 0.0;
  else
    r.ratio = r.hs_seminorm_sq > 0.0 ? r.sup / r.hs_seminorm_sq : std::numeric_limits<double>::infinity();
  return r;
}

double energy_floor(double c, double p) {
  if (!(c >= 0.0) || !(p > 0.0 && p < 1.0)) throw std::invalid_argument("energy_floor: need c >= 0, 0 < p < 1");
  if (c == 0.0) return 0.0;
  const double x = std::pow(2.0 * c * p, 1.0 / (1.0 - p));
  return 0.5 * x - c * std::pow(x, p);
}

double sigma_norm_sq_bound(double energy, double c, double p) {
  if (!(c >= 0.0) || !(p > 0.0 && p < 1.0))
    throw std::invalid_argument("sigma_norm_sq_bound: need c >= 0, 0 < p < 1");
  auto f = [&](double y) { return 0.5 * y - c * std::pow(y, p) - energy; };
  // f is increasing beyond its minimizer; bracket the last root there.
  double lo = c > 0.0 ? std::pow(2.0 * c * p, 1.0 / (1.0 - p)) : 0.0;
  if (f(lo) > 0.0) return 0.0;
  double hi = std::max(1.0, 2.0 * lo);
  while (f(hi) <= 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) <= 0.0 ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace fhlab
